#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <utility>

#include <Eigen/Core>

namespace carv {

/// Seeded random source with a platform-independent output sequence.
/// std::normal_distribution is implementation-defined, so the Gaussian
/// samples are produced by an explicit Box-Muller transform instead.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    double uniform01() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    int uniform_int(int lo, int hi) {  // inclusive bounds
        const auto span = static_cast<std::uint64_t>(hi - lo + 1);
        return lo + static_cast<int>(gen_() % span);
    }

    std::pair<double, double> gaussian_pair() {
        const double u1 = uniform01();
        const double u2 = uniform01();
        const double r = std::sqrt(-2.0 * std::log1p(-u1));
        const double t = 2.0 * M_PI * u2;
        return {r * std::cos(t), r * std::sin(t)};
    }

    double gaussian() { return gaussian_pair().first; }

    std::complex<double> cgaussian() {
        auto [x, y] = gaussian_pair();
        return {x, y};
    }

    Eigen::VectorXcd cgaussian_vector(Eigen::Index n) {
        Eigen::VectorXcd v(n);
        for (Eigen::Index i = 0; i < n; ++i) v(i) = cgaussian();
        return v;
    }

    std::complex<double> unimodular() {
        const double t = 2.0 * M_PI * uniform01();
        return {std::cos(t), std::sin(t)};
    }

private:
    std::mt19937_64 gen_;
};

}  // namespace carv

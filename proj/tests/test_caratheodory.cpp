#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "carv/caratheodory.hpp"
#include "carv/errors.hpp"
#include "carv/rng.hpp"

using namespace carv;

namespace {

CMatrix counterexample_map() {
    CMatrix L(3, 2);
    L << Complex(1, 0), Complex(0, 0), Complex(0, 0), Complex(1, 0), Complex(1, 0), Complex(1, 0);
    return L;
}

}  // namespace

TEST_CASE("carath_origin is the norm, same code path") {
    CVector v(2);
    v << Complex(1, 0), Complex(0.5, 0);
    CHECK(carath_origin(Norm::sup(2), v) == norm_eval(Norm::sup(2), v));
    CHECK(carath_origin(Norm::sup(2), v) == doctest::Approx(1.0));
    CHECK(carath_origin(Norm::euclidean(2), CVector::Zero(2)) == 0.0);
    CVector w(2);
    w << Complex(1, 0), Complex(1, 0);
    CHECK(carath_origin(Norm::euclidean(2), w) == doctest::Approx(std::sqrt(2.0)));
}

TEST_CASE("functional lower bound attains the metric for sup and euclidean") {
    Rng rng(3);
    for (int trial = 0; trial < 20; ++trial) {
        const CVector v = rng.cgaussian_vector(3);
        for (const auto& N : {Norm::sup(3), Norm::euclidean(3)}) {
            const double value = carath_origin(N, v);
            const double bound = carath_origin_functional_bound(N, v, 32, 5);
            CHECK(bound <= value + 1e-9);
            CHECK(value - bound <= 1e-6 * std::max(1.0, value));
        }
    }
}

TEST_CASE("carath_origin homogeneity") {
    Rng rng(7);
    std::vector<Norm> zoo = {Norm::sup(2), Norm::euclidean(2),
                             Norm::pullback(counterexample_map(), Norm::sup(3))};
    for (const auto& N : zoo) {
        for (int trial = 0; trial < 30; ++trial) {
            const CVector v = rng.cgaussian_vector(N.dim());
            const Complex lam = rng.cgaussian();
            CHECK(std::abs(carath_origin(N, lam * v) - std::abs(lam) * carath_origin(N, v)) <=
                  1e-12 * std::max(1.0, std::abs(lam) * carath_origin(N, v)));
        }
    }
}

TEST_CASE("carath_supball closed form") {
    CVector a0(2);
    a0.setZero();
    CVector v(2);
    v << Complex(0.3, 0), Complex(0, -2);
    CHECK(carath_supball(a0, v) == doctest::Approx(2.0));  // reduces to the origin identity

    // dim 1, a = 0.5, v = 1: 1/(1-0.25) = 4/3.
    CVector a1(1), v1(1);
    a1 << Complex(0.5, 0);
    v1 << Complex(1, 0);
    CHECK(carath_supball(a1, v1) == doctest::Approx(4.0 / 3.0));

    CVector bad(1);
    bad << Complex(1.2, 0);
    CHECK_THROWS_AS(carath_supball(bad, v1), DomainError);
}

TEST_CASE("carath_supball matches the closed formula") {
    Rng rng(9);
    for (int trial = 0; trial < 40; ++trial) {
        const int dim = rng.uniform_int(1, 4);
        CVector a = 0.4 * rng.cgaussian_vector(dim);
        if (a.lpNorm<Eigen::Infinity>() >= 0.95) a *= 0.5;
        const CVector v = rng.cgaussian_vector(dim);
        double expected = 0.0;
        for (int i = 0; i < dim; ++i)
            expected = std::max(expected, std::abs(v(i)) / (1.0 - std::norm(a(i))));
        CHECK(carath_supball(a, v) == doctest::Approx(expected).epsilon(1e-12));
    }
}

TEST_CASE("carath_supball is invariant under Moebius base changes") {
    Rng rng(11);
    for (int trial = 0; trial < 50; ++trial) {
        const int dim = rng.uniform_int(1, 4);
        CVector a = 0.4 * rng.cgaussian_vector(dim);
        CVector b = 0.4 * rng.cgaussian_vector(dim);
        if (a.lpNorm<Eigen::Infinity>() >= 0.95) a *= 0.5;
        if (b.lpNorm<Eigen::Infinity>() >= 0.95) b *= 0.5;
        const CVector v = rng.cgaussian_vector(dim);
        const MapExpr phi = moebius_automorphism(b);
        const CVector a2 = eval(phi, a);
        const CVector v2 = jacobian(phi, a) * v;
        CHECK(std::abs(carath_supball(a2, v2) - carath_supball(a, v)) <=
              1e-9 * std::max(1.0, carath_supball(a, v)));
    }
}

TEST_CASE("isometry_check structural confirmations and refutations") {
    // Identity is an isometry for any norm in the zoo.
    const IsometryVerdict id_sup = isometry_check(CMatrix::Identity(3, 3), Norm::sup(3), Norm::sup(3));
    CHECK(id_sup.is_isometry);
    CHECK(id_sup.max_deviation == 0.0);
    CHECK(id_sup.method == "structural-sup");

    // L(x,y) = (x, y, x+y) is refuted with the exact witness (1,1).
    const IsometryVerdict bad =
        isometry_check(counterexample_map(), Norm::sup(2), Norm::sup(3));
    CHECK(!bad.is_isometry);
    CHECK(norm_eval(Norm::sup(3), counterexample_map() * bad.witness) == doctest::Approx(2.0));
    CHECK(bad.max_deviation == doctest::Approx(1.0));
    CHECK(std::abs(bad.witness(0) - Complex(1, 0)) < 1e-12);
    CHECK(std::abs(bad.witness(1) - Complex(1, 0)) < 1e-12);

    // The same map is an isometry for the pullback source norm.
    const Norm pb = Norm::pullback(counterexample_map(), Norm::sup(3));
    const IsometryVerdict good = isometry_check(counterexample_map(), pb, Norm::sup(3), 256, 1);
    CHECK(good.is_isometry);
    CHECK(good.max_deviation <= 1e-12);
}

TEST_CASE("isometry_check catches scaled columns and vanishing violations") {
    CMatrix A(2, 2);
    A << Complex(0.5, 0), Complex(0, 0), Complex(0, 0), Complex(1, 0);
    const IsometryVerdict v = isometry_check(A, Norm::sup(2), Norm::sup(2));
    CHECK(!v.is_isometry);
    CHECK(v.max_deviation == doctest::Approx(0.5));

    CMatrix B(2, 2);  // unimodular supports but a dirty support row
    B << Complex(1, 0), Complex(0.3, 0), Complex(0, 0), Complex(1, 0);
    const IsometryVerdict w = isometry_check(B, Norm::sup(2), Norm::sup(2));
    CHECK(!w.is_isometry);
    CHECK(w.max_deviation > 0.0);
    // soundness on refutation: the witness itself certifies.
    CHECK(std::abs(norm_eval(Norm::sup(2), B * w.witness) - 1.0) ==
          doctest::Approx(w.max_deviation));
}

TEST_CASE("isometry_check sampled route for euclidean targets") {
    CMatrix col(2, 1);
    col << Complex(1 / std::sqrt(2.0), 0), Complex(0, 1 / std::sqrt(2.0));
    const IsometryVerdict v = isometry_check(col, Norm::sup(1), Norm::euclidean(2), 128, 3, 1e-9);
    CHECK(v.is_isometry);
    CHECK(v.method == "sampled");

    CMatrix off(2, 1);
    off << Complex(1, 0), Complex(0.4, 0);
    const IsometryVerdict w = isometry_check(off, Norm::sup(1), Norm::euclidean(2), 128, 3, 1e-6);
    CHECK(!w.is_isometry);
    CHECK(std::abs(norm_eval(Norm::euclidean(2), off * w.witness) - 1.0) > 1e-3);
}

TEST_CASE("schwarz-pick rejects maps that leave the target ball") {
    CMatrix big(2, 2);
    big << Complex(2, 0), Complex(0, 0), Complex(0, 0), Complex(2, 0);
    CHECK_THROWS_AS(
        schwarz_pick_check(MapExpr::linear(big), Norm::sup(2), Norm::sup(2), 50, 3),
        DomainError);
}

TEST_CASE("schwarz-pick non-expansion") {
    // Equality case: a linear sup->sup isometry.
    CMatrix L(2, 1);
    L << Complex(1, 0), Complex(0.5, 0);
    const SchwarzPickReport lin =
        schwarz_pick_check(MapExpr::linear(L), Norm::sup(1), Norm::sup(2), 100, 5);
    CHECK(lin.passed);
    CHECK(lin.max_violation_origin <= 1e-12);

    // f(z) = (z, z^2/2) into the bidisk.
    MapExpr::PolyTerm t1, t2;
    t1.alpha = {1};
    t1.coeff = CVector(2);
    t1.coeff << Complex(1, 0), Complex(0, 0);
    t2.alpha = {2};
    t2.coeff = CVector(2);
    t2.coeff << Complex(0, 0), Complex(0.5, 0);
    const MapExpr f = MapExpr::polynomial(1, 2, {t1, t2});
    const SchwarzPickReport rep = schwarz_pick_check(f, Norm::sup(1), Norm::sup(2), 200, 7);
    CHECK(rep.passed);

    // Moebius automorphisms with a(0)=0 are metric equalities at sampled points.
    const SchwarzPickReport aut = schwarz_pick_check(
        MapExpr::moebius(CVector::Zero(2)), Norm::sup(2), Norm::sup(2), 100, 9);
    CHECK(aut.passed);
}

#include "carv/convex.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include <Eigen/SVD>

#include "carv/errors.hpp"

namespace carv {

namespace {

// Complex soft threshold: shrink moduli by kappa, keep phases.
CVector soft_threshold(const CVector& w, double kappa) {
    CVector z(w.size());
    for (Eigen::Index j = 0; j < w.size(); ++j) {
        const double m = std::abs(w(j));
        z(j) = (m > kappa) ? w(j) * ((m - kappa) / m) : Complex(0.0, 0.0);
    }
    return z;
}

// Generalized sign: w/|w| where |w| is significant, 0 elsewhere.
CVector csign(const CVector& w, double floor) {
    CVector s = CVector::Zero(w.size());
    for (Eigen::Index j = 0; j < w.size(); ++j) {
        const double m = std::abs(w(j));
        if (m > floor) s(j) = w(j) / m;
    }
    return s;
}

}  // namespace

L1Solution solve_l1_equality(const CMatrix& A, const CVector& b, double tol, int budget) {
    if (A.rows() != b.size()) throw DimensionError("solve_l1_equality: shape mismatch");
    const Eigen::Index K = A.cols();

    // Orthonormalize the constraint rows: At has At * At^H = I, same solution set.
    Eigen::JacobiSVD<CMatrix> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Eigen::VectorXd& sv = svd.singularValues();
    const double cut = sv.size() ? kRankTol * std::max(sv(0), 1e-300) : 0.0;
    int r = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv(i) > cut) ++r;
    CMatrix At = svd.matrixV().leftCols(r).adjoint();  // r x K
    CVector bt(r);
    for (int i = 0; i < r; ++i) bt(i) = svd.matrixU().col(i).dot(b) / sv(i);
    // Consistency of dropped rows.
    const double incons = (A * (At.adjoint() * bt) - b).norm();
    if (incons > 1e-8 * std::max(1.0, b.norm()))
        throw NumericalFailure("solve_l1_equality: inconsistent constraints", incons);

    const CVector x0 = At.adjoint() * bt;  // minimum-2-norm feasible point
    auto project_feasible = [&](const CVector& v) -> CVector {
        return x0 + (v - At.adjoint() * (At * v));
    };

    CVector z = x0;
    CVector u = CVector::Zero(K);
    CVector z_prev = z;
    double rho = 1.0;

    L1Solution best;
    best.x = x0;
    best.cert.primal = x0.lpNorm<1>();
    best.cert.dual = 0.0;

    auto dual_value = [&](const CVector& v_raw) -> double {
        // Project candidate subgradient onto the row space, rescale into the
        // dual ball {||A^H y||_inf <= 1}, and evaluate Re(y^H b).
        const CVector y = At * v_raw;
        const CVector v = At.adjoint() * y;
        const double s = std::max(1.0, v.lpNorm<Eigen::Infinity>());
        return (y.dot(bt)).real() / s;  // Eigen dot conjugates the left argument
    };

    auto consider_primal = [&](const CVector& cand) {
        const double p = cand.lpNorm<1>();
        if (p < best.cert.primal) {
            best.cert.primal = p;
            best.x = cand;
        }
    };

    int it = 0;
    for (; it < budget; ++it) {
        const CVector x = project_feasible(z - u);
        z_prev = z;
        z = soft_threshold(x + u, 1.0 / rho);
        u += x - z;

        if (it % 25 == 24 || it == budget - 1) {
            consider_primal(x);
            consider_primal(project_feasible(z));

            // Support polish: resolve on the active set for an exact-feasibility
            // candidate and an active-set dual estimate.
            const double zmax = z.lpNorm<Eigen::Infinity>();
            if (zmax > 0) {
                std::vector<Eigen::Index> S;
                for (Eigen::Index j = 0; j < K; ++j)
                    if (std::abs(z(j)) > 1e-9 * zmax) S.push_back(j);
                if (!S.empty() && static_cast<int>(S.size()) <= 4 * r) {
                    CMatrix As(r, static_cast<Eigen::Index>(S.size()));
                    for (std::size_t c = 0; c < S.size(); ++c) As.col(c) = At.col(S[c]);
                    Eigen::JacobiSVD<CMatrix> ssvd(As, Eigen::ComputeThinU | Eigen::ComputeThinV);
                    const CVector xs = ssvd.solve(bt);
                    if ((As * xs - bt).norm() <= 1e-12 * std::max(1.0, bt.norm())) {
                        CVector cand = CVector::Zero(K);
                        for (std::size_t c = 0; c < S.size(); ++c) cand(S[c]) = xs(c);
                        consider_primal(project_feasible(cand));
                        // Fit y to the sign pattern on the support.
                        const CVector sgn = csign(cand, 1e-14);
                        CMatrix MS(static_cast<Eigen::Index>(S.size()), r);
                        CVector rhs(static_cast<Eigen::Index>(S.size()));
                        for (std::size_t c = 0; c < S.size(); ++c) {
                            MS.row(c) = At.col(S[c]).adjoint();
                            rhs(c) = sgn(S[c]);
                        }
                        Eigen::JacobiSVD<CMatrix> fsvd(MS,
                                                       Eigen::ComputeThinU | Eigen::ComputeThinV);
                        const CVector yfit = fsvd.solve(rhs);
                        const CVector vfit = At.adjoint() * yfit;
                        const double s = std::max(1.0, vfit.lpNorm<Eigen::Infinity>());
                        best.cert.dual = std::max(best.cert.dual, (yfit.dot(bt)).real() / s);
                    }
                }
            }
            best.cert.dual = std::max(best.cert.dual, dual_value(rho * u));
            best.cert.gap = best.cert.primal - best.cert.dual;
            if (best.cert.gap <= tol * std::max(1.0, best.cert.primal)) {
                best.cert.converged = true;
                best.cert.iterations = it + 1;
                return best;
            }

            // Residual balancing.
            const double rp = (x - z).norm();
            const double rd = rho * (z - z_prev).norm();
            if (rp > 10 * rd)
                rho *= 2.0, u /= 2.0;
            else if (rd > 10 * rp)
                rho /= 2.0, u *= 2.0;
        }
    }
    best.cert.gap = best.cert.primal - best.cert.dual;
    best.cert.iterations = it;
    best.cert.converged = best.cert.gap <= tol * std::max(1.0, best.cert.primal);
    return best;
}

CVector project_l1_ball(const CVector& y, double radius) {
    const Eigen::Index n = y.size();
    Eigen::VectorXd a(n);
    for (Eigen::Index j = 0; j < n; ++j) a(j) = std::abs(y(j));
    if (a.sum() <= radius) return y;
    if (radius <= 0) return CVector::Zero(n);

    // Water-filling threshold on the moduli (standard sort-based rule).
    std::vector<double> srt(a.data(), a.data() + n);
    std::sort(srt.begin(), srt.end(), std::greater<double>());
    double cum = 0.0, tau = 0.0;
    for (Eigen::Index k = 0; k < n; ++k) {
        cum += srt[static_cast<std::size_t>(k)];
        const double t = (cum - radius) / static_cast<double>(k + 1);
        if (k + 1 == n || srt[static_cast<std::size_t>(k + 1)] <= t) {
            tau = t;
            break;
        }
    }
    CVector out(n);
    for (Eigen::Index j = 0; j < n; ++j) {
        const double m = a(j);
        out(j) = (m > tau && m > 0) ? y(j) * ((m - tau) / m) : Complex(0.0, 0.0);
    }
    return out;
}

double row_linf_sum(const CMatrix& X) {
    double s = 0.0;
    for (Eigen::Index i = 0; i < X.rows(); ++i) s += X.row(i).lpNorm<Eigen::Infinity>();
    return s;
}

double max_abs_row_sum(const CMatrix& X) {
    double m = 0.0;
    for (Eigen::Index i = 0; i < X.rows(); ++i) m = std::max(m, X.row(i).lpNorm<1>());
    return m;
}

CMatrix project_row_sum_linf_ball(const CMatrix& Y, double radius) {
    if (row_linf_sum(Y) <= radius) return Y;
    if (radius <= 0) return CMatrix::Zero(Y.rows(), Y.cols());

    // prox of mu*||.||_inf per row is y - proj_{l1 ball(mu)}(y); bisect the
    // multiplier mu until the row budget sum_i ||row_i||_inf hits the radius.
    auto shrunk_row = [&](Eigen::Index i, double mu) -> CVector {
        const CVector yi = Y.row(i).transpose();
        return yi - project_l1_ball(yi, mu);
    };
    auto budget_at = [&](double mu) {
        double s = 0.0;
        for (Eigen::Index i = 0; i < Y.rows(); ++i)
            s += shrunk_row(i, mu).lpNorm<Eigen::Infinity>();
        return s;
    };

    double lo = 0.0, hi = 0.0;
    for (Eigen::Index i = 0; i < Y.rows(); ++i)
        hi = std::max(hi, Y.row(i).lpNorm<1>());
    for (int k = 0; k < 200; ++k) {
        const double mid = 0.5 * (lo + hi);
        if (budget_at(mid) > radius)
            lo = mid;
        else
            hi = mid;
        if (hi - lo <= 1e-16 * std::max(1.0, hi)) break;
    }
    const double mu = 0.5 * (lo + hi);
    CMatrix out(Y.rows(), Y.cols());
    for (Eigen::Index i = 0; i < Y.rows(); ++i) out.row(i) = shrunk_row(i, mu).transpose();
    return out;
}

Eigen::VectorXd nelder_mead(const std::function<double(const Eigen::VectorXd&)>& f,
                            const Eigen::VectorXd& x0, double scale, int evals) {
    const int n = static_cast<int>(x0.size());
    std::vector<Eigen::VectorXd> pts(static_cast<std::size_t>(n) + 1, x0);
    std::vector<double> val(static_cast<std::size_t>(n) + 1);
    for (int i = 1; i <= n; ++i) pts[static_cast<std::size_t>(i)](i - 1) += scale;
    int used = 0;
    for (std::size_t i = 0; i < pts.size(); ++i) val[i] = f(pts[i]), ++used;

    auto order = [&]() {
        std::vector<std::size_t> idx(pts.size());
        std::iota(idx.begin(), idx.end(), 0);
        std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return val[a] < val[b]; });
        std::vector<Eigen::VectorXd> p2;
        std::vector<double> v2;
        for (auto i : idx) p2.push_back(pts[i]), v2.push_back(val[i]);
        pts = p2;
        val = v2;
    };

    while (used < evals) {
        order();
        if (std::abs(val.back() - val.front()) <= 1e-14 * std::max(1.0, std::abs(val.front())))
            break;
        Eigen::VectorXd centroid = Eigen::VectorXd::Zero(n);
        for (int i = 0; i < n; ++i) centroid += pts[static_cast<std::size_t>(i)];
        centroid /= n;

        const Eigen::VectorXd xr = centroid + (centroid - pts.back());
        const double fr = f(xr);
        ++used;
        if (fr < val.front()) {
            const Eigen::VectorXd xe = centroid + 2.0 * (centroid - pts.back());
            const double fe = f(xe);
            ++used;
            pts.back() = fe < fr ? xe : xr;
            val.back() = std::min(fe, fr);
        } else if (fr < val[val.size() - 2]) {
            pts.back() = xr;
            val.back() = fr;
        } else {
            const Eigen::VectorXd xc = centroid + 0.5 * (pts.back() - centroid);
            const double fc = f(xc);
            ++used;
            if (fc < val.back()) {
                pts.back() = xc;
                val.back() = fc;
            } else {
                for (std::size_t i = 1; i < pts.size(); ++i) {
                    pts[i] = pts[0] + 0.5 * (pts[i] - pts[0]);
                    val[i] = f(pts[i]);
                    ++used;
                }
            }
        }
    }
    order();
    return pts.front();
}

}  // namespace carv

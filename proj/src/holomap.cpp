#include "carv/holomap.hpp"

#include <cmath>

#include "carv/errors.hpp"

namespace carv {

struct MapExpr::Node {
    Kind kind;
    int dim_in = 0;
    int dim_out = 0;
    CMatrix matrix;
    CVector a;
    std::vector<PolyTerm> terms;
    std::vector<MapExpr> items;
    bool bounded_domain = false;
};

MapExpr MapExpr::linear(CMatrix A) {
    if (!all_finite(A)) throw DomainError("MapExpr::linear: non-finite matrix");
    auto n = std::make_shared<Node>();
    n->kind = Kind::Linear;
    n->dim_in = static_cast<int>(A.cols());
    n->dim_out = static_cast<int>(A.rows());
    n->matrix = std::move(A);
    return MapExpr(std::move(n));
}

MapExpr MapExpr::identity(int dim) {
    if (dim < 1) throw DimensionError("MapExpr::identity: dim must be >= 1");
    auto n = std::make_shared<Node>();
    n->kind = Kind::Identity;
    n->dim_in = n->dim_out = dim;
    return MapExpr(std::move(n));
}

MapExpr MapExpr::moebius(CVector a) {
    if (!all_finite(a)) throw DomainError("MapExpr::moebius: non-finite parameter");
    if (a.lpNorm<Eigen::Infinity>() >= 1.0)
        throw DomainError("MapExpr::moebius: parameter must satisfy max_i |a_i| < 1");
    auto n = std::make_shared<Node>();
    n->kind = Kind::Moebius;
    n->dim_in = n->dim_out = static_cast<int>(a.size());
    n->a = std::move(a);
    n->bounded_domain = true;
    return MapExpr(std::move(n));
}

MapExpr MapExpr::polynomial(int dim_in, int dim_out, std::vector<PolyTerm> terms) {
    if (dim_in < 1 || dim_out < 1) throw DimensionError("MapExpr::polynomial: bad dimensions");
    for (const auto& t : terms) {
        if (static_cast<int>(t.alpha.size()) != dim_in)
            throw DimensionError("MapExpr::polynomial: multi-index length != dim_in");
        for (int e : t.alpha)
            if (e < 0) throw DomainError("MapExpr::polynomial: negative exponent");
        if (static_cast<int>(t.coeff.size()) != dim_out)
            throw DimensionError("MapExpr::polynomial: coefficient length != dim_out");
        if (!all_finite(t.coeff)) throw DomainError("MapExpr::polynomial: non-finite coefficient");
    }
    auto n = std::make_shared<Node>();
    n->kind = Kind::Polynomial;
    n->dim_in = dim_in;
    n->dim_out = dim_out;
    n->terms = std::move(terms);
    return MapExpr(std::move(n));
}

MapExpr MapExpr::compose(std::vector<MapExpr> items) {
    if (items.empty()) throw DimensionError("MapExpr::compose: empty composition");
    for (std::size_t i = 0; i + 1 < items.size(); ++i)
        if (items[i].dim_in() != items[i + 1].dim_out())
            throw DimensionError("MapExpr::compose: dimensions do not chain");
    auto n = std::make_shared<Node>();
    n->kind = Kind::Compose;
    n->dim_in = items.back().dim_in();
    n->dim_out = items.front().dim_out();
    for (const auto& it : items) n->bounded_domain |= it.has_bounded_domain();
    n->items = std::move(items);
    return MapExpr(std::move(n));
}

MapExpr MapExpr::sum(std::vector<MapExpr> items) {
    if (items.empty()) throw DimensionError("MapExpr::sum: empty sum");
    for (const auto& it : items)
        if (it.dim_in() != items[0].dim_in() || it.dim_out() != items[0].dim_out())
            throw DimensionError("MapExpr::sum: mismatched summand dimensions");
    auto n = std::make_shared<Node>();
    n->kind = Kind::Sum;
    n->dim_in = items[0].dim_in();
    n->dim_out = items[0].dim_out();
    for (const auto& it : items) n->bounded_domain |= it.has_bounded_domain();
    n->items = std::move(items);
    return MapExpr(std::move(n));
}

MapExpr::Kind MapExpr::kind() const { return node_->kind; }
int MapExpr::dim_in() const { return node_->dim_in; }
int MapExpr::dim_out() const { return node_->dim_out; }
const CMatrix& MapExpr::matrix() const { return node_->matrix; }
const CVector& MapExpr::moebius_parameter() const { return node_->a; }
const std::vector<MapExpr::PolyTerm>& MapExpr::terms() const { return node_->terms; }
const std::vector<MapExpr>& MapExpr::items() const { return node_->items; }
bool MapExpr::has_bounded_domain() const { return node_->bounded_domain; }

namespace {

Complex monomial(const CVector& x, const std::vector<int>& alpha) {
    Complex p(1.0, 0.0);
    for (std::size_t j = 0; j < alpha.size(); ++j)
        for (int e = 0; e < alpha[j]; ++e) p *= x(static_cast<Eigen::Index>(j));
    return p;
}

}  // namespace

CVector eval(const MapExpr& m, const CVector& x) {
    if (x.size() != m.dim_in()) throw DimensionError("eval: input dimension mismatch");
    switch (m.kind()) {
        case MapExpr::Kind::Identity:
            return x;
        case MapExpr::Kind::Linear:
            return m.matrix() * x;
        case MapExpr::Kind::Moebius: {
            if (x.lpNorm<Eigen::Infinity>() >= 1.0)
                throw DomainError("eval: Moebius argument outside the open polydisk");
            const CVector& a = m.moebius_parameter();
            CVector y(x.size());
            for (Eigen::Index i = 0; i < x.size(); ++i)
                y(i) = (x(i) + a(i)) / (1.0 + std::conj(a(i)) * x(i));
            return y;
        }
        case MapExpr::Kind::Polynomial: {
            CVector y = CVector::Zero(m.dim_out());
            for (const auto& t : m.terms()) y += t.coeff * monomial(x, t.alpha);
            return y;
        }
        case MapExpr::Kind::Compose: {
            CVector state = x;
            const auto& items = m.items();
            for (auto it = items.rbegin(); it != items.rend(); ++it) state = eval(*it, state);
            return state;
        }
        case MapExpr::Kind::Sum: {
            CVector y = CVector::Zero(m.dim_out());
            for (const auto& it : m.items()) y += eval(it, x);
            return y;
        }
    }
    throw Error("eval: unreachable");
}

CMatrix jacobian(const MapExpr& m, const CVector& x) {
    if (x.size() != m.dim_in()) throw DimensionError("jacobian: input dimension mismatch");
    switch (m.kind()) {
        case MapExpr::Kind::Identity:
            return CMatrix::Identity(m.dim_out(), m.dim_in());
        case MapExpr::Kind::Linear:
            return m.matrix();
        case MapExpr::Kind::Moebius: {
            if (x.lpNorm<Eigen::Infinity>() >= 1.0)
                throw DomainError("jacobian: Moebius argument outside the open polydisk");
            const CVector& a = m.moebius_parameter();
            CMatrix J = CMatrix::Zero(m.dim_out(), m.dim_in());
            for (Eigen::Index i = 0; i < x.size(); ++i) {
                const Complex den = 1.0 + std::conj(a(i)) * x(i);
                J(i, i) = (1.0 - std::norm(a(i))) / (den * den);
            }
            return J;
        }
        case MapExpr::Kind::Polynomial: {
            CMatrix J = CMatrix::Zero(m.dim_out(), m.dim_in());
            for (const auto& t : m.terms()) {
                for (std::size_t j = 0; j < t.alpha.size(); ++j) {
                    if (t.alpha[j] == 0) continue;
                    std::vector<int> al = t.alpha;
                    al[j] -= 1;
                    const Complex factor = static_cast<double>(t.alpha[j]) * monomial(x, al);
                    J.col(static_cast<Eigen::Index>(j)) += t.coeff * factor;
                }
            }
            return J;
        }
        case MapExpr::Kind::Compose: {
            const auto& items = m.items();
            CVector state = x;
            CMatrix J = CMatrix::Identity(m.dim_in(), m.dim_in());
            for (auto it = items.rbegin(); it != items.rend(); ++it) {
                J = jacobian(*it, state) * J;
                state = eval(*it, state);
            }
            return J;
        }
        case MapExpr::Kind::Sum: {
            CMatrix J = CMatrix::Zero(m.dim_out(), m.dim_in());
            for (const auto& it : m.items()) J += jacobian(it, x);
            return J;
        }
    }
    throw Error("jacobian: unreachable");
}

namespace {

int nodes_for_order(int order) {
    // 2^ceil(log2(8(|alpha|+1))) nodes, floored at 16 so that degree-8
    // aliasing vanishes for |alpha| = 0 as well.
    const int want = 8 * (order + 1);
    int n = 16;
    while (n < want) n <<= 1;
    return n;
}

void check_radius(const MapExpr& m, double radius) {
    if (!(radius > 0.0)) throw DomainError("taylor_coeff: radius must be positive");
    if (m.has_bounded_domain() && radius >= 1.0)
        throw DomainError("taylor_coeff: radius must stay inside the open polydisk");
}

// One streaming pass over the tensor grid, accumulating every requested
// multi-index bin. Memory is O(#alphas), not O(grid).
void cauchy_accumulate(const MapExpr& m, double radius, int N,
                       const std::vector<std::vector<int>>& alphas,
                       std::vector<CVector>& out) {
    const int n = m.dim_in();
    std::vector<Complex> twiddle(static_cast<std::size_t>(N));
    for (int k = 0; k < N; ++k) {
        const double t = 2.0 * M_PI * k / N;
        twiddle[static_cast<std::size_t>(k)] = Complex(std::cos(t), std::sin(t));
    }
    out.assign(alphas.size(), CVector::Zero(m.dim_out()));

    std::vector<int> idx(static_cast<std::size_t>(n), 0);
    CVector z(n);
    const bool done_empty = alphas.empty();
    if (done_empty) return;
    while (true) {
        for (int j = 0; j < n; ++j)
            z(j) = radius * twiddle[static_cast<std::size_t>(idx[static_cast<std::size_t>(j)])];
        const CVector w = eval(m, z);
        for (std::size_t a = 0; a < alphas.size(); ++a) {
            long phase = 0;
            for (int j = 0; j < n; ++j)
                phase += static_cast<long>(alphas[a][static_cast<std::size_t>(j)]) *
                         idx[static_cast<std::size_t>(j)];
            out[a] += w * std::conj(twiddle[static_cast<std::size_t>(phase % N)]);
        }
        int j = 0;
        for (; j < n; ++j) {
            if (++idx[static_cast<std::size_t>(j)] < N) break;
            idx[static_cast<std::size_t>(j)] = 0;
        }
        if (j == n) break;
    }
    double scale = 1.0;
    for (int j = 0; j < n; ++j) scale /= N;
    for (std::size_t a = 0; a < alphas.size(); ++a) {
        int total = 0;
        for (int e : alphas[a]) total += e;
        out[a] *= scale / std::pow(radius, total);
    }
}

void enumerate_alphas(int n, int order, std::vector<int>& cur, std::size_t pos,
                      std::vector<std::vector<int>>& out) {
    if (pos + 1 == cur.size()) {
        cur[pos] = order;
        out.push_back(cur);
        return;
    }
    for (int e = 0; e <= order; ++e) {
        cur[pos] = e;
        enumerate_alphas(n, order - e, cur, pos + 1, out);
    }
}

}  // namespace

CVector taylor_coeff(const MapExpr& m, const TaylorQuery& q) {
    if (static_cast<int>(q.multi_index.size()) != m.dim_in())
        throw DimensionError("taylor_coeff: multi-index length != dim_in");
    for (int e : q.multi_index)
        if (e < 0) throw DomainError("taylor_coeff: negative multi-index entry");
    check_radius(m, q.radius);
    int order = 0;
    for (int e : q.multi_index) order += e;
    const int N = nodes_for_order(order);
    std::vector<CVector> out;
    cauchy_accumulate(m, q.radius, N, {q.multi_index}, out);
    return out[0];
}

TaylorTable taylor_coeffs_range(const MapExpr& m, int min_order, int max_order, double radius) {
    check_radius(m, radius);
    if (min_order < 0 || max_order < min_order)
        throw DomainError("taylor_coeffs_range: bad order range");
    std::vector<std::vector<int>> alphas;
    for (int order = min_order; order <= max_order; ++order) {
        std::vector<int> cur(static_cast<std::size_t>(m.dim_in()), 0);
        enumerate_alphas(m.dim_in(), order, cur, 0, alphas);
    }
    TaylorTable table;
    table.nodes_per_axis = nodes_for_order(max_order);
    std::vector<CVector> out;
    cauchy_accumulate(m, radius, table.nodes_per_axis, alphas, out);
    for (std::size_t i = 0; i < alphas.size(); ++i) table.coeffs.emplace_back(alphas[i], out[i]);
    return table;
}

MapExpr moebius_automorphism(const CVector& a) { return MapExpr::moebius(a); }

MapExpr moebius_inverse(const CVector& a) { return MapExpr::moebius(-a); }

}  // namespace carv

#pragma once

#include <memory>
#include <vector>

#include "carv/linalg.hpp"

namespace carv {

/// Expression tree for holomorphic maps between balls. Trees (rather than
/// closures) keep composition with rational Moebius factors exactly
/// evaluable and differentiable. All nodes are immutable and shared.
class MapExpr {
public:
    enum class Kind { Linear, Polynomial, Moebius, Compose, Sum, Identity };

    struct PolyTerm {
        std::vector<int> alpha;  // multi-index over the input variables
        CVector coeff;           // one coefficient per output component
    };

    static MapExpr linear(CMatrix A);
    static MapExpr identity(int dim);
    /// Componentwise disk automorphism x_i -> (x_i + a_i)/(1 + conj(a_i) x_i).
    static MapExpr moebius(CVector a);
    static MapExpr polynomial(int dim_in, int dim_out, std::vector<PolyTerm> terms);
    /// items[0] is applied last: compose({g, f}) evaluates g(f(x)).
    static MapExpr compose(std::vector<MapExpr> items);
    static MapExpr sum(std::vector<MapExpr> items);

    Kind kind() const;
    int dim_in() const;
    int dim_out() const;
    const CMatrix& matrix() const;
    const CVector& moebius_parameter() const;
    const std::vector<PolyTerm>& terms() const;
    const std::vector<MapExpr>& items() const;
    /// True if some node is only defined on the open unit polydisk.
    bool has_bounded_domain() const;

private:
    struct Node;
    explicit MapExpr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
    std::shared_ptr<const Node> node_;
};

CVector eval(const MapExpr& m, const CVector& x);

/// Holomorphic Jacobian, computed structurally by the chain rule.
CMatrix jacobian(const MapExpr& m, const CVector& x);

struct TaylorQuery {
    std::vector<int> multi_index;
    double radius = 0.5;
};

/// Coefficient of x^alpha in each output component, by tensor-product Cauchy
/// integrals on circles of radius q.radius (trapezoid rule with
/// 2^ceil(log2(8(|alpha|+1))) nodes per axis).
CVector taylor_coeff(const MapExpr& m, const TaylorQuery& q);

/// All coefficients with min_order <= |alpha| <= max_order from one shared
/// grid evaluation (node count taken for max_order).
struct TaylorTable {
    std::vector<std::pair<std::vector<int>, CVector>> coeffs;
    int nodes_per_axis = 0;
};
TaylorTable taylor_coeffs_range(const MapExpr& m, int min_order, int max_order, double radius);

MapExpr moebius_automorphism(const CVector& a);
MapExpr moebius_inverse(const CVector& a);

}  // namespace carv

#include "drillfem/fe_core.hpp"

#include <Eigen/LU>

#include <cassert>
#include <cmath>
#include <stdexcept>

namespace drillfem {

namespace {

ShapeEval eval_p0(const Eigen::Vector2d&) {
    ShapeEval s;
    s.values = Eigen::VectorXd::Ones(1);
    s.gradients = Eigen::Matrix<double, Eigen::Dynamic, 2>::Zero(1, 2);
    return s;
}

ShapeEval eval_p1(const Eigen::Vector2d& x) {
    assert(x.x() >= -1e-12 && x.y() >= -1e-12 && x.x() + x.y() <= 1.0 + 1e-12);
    ShapeEval s;
    s.values.resize(3);
    s.values << 1.0 - x.x() - x.y(), x.x(), x.y();
    s.gradients.resize(3, 2);
    s.gradients << -1.0, -1.0,
                    1.0,  0.0,
                    0.0,  1.0;
    return s;
}

ShapeEval eval_q1(const Eigen::Vector2d& x) {
    assert(x.x() >= -1e-12 && x.x() <= 1.0 + 1e-12 && x.y() >= -1e-12 && x.y() <= 1.0 + 1e-12);
    const double xi = x.x();
    const double eta = x.y();
    ShapeEval s;
    s.values.resize(4);
    s.values << (1.0 - xi) * (1.0 - eta), xi * (1.0 - eta), xi * eta, (1.0 - xi) * eta;
    s.gradients.resize(4, 2);
    s.gradients << -(1.0 - eta), -(1.0 - xi),
                    (1.0 - eta), -xi,
                    eta,          xi,
                   -eta,          (1.0 - xi);
    return s;
}

QuadratureRule tensor_gauss(const std::vector<double>& pts, const std::vector<double>& wts) {
    QuadratureRule rule;
    for (std::size_t j = 0; j < pts.size(); ++j) {
        for (std::size_t i = 0; i < pts.size(); ++i) {
            rule.points.emplace_back(pts[i], pts[j]);
            rule.weights.push_back(wts[i] * wts[j]);
        }
    }
    return rule;
}

}  // namespace

ShapeEval ReferenceElement::eval(const Eigen::Vector2d& ref_point) const {
    switch (kind) {
        case ElemKind::P0: return eval_p0(ref_point);
        case ElemKind::P1: return eval_p1(ref_point);
        case ElemKind::Q1: return eval_q1(ref_point);
    }
    throw std::logic_error("ReferenceElement::eval: unknown kind");
}

const ReferenceElement& ReferenceElement::get(ElemKind kind) {
    static const ReferenceElement p0{ElemKind::P0, 1};
    static const ReferenceElement p1{ElemKind::P1, 3};
    static const ReferenceElement q1{ElemKind::Q1, 4};
    switch (kind) {
        case ElemKind::P0: return p0;
        case ElemKind::P1: return p1;
        case ElemKind::Q1: return q1;
    }
    throw std::logic_error("ReferenceElement::get: unknown kind");
}

ShapeEval eval_shape(ElemKind kind, const Eigen::Vector2d& ref_point) {
    return ReferenceElement::get(kind).eval(ref_point);
}

QuadratureRule quadrature_for(CellKind cell_kind, QuadPurpose purpose) {
    if (cell_kind == CellKind::Quad) {
        if (purpose == QuadPurpose::Stiffness) {
            const double d = 0.5 / std::sqrt(3.0);
            return tensor_gauss({0.5 - d, 0.5 + d}, {0.5, 0.5});
        }
        const double d = 0.5 * std::sqrt(3.0 / 5.0);
        return tensor_gauss({0.5 - d, 0.5, 0.5 + d}, {5.0 / 18.0, 4.0 / 9.0, 5.0 / 18.0});
    }

    if (purpose == QuadPurpose::Stiffness) {
        // Edge-midpoint rule, exact to degree 2.
        QuadratureRule rule;
        rule.points = {{0.5, 0.0}, {0.5, 0.5}, {0.0, 0.5}};
        rule.weights = {1.0 / 6.0, 1.0 / 6.0, 1.0 / 6.0};
        return rule;
    }

    // Six-point rule, exact to degree 4. Weights normalized to area 1/2.
    const double b1 = 0.44594849091596488631832925388305199;
    const double w1 = 0.5 * 0.22338158967801146569500700843312280;
    const double b2 = 0.09157621350977074345957146340220151;
    const double w2 = 0.5 * 0.10995174365532186763832632490021053;
    const double a1 = 1.0 - 2.0 * b1;
    const double a2 = 1.0 - 2.0 * b2;
    QuadratureRule rule;
    rule.points = {{b1, b1}, {a1, b1}, {b1, a1}, {b2, b2}, {a2, b2}, {b2, a2}};
    rule.weights = {w1, w1, w1, w2, w2, w2};
    return rule;
}

const ReferenceElement& geometry_element(CellKind cell_kind) {
    return ReferenceElement::get(cell_kind == CellKind::Quad ? ElemKind::Q1 : ElemKind::P1);
}

CellGeometry map_to_cell(const Mesh& mesh, int cell_index, const QuadratureRule& rule) {
    const auto& cell = mesh.cells.at(static_cast<std::size_t>(cell_index));
    const ReferenceElement& geom_elem = geometry_element(mesh.cell_kind);

    CellGeometry g;
    const int nq = rule.n_points();
    g.ref_points = rule.points;
    g.phys_points.resize(static_cast<std::size_t>(nq));
    g.jacobian.resize(static_cast<std::size_t>(nq));
    g.jac_inv_t.resize(static_cast<std::size_t>(nq));
    g.det.resize(static_cast<std::size_t>(nq));
    g.phys_weights.resize(static_cast<std::size_t>(nq));

    for (int q = 0; q < nq; ++q) {
        const ShapeEval sh = geom_elem.eval(rule.points[static_cast<std::size_t>(q)]);
        Eigen::Vector2d x = Eigen::Vector2d::Zero();
        Eigen::Matrix2d J = Eigen::Matrix2d::Zero();
        for (int a = 0; a < geom_elem.n_basis; ++a) {
            const Eigen::Vector2d& node = mesh.nodes[static_cast<std::size_t>(cell[static_cast<std::size_t>(a)])];
            x += sh.values(a) * node;
            J += node * sh.gradients.row(a);  // J(r,c) = d x_r / d xi_c
        }
        const double det = J.determinant();
        if (det <= 0.0)
            throw std::runtime_error("map_to_cell: non-positive Jacobian determinant (degenerate cell)");
        g.phys_points[static_cast<std::size_t>(q)] = x;
        g.jacobian[static_cast<std::size_t>(q)] = J;
        g.jac_inv_t[static_cast<std::size_t>(q)] = J.inverse().transpose();
        g.det[static_cast<std::size_t>(q)] = det;
        g.phys_weights[static_cast<std::size_t>(q)] = rule.weights[static_cast<std::size_t>(q)] * det;
    }
    return g;
}

}  // namespace drillfem

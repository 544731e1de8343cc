#pragma once

#include "drillfem/mesh.hpp"

#include <Eigen/Core>

#include <vector>

namespace drillfem {

enum class ElemKind { P0, P1, Q1 };

enum class QuadPurpose { Stiffness, Error };

/// Shape values and reference-space gradients at one reference point.
struct ShapeEval {
    Eigen::VectorXd values;                              // n_basis
    Eigen::Matrix<double, Eigen::Dynamic, 2> gradients;  // n_basis x 2
};

/// Nodal reference element on the unit square (Q1), the unit triangle
/// with vertices (0,0),(1,0),(0,1) (P1), or the constant element (P0).
struct ReferenceElement {
    ElemKind kind = ElemKind::Q1;
    int n_basis = 4;

    ShapeEval eval(const Eigen::Vector2d& ref_point) const;

    static const ReferenceElement& get(ElemKind kind);
};

ShapeEval eval_shape(ElemKind kind, const Eigen::Vector2d& ref_point);

struct QuadratureRule {
    std::vector<Eigen::Vector2d> points;
    std::vector<double> weights;

    int n_points() const { return static_cast<int>(points.size()); }
};

/// Stiffness rules integrate every bilinear-form integrand of the supported
/// element pairs exactly on affine cells (2x2 Gauss on quads, 3-point on
/// triangles). Error rules are one order higher (3x3 Gauss, 6-point).
QuadratureRule quadrature_for(CellKind cell_kind, QuadPurpose purpose);

/// Geometry of one physical cell evaluated at the points of a rule.
struct CellGeometry {
    std::vector<Eigen::Vector2d> ref_points;
    std::vector<Eigen::Vector2d> phys_points;
    std::vector<Eigen::Matrix2d> jacobian;
    std::vector<Eigen::Matrix2d> jac_inv_t;
    std::vector<double> det;           // det J > 0
    std::vector<double> phys_weights;  // reference weight * det J

    int n_points() const { return static_cast<int>(ref_points.size()); }
};

/// Maps a quadrature rule onto a mesh cell. Throws on a non-positive
/// Jacobian determinant (degenerate cell).
CellGeometry map_to_cell(const Mesh& mesh, int cell_index, const QuadratureRule& rule);

/// Nodal element used for the geometry mapping of a cell kind (Q1 or P1).
const ReferenceElement& geometry_element(CellKind cell_kind);

}  // namespace drillfem

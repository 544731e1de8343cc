#pragma once

#include "drillfem/fe_core.hpp"

#include <Eigen/Core>

#include <functional>

namespace drillfem {

/// Isotropic Lame pair. Supported range: mu > 0, lambda >= 0.
struct Material {
    double lambda = 1.0;
    double mu = 1.0;
};

/// Plane-strain conversion: lambda = E nu / ((1+nu)(1-2nu)), mu = E / (2(1+nu)).
/// Throws for nu >= 0.5 (incompressible limit) or E <= 0.
Material from_plane_strain(double E, double nu);

/// Right-hand-side data. Either `volume_force` (unsplit) or the pair
/// {grad_potential, moment_density} (split) drives the volume load, never
/// both. The split (phi, h) represents the volume force
///     f = grad(phi) + rot(h),   rot(h) = (dh/dx2, -dh/dx1),
/// under which the curl unknown recovers p = mu curl(u) - h. In the split
/// the moment density h enters the curl-test equation as g(q) = mu^-1 (h, q).
struct LoadSpec {
    using VectorField = std::function<Eigen::Vector2d(const Eigen::Vector2d&)>;
    using ScalarField = std::function<double(const Eigen::Vector2d&)>;

    VectorField volume_force;    // f
    VectorField traction;        // g, applied on NeumannTraction edges
    VectorField grad_potential;  // grad(phi), split mode
    ScalarField moment_density;  // h, split mode

    bool split() const { return static_cast<bool>(grad_potential) || static_cast<bool>(moment_density); }
};

// Element matrices for vector-valued displacement elements use node-major
// DOF ordering: local DOF 2a+i is component i at local node a.

/// Pointwise residual of the strain-product rearrangement
///   eps(u):eps(v) = 1/2 curl(u).curl(v) + sum_i u_i,i v_i,i + sum_{i!=j} u_i,j v_j,i
/// for gradient matrices g(i,j) = d u_i / d x_j, d = 2 or 3. Exact up to
/// roundoff for every input pair.
double strain_identity_residual(const Eigen::MatrixXd& grad_u, const Eigen::MatrixXd& grad_v);

/// Elasticity matrix: integral of 2 mu eps(u):eps(v) + lambda div(u) div(v).
Eigen::MatrixXd elem_K_full(const CellGeometry& geom, const ReferenceElement& elem,
                            const Material& mat);

/// Rearranged matrix: integral of
///   2 mu (sum_i u_i,i v_i,i + sum_{i!=j} u_i,j v_j,i) + lambda div(u) div(v).
/// Satisfies elem_K_full = elem_K_a + mu * elem_K_cc on any shared rule.
Eigen::MatrixXd elem_K_a(const CellGeometry& geom, const ReferenceElement& elem,
                         const Material& mat);

/// Unit-coefficient curl-curl matrix: integral of curl(u) curl(v).
Eigen::MatrixXd elem_K_cc(const CellGeometry& geom, const ReferenceElement& elem);

/// Coupling matrix (n_q_basis x 2 n_v_basis): integral of q curl(v).
Eigen::MatrixXd elem_B(const CellGeometry& geom, const ReferenceElement& v_elem,
                       const ReferenceElement& q_elem);

/// Scaled scalar mass matrix: coeff * integral of p q.
Eigen::MatrixXd elem_scaled_mass(const CellGeometry& geom, const ReferenceElement& q_elem,
                                 double coeff);

/// Curl-space mass with the moment-density scaling: mu^-1 integral of p q.
Eigen::MatrixXd elem_C(const CellGeometry& geom, const ReferenceElement& q_elem,
                       const Material& mat);

/// Cell load contributions: f_vol is the displacement load (f.v unsplit,
/// grad(phi).v split) and g_mom the curl-test load mu^-1 (h, q) (split mode,
/// zero otherwise). g_mom is empty when q_elem is null.
struct ElementLoads {
    Eigen::VectorXd f_vol;
    Eigen::VectorXd g_mom;
};

ElementLoads elem_loads(const CellGeometry& geom, const ReferenceElement& v_elem,
                        const ReferenceElement* q_elem, const Material& mat,
                        const LoadSpec& loads);

/// Traction load of one boundary edge (a, b): 2-point Gauss of g.v along the
/// segment, returned node-major for the two endpoints (4 entries).
Eigen::Vector4d edge_traction_load(const Eigen::Vector2d& a, const Eigen::Vector2d& b,
                                   const LoadSpec::VectorField& traction);

}  // namespace drillfem

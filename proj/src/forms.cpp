#include "drillfem/forms.hpp"

#include <cmath>
#include <stdexcept>

namespace drillfem {

Material from_plane_strain(double E, double nu) {
    if (E <= 0.0)
        throw std::invalid_argument("from_plane_strain: E must be positive");
    if (nu < 0.0 || nu >= 0.5)
        throw std::invalid_argument("from_plane_strain: nu must lie in [0, 0.5)");
    Material mat;
    mat.lambda = E * nu / ((1.0 + nu) * (1.0 - 2.0 * nu));
    mat.mu = E / (2.0 * (1.0 + nu));
    return mat;
}

double strain_identity_residual(const Eigen::MatrixXd& grad_u, const Eigen::MatrixXd& grad_v) {
    const auto d = grad_u.rows();
    if ((d != 2 && d != 3) || grad_u.cols() != d || grad_v.rows() != d || grad_v.cols() != d)
        throw std::invalid_argument("strain_identity_residual: gradients must be 2x2 or 3x3");

    const Eigen::MatrixXd eps_u = 0.5 * (grad_u + grad_u.transpose());
    const Eigen::MatrixXd eps_v = 0.5 * (grad_v + grad_v.transpose());
    const double lhs = (eps_u.array() * eps_v.array()).sum();

    double curl_dot;
    if (d == 2) {
        curl_dot = (grad_u(1, 0) - grad_u(0, 1)) * (grad_v(1, 0) - grad_v(0, 1));
    } else {
        const Eigen::Vector3d cu(grad_u(2, 1) - grad_u(1, 2), grad_u(0, 2) - grad_u(2, 0),
                                 grad_u(1, 0) - grad_u(0, 1));
        const Eigen::Vector3d cv(grad_v(2, 1) - grad_v(1, 2), grad_v(0, 2) - grad_v(2, 0),
                                 grad_v(1, 0) - grad_v(0, 1));
        curl_dot = cu.dot(cv);
    }

    double rhs = 0.5 * curl_dot;
    for (Eigen::Index i = 0; i < d; ++i)
        for (Eigen::Index j = 0; j < d; ++j)
            rhs += (i == j) ? grad_u(i, i) * grad_v(i, i) : grad_u(i, j) * grad_v(j, i);

    return lhs - rhs;
}

namespace {

// Physical gradients of all basis functions at quadrature point q: nb x 2.
Eigen::Matrix<double, Eigen::Dynamic, 2> physical_gradients(const CellGeometry& geom,
                                                            const ShapeEval& sh, int q) {
    return sh.gradients * geom.jac_inv_t[static_cast<std::size_t>(q)].transpose();
}

}  // namespace

Eigen::MatrixXd elem_K_full(const CellGeometry& geom, const ReferenceElement& elem,
                            const Material& mat) {
    const int nb = elem.n_basis;
    Eigen::MatrixXd K = Eigen::MatrixXd::Zero(2 * nb, 2 * nb);
    for (int q = 0; q < geom.n_points(); ++q) {
        const ShapeEval sh = elem.eval(geom.ref_points[static_cast<std::size_t>(q)]);
        const auto dN = physical_gradients(geom, sh, q);
        const double w = geom.phys_weights[static_cast<std::size_t>(q)];
        for (int a = 0; a < nb; ++a) {
            for (int b = 0; b < nb; ++b) {
                const double gdot = dN.row(a).dot(dN.row(b));
                for (int i = 0; i < 2; ++i) {
                    for (int j = 0; j < 2; ++j) {
                        double v = mat.mu * dN(a, j) * dN(b, i) + mat.lambda * dN(a, i) * dN(b, j);
                        if (i == j)
                            v += mat.mu * gdot;
                        K(2 * a + i, 2 * b + j) += w * v;
                    }
                }
            }
        }
    }
    return K;
}

Eigen::MatrixXd elem_K_a(const CellGeometry& geom, const ReferenceElement& elem,
                         const Material& mat) {
    const int nb = elem.n_basis;
    Eigen::MatrixXd K = Eigen::MatrixXd::Zero(2 * nb, 2 * nb);
    for (int q = 0; q < geom.n_points(); ++q) {
        const ShapeEval sh = elem.eval(geom.ref_points[static_cast<std::size_t>(q)]);
        const auto dN = physical_gradients(geom, sh, q);
        const double w = geom.phys_weights[static_cast<std::size_t>(q)];
        for (int a = 0; a < nb; ++a)
            for (int b = 0; b < nb; ++b)
                for (int i = 0; i < 2; ++i)
                    for (int j = 0; j < 2; ++j)
                        K(2 * a + i, 2 * b + j) +=
                            w * (2.0 * mat.mu * dN(a, j) * dN(b, i) +
                                 mat.lambda * dN(a, i) * dN(b, j));
    }
    return K;
}

Eigen::MatrixXd elem_K_cc(const CellGeometry& geom, const ReferenceElement& elem) {
    const int nb = elem.n_basis;
    Eigen::MatrixXd K = Eigen::MatrixXd::Zero(2 * nb, 2 * nb);
    Eigen::VectorXd curl(2 * nb);
    for (int q = 0; q < geom.n_points(); ++q) {
        const ShapeEval sh = elem.eval(geom.ref_points[static_cast<std::size_t>(q)]);
        const auto dN = physical_gradients(geom, sh, q);
        const double w = geom.phys_weights[static_cast<std::size_t>(q)];
        // curl of the basis field N_a e_i: -dN_a/dx2 for i=0, +dN_a/dx1 for i=1
        for (int a = 0; a < nb; ++a) {
            curl(2 * a) = -dN(a, 1);
            curl(2 * a + 1) = dN(a, 0);
        }
        K.noalias() += w * curl * curl.transpose();
    }
    return K;
}

Eigen::MatrixXd elem_B(const CellGeometry& geom, const ReferenceElement& v_elem,
                       const ReferenceElement& q_elem) {
    const int nv = v_elem.n_basis;
    const int nq = q_elem.n_basis;
    Eigen::MatrixXd B = Eigen::MatrixXd::Zero(nq, 2 * nv);
    for (int q = 0; q < geom.n_points(); ++q) {
        const Eigen::Vector2d& xi = geom.ref_points[static_cast<std::size_t>(q)];
        const ShapeEval sv = v_elem.eval(xi);
        const ShapeEval sq = q_elem.eval(xi);
        const auto dN = physical_gradients(geom, sv, q);
        const double w = geom.phys_weights[static_cast<std::size_t>(q)];
        for (int c = 0; c < nq; ++c) {
            for (int b = 0; b < nv; ++b) {
                B(c, 2 * b) += w * sq.values(c) * (-dN(b, 1));
                B(c, 2 * b + 1) += w * sq.values(c) * dN(b, 0);
            }
        }
    }
    return B;
}

Eigen::MatrixXd elem_scaled_mass(const CellGeometry& geom, const ReferenceElement& q_elem,
                                 double coeff) {
    const int nq = q_elem.n_basis;
    Eigen::MatrixXd M = Eigen::MatrixXd::Zero(nq, nq);
    for (int q = 0; q < geom.n_points(); ++q) {
        const ShapeEval sq = q_elem.eval(geom.ref_points[static_cast<std::size_t>(q)]);
        const double w = coeff * geom.phys_weights[static_cast<std::size_t>(q)];
        M.noalias() += w * sq.values * sq.values.transpose();
    }
    return M;
}

Eigen::MatrixXd elem_C(const CellGeometry& geom, const ReferenceElement& q_elem,
                       const Material& mat) {
    return elem_scaled_mass(geom, q_elem, 1.0 / mat.mu);
}

ElementLoads elem_loads(const CellGeometry& geom, const ReferenceElement& v_elem,
                        const ReferenceElement* q_elem, const Material& mat,
                        const LoadSpec& loads) {
    if (loads.volume_force && loads.split())
        throw std::invalid_argument("elem_loads: unsplit and split volume loads are exclusive");

    ElementLoads out;
    out.f_vol = Eigen::VectorXd::Zero(2 * v_elem.n_basis);
    if (q_elem)
        out.g_mom = Eigen::VectorXd::Zero(q_elem->n_basis);

    const LoadSpec::VectorField& force = loads.volume_force ? loads.volume_force : loads.grad_potential;

    for (int q = 0; q < geom.n_points(); ++q) {
        const Eigen::Vector2d& x = geom.phys_points[static_cast<std::size_t>(q)];
        const double w = geom.phys_weights[static_cast<std::size_t>(q)];
        if (force) {
            const ShapeEval sv = v_elem.eval(geom.ref_points[static_cast<std::size_t>(q)]);
            const Eigen::Vector2d f = force(x);
            for (int a = 0; a < v_elem.n_basis; ++a) {
                out.f_vol(2 * a) += w * sv.values(a) * f.x();
                out.f_vol(2 * a + 1) += w * sv.values(a) * f.y();
            }
        }
        if (q_elem && loads.moment_density) {
            const ShapeEval sq = q_elem->eval(geom.ref_points[static_cast<std::size_t>(q)]);
            const double h = loads.moment_density(x);
            out.g_mom += (w * h / mat.mu) * sq.values;
        }
    }
    return out;
}

Eigen::Vector4d edge_traction_load(const Eigen::Vector2d& a, const Eigen::Vector2d& b,
                                   const LoadSpec::VectorField& traction) {
    Eigen::Vector4d F = Eigen::Vector4d::Zero();
    if (!traction)
        return F;
    const double len = (b - a).norm();
    const double d = 0.5 / std::sqrt(3.0);
    for (double s : {0.5 - d, 0.5 + d}) {
        const Eigen::Vector2d x = (1.0 - s) * a + s * b;
        const Eigen::Vector2d g = traction(x);
        const double w = 0.5 * len;
        F(0) += w * (1.0 - s) * g.x();
        F(1) += w * (1.0 - s) * g.y();
        F(2) += w * s * g.x();
        F(3) += w * s * g.y();
    }
    return F;
}

}  // namespace drillfem

#include "drillfem/analysis.hpp"

#include <cmath>
#include <stdexcept>

namespace drillfem {

ExactSolution manufactured() {
    ExactSolution exact;
    exact.displacement = [](const Eigen::Vector2d& x) {
        const double bubble = x.x() * (1.0 - x.x()) * x.y() * (1.0 - x.y());
        return Eigen::Vector2d((x.y() - 0.5) * bubble, -(x.x() - 0.5) * bubble);
    };
    exact.curl = [](const Eigen::Vector2d& x) {
        const double sx = x.x() * (x.x() - 1.0);
        const double sy = x.y() * (x.y() - 1.0);
        return -0.5 * (sx * (12.0 * sy + 1.0) + sy);
    };
    exact.rhs = [](const Eigen::Vector2d& x) {
        const double common = 3.0 * x.x() * x.x() - 3.0 * x.x() - 3.0 * x.y() * x.y() + 3.0 * x.y();
        return Eigen::Vector2d((2.0 * x.y() - 1.0) * (common + 1.0),
                               (2.0 * x.x() - 1.0) * (common - 1.0));
    };
    return exact;
}

namespace {

ElemKind displacement_kind(const Mesh& mesh) {
    return mesh.cell_kind == CellKind::Quad ? ElemKind::Q1 : ElemKind::P1;
}

ElemKind scalar_kind(ScalarSpace s) {
    switch (s) {
        case ScalarSpace::P0: return ElemKind::P0;
        case ScalarSpace::P1: return ElemKind::P1;
        case ScalarSpace::Q1: return ElemKind::Q1;
        case ScalarSpace::None: break;
    }
    throw std::invalid_argument("l2_error_p: system carries no curl variable");
}

}  // namespace

double l2_error_u(const Mesh& mesh, const Eigen::VectorXd& u_coeffs, const ExactSolution& exact) {
    const ReferenceElement& elem = ReferenceElement::get(displacement_kind(mesh));
    const QuadratureRule rule = quadrature_for(mesh.cell_kind, QuadPurpose::Error);
    if (u_coeffs.size() != 2 * mesh.n_nodes())
        throw std::invalid_argument("l2_error_u: coefficient size does not match mesh");

    double acc = 0.0;
    for (int cell = 0; cell < mesh.n_cells(); ++cell) {
        const CellGeometry geom = map_to_cell(mesh, cell, rule);
        const auto& nodes = mesh.cells[static_cast<std::size_t>(cell)];
        for (int q = 0; q < geom.n_points(); ++q) {
            const ShapeEval sh = elem.eval(geom.ref_points[static_cast<std::size_t>(q)]);
            Eigen::Vector2d uh = Eigen::Vector2d::Zero();
            for (int a = 0; a < elem.n_basis; ++a) {
                const int node = nodes[static_cast<std::size_t>(a)];
                uh.x() += sh.values(a) * u_coeffs(2 * node);
                uh.y() += sh.values(a) * u_coeffs(2 * node + 1);
            }
            const Eigen::Vector2d diff =
                uh - exact.displacement(geom.phys_points[static_cast<std::size_t>(q)]);
            acc += geom.phys_weights[static_cast<std::size_t>(q)] * diff.squaredNorm();
        }
    }
    return std::sqrt(acc);
}

double l2_error_p(const Mesh& mesh, ScalarSpace q_space, const Eigen::VectorXd& p_coeffs,
                  const ExactSolution& exact, double mu) {
    const ReferenceElement& elem = ReferenceElement::get(scalar_kind(q_space));
    const QuadratureRule rule = quadrature_for(mesh.cell_kind, QuadPurpose::Error);

    double acc = 0.0;
    for (int cell = 0; cell < mesh.n_cells(); ++cell) {
        const CellGeometry geom = map_to_cell(mesh, cell, rule);
        const auto& nodes = mesh.cells[static_cast<std::size_t>(cell)];
        for (int q = 0; q < geom.n_points(); ++q) {
            const ShapeEval sh = elem.eval(geom.ref_points[static_cast<std::size_t>(q)]);
            double ph = 0.0;
            for (int c = 0; c < elem.n_basis; ++c) {
                const int dof = q_space == ScalarSpace::P0 ? cell : nodes[static_cast<std::size_t>(c)];
                ph += sh.values(c) * p_coeffs(dof);
            }
            const double diff =
                ph - mu * exact.curl(geom.phys_points[static_cast<std::size_t>(q)]);
            acc += geom.phys_weights[static_cast<std::size_t>(q)] * diff * diff;
        }
    }
    return std::sqrt(acc);
}

double energy_sigma(const Mesh& mesh, const Eigen::VectorXd& u_coeffs, const Material& mat) {
    if (u_coeffs.size() != 2 * mesh.n_nodes())
        throw std::invalid_argument("energy_sigma: coefficient size does not match mesh");
    const Eigen::SparseMatrix<double> K =
        assemble_operator(mesh, mat, DisplacementOperator::Full);
    return u_coeffs.dot(K * u_coeffs);
}

ErrorReport convergence_rates(std::vector<ErrorRow> rows) {
    for (std::size_t i = 1; i < rows.size(); ++i) {
        if (!(rows[i].h < rows[i - 1].h))
            throw std::invalid_argument("convergence_rates: rows must have decreasing h");
        const double dh = std::log(rows[i - 1].h / rows[i].h);
        if (rows[i - 1].err_u > 0.0 && rows[i].err_u > 0.0)
            rows[i].rate_u = std::log(rows[i - 1].err_u / rows[i].err_u) / dh;
        if (rows[i - 1].err_p > 0.0 && rows[i].err_p > 0.0)
            rows[i].rate_p = std::log(rows[i - 1].err_p / rows[i].err_p) / dh;
    }
    ErrorReport report;
    report.rows = std::move(rows);
    return report;
}

}  // namespace drillfem

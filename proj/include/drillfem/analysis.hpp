#pragma once

#include "drillfem/system.hpp"

#include <functional>
#include <optional>
#include <vector>

namespace drillfem {

/// Closed-form reference fields for a convergence study. The stored rhs is
/// the volume force -div(sigma(u)) for the lambda = mu = 1 material.
struct ExactSolution {
    std::function<Eigen::Vector2d(const Eigen::Vector2d&)> displacement;
    std::function<double(const Eigen::Vector2d&)> curl;  // du2/dx1 - du1/dx2
    std::function<Eigen::Vector2d(const Eigen::Vector2d&)> rhs;
};

/// Polynomial benchmark solution on the unit square, vanishing on the whole
/// boundary:
///   u1 =  (x2 - 1/2) x2 x1 (1 - x1)(1 - x2)
///   u2 = -(x1 - 1/2) x1 x2 (1 - x1)(1 - x2)
/// with the load derived for lambda = mu = 1.
ExactSolution manufactured();

/// L2 distance between the discrete displacement and the exact one,
/// integrated with the Error-purpose rule.
double l2_error_u(const Mesh& mesh, const Eigen::VectorXd& u_coeffs, const ExactSolution& exact);

/// L2 distance between the discrete curl variable and mu * curl(u_exact).
double l2_error_p(const Mesh& mesh, ScalarSpace q_space, const Eigen::VectorXd& p_coeffs,
                  const ExactSolution& exact, double mu);

/// Strain energy |u|_sigma^2 = integral of sigma(u_h):eps(u_h), evaluated as
/// the quadratic form of the assembled elasticity matrix.
double energy_sigma(const Mesh& mesh, const Eigen::VectorXd& u_coeffs, const Material& mat);

struct ErrorRow {
    int n = 0;
    double h = 0.0;
    double err_u = 0.0;
    double err_p = 0.0;  // 0 when the method carries no curl variable
    double energy = 0.0;
    std::optional<double> rate_u;
    std::optional<double> rate_p;
};

struct ErrorReport {
    std::vector<ErrorRow> rows;  // ordered by decreasing h
};

/// Fills the rate columns between consecutive rows:
/// rate = log(e_coarse / e_fine) / log(h_coarse / h_fine). Rates involving a
/// non-positive error stay absent.
ErrorReport convergence_rates(std::vector<ErrorRow> rows);

}  // namespace drillfem

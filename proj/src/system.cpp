#include "drillfem/system.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SparseLU>

#include <cmath>
#include <stdexcept>
#include <vector>

namespace drillfem {

namespace {

ElemKind scalar_elem_kind(ScalarSpace s) {
    switch (s) {
        case ScalarSpace::P0: return ElemKind::P0;
        case ScalarSpace::P1: return ElemKind::P1;
        case ScalarSpace::Q1: return ElemKind::Q1;
        case ScalarSpace::None: break;
    }
    throw std::invalid_argument("scalar_elem_kind: no element for ScalarSpace::None");
}

void validate(const Mesh& mesh, const MethodConfig& config, const Material& mat) {
    if (!(mat.mu > 0.0) || mat.lambda < 0.0)
        throw std::invalid_argument("assemble: material requires mu > 0 and lambda >= 0");
    if (config.v_space == ElemKind::P0)
        throw std::invalid_argument("assemble: displacement space must be P1 or Q1");
    const bool quad = mesh.cell_kind == CellKind::Quad;
    if (quad != (config.v_space == ElemKind::Q1))
        throw std::invalid_argument("assemble: displacement space does not match mesh cell kind");
    if (config.method == Method::Standard) {
        if (config.q_space != ScalarSpace::None)
            throw std::invalid_argument("assemble: Standard method takes no curl space");
    } else {
        if (config.q_space == ScalarSpace::None)
            throw std::invalid_argument("assemble: Mixed/Hughes methods need a curl space");
        if (config.q_space == ScalarSpace::Q1 && !quad)
            throw std::invalid_argument("assemble: Q1 curl space needs a quad mesh");
        if (config.q_space == ScalarSpace::P1 && quad)
            throw std::invalid_argument("assemble: P1 curl space needs a triangle mesh");
    }
    if (config.hughes_gamma && !(*config.hughes_gamma > 0.0))
        throw std::invalid_argument("assemble: hughes_gamma must be positive");
}

// p-DOF of local q-basis index c on cell `cell`: cell index for P0, global
// node otherwise.
int p_dof(const Mesh& mesh, ScalarSpace q_space, int cell, int c) {
    if (q_space == ScalarSpace::P0)
        return cell;
    return mesh.cells[static_cast<std::size_t>(cell)][static_cast<std::size_t>(c)];
}

int p_dof_count(const Mesh& mesh, ScalarSpace q_space) {
    if (q_space == ScalarSpace::None)
        return 0;
    return q_space == ScalarSpace::P0 ? mesh.n_cells() : mesh.n_nodes();
}

Eigen::SparseMatrix<double> from_triplets(int rows, int cols,
                                          std::vector<Eigen::Triplet<double>>& trips) {
    Eigen::SparseMatrix<double> m(rows, cols);
    m.setFromTriplets(trips.begin(), trips.end());
    m.makeCompressed();
    return m;
}

// Keep rows of `m` whose flag maps to a new index, likewise columns.
Eigen::SparseMatrix<double> select(const Eigen::SparseMatrix<double>& m,
                                   const std::vector<int>* row_map, int new_rows,
                                   const std::vector<int>* col_map, int new_cols) {
    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(static_cast<std::size_t>(m.nonZeros()));
    for (int k = 0; k < m.outerSize(); ++k) {
        for (Eigen::SparseMatrix<double>::InnerIterator it(m, k); it; ++it) {
            const int r = row_map ? (*row_map)[static_cast<std::size_t>(it.row())]
                                  : static_cast<int>(it.row());
            const int c = col_map ? (*col_map)[static_cast<std::size_t>(it.col())]
                                  : static_cast<int>(it.col());
            if (r >= 0 && c >= 0)
                trips.emplace_back(r, c, it.value());
        }
    }
    return from_triplets(new_rows, new_cols, trips);
}

}  // namespace

Eigen::VectorXd BlockSystem::reduce_u(const Eigen::VectorXd& full) const {
    if (!reduced)
        return full;
    Eigen::VectorXd out = Eigen::VectorXd::Zero(n_u());
    for (int d = 0; d < n_u_full; ++d) {
        const int r = reduced_of_full[static_cast<std::size_t>(d)];
        if (r >= 0)
            out(r) = full(d);
    }
    return out;
}

Eigen::VectorXd BlockSystem::expand_u(const Eigen::VectorXd& current) const {
    if (!reduced)
        return current;
    Eigen::VectorXd out = Eigen::VectorXd::Zero(n_u_full);
    for (int d = 0; d < n_u_full; ++d) {
        const int r = reduced_of_full[static_cast<std::size_t>(d)];
        if (r >= 0)
            out(d) = current(r);
    }
    return out;
}

BlockSystem assemble(const Mesh& mesh, const MethodConfig& config, const Material& mat,
                     const LoadSpec& loads) {
    validate(mesh, config, mat);

    BlockSystem sys;
    sys.method = config.method;
    sys.q_space = config.q_space;
    sys.material = mat;
    sys.gamma = config.method == Method::Hughes ? config.hughes_gamma.value_or(mat.mu) : 0.0;

    const int n_u = 2 * mesh.n_nodes();
    const int n_p = p_dof_count(mesh, config.q_space);
    sys.n_u_full = n_u;
    sys.F = Eigen::VectorXd::Zero(n_u);
    sys.G = Eigen::VectorXd::Zero(n_p);

    const ReferenceElement& v_elem = ReferenceElement::get(config.v_space);
    const ReferenceElement* q_elem =
        config.q_space == ScalarSpace::None ? nullptr
                                            : &ReferenceElement::get(scalar_elem_kind(config.q_space));
    const QuadratureRule rule = quadrature_for(mesh.cell_kind, QuadPurpose::Stiffness);
    const double mass_coeff = 1.0 / (config.method == Method::Hughes ? sys.gamma : mat.mu);

    std::vector<Eigen::Triplet<double>> a_trips, b_trips, c_trips;
    for (int cell = 0; cell < mesh.n_cells(); ++cell) {
        const CellGeometry geom = map_to_cell(mesh, cell, rule);
        const auto& nodes = mesh.cells[static_cast<std::size_t>(cell)];

        Eigen::MatrixXd A_loc;
        switch (config.method) {
            case Method::Standard: A_loc = elem_K_full(geom, v_elem, mat); break;
            case Method::Mixed: A_loc = elem_K_a(geom, v_elem, mat); break;
            case Method::Hughes:
                A_loc = elem_K_full(geom, v_elem, mat) + sys.gamma * elem_K_cc(geom, v_elem);
                break;
        }

        const ElementLoads loads_loc = elem_loads(geom, v_elem, q_elem, mat, loads);

        for (int a = 0; a < v_elem.n_basis; ++a) {
            for (int i = 0; i < 2; ++i) {
                const int row = 2 * nodes[static_cast<std::size_t>(a)] + i;
                sys.F(row) += loads_loc.f_vol(2 * a + i);
                for (int b = 0; b < v_elem.n_basis; ++b)
                    for (int j = 0; j < 2; ++j)
                        a_trips.emplace_back(row, 2 * nodes[static_cast<std::size_t>(b)] + j,
                                             A_loc(2 * a + i, 2 * b + j));
            }
        }

        if (q_elem) {
            const Eigen::MatrixXd B_loc = elem_B(geom, v_elem, *q_elem);
            const Eigen::MatrixXd C_loc = elem_scaled_mass(geom, *q_elem, mass_coeff);
            for (int c = 0; c < q_elem->n_basis; ++c) {
                const int row = p_dof(mesh, config.q_space, cell, c);
                if (loads_loc.g_mom.size() > 0)
                    sys.G(row) += loads_loc.g_mom(c);
                for (int b = 0; b < v_elem.n_basis; ++b)
                    for (int j = 0; j < 2; ++j)
                        b_trips.emplace_back(row, 2 * nodes[static_cast<std::size_t>(b)] + j,
                                             B_loc(c, 2 * b + j));
                for (int d = 0; d < q_elem->n_basis; ++d)
                    c_trips.emplace_back(row, p_dof(mesh, config.q_space, cell, d), C_loc(c, d));
            }
        }
    }

    // Boundary traction on tagged edges; Dirichlet rows get eliminated later.
    for (const auto& edge : mesh.boundary_edges) {
        if (edge.tag != EdgeTag::NeumannTraction || !loads.traction)
            continue;
        const Eigen::Vector2d& a = mesh.nodes[static_cast<std::size_t>(edge.nodes[0])];
        const Eigen::Vector2d& b = mesh.nodes[static_cast<std::size_t>(edge.nodes[1])];
        const Eigen::Vector4d f = edge_traction_load(a, b, loads.traction);
        for (int v = 0; v < 2; ++v)
            for (int i = 0; i < 2; ++i)
                sys.F(2 * edge.nodes[static_cast<std::size_t>(v)] + i) += f(2 * v + i);
    }

    sys.A = from_triplets(n_u, n_u, a_trips);
    sys.B = from_triplets(n_p, n_u, b_trips);
    sys.C = from_triplets(n_p, n_p, c_trips);

    sys.u_constrained.assign(static_cast<std::size_t>(n_u), false);
    const std::vector<bool> fixed = dirichlet_nodes(mesh);
    for (int node = 0; node < mesh.n_nodes(); ++node) {
        if (fixed[static_cast<std::size_t>(node)]) {
            sys.u_constrained[static_cast<std::size_t>(2 * node)] = true;
            sys.u_constrained[static_cast<std::size_t>(2 * node + 1)] = true;
        }
    }
    return sys;
}

BlockSystem apply_dirichlet(const BlockSystem& sys) {
    if (sys.reduced)
        return sys;

    std::vector<int> map(static_cast<std::size_t>(sys.n_u_full), -1);
    int kept = 0;
    for (int d = 0; d < sys.n_u_full; ++d)
        if (!sys.u_constrained[static_cast<std::size_t>(d)])
            map[static_cast<std::size_t>(d)] = kept++;
    if (kept == 0)
        throw std::runtime_error("apply_dirichlet: every displacement DOF is constrained");

    BlockSystem out = sys;
    out.A = select(sys.A, &map, kept, &map, kept);
    if (sys.n_p() > 0)
        out.B = select(sys.B, nullptr, sys.n_p(), &map, kept);
    else
        out.B.resize(0, kept);
    Eigen::VectorXd F = Eigen::VectorXd::Zero(kept);
    for (int d = 0; d < sys.n_u_full; ++d)
        if (map[static_cast<std::size_t>(d)] >= 0)
            F(map[static_cast<std::size_t>(d)]) = sys.F(d);
    out.F = F;
    out.reduced_of_full = std::move(map);
    out.reduced = true;
    return out;
}

BlockSystem condense_p(const BlockSystem& sys) {
    if (sys.method == Method::Standard)
        throw std::invalid_argument("condense_p: nothing to condense in a Standard system");
    if (sys.q_space != ScalarSpace::P0)
        throw std::invalid_argument("condense_p: curl space must be element-wise (P0)");

    // P0 curl mass is diagonal, so the Schur complement is element-local.
    Eigen::SparseMatrix<double> c_inv(sys.n_p(), sys.n_p());
    {
        std::vector<Eigen::Triplet<double>> trips;
        trips.reserve(static_cast<std::size_t>(sys.n_p()));
        const Eigen::VectorXd diag = sys.C.diagonal();
        for (int i = 0; i < sys.n_p(); ++i)
            trips.emplace_back(i, i, 1.0 / diag(i));
        c_inv.setFromTriplets(trips.begin(), trips.end());
    }

    const double s = sys.method == Method::Mixed ? 1.0 : -1.0;
    const Eigen::SparseMatrix<double> bt_cinv = sys.B.transpose() * c_inv;

    BlockSystem out = sys;
    out.A = sys.A + s * (bt_cinv * sys.B);
    out.A.makeCompressed();
    out.F = sys.F + s * (bt_cinv * sys.G);
    out.method = Method::Standard;
    out.q_space = ScalarSpace::None;
    out.B.resize(0, out.A.cols());
    out.C.resize(0, 0);
    out.G.resize(0);
    return out;
}

std::pair<Eigen::SparseMatrix<double>, Eigen::VectorXd> full_system(const BlockSystem& sys) {
    const int n_u = sys.n_u();
    const int n_p = sys.n_p();
    if (sys.method == Method::Standard || n_p == 0)
        return {sys.A, sys.F};

    const double s = sys.method == Method::Mixed ? 1.0 : -1.0;
    const double c_sign = sys.method == Method::Mixed ? -1.0 : 1.0;

    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(static_cast<std::size_t>(sys.A.nonZeros() + 2 * sys.B.nonZeros() + sys.C.nonZeros()));
    for (int k = 0; k < sys.A.outerSize(); ++k)
        for (Eigen::SparseMatrix<double>::InnerIterator it(sys.A, k); it; ++it)
            trips.emplace_back(static_cast<int>(it.row()), static_cast<int>(it.col()), it.value());
    for (int k = 0; k < sys.B.outerSize(); ++k) {
        for (Eigen::SparseMatrix<double>::InnerIterator it(sys.B, k); it; ++it) {
            const int pr = n_u + static_cast<int>(it.row());
            const int uc = static_cast<int>(it.col());
            trips.emplace_back(pr, uc, s * it.value());
            trips.emplace_back(uc, pr, s * it.value());
        }
    }
    for (int k = 0; k < sys.C.outerSize(); ++k)
        for (Eigen::SparseMatrix<double>::InnerIterator it(sys.C, k); it; ++it)
            trips.emplace_back(n_u + static_cast<int>(it.row()), n_u + static_cast<int>(it.col()),
                               c_sign * it.value());

    Eigen::SparseMatrix<double> M(n_u + n_p, n_u + n_p);
    M.setFromTriplets(trips.begin(), trips.end());
    M.makeCompressed();

    Eigen::VectorXd rhs(n_u + n_p);
    rhs.head(n_u) = sys.F;
    rhs.tail(n_p) = sys.method == Method::Hughes ? (-sys.G).eval() : sys.G;
    return {M, rhs};
}

FieldSolution solve(const BlockSystem& sys) {
    if (!sys.reduced)
        throw std::invalid_argument("solve: apply_dirichlet first");

    const auto [M, rhs] = full_system(sys);

    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
    lu.compute(M);
    if (lu.info() != Eigen::Success)
        throw std::runtime_error("solve: factorization failed (" + lu.lastErrorMessage() + ")");
    const Eigen::VectorXd x = lu.solve(rhs);

    const double residual = (M * x - rhs).norm();
    const double bound = 1e-10 * (1.0 + rhs.norm());
    if (!(residual <= bound))
        throw std::runtime_error("solve: residual " + std::to_string(residual) +
                                 " exceeds contract " + std::to_string(bound) +
                                 " (singular or ill-conditioned system)");

    FieldSolution sol;
    sol.u = sys.expand_u(x.head(sys.n_u()));
    sol.p = x.tail(sys.n_p());
    sol.residual_norm = residual;
    return sol;
}

double stability_probe(const BlockSystem& sys) {
    const auto [M, rhs] = full_system(sys);
    (void)rhs;
    Eigen::MatrixXd dense = Eigen::MatrixXd(M);
    dense = 0.5 * (dense + dense.transpose().eval());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(dense, Eigen::EigenvaluesOnly);
    if (eig.info() != Eigen::Success)
        throw std::runtime_error("stability_probe: eigensolver failed");
    const Eigen::VectorXd mags = eig.eigenvalues().cwiseAbs();
    return mags.minCoeff() / mags.maxCoeff();
}

Eigen::SparseMatrix<double> assemble_operator(const Mesh& mesh, const Material& mat,
                                              DisplacementOperator op) {
    const ReferenceElement& v_elem = geometry_element(mesh.cell_kind);
    const QuadratureRule rule = quadrature_for(mesh.cell_kind, QuadPurpose::Stiffness);
    const int n_u = 2 * mesh.n_nodes();

    std::vector<Eigen::Triplet<double>> trips;
    for (int cell = 0; cell < mesh.n_cells(); ++cell) {
        const CellGeometry geom = map_to_cell(mesh, cell, rule);
        Eigen::MatrixXd K;
        switch (op) {
            case DisplacementOperator::Full: K = elem_K_full(geom, v_elem, mat); break;
            case DisplacementOperator::Rearranged: K = elem_K_a(geom, v_elem, mat); break;
            case DisplacementOperator::CurlCurl: K = elem_K_cc(geom, v_elem); break;
        }
        const auto& nodes = mesh.cells[static_cast<std::size_t>(cell)];
        for (int a = 0; a < v_elem.n_basis; ++a)
            for (int i = 0; i < 2; ++i)
                for (int b = 0; b < v_elem.n_basis; ++b)
                    for (int j = 0; j < 2; ++j)
                        trips.emplace_back(2 * nodes[static_cast<std::size_t>(a)] + i,
                                           2 * nodes[static_cast<std::size_t>(b)] + j,
                                           K(2 * a + i, 2 * b + j));
    }
    Eigen::SparseMatrix<double> m(n_u, n_u);
    m.setFromTriplets(trips.begin(), trips.end());
    m.makeCompressed();
    return m;
}

}  // namespace drillfem

#include "drillfem/mesh.hpp"

#include <algorithm>
#include <ostream>
#include <stdexcept>

namespace drillfem {

namespace {

int lattice_node(int i, int j, int n) { return i + (n + 1) * j; }

std::vector<Eigen::Vector2d> lattice_nodes(int n) {
    std::vector<Eigen::Vector2d> nodes;
    nodes.reserve(static_cast<std::size_t>((n + 1) * (n + 1)));
    for (int j = 0; j <= n; ++j)
        for (int i = 0; i <= n; ++i)
            nodes.emplace_back(static_cast<double>(i) / n, static_cast<double>(j) / n);
    return nodes;
}

// Boundary edges of the lattice, counterclockwise around the square.
std::vector<BoundaryEdge> lattice_boundary(int n) {
    std::vector<BoundaryEdge> edges;
    edges.reserve(static_cast<std::size_t>(4 * n));
    for (int i = 0; i < n; ++i)
        edges.push_back({{lattice_node(i, 0, n), lattice_node(i + 1, 0, n)}, EdgeTag::NeumannFree});
    for (int j = 0; j < n; ++j)
        edges.push_back({{lattice_node(n, j, n), lattice_node(n, j + 1, n)}, EdgeTag::NeumannFree});
    for (int i = n; i > 0; --i)
        edges.push_back({{lattice_node(i, n, n), lattice_node(i - 1, n, n)}, EdgeTag::NeumannFree});
    for (int j = n; j > 0; --j)
        edges.push_back({{lattice_node(0, j, n), lattice_node(0, j - 1, n)}, EdgeTag::NeumannFree});
    return edges;
}

}  // namespace

Mesh build_structured_quad_mesh(int n) {
    if (n < 1)
        throw std::invalid_argument("build_structured_quad_mesh: n must be >= 1");
    Mesh mesh;
    mesh.cell_kind = CellKind::Quad;
    mesh.nodes = lattice_nodes(n);
    mesh.cells.reserve(static_cast<std::size_t>(n * n));
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i)
            mesh.cells.push_back({lattice_node(i, j, n), lattice_node(i + 1, j, n),
                                  lattice_node(i + 1, j + 1, n), lattice_node(i, j + 1, n)});
    mesh.boundary_edges = lattice_boundary(n);
    return mesh;
}

Mesh build_structured_tri_mesh(int n) {
    if (n < 1)
        throw std::invalid_argument("build_structured_tri_mesh: n must be >= 1");
    Mesh mesh;
    mesh.cell_kind = CellKind::Tri;
    mesh.nodes = lattice_nodes(n);
    mesh.cells.reserve(static_cast<std::size_t>(2 * n * n));
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            const int a = lattice_node(i, j, n);
            const int b = lattice_node(i + 1, j, n);
            const int c = lattice_node(i + 1, j + 1, n);
            const int d = lattice_node(i, j + 1, n);
            mesh.cells.push_back({a, b, c, -1});
            mesh.cells.push_back({a, c, d, -1});
        }
    }
    mesh.boundary_edges = lattice_boundary(n);
    return mesh;
}

Mesh tag_boundary(Mesh mesh, const BoundarySpec& spec) {
    int n_dirichlet = 0;
    for (auto& edge : mesh.boundary_edges) {
        const Eigen::Vector2d& a = mesh.nodes[static_cast<std::size_t>(edge.nodes[0])];
        const Eigen::Vector2d& b = mesh.nodes[static_cast<std::size_t>(edge.nodes[1])];
        const bool is_dirichlet =
            std::any_of(spec.dirichlet.begin(), spec.dirichlet.end(),
                        [&](const AxisPredicate& p) { return p.matches(a) && p.matches(b); });
        if (is_dirichlet) {
            edge.tag = EdgeTag::Dirichlet;
            ++n_dirichlet;
        } else if (spec.traction && spec.traction->matches(a) && spec.traction->matches(b)) {
            edge.tag = EdgeTag::NeumannTraction;
        } else {
            edge.tag = EdgeTag::NeumannFree;
        }
    }
    if (!spec.dirichlet.empty() && n_dirichlet == 0)
        throw std::invalid_argument("tag_boundary: Dirichlet predicates select no boundary edge");
    return mesh;
}

double cell_signed_area(const Mesh& mesh, int cell) {
    const auto& c = mesh.cells[static_cast<std::size_t>(cell)];
    const int k = mesh.nodes_per_cell();
    double area = 0.0;
    for (int v = 0; v < k; ++v) {
        const Eigen::Vector2d& p = mesh.nodes[static_cast<std::size_t>(c[static_cast<std::size_t>(v)])];
        const Eigen::Vector2d& q =
            mesh.nodes[static_cast<std::size_t>(c[static_cast<std::size_t>((v + 1) % k)])];
        area += p.x() * q.y() - q.x() * p.y();
    }
    return 0.5 * area;
}

std::vector<bool> dirichlet_nodes(const Mesh& mesh) {
    std::vector<bool> fixed(static_cast<std::size_t>(mesh.n_nodes()), false);
    for (const auto& edge : mesh.boundary_edges) {
        if (edge.tag == EdgeTag::Dirichlet) {
            fixed[static_cast<std::size_t>(edge.nodes[0])] = true;
            fixed[static_cast<std::size_t>(edge.nodes[1])] = true;
        }
    }
    return fixed;
}

void dump_mesh(const Mesh& mesh, std::ostream& os) {
    for (const auto& node : mesh.nodes)
        os << "v " << node.x() << ' ' << node.y() << '\n';
    for (const auto& cell : mesh.cells) {
        os << "c " << cell[0] << ' ' << cell[1] << ' ' << cell[2];
        if (cell[3] >= 0)
            os << ' ' << cell[3];
        os << '\n';
    }
    for (const auto& edge : mesh.boundary_edges) {
        const char* tag = edge.tag == EdgeTag::Dirichlet ? "DIRICHLET"
                          : edge.tag == EdgeTag::NeumannTraction ? "NEUMANN_TRACTION"
                                                                 : "NEUMANN_FREE";
        os << "e " << edge.nodes[0] << ' ' << edge.nodes[1] << ' ' << tag << '\n';
    }
}

}  // namespace drillfem

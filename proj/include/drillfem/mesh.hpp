#pragma once

#include <Eigen/Core>

#include <array>
#include <cmath>
#include <iosfwd>
#include <optional>
#include <vector>

namespace drillfem {

enum class CellKind { Quad, Tri };

enum class EdgeTag { Dirichlet, NeumannTraction, NeumannFree };

struct BoundaryEdge {
    std::array<int, 2> nodes;
    EdgeTag tag = EdgeTag::NeumannFree;
};

/// Structured mesh of the unit square [0,1]^2. Cells are counterclockwise;
/// boundary edges are oriented counterclockwise around the domain and each
/// one lies on exactly one cell.
struct Mesh {
    static constexpr int dim = 2;

    CellKind cell_kind = CellKind::Quad;
    std::vector<Eigen::Vector2d> nodes;
    std::vector<std::array<int, 4>> cells;  // triangles leave cells[c][3] = -1
    std::vector<BoundaryEdge> boundary_edges;

    int nodes_per_cell() const { return cell_kind == CellKind::Quad ? 4 : 3; }
    int n_nodes() const { return static_cast<int>(nodes.size()); }
    int n_cells() const { return static_cast<int>(cells.size()); }
};

/// Axis-aligned selector: matches points with x[axis] == value within tol.
struct AxisPredicate {
    int axis = 0;
    double value = 0.0;
    double tol = 1e-12;

    bool matches(const Eigen::Vector2d& x) const { return std::abs(x[axis] - value) <= tol; }
};

/// Boundary description for an experiment. An edge is tagged when both of
/// its endpoints match a predicate; Dirichlet wins over traction on edges
/// matched by both, and unmatched edges stay traction-free.
struct BoundarySpec {
    std::vector<AxisPredicate> dirichlet;
    std::optional<AxisPredicate> traction;
    Eigen::Vector2d traction_value = Eigen::Vector2d::Zero();
};

/// Uniform n x n quadrilateral mesh of the unit square. Throws for n < 1.
Mesh build_structured_quad_mesh(int n);

/// Same lattice with every square cut along its lower-left/upper-right
/// diagonal, 2 n^2 triangles. Throws for n < 1.
Mesh build_structured_tri_mesh(int n);

/// Returns a copy of the mesh with boundary edges retagged.
/// Throws when a Dirichlet predicate is given but selects no edge.
Mesh tag_boundary(Mesh mesh, const BoundarySpec& spec);

double cell_signed_area(const Mesh& mesh, int cell);

/// Nodes touched by at least one Dirichlet edge.
std::vector<bool> dirichlet_nodes(const Mesh& mesh);

/// Plain-text dump: `v x y` per node, `c i j k [l]` per cell,
/// `e i j TAG` per tagged boundary edge.
void dump_mesh(const Mesh& mesh, std::ostream& os);

}  // namespace drillfem

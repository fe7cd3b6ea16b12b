#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "pxvi/common.hpp"

namespace pxvi {

enum class DomainKind { Interval, Square, LShape, HalfDisc };

enum class NodeFlag : uint8_t { Interior, Dirichlet, Exterior };

/// One quadrature cell of the tensor lattice (segment in 1-D, square in 2-D).
/// Only cells whose midpoint lies inside the domain are kept.
struct Cell {
    int ix{0}, iy{0};            // lattice cell coordinates
    std::array<int, 4> corners;  // node ids; 1-D uses corners[0..1], rest -1
    Vec2 center;
};

/// Uniform tensor grid over a fixed domain shape. Nodes are all lattice
/// points of the bounding box; exterior nodes carry no unknowns but keep
/// their index so fields can be stored as flat arrays.
class Grid {
public:
    Grid(DomainKind kind, int nodes_per_axis);

    DomainKind kind() const { return kind_; }
    int dim() const { return dim_; }
    double h() const { return h_; }
    int nodes_per_axis() const { return n_axis_; }
    int nx() const { return nx_; }
    int ny() const { return ny_; }
    Vec2 origin() const { return origin_; }

    int node_count() const { return static_cast<int>(coords_.size()); }
    int cell_count() const { return static_cast<int>(cells_.size()); }
    const std::vector<Cell>& cells() const { return cells_; }
    const Cell& cell(int c) const { return cells_[c]; }

    Vec2 coord(int node) const { return coords_[node]; }
    NodeFlag flag(int node) const { return flags_[node]; }
    bool is_interior(int node) const { return flags_[node] == NodeFlag::Interior; }
    bool is_exterior(int node) const { return flags_[node] == NodeFlag::Exterior; }

    int count(NodeFlag f) const;

    /// Lattice node id from per-axis indices. Valid for 0<=i<nx, 0<=j<ny.
    int node_id(int i, int j) const { return j * nx_ + i; }

    /// In-domain cell id at lattice cell coordinates, or -1.
    int cell_id(int ix, int iy) const;

    double cell_area() const { return dim_ == 1 ? h_ : h_ * h_; }
    /// Sum of in-domain cell areas (discrete |Omega|).
    double domain_area() const { return cell_count() * cell_area(); }
    /// Exact diameter of the continuum domain.
    double diameter() const;

    /// Ids of in-domain cells incident to a node (up to 2^dim), -1 padded.
    const std::array<int, 4>& node_cells(int node) const { return node_cells_[node]; }
    /// Lumped mass of the nodal hat function: sum of incident cell areas / 2^dim.
    double node_area(int node) const;

    /// Geometric membership tests for the continuum domain.
    bool contains_open(const Vec2& p) const;
    bool contains_closed(const Vec2& p) const;

    /// In-domain cells whose center lies within distance r of x (strict).
    std::vector<int> cells_in_ball(const Vec2& x, double r) const;

    /// Area of lattice cells (of the full plane, zero-extended past the
    /// domain) whose centers fall in B_r(x). Used as the discrete ball
    /// measure when averaging cell-sampled functions.
    double lattice_ball_area(const Vec2& x, double r) const;

    /// Nearest lattice node to p (ties toward the lower index), restricted
    /// to non-exterior nodes.
    int nearest_node(const Vec2& p) const;

    /// In-domain cell containing p, ties toward the lower cell index; -1 if
    /// the containing lattice cell is not part of the domain.
    int containing_cell(const Vec2& p) const;

private:
    void build();

    DomainKind kind_;
    int n_axis_;
    int dim_;
    int nx_{0}, ny_{0};
    double h_{0.0};
    Vec2 origin_;
    std::vector<Vec2> coords_;
    std::vector<NodeFlag> flags_;
    std::vector<Cell> cells_;
    std::vector<int> cell_ids_;                 // lattice cell -> cell index or -1
    std::vector<std::array<int, 4>> node_cells_;
};

/// Node/cell subset of a grid within a ball, with the axis-aligned
/// half-space test for the flat-boundary geometric setting.
struct SubWindow {
    const Grid* grid{nullptr};
    Vec2 center;
    double radius{0.0};
    double delta_tested{0.0};
    std::vector<int> nodes;   // non-exterior nodes with |y - center| < radius
    std::vector<int> cells;   // in-domain cells with center distance < radius
    bool setting_ok{false};   // half-ball inside the closed domain and the
                              // domain part of the ball above -2*delta*radius
    Vec2 inward;              // axis direction realizing the test (or default)

    double area() const { return static_cast<double>(cells.size()) * grid->cell_area(); }
};

/// Build the sub-window of radius rho about x0. Throws std::invalid_argument
/// when no non-exterior node falls inside the ball.
SubWindow window(const Grid& grid, const Vec2& x0, double rho, double delta = 1.0 / 8.0);

struct DensityRatio {
    double r{0.0};
    double ball_over_domain{0.0};     // |B_r(x)| / |Omega cap B_r(x)|
    double complement_over_ball{0.0}; // |Omega^c cap B_r(x)| / |B_r(x)|
};

/// Interior/boundary measure-density ratios at x for each radius, computed
/// by midpoint quadrature on the lattice extended past the domain. Degenerate
/// ratios come back as +inf.
std::vector<DensityRatio> measure_density_report(const Grid& grid, const Vec2& x,
                                                 const std::vector<double>& r_list);

} // namespace pxvi

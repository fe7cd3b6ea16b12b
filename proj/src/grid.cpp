#include "pxvi/grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace pxvi {

namespace {

bool point_in_domain_open(DomainKind kind, const Vec2& p) {
    switch (kind) {
    case DomainKind::Interval:
        return p.x > 0.0 && p.x < 1.0;
    case DomainKind::Square:
        return p.x > 0.0 && p.x < 1.0 && p.y > 0.0 && p.y < 1.0;
    case DomainKind::LShape:
        // unit square minus the closed upper-right quadrant, reentrant corner at (1/2, 1/2)
        if (!(p.x > 0.0 && p.x < 1.0 && p.y > 0.0 && p.y < 1.0)) return false;
        return p.x < 0.5 || p.y < 0.5;
    case DomainKind::HalfDisc:
        return p.y > 0.0 && p.norm2() < 1.0;
    }
    return false;
}

bool point_in_domain_closed(DomainKind kind, const Vec2& p) {
    switch (kind) {
    case DomainKind::Interval:
        return p.x >= 0.0 && p.x <= 1.0;
    case DomainKind::Square:
        return p.x >= 0.0 && p.x <= 1.0 && p.y >= 0.0 && p.y <= 1.0;
    case DomainKind::LShape:
        if (!(p.x >= 0.0 && p.x <= 1.0 && p.y >= 0.0 && p.y <= 1.0)) return false;
        return p.x <= 0.5 || p.y <= 0.5;
    case DomainKind::HalfDisc:
        return p.y >= 0.0 && p.norm2() <= 1.0;
    }
    return false;
}

} // namespace

Grid::Grid(DomainKind kind, int nodes_per_axis) : kind_(kind), n_axis_(nodes_per_axis) {
    if (nodes_per_axis < 2) throw std::invalid_argument("Grid: need at least 2 nodes per axis");
    dim_ = (kind == DomainKind::Interval) ? 1 : 2;
    h_ = 1.0 / static_cast<double>(nodes_per_axis - 1);
    switch (kind) {
    case DomainKind::Interval:
        nx_ = nodes_per_axis;
        ny_ = 1;
        origin_ = {0.0, 0.0};
        break;
    case DomainKind::Square:
    case DomainKind::LShape:
        nx_ = nodes_per_axis;
        ny_ = nodes_per_axis;
        origin_ = {0.0, 0.0};
        break;
    case DomainKind::HalfDisc:
        // x spans [-1,1] with the same spacing, y spans [0,1]
        nx_ = 2 * nodes_per_axis - 1;
        ny_ = nodes_per_axis;
        origin_ = {-1.0, 0.0};
        break;
    }
    build();
}

void Grid::build() {
    const int ncx = nx_ - 1;
    const int ncy = std::max(1, ny_ - 1);

    coords_.resize(static_cast<size_t>(nx_) * ny_);
    for (int j = 0; j < ny_; ++j)
        for (int i = 0; i < nx_; ++i)
            coords_[node_id(i, j)] = {origin_.x + i * h_, origin_.y + j * h_};

    cell_ids_.assign(static_cast<size_t>(ncx) * ncy, -1);
    cells_.clear();
    for (int jy = 0; jy < (dim_ == 1 ? 1 : ncy); ++jy) {
        for (int jx = 0; jx < ncx; ++jx) {
            Vec2 c{origin_.x + (jx + 0.5) * h_, dim_ == 1 ? 0.0 : origin_.y + (jy + 0.5) * h_};
            if (!point_in_domain_open(kind_, c)) continue;
            Cell cell;
            cell.ix = jx;
            cell.iy = jy;
            cell.center = c;
            if (dim_ == 1) {
                cell.corners = {node_id(jx, 0), node_id(jx + 1, 0), -1, -1};
            } else {
                cell.corners = {node_id(jx, jy), node_id(jx + 1, jy), node_id(jx, jy + 1),
                                node_id(jx + 1, jy + 1)};
            }
            cell_ids_[static_cast<size_t>(jy) * ncx + jx] = static_cast<int>(cells_.size());
            cells_.push_back(cell);
        }
    }

    // Node classification: a node is exterior when no in-domain cell touches
    // it, interior when every incident lattice cell is in-domain.
    node_cells_.assign(coords_.size(), {-1, -1, -1, -1});
    std::vector<int> incident(coords_.size(), 0);
    for (size_t ci = 0; ci < cells_.size(); ++ci) {
        const Cell& c = cells_[ci];
        const int ncorner = dim_ == 1 ? 2 : 4;
        for (int k = 0; k < ncorner; ++k) {
            int node = c.corners[k];
            node_cells_[node][incident[node]++] = static_cast<int>(ci);
        }
    }
    flags_.assign(coords_.size(), NodeFlag::Exterior);
    const int full = dim_ == 1 ? 2 : 4;
    for (int j = 0; j < ny_; ++j) {
        for (int i = 0; i < nx_; ++i) {
            int id = node_id(i, j);
            if (incident[id] == 0) continue;
            // count of lattice cells around the node (smaller at the box edge)
            int lattice_cells = 1;
            if (dim_ == 1) {
                lattice_cells = (i > 0 ? 1 : 0) + (i < ncx ? 1 : 0);
            } else {
                lattice_cells = ((i > 0 ? 1 : 0) + (i < ncx ? 1 : 0)) *
                                ((j > 0 ? 1 : 0) + (j < ncy ? 1 : 0));
            }
            flags_[id] = (incident[id] == full && lattice_cells == full) ? NodeFlag::Interior
                                                                         : NodeFlag::Dirichlet;
        }
    }
}

int Grid::count(NodeFlag f) const {
    int n = 0;
    for (auto fl : flags_)
        if (fl == f) ++n;
    return n;
}

int Grid::cell_id(int ix, int iy) const {
    const int ncx = nx_ - 1;
    const int ncy = std::max(1, ny_ - 1);
    if (ix < 0 || ix >= ncx || iy < 0 || iy >= ncy) return -1;
    return cell_ids_[static_cast<size_t>(iy) * ncx + ix];
}

double Grid::diameter() const {
    switch (kind_) {
    case DomainKind::Interval: return 1.0;
    case DomainKind::Square: return std::sqrt(2.0);
    case DomainKind::LShape: return std::sqrt(2.0);
    case DomainKind::HalfDisc: return 2.0;
    }
    return 0.0;
}

double Grid::node_area(int node) const {
    const double frac = dim_ == 1 ? 0.5 : 0.25;
    double a = 0.0;
    for (int c : node_cells_[node])
        if (c >= 0) a += cell_area() * frac;
    return a;
}

bool Grid::contains_open(const Vec2& p) const { return point_in_domain_open(kind_, p); }
bool Grid::contains_closed(const Vec2& p) const { return point_in_domain_closed(kind_, p); }

std::vector<int> Grid::cells_in_ball(const Vec2& x, double r) const {
    std::vector<int> out;
    const int ncx = nx_ - 1;
    const int ncy = std::max(1, ny_ - 1);
    const double r2 = r * r;
    int ix0 = static_cast<int>(std::floor((x.x - r - origin_.x) / h_ - 0.5));
    int ix1 = static_cast<int>(std::ceil((x.x + r - origin_.x) / h_ - 0.5));
    ix0 = std::max(ix0, 0);
    ix1 = std::min(ix1, ncx - 1);
    int iy0 = 0, iy1 = 0;
    if (dim_ == 2) {
        iy0 = std::max(static_cast<int>(std::floor((x.y - r - origin_.y) / h_ - 0.5)), 0);
        iy1 = std::min(static_cast<int>(std::ceil((x.y + r - origin_.y) / h_ - 0.5)), ncy - 1);
    }
    for (int jy = iy0; jy <= iy1; ++jy) {
        for (int jx = ix0; jx <= ix1; ++jx) {
            int c = cell_id(jx, jy);
            if (c < 0) continue;
            if ((cells_[c].center - x).norm2() < r2) out.push_back(c);
        }
    }
    return out;
}

double Grid::lattice_ball_area(const Vec2& x, double r) const {
    // Full-lattice count: cell centers live at origin + (i+1/2)h regardless
    // of the domain mask, extended to the whole line/plane.
    const double r2 = r * r;
    long long count = 0;
    long long ix0 = static_cast<long long>(std::floor((x.x - r - origin_.x) / h_ - 0.5)) - 1;
    long long ix1 = static_cast<long long>(std::ceil((x.x + r - origin_.x) / h_ - 0.5)) + 1;
    if (dim_ == 1) {
        for (long long i = ix0; i <= ix1; ++i) {
            double cx = origin_.x + (i + 0.5) * h_;
            if ((cx - x.x) * (cx - x.x) < r2) ++count;
        }
        return static_cast<double>(count) * h_;
    }
    long long iy0 = static_cast<long long>(std::floor((x.y - r - origin_.y) / h_ - 0.5)) - 1;
    long long iy1 = static_cast<long long>(std::ceil((x.y + r - origin_.y) / h_ - 0.5)) + 1;
    for (long long j = iy0; j <= iy1; ++j) {
        double cy = origin_.y + (j + 0.5) * h_;
        double dy2 = (cy - x.y) * (cy - x.y);
        if (dy2 >= r2) continue;
        double span = std::sqrt(r2 - dy2);
        // count i with |origin.x + (i+1/2)h - x.x| < span
        double lo = (x.x - span - origin_.x) / h_ - 0.5;
        double hi = (x.x + span - origin_.x) / h_ - 0.5;
        long long ilo = static_cast<long long>(std::ceil(lo));
        long long ihi = static_cast<long long>(std::floor(hi));
        if (static_cast<double>(ilo) == lo) ++ilo; // strict inequality on the left edge
        if (ihi >= ilo) count += (ihi - ilo + 1);
    }
    return static_cast<double>(count) * h_ * h_;
}

int Grid::nearest_node(const Vec2& p) const {
    auto round_down_ties = [](double t) {
        double f = std::floor(t);
        double frac = t - f;
        if (frac > 0.5) return static_cast<int>(f) + 1;
        return static_cast<int>(f); // ties toward the lower index
    };
    int i = std::clamp(round_down_ties((p.x - origin_.x) / h_), 0, nx_ - 1);
    int j = dim_ == 1 ? 0 : std::clamp(round_down_ties((p.y - origin_.y) / h_), 0, ny_ - 1);
    int id = node_id(i, j);
    if (!is_exterior(id)) return id;
    // rare staircase case: spiral outward for the closest usable node
    double best = std::numeric_limits<double>::infinity();
    int best_id = -1;
    for (int ring = 1; ring < std::max(nx_, ny_); ++ring) {
        for (int dj = -ring; dj <= ring; ++dj) {
            for (int di = -ring; di <= ring; ++di) {
                if (std::max(std::abs(di), std::abs(dj)) != ring) continue;
                int ii = i + di, jj = (dim_ == 1 ? 0 : j + dj);
                if (ii < 0 || ii >= nx_ || jj < 0 || jj >= ny_) continue;
                if (dim_ == 1 && dj != 0) continue;
                int cand = node_id(ii, jj);
                if (is_exterior(cand)) continue;
                double d = (coords_[cand] - p).norm2();
                if (d < best) {
                    best = d;
                    best_id = cand;
                }
            }
        }
        if (best_id >= 0) return best_id;
    }
    throw InvariantError("nearest_node: grid has no usable nodes");
}

int Grid::containing_cell(const Vec2& p) const {
    double tx = (p.x - origin_.x) / h_;
    int ix = static_cast<int>(std::floor(tx));
    if (ix > 0 && static_cast<double>(ix) == tx) --ix; // edge tie: lower cell
    ix = std::clamp(ix, 0, nx_ - 2);
    int iy = 0;
    if (dim_ == 2) {
        double ty = (p.y - origin_.y) / h_;
        iy = static_cast<int>(std::floor(ty));
        if (iy > 0 && static_cast<double>(iy) == ty) --iy;
        iy = std::clamp(iy, 0, ny_ - 2);
    }
    return cell_id(ix, iy);
}

SubWindow window(const Grid& grid, const Vec2& x0, double rho, double delta) {
    if (!(rho > 0.0)) throw std::invalid_argument("window: radius must be positive");
    SubWindow w;
    w.grid = &grid;
    w.center = x0;
    w.radius = rho;
    w.delta_tested = delta;
    const double r2 = rho * rho;
    for (int id = 0; id < grid.node_count(); ++id) {
        if (grid.is_exterior(id)) continue;
        if ((grid.coord(id) - x0).norm2() < r2) w.nodes.push_back(id);
    }
    if (w.nodes.empty()) throw std::invalid_argument("window: no nodes inside the ball");
    w.cells = grid.cells_in_ball(x0, rho);

    // Half-space template test on lattice points of the ball's bounding box,
    // extended beyond the grid: (a) the open half-ball must lie in the closed
    // domain, (b) domain points of the ball must sit above -2*delta*rho.
    const double h = grid.h();
    std::vector<Vec2> dirs;
    if (grid.dim() == 1) {
        dirs = {{1.0, 0.0}, {-1.0, 0.0}};
    } else {
        dirs = {{0.0, 1.0}, {0.0, -1.0}, {1.0, 0.0}, {-1.0, 0.0}};
    }
    w.setting_ok = false;
    w.inward = dirs[0];
    long long i0 = static_cast<long long>(std::floor((x0.x - rho - grid.origin().x) / h)) - 1;
    long long i1 = static_cast<long long>(std::ceil((x0.x + rho - grid.origin().x) / h)) + 1;
    long long j0 = 0, j1 = 0;
    if (grid.dim() == 2) {
        j0 = static_cast<long long>(std::floor((x0.y - rho - grid.origin().y) / h)) - 1;
        j1 = static_cast<long long>(std::ceil((x0.y + rho - grid.origin().y) / h)) + 1;
    }
    for (const Vec2& e : dirs) {
        bool ok = true;
        for (long long j = j0; j <= j1 && ok; ++j) {
            for (long long i = i0; i <= i1 && ok; ++i) {
                Vec2 p{grid.origin().x + i * h, grid.dim() == 1 ? 0.0 : grid.origin().y + j * h};
                Vec2 d = p - x0;
                if (d.norm2() >= r2) continue;
                double s = d.dot(e);
                if (s > 1e-12 && !grid.contains_closed(p)) ok = false;
                if (grid.contains_open(p) && s <= -2.0 * delta * rho) ok = false;
            }
        }
        if (ok) {
            w.setting_ok = true;
            w.inward = e;
            break;
        }
    }
    return w;
}

std::vector<DensityRatio> measure_density_report(const Grid& grid, const Vec2& x,
                                                 const std::vector<double>& r_list) {
    std::vector<DensityRatio> out;
    const double inf = std::numeric_limits<double>::infinity();
    for (double r : r_list) {
        DensityRatio row;
        row.r = r;
        // Midpoint quadrature on lattice cells of the full plane; counting
        // keeps |B| and |B cap Omega| on the same footing so ratios converge.
        const double h = grid.h();
        const double r2 = r * r;
        long long in_ball = 0, in_both = 0;
        long long i0 = static_cast<long long>(std::floor((x.x - r - grid.origin().x) / h - 0.5)) - 1;
        long long i1 = static_cast<long long>(std::ceil((x.x + r - grid.origin().x) / h - 0.5)) + 1;
        long long j0 = 0, j1 = 0;
        if (grid.dim() == 2) {
            j0 = static_cast<long long>(std::floor((x.y - r - grid.origin().y) / h - 0.5)) - 1;
            j1 = static_cast<long long>(std::ceil((x.y + r - grid.origin().y) / h - 0.5)) + 1;
        }
        for (long long j = j0; j <= j1; ++j) {
            for (long long i = i0; i <= i1; ++i) {
                Vec2 c{grid.origin().x + (i + 0.5) * h,
                       grid.dim() == 1 ? 0.0 : grid.origin().y + (j + 0.5) * h};
                if ((c - x).norm2() >= r2) continue;
                ++in_ball;
                if (grid.contains_open(c)) ++in_both;
            }
        }
        row.ball_over_domain = in_both > 0 ? static_cast<double>(in_ball) / in_both : inf;
        row.complement_over_ball =
            in_ball > 0 ? static_cast<double>(in_ball - in_both) / in_ball : inf;
        out.push_back(row);
    }
    return out;
}

} // namespace pxvi

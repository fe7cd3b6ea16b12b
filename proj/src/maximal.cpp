#include "pxvi/maximal.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <thread>

namespace pxvi {

std::vector<double> MaximalConfig::radii(const Grid& g) const {
    const double lo = r_min > 0.0 ? r_min : g.h();
    const double hi = r_max > 0.0 ? r_max : g.diameter();
    if (!(lo > 0.0) || hi < lo) throw std::invalid_argument("MaximalConfig: bad radius sweep");
    std::vector<double> rs;
    for (double r = lo; r < hi; r *= std::sqrt(2.0)) rs.push_back(r);
    rs.push_back(hi);
    return rs;
}

namespace {

void parallel_over_nodes(const Grid& grid, int threads, const std::function<void(int)>& body) {
    const int n = grid.node_count();
    if (threads <= 1) {
        for (int id = 0; id < n; ++id) body(id);
        return;
    }
    std::vector<std::thread> pool;
    std::atomic<int> next{0};
    for (int t = 0; t < threads; ++t) {
        pool.emplace_back([&]() {
            for (;;) {
                int id = next.fetch_add(64);
                if (id >= n) return;
                for (int k = id; k < std::min(id + 64, n); ++k) body(k);
            }
        });
    }
    for (auto& th : pool) th.join();
}

// Allocation-free twin of Grid::cells_in_ball; same bounding box, same
// strict-inequality membership test. The sweeps visit ~1e10 cells on fine
// grids, so building an index vector per ball is off the table.
template <class Visit>
void scan_ball(const Grid& g, const Vec2& x, double r, Visit&& visit) {
    const int ncx = g.nx() - 1;
    const int ncy = std::max(1, g.ny() - 1);
    const double h = g.h();
    const Vec2 o = g.origin();
    const double r2 = r * r;
    int ix0 = std::max(static_cast<int>(std::floor((x.x - r - o.x) / h - 0.5)), 0);
    int ix1 = std::min(static_cast<int>(std::ceil((x.x + r - o.x) / h - 0.5)), ncx - 1);
    int iy0 = 0, iy1 = 0;
    if (g.dim() == 2) {
        iy0 = std::max(static_cast<int>(std::floor((x.y - r - o.y) / h - 0.5)), 0);
        iy1 = std::min(static_cast<int>(std::ceil((x.y + r - o.y) / h - 0.5)), ncy - 1);
    }
    for (int jy = iy0; jy <= iy1; ++jy) {
        for (int jx = ix0; jx <= ix1; ++jx) {
            int c = g.cell_id(jx, jy);
            if (c < 0) continue;
            if ((g.cell(c).center - x).norm2() < r2) visit(c);
        }
    }
}

// shared sweep loop: value(x) = max over radii of combine(numerator(B_r), r)
template <class PerBall>
GridFunction sweep_max(const Grid& grid, const MaximalConfig& cfg, int threads, PerBall&& per_ball) {
    GridFunction out(grid);
    const std::vector<double> rs = cfg.radii(grid);
    parallel_over_nodes(grid, threads, [&](int id) {
        if (grid.is_exterior(id)) return;
        const Vec2 x = grid.coord(id);
        double best = 0.0;
        for (double r : rs) best = std::max(best, per_ball(x, r));
        out[id] = best;
    });
    return out;
}

} // namespace

std::vector<double> cell_values_of(const GridFunction& f) {
    const Grid& g = f.grid();
    std::vector<double> vals(static_cast<size_t>(g.cell_count()));
    for (int c = 0; c < g.cell_count(); ++c) vals[static_cast<size_t>(c)] = f.cell_value(c);
    return vals;
}

GridFunction hl_maximal_cells(const std::vector<double>& cell_values, const Grid& grid,
                              const MaximalConfig& cfg, int threads) {
    if (cell_values.size() != static_cast<size_t>(grid.cell_count()))
        throw std::invalid_argument("hl_maximal_cells: size mismatch");
    std::vector<char> mask;
    if (cfg.restrict_to) {
        mask.assign(cell_values.size(), 0);
        for (int c : cfg.restrict_to->cells) mask[static_cast<size_t>(c)] = 1;
    }
    const double area = grid.cell_area();
    return sweep_max(grid, cfg, threads, [&](const Vec2& x, double r) {
        double num = 0.0;
        scan_ball(grid, x, r, [&](int c) {
            if (!mask.empty() && !mask[static_cast<size_t>(c)]) return;
            num += std::abs(cell_values[static_cast<size_t>(c)]);
        });
        double den = grid.lattice_ball_area(x, r);
        return den > 0.0 ? num * area / den : 0.0;
    });
}

GridFunction hl_maximal(const GridFunction& f, const MaximalConfig& cfg, int threads) {
    return hl_maximal_cells(cell_values_of(f), f.grid(), cfg, threads);
}

namespace {

FracMaximalResult frac_measure_impl(const MeasureData& mu, const Grid& grid,
                                    const MaximalConfig& cfg, int threads, bool add_lebesgue) {
    mu.validate(grid);
    FracMaximalResult res;
    const double area = grid.cell_area();
    const int dim = grid.dim();
    res.field = sweep_max(grid, cfg, threads, [&](const Vec2& x, double r) {
        double mass = 0.0;
        for (const Atom& a : mu.atoms)
            if ((a.x - x).norm() < r) mass += std::abs(a.weight);
        if (mu.density) {
            scan_ball(grid, x, r,
                      [&](int c) { mass += std::abs(mu.density->cell_value(c)) * area; });
        }
        if (add_lebesgue) {
            long long inside = 0;
            scan_ball(grid, x, r, [&](int) { ++inside; });
            mass += static_cast<double>(inside) * area;
        }
        return r * mass / ball_volume(dim, r);
    });
    // Atom-node coincidences: in 2-D the supremum diverges like 1/r, so the
    // sweep value is the r_min evaluation by construction; flag those nodes.
    if (dim >= 2) {
        for (int id = 0; id < grid.node_count(); ++id) {
            if (grid.is_exterior(id)) continue;
            for (const Atom& a : mu.atoms) {
                if ((a.x - grid.coord(id)).norm() < 1e-14 * std::max(1.0, grid.h())) {
                    res.flagged_nodes.push_back(id);
                    break;
                }
            }
        }
    }
    return res;
}

} // namespace

FracMaximalResult frac_maximal_measure(const MeasureData& mu, const Grid& grid,
                                       const MaximalConfig& cfg, int threads) {
    return frac_measure_impl(mu, grid, cfg, threads, false);
}

FracMaximalResult frac_maximal_augmented(const MeasureData& mu, const Grid& grid,
                                         const MaximalConfig& cfg, int threads) {
    return frac_measure_impl(mu, grid, cfg, threads, true);
}

GridFunction frac_maximal_cells(const std::vector<double>& cell_values, const Grid& grid,
                                const MaximalConfig& cfg, int threads) {
    if (cell_values.size() != static_cast<size_t>(grid.cell_count()))
        throw std::invalid_argument("frac_maximal_cells: size mismatch");
    const double area = grid.cell_area();
    return sweep_max(grid, cfg, threads, [&](const Vec2& x, double r) {
        double num = 0.0;
        scan_ball(grid, x, r,
                  [&](int c) { num += std::abs(cell_values[static_cast<size_t>(c)]); });
        double den = grid.lattice_ball_area(x, r);
        return den > 0.0 ? r * num * area / den : 0.0;
    });
}

GridFunction frac_maximal(const GridFunction& f, const MaximalConfig& cfg, int threads) {
    return frac_maximal_cells(cell_values_of(f), f.grid(), cfg, threads);
}

DistributionSum distribution_sum_cells(const Grid& grid, const std::vector<double>& cell_values,
                                       double lambda, double m, double q) {
    if (!(lambda > 0.0) || !(m > 1.0) || !(q > 0.0))
        throw std::invalid_argument("distribution_sum: need lambda > 0, m > 1, q > 0");
    DistributionSum out;
    const double area = grid.cell_area();
    double peak = 0.0;
    for (double v : cell_values) peak = std::max(peak, std::abs(v));
    for (int k = 1;; ++k) {
        double level = lambda * std::pow(m, k);
        if (level > peak) break;
        double meas = 0.0;
        for (double v : cell_values)
            if (std::abs(v) > level) meas += area;
        if (meas > 0.0) {
            out.sum += std::pow(m, q * k) * meas;
            ++out.terms;
        }
        if (k > 4096) throw InvariantError("distribution_sum: level sequence failed to top out");
    }
    for (double v : cell_values) out.integral += std::pow(std::abs(v), q) * area;
    const double lq = std::pow(lambda, q);
    out.lower = lq * out.sum;
    out.upper = lq * (grid.domain_area() + out.sum);
    double c = 1.0;
    if (out.integral > 0.0) {
        if (out.lower > 0.0) c = std::max(c, out.lower / out.integral);
        if (out.upper > 0.0) c = std::max(c, out.integral / out.upper);
    }
    out.c_emp = c;
    return out;
}

DistributionSum distribution_sum(const GridFunction& f, double lambda, double m, double q) {
    return distribution_sum_cells(f.grid(), cell_values_of(f), lambda, m, q);
}

} // namespace pxvi

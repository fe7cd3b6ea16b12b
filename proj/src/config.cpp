#include "pxvi/config.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace pxvi {

using nlohmann::json;

namespace {

// Wrap json access so a bad key reports its path instead of a bare type error.
template <class T>
T get_or(const json& j, const std::string& key, T fallback) {
    if (!j.contains(key)) return fallback;
    try {
        return j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ConfigError("config: bad value for '" + key + "': " + e.what());
    }
}

Vec2 get_vec(const json& j, const std::string& key, Vec2 fallback) {
    if (!j.contains(key)) return fallback;
    const json& v = j.at(key);
    if (!v.is_array() || v.empty() || v.size() > 2)
        throw ConfigError("config: '" + key + "' must be [x] or [x, y]");
    Vec2 out{v[0].get<double>(), v.size() > 1 ? v[1].get<double>() : 0.0};
    return out;
}

ScalarSpec get_scalar_spec(const json& j, const std::string& key, ScalarSpec fallback) {
    if (!j.contains(key)) return fallback;
    const json& v = j.at(key);
    ScalarSpec s;
    s.kind = get_or<std::string>(v, "kind", "constant");
    s.params = get_or<std::vector<double>>(v, "params", {0.0});
    return s;
}

} // namespace

DomainKind parse_domain_kind(const std::string& name) {
    if (name == "interval") return DomainKind::Interval;
    if (name == "square") return DomainKind::Square;
    if (name == "lshape") return DomainKind::LShape;
    if (name == "halfdisc") return DomainKind::HalfDisc;
    throw ConfigError("config: unknown domain kind '" + name +
                      "' (interval, square, lshape, halfdisc)");
}

std::string domain_kind_name(DomainKind k) {
    switch (k) {
    case DomainKind::Interval: return "interval";
    case DomainKind::Square: return "square";
    case DomainKind::LShape: return "lshape";
    default: return "halfdisc";
    }
}

RunConfig parse_config_text(const std::string& text, const std::string& origin) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ConfigError("config: " + origin + " is not valid JSON: " + e.what());
    }
    RunConfig c;

    if (j.contains("domain")) {
        const json& d = j.at("domain");
        c.domain_kind = parse_domain_kind(get_or<std::string>(d, "kind", "square"));
        c.grid_n = get_or<int>(d, "n", 33);
        if (c.grid_n < 3) throw ConfigError("config: domain.n must be at least 3");
    }
    if (j.contains("exponent")) {
        const json& d = j.at("exponent");
        c.exponent_kind = get_or<std::string>(d, "kind", "constant");
        c.p_base = get_or<double>(d, "p", 2.0);
        c.exp_amp = get_or<double>(d, "amp", 0.0);
        c.exp_freq = get_or<double>(d, "freq", 1.0);
        c.spike_center = get_vec(d, "center", c.spike_center);
        c.exp_R = get_or<double>(d, "R", 1.0);
        c.exp_delta = get_or<double>(d, "delta", 1.0 / 8.0);
    }
    if (j.contains("flux")) {
        const json& d = j.at("flux");
        c.gamma_kind = get_or<std::string>(d, "gamma", "constant");
        c.gamma_value = get_or<double>(d, "value", 1.0);
        c.gamma_jump = get_or<double>(d, "jump", 0.0);
        c.gamma_interface = get_or<double>(d, "interface", 0.5);
        c.eps_reg = get_or<double>(d, "eps_reg", 1e-8);
        if (c.eps_reg < 0.0) throw ConfigError("config: flux.eps_reg must be nonnegative");
    }
    if (j.contains("measure")) {
        const json& d = j.at("measure");
        if (d.contains("atoms")) {
            for (const json& a : d.at("atoms")) {
                Atom atom;
                atom.x = get_vec(a, "x", {0.0, 0.0});
                atom.weight = get_or<double>(a, "weight", 1.0);
                c.atoms.push_back(atom);
            }
        }
        c.hat_atoms = get_or<bool>(d, "hat_atoms", false);
        if (d.contains("density")) {
            c.density = get_scalar_spec(d, "density", c.density);
            c.density_active = true;
        }
    }
    if (j.contains("obstacles")) {
        const json& d = j.at("obstacles");
        c.lower_active = d.contains("lower");
        c.upper_active = d.contains("upper");
        c.psi1 = get_scalar_spec(d, "lower", ScalarSpec{"constant", {-1e9}});
        c.psi2 = get_scalar_spec(d, "upper", ScalarSpec{"constant", {1e9}});
        c.g = get_scalar_spec(d, "boundary", ScalarSpec{"constant", {0.0}});
    }
    if (j.contains("harness")) {
        const json& d = j.at("harness");
        c.harness.eps = get_or<double>(d, "eps", c.harness.eps);
        c.harness.N = get_or<double>(d, "level_ratio", c.harness.N);
        c.harness.delta_small = get_or<double>(d, "delta", c.harness.delta_small);
        c.harness.tau0 = get_or<double>(d, "tau0", c.harness.tau0);
        c.harness.R0 = get_or<double>(d, "R0", 0.0);
        c.harness.k_max = get_or<int>(d, "k_max", c.harness.k_max);
        c.harness.mollify_indices =
            get_or<std::vector<int>>(d, "mollify_indices", c.harness.mollify_indices);
        c.q_list = get_or<std::vector<double>>(d, "q_list", c.q_list);
        c.alpha_list = get_or<std::vector<double>>(d, "alpha_list", c.alpha_list);
        c.variants = get_or<std::vector<std::string>>(d, "variants", c.variants);
        if (d.contains("r_list")) {
            for (const json& rv : d.at("r_list")) {
                ScalarSpec s;
                if (rv.is_number()) {
                    s.kind = "constant";
                    s.params = {rv.get<double>()};
                } else {
                    s.kind = get_or<std::string>(rv, "kind", "constant");
                    s.params = get_or<std::vector<double>>(rv, "params", {1.0});
                }
                c.r_specs.push_back(s);
            }
        }
        c.window_center = get_vec(d, "window_center", c.window_center);
        c.window_radii = get_or<std::vector<double>>(d, "window_radii", c.window_radii);
        c.hi_sigma = get_or<double>(d, "hi_sigma", c.hi_sigma);
        c.hi_beta = get_or<double>(d, "hi_beta", c.hi_beta);
        if (!c.q_list.empty()) c.harness.q = c.q_list.front();
        if (!c.alpha_list.empty()) c.harness.alpha = c.alpha_list.front();
    }
    if (j.contains("sweep")) {
        const json& d = j.at("sweep");
        c.sweep_n = get_or<std::vector<int>>(d, "n_list", c.sweep_n);
    }
    if (j.contains("solver")) {
        const json& d = j.at("solver");
        c.solver.tol = get_or<double>(d, "tol", c.solver.tol);
        c.solver.max_sweeps = get_or<int>(d, "max_sweeps", c.solver.max_sweeps);
        c.solver.relaxation = get_or<double>(d, "relaxation", c.solver.relaxation);
        if (c.solver.tol <= 0.0) throw ConfigError("config: solver.tol must be positive");
        if (c.solver.max_sweeps < 1) throw ConfigError("config: solver.max_sweeps must be positive");
    }
    if (j.contains("output")) c.out_dir = get_or<std::string>(j.at("output"), "dir", c.out_dir);
    c.seed = get_or<uint64_t>(j, "seed", c.seed);
    c.threads = get_or<int>(j, "threads", c.threads);
    if (c.threads < 1) throw ConfigError("config: threads must be at least 1");

    for (double q : c.q_list)
        if (q <= 0.0) throw ConfigError("config: harness.q_list entries must be positive");
    for (double r : c.window_radii)
        if (r <= 0.0) throw ConfigError("config: harness.window_radii entries must be positive");
    return c;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str(), path);
}

Instance::Instance(const RunConfig& c)
    : cfg(c), grid(c.domain_kind, c.grid_n), exponent(), flux(), measure() {
    if (c.exponent_kind == "constant") {
        exponent = make_constant_exponent(c.p_base);
    } else if (c.exponent_kind == "sine") {
        exponent = make_sine_exponent(c.p_base, c.exp_amp, c.exp_freq);
    } else if (c.exponent_kind == "logspike") {
        exponent = make_logspike_exponent(c.p_base, c.exp_amp, c.spike_center);
    } else {
        throw ConfigError("config: unknown exponent kind '" + c.exponent_kind +
                          "' (constant, sine, logspike)");
    }
    exponent.R = c.exp_R;
    exponent.delta = c.exp_delta;
    try {
        exponent.validate(grid);
    } catch (const InvariantError& e) {
        throw ConfigError(std::string("config: exponent invalid: ") + e.what());
    }

    if (c.gamma_kind == "constant") {
        flux = make_constant_flux(exponent, c.gamma_value, c.eps_reg);
    } else if (c.gamma_kind == "step") {
        flux = make_step_flux(exponent, c.gamma_jump, c.gamma_interface, c.eps_reg);
    } else {
        throw ConfigError("config: unknown flux gamma kind '" + c.gamma_kind +
                          "' (constant, step)");
    }

    measure.atoms = c.atoms;
    if (c.density_active) {
        ScalarEntry e = make_scalar(c.density.kind, c.density.params, grid.dim());
        measure.density = GridFunction::sample(grid, e.value);
    }
    try {
        measure.validate(grid);
    } catch (const InvariantError& e) {
        throw ConfigError(std::string("config: measure invalid: ") + e.what());
    }

    psi1_entry = make_scalar(c.psi1.kind, c.psi1.params, grid.dim());
    psi2_entry = make_scalar(c.psi2.kind, c.psi2.params, grid.dim());
    g_entry = make_scalar(c.g.kind, c.g.params, grid.dim());
    psi1 = GridFunction::sample(grid, psi1_entry.value);
    psi2 = GridFunction::sample(grid, psi2_entry.value);
    g = GridFunction::sample(grid, g_entry.value);

    for (int nd = 0; nd < grid.node_count(); ++nd) {
        if (grid.is_exterior(nd)) continue;
        if (c.lower_active && c.upper_active && psi1[nd] > psi2[nd] + 1e-14)
            throw ConfigError("config: obstacles cross at a grid node");
        if (c.lower_active && g[nd] < psi1[nd] - 1e-12)
            throw ConfigError("config: boundary datum dips below the lower obstacle");
        if (c.upper_active && g[nd] > psi2[nd] + 1e-12)
            throw ConfigError("config: boundary datum exceeds the upper obstacle");
    }
}

std::unique_ptr<Instance> build_instance(const RunConfig& cfg) {
    return std::make_unique<Instance>(cfg);
}

ProblemSpec problem_of(const Instance& inst) {
    ProblemSpec ps;
    ps.flux = &inst.flux;
    ps.boundary = inst.g;
    if (inst.cfg.lower_active) ps.lower = inst.psi1;
    if (inst.cfg.upper_active) ps.upper = inst.psi2;
    if (!inst.measure.empty()) ps.measure = &inst.measure;
    ps.hat_atoms = inst.cfg.hat_atoms;
    return ps;
}

} // namespace pxvi

#pragma once

#include "pxvi/harness.hpp"
#include "pxvi/registry.hpp"

#include <memory>
#include <string>

namespace pxvi {

struct ScalarSpec {
    std::string kind{"constant"};
    std::vector<double> params{0.0};
};

/// Parsed experiment description. load_config fills it from JSON and
/// validates ranges; build_instance turns it into live objects and re-runs
/// the module invariants.
struct RunConfig {
    // domain
    DomainKind domain_kind{DomainKind::Square};
    int grid_n{33};

    // exponent: constant | sine | logspike
    std::string exponent_kind{"constant"};
    double p_base{2.0};
    double exp_amp{0.0};
    double exp_freq{1.0};
    Vec2 spike_center{0.5, 0.5};
    double exp_R{1.0};
    double exp_delta{1.0 / 8.0};

    // flux: constant | step
    std::string gamma_kind{"constant"};
    double gamma_value{1.0};
    double gamma_jump{0.0};
    double gamma_interface{0.5};
    double eps_reg{1e-8};

    // measure
    std::vector<Atom> atoms;
    bool hat_atoms{false};
    ScalarSpec density;
    bool density_active{false};

    // obstacles and boundary datum
    ScalarSpec psi1, psi2, g;
    bool lower_active{false};
    bool upper_active{false};

    // harness
    HarnessConfig harness;
    std::vector<double> q_list{1.0};
    std::vector<double> alpha_list{0.25};
    std::vector<std::string> variants{"general"};
    std::vector<ScalarSpec> r_specs;
    Vec2 window_center{0.5, 0.0};
    std::vector<double> window_radii{0.1};
    double hi_sigma{0.1};
    double hi_beta{0.5};

    // sweep
    std::vector<int> sweep_n{33, 65};

    // solver
    SolverOptions solver;

    // run control
    std::string out_dir{"out"};
    uint64_t seed{12345};
    int threads{1};
};

/// Parse a JSON config file. Unknown scalar kinds, malformed values, or
/// out-of-range parameters throw ConfigError with the offending key.
RunConfig load_config(const std::string& path);
RunConfig parse_config_text(const std::string& text, const std::string& origin);

/// Live objects for one run. Holds the exponent field the flux points into,
/// so instances are pinned to the heap and never copied.
struct Instance {
    RunConfig cfg;
    Grid grid;
    ExponentField exponent;
    Flux flux;
    MeasureData measure;
    GridFunction psi1, psi2, g;
    ScalarEntry psi1_entry, psi2_entry, g_entry;

    explicit Instance(const RunConfig& c);
    Instance(const Instance&) = delete;
    Instance& operator=(const Instance&) = delete;
};

/// Construct and validate all referenced objects.
std::unique_ptr<Instance> build_instance(const RunConfig& cfg);

/// The obstacle/measure problem the config describes, pointing into inst.
ProblemSpec problem_of(const Instance& inst);

DomainKind parse_domain_kind(const std::string& name);
std::string domain_kind_name(DomainKind k);

} // namespace pxvi

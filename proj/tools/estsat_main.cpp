// estsat: weighting and ordering calculations on CSP solution networks,
// plus the core first-moment machinery for random 3-SAT.
//
// Every subcommand writes a TSV report to stdout (or --out) and a short
// human summary to stderr. Exit codes: 0 success, 1 a verification
// failed, 2 usage or input error.

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>

#include "estsat/errors.hpp"
#include "estsat/moment.hpp"
#include "estsat/ordering.hpp"
#include "estsat/renaming.hpp"
#include "estsat/starsat.hpp"
#include "estsat/sweep.hpp"
#include "estsat/weighting.hpp"

namespace {

using namespace estsat;

constexpr int kExitOk = 0;
constexpr int kExitVerificationFailed = 1;
constexpr int kExitUsage = 2;

std::string fmt(double x) {
    char buffer[64];
    std::snprintf(buffer, sizeof buffer, "%.17g", x);
    return buffer;
}

struct Report {
    std::ostream* out;
    std::ofstream file;

    explicit Report(const std::string& path) {
        if (path.empty()) {
            out = &std::cout;
        } else {
            file.open(path);
            if (!file) throw Error("cannot open output file " + path);
            out = &file;
        }
    }
    template <class... Parts>
    void row(const Parts&... parts) {
        bool first = true;
        ((*out << (first ? "" : "\t") << parts, first = false), ...);
        *out << "\n";
    }
};

struct CommonOptions {
    double eps = kDefaultEps;
    std::uint64_t cap = kDefaultCap;
    std::uint64_t seed = 12345;
    std::string out_path;
};

void add_common(CLI::App* cmd, CommonOptions& common) {
    cmd->add_option("--eps", common.eps, "tolerance for equality checks");
    cmd->add_option("--cap", common.cap, "exhaustion cap on swept valuations");
    cmd->add_option("--seed", common.seed, "RNG seed echoed in the report");
    cmd->add_option("--out", common.out_path, "write the TSV report here instead of stdout");
}

void header(Report& report, const std::string& name, const CommonOptions& common) {
    report.row("# estsat " + name, "seed=" + std::to_string(common.seed),
               "eps=" + fmt(common.eps), "cap=" + std::to_string(common.cap));
}

WeightingSystem load_system(const std::string& tables_path, bool homogeneous,
                            const CspInstance& inst) {
    ParsedTables tables =
        parse_weight_tables_file(tables_path, inst.variable_count, inst.domain_size());
    if (homogeneous) return WeightingSystem::homogeneous(tables.seed);
    return WeightingSystem(tables.seed, tables.dispatch);
}

std::string valuation_string(const SolutionNetwork& net, const Valuation& v) {
    std::string out;
    for (Value a : v) out += net.domain[static_cast<std::size_t>(a)];
    return out;
}

// ---------------------------------------------------------------- solve

CspInstance load_instance(const std::string& csp_path, const std::string& perm_path) {
    CspInstance inst = parse_csp_file(csp_path);
    if (!perm_path.empty()) {
        const Renaming renaming =
            parse_renaming_file(perm_path, inst.variable_count, inst.domain_size());
        inst = apply_renaming(renaming, inst);
    }
    return inst;
}

int run_solve(const std::string& csp_path, const std::string& perm_path,
              const CommonOptions& common) {
    const CspInstance inst = load_instance(csp_path, perm_path);
    const auto solutions = enumerate_solutions(inst, common.cap);
    Report report(common.out_path);
    header(report, "solve", common);
    report.row("index", "solution");
    for (std::size_t i = 0; i < solutions.size(); ++i)
        report.row(i, format_valuation(inst, solutions[i]));
    std::cerr << "solve: " << solutions.size() << " solution(s)\n";
    return kExitOk;
}

// -------------------------------------------------------------- network

int run_network(const std::string& csp_path, const std::string& perm_path,
                const CommonOptions& common) {
    const CspInstance inst = load_instance(csp_path, perm_path);
    const SolutionNetwork net =
        build_network(enumerate_solutions(inst, common.cap), inst.domain_size(), inst.domain);
    Report report(common.out_path);
    header(report, "network", common);
    for (std::size_t i = 0; i < net.size(); ++i)
        report.row("solution", i, valuation_string(net, net.solutions[i]));
    for (int x = 0; x < net.variable_count; ++x) {
        const auto& cliques = net.cliques[static_cast<std::size_t>(x)];
        for (std::size_t c = 0; c < cliques.size(); ++c) {
            std::string members, values;
            for (int s : cliques[c]) members += std::to_string(s) + " ";
            for (Value a : net.allowed[static_cast<std::size_t>(x)][c])
                values += net.domain[static_cast<std::size_t>(a)] + " ";
            report.row("clique", x, c, members, values);
        }
    }
    for (std::size_t c = 0; c < net.components.size(); ++c) {
        std::string members;
        for (int s : net.components[c]) members += std::to_string(s) + " ";
        report.row("component", c, net.components[c].size(), members);
    }
    std::cerr << "network: " << net.size() << " solution(s), " << net.components.size()
              << " component(s)\n";
    return kExitOk;
}

// ---------------------------------------------------------------- weigh

int run_weigh(const std::string& csp_path, const std::string& tables_path, bool homogeneous,
              const CommonOptions& common) {
    const CspInstance inst = parse_csp_file(csp_path);
    const SolutionNetwork net =
        build_network(enumerate_solutions(inst, common.cap), inst.domain_size(), inst.domain);
    const WeightingSystem sys = load_system(tables_path, homogeneous, inst);

    Report report(common.out_path);
    header(report, "weigh", common);
    report.row("solution", "valuation", "weight");
    for (int s = 0; s < static_cast<int>(net.size()); ++s)
        report.row(s, valuation_string(net, net.solutions[static_cast<std::size_t>(s)]),
                   fmt(solution_weight(sys, net, s)));

    const auto conservation = verify_weight_conservation(sys, net, common.eps);
    bool all_conserved = true;
    report.row("component", "size", "weight", "slack", "conserved");
    for (const auto& comp : conservation) {
        report.row(comp.component,
                   net.components[static_cast<std::size_t>(comp.component)].size(),
                   fmt(comp.weight), fmt(comp.weight - 1.0),
                   comp.conserved ? "yes" : "no");
        all_conserved = all_conserved && comp.conserved;
    }
    const double total = set_weight(sys, net);
    report.row("total", fmt(total));

    std::cerr << "weigh: total=" << fmt(total) << " conservation "
              << (all_conserved ? "PASS" : "FAIL") << "\n";
    return all_conserved ? kExitOk : kExitVerificationFailed;
}

// ---------------------------------------------------------------- orient

int run_orient(const std::string& csp_path, const std::string& orders_path,
               const CommonOptions& common) {
    const CspInstance inst = parse_csp_file(csp_path);
    const SolutionNetwork net =
        build_network(enumerate_solutions(inst, common.cap), inst.domain_size(), inst.domain);
    const Orientation orientation =
        parse_orders_file(orders_path, inst.variable_count, inst.domain_size());

    const bool acyclic = is_circuit_free(induce_digraph(net, orientation));
    const auto minimal = minimal_elements(net, orientation);

    Report report(common.out_path);
    header(report, "orient", common);
    report.row("circuit_free", acyclic ? "yes" : "no");
    report.row("minimal_count", minimal.size());
    for (int s : minimal)
        report.row("minimal", s,
                   valuation_string(net, net.solutions[static_cast<std::size_t>(s)]));
    std::cerr << "orient: " << minimal.size() << " minimal element(s), circuit-free="
              << (acyclic ? "yes" : "no") << "\n";
    return kExitOk;
}

// ----------------------------------------------------------- greedy-order

int run_greedy_order(const std::string& csp_path, const std::string& tables_path,
                     bool homogeneous, const CommonOptions& common) {
    const CspInstance inst = parse_csp_file(csp_path);
    const SolutionNetwork net =
        build_network(enumerate_solutions(inst, common.cap), inst.domain_size(), inst.domain);
    const WeightingSystem sys = load_system(tables_path, homogeneous, inst);

    std::vector<GreedyStep> steps;
    const Orientation orientation = greedy_order_construction(sys, net, &steps, common.eps);
    const auto minimal = minimal_elements(net, orientation);
    const double total = set_weight(sys, net);
    const double slack = total - static_cast<double>(minimal.size());
    const bool bound_holds = static_cast<double>(minimal.size()) <= total + common.eps;
    bool steps_monotone = true;

    Report report(common.out_path);
    header(report, "greedy-order", common);
    for (int x = 0; x < inst.variable_count; ++x) {
        std::string values;
        for (Value a : orientation.order[static_cast<std::size_t>(x)])
            values += inst.domain[static_cast<std::size_t>(a)] + " ";
        report.row("order", x, values);
    }
    report.row("step", "variable", "omega_before", "omega_after");
    for (const auto& step : steps) {
        report.row("step", step.variable, fmt(step.omega_before), fmt(step.omega_after));
        steps_monotone = steps_monotone && step.omega_after <= step.omega_before + common.eps;
    }
    report.row("minimal_count", minimal.size());
    report.row("set_weight", fmt(total));
    report.row("bound_slack", fmt(slack));
    report.row("bound_holds", bound_holds ? "yes" : "no");
    report.row("steps_monotone", steps_monotone ? "yes" : "no");

    std::cerr << "greedy-order: |M|=" << minimal.size() << " W=" << fmt(total)
              << " slack=" << fmt(slack) << " "
              << (bound_holds && steps_monotone ? "PASS" : "FAIL") << "\n";
    return bound_holds && steps_monotone ? kExitOk : kExitVerificationFailed;
}

// ------------------------------------------------------------ family-equal

int run_family_equal(const std::string& csp_path, const std::string& tables_path,
                     bool homogeneous, const std::string& orders_path,
                     const CommonOptions& common) {
    const CspInstance inst = parse_csp_file(csp_path);
    const WeightingSystem sys = load_system(tables_path, homogeneous, inst);
    const Orientation orientation =
        parse_orders_file(orders_path, inst.variable_count, inst.domain_size());

    const auto family = renaming_closure({inst}, common.cap);
    const SetEqualityReport eq =
        verify_set_equality(family, sys, orientation, common.eps, common.cap);

    Report report(common.out_path);
    header(report, "family-equal", common);
    report.row("family_size", family.size());
    report.row("gamma_total", fmt(eq.gamma_total));
    report.row("minimal_total", fmt(eq.minimal_total));
    report.row("difference", fmt(eq.difference));
    report.row("couples", eq.couple_count);
    report.row("classes", eq.class_count);
    report.row("partition_ok", eq.partition_ok ? "yes" : "no");
    report.row("class_weights_ok", eq.class_weights_ok ? "yes" : "no");
    report.row("worst_class_deviation", fmt(eq.worst_class_deviation));

    const bool pass = eq.equal(std::max(common.eps, 1e-6));
    std::cerr << "family-equal: |family|=" << family.size() << " diff=" << fmt(eq.difference)
              << " " << (pass ? "PASS" : "FAIL") << "\n";
    return pass ? kExitOk : kExitVerificationFailed;
}

// ------------------------------------------------------------- star-weigh

int run_star_weigh(const std::string& cnf_path, std::optional<double> rho,
                   const std::string& table_path, const std::string& mode_name,
                   const CommonOptions& common) {
    const CnfFormula f = parse_dimacs_file(cnf_path);
    const StarWeights::Mode mode = mode_name == "maneva" ? StarWeights::Mode::Maneva
                                                         : StarWeights::Mode::Improved;
    StarWeights weights = [&] {
        if (!table_path.empty()) return parse_star_weights_file(table_path, f.variable_count, mode);
        if (rho.has_value()) return StarWeights::from_rho(f.variable_count, *rho, mode);
        throw Error("star-weigh needs --rho or --table");
    }();
    weights.validate(common.eps);

    const double total = gamma(f, weights, common.cap);
    const bool satisfiable = !boolean_solutions(f, common.cap).empty();
    const double slack = total - 1.0;
    const bool pass = !satisfiable || total >= 1.0 - common.eps;

    Report report(common.out_path);
    header(report, "star-weigh", common);
    report.row("mode", mode_name);
    report.row("gamma", fmt(total));
    report.row("boolean_satisfiable", satisfiable ? "yes" : "no");
    report.row("gamma_slack", fmt(slack));
    report.row("bound_holds", pass ? "yes" : "no");

    std::cerr << "star-weigh: gamma=" << fmt(total) << " satisfiable="
              << (satisfiable ? "yes" : "no") << " slack=" << fmt(slack) << " "
              << (pass ? "PASS" : "FAIL") << "\n";
    return pass ? kExitOk : kExitVerificationFailed;
}

// ------------------------------------------------------------------ core

int run_core(const std::string& cnf_path, const std::string& assignment, bool all,
             const CommonOptions& common) {
    const CnfFormula f = parse_dimacs_file(cnf_path);
    std::vector<Valuation> starts;
    if (all) {
        starts = boolean_solutions(f, common.cap);
    } else {
        if (static_cast<int>(assignment.size()) != f.variable_count)
            throw Error("--assign must give one bit per variable");
        Valuation v;
        for (char bit : assignment) {
            if (bit != '0' && bit != '1') throw Error("--assign must be a 0/1 string");
            v.push_back(bit - '0');
        }
        starts.push_back(std::move(v));
    }

    Report report(common.out_path);
    header(report, "core", common);
    report.row("solution", "core", "size", "nontrivial", "cover");
    auto star_string = [&](const Valuation& v) {
        std::string s;
        for (Value a : v) s += a == kStar ? '*' : static_cast<char>('0' + a);
        return s;
    };
    for (const Valuation& start : starts) {
        const Valuation core = core_of(f, start);
        report.row(star_string(start), star_string(core), non_starred_count(core),
                   is_core_nontrivial(core) ? "yes" : "no", is_cover(f, core) ? "yes" : "no");
    }
    std::cerr << "core: " << starts.size() << " starting solution(s)\n";
    return kExitOk;
}

// ----------------------------------------------------------- moment-eval

int run_moment_eval(const MomentParams& params, const CommonOptions& common) {
    params.validate();
    const ClauseCensus census = clause_census(params);
    Report report(common.out_path);
    header(report, "moment-eval", common);
    report.row("n", params.n);
    report.row("s", params.s);
    report.row("t", params.t);
    report.row("u", params.u);
    report.row("v", params.v);
    report.row("p", fmt(params.p));
    report.row("rho", fmt(params.rho));
    report.row("census_t1_sc_triples", fmt(census.type1_forbidden_sc_triples));
    report.row("census_t1_sc_pair_outside", fmt(census.type1_forbidden_sc_pair_outside));
    report.row("census_t2_alo_per_sc", fmt(census.type2_alo_per_sc));
    report.row("census_t3_positive", fmt(census.type3_forbidden_positive));
    report.row("census_t3_star_pair", fmt(census.type3_forbidden_star_pair));
    report.row("census_t3_starrable_neg", fmt(census.type3_forbidden_starrable_neg));
    report.row("census_t3_invertible", fmt(census.type3_forbidden_invertible));
    report.row("census_t3_alo_per_ns", fmt(census.type3_alo_per_ns));
    report.row("census_t3_alo_per_sni", fmt(census.type3_alo_per_sni));
    report.row("q", fmt(q_factor(params)));
    report.row("log_q", fmt(log_q_factor(params)));
    const double log_moment = log_ez_t(params);
    report.row("log_ez_t", fmt(log_moment));
    if (params.n <= 30) report.row("ez_t", fmt(std::exp(log_moment)));
    std::cerr << "moment-eval: log_ez_t=" << fmt(log_moment) << "\n";
    return kExitOk;
}

// ------------------------------------------------------------- moment-mc

int run_moment_mc(const MomentParams& params, std::uint64_t trials,
                  const CommonOptions& common) {
    const McResult mc =
        moment_mc(params.n, params.s, params.t, params.rho, params.p, trials, common.seed);
    const double closed = std::exp(log_ez_t(params));
    const double distance =
        mc.std_error > 0.0 ? std::fabs(mc.estimate - closed) / mc.std_error
                           : (mc.estimate == closed ? 0.0 : HUGE_VAL);
    const bool pass = distance <= 3.0;

    Report report(common.out_path);
    header(report, "moment-mc", common);
    report.row("trials", trials);
    report.row("estimate", fmt(mc.estimate));
    report.row("std_error", fmt(mc.std_error));
    report.row("closed_form", fmt(closed));
    report.row("sigma_distance", fmt(distance));
    report.row("within_3_sigma", pass ? "yes" : "no");
    std::cerr << "moment-mc: estimate=" << fmt(mc.estimate) << " closed=" << fmt(closed)
              << " distance=" << fmt(distance) << " sigma " << (pass ? "PASS" : "FAIL")
              << "\n";
    return pass ? kExitOk : kExitVerificationFailed;
}

// ----------------------------------------------------------------- sweep

struct AxisSpec {
    std::string range;  // "lo:hi" when swept
    double fixed = 0.0; // used when not swept
    bool has_fixed = false;

    bool swept() const { return !range.empty(); }
    std::pair<double, double> bounds() const {
        const auto colon = range.find(':');
        if (colon == std::string::npos)
            throw Error("range must look like lo:hi, got '" + range + "'");
        return {std::stod(range.substr(0, colon)), std::stod(range.substr(colon + 1))};
    }
};

struct SweepConfig {
    AxisSpec alpha, a, b, r;
    std::string objective = "h"; // h | fh | f
    std::string plugin_path;
    std::optional<double> rho;  // fixed rho; defaults to rho_of_a(a)
    double d_param = 0.0;
    bool d_param_set = false;
    double step = 0.001;
    double refine = 1e-5;
    bool no_cells = false;
};

void add_axes(CLI::App* cmd, SweepConfig& config) {
    cmd->add_option("--alpha-range", config.alpha.range, "swept alpha range lo:hi");
    cmd->add_option("--a-range", config.a.range, "swept a range lo:hi");
    cmd->add_option("--b-range", config.b.range, "swept b range lo:hi");
    cmd->add_option("--r-range", config.r.range, "swept r range lo:hi");
    cmd->add_option("--alpha", config.alpha.fixed, "fixed alpha")
        ->each([&](const std::string&) { config.alpha.has_fixed = true; });
    cmd->add_option("--a", config.a.fixed, "fixed a")
        ->each([&](const std::string&) { config.a.has_fixed = true; });
    cmd->add_option("--b", config.b.fixed, "fixed b")
        ->each([&](const std::string&) { config.b.has_fixed = true; });
    cmd->add_option("--r", config.r.fixed, "fixed r")
        ->each([&](const std::string&) { config.r.has_fixed = true; });
    cmd->add_option("--objective", config.objective, "objective: h, f or f+h")
        ->check(CLI::IsMember({"h", "f", "fh"}));
    cmd->add_option("--f-plugin", config.plugin_path,
                    "shared object exporting moment_f(alpha, a, r)");
    cmd->add_option("--rho", config.rho, "fixed star seed (default rho(a) = 0.3758a + 0.7067)");
    cmd->add_option("--d-param", config.d_param,
                    "the model parameter d of the cover exponent (required for h)")
        ->each([&](const std::string&) { config.d_param_set = true; });
    cmd->add_option("--step", config.step, "grid step");
}

struct BuiltObjective {
    Objective fn;
    Box box;
    std::vector<std::string> axis_names;
};

BuiltObjective build_objective(const SweepConfig& config) {
    const bool wants_f = config.objective == "f" || config.objective == "fh";
    const bool wants_h = config.objective == "h" || config.objective == "fh";
    if (wants_h && !config.d_param_set)
        throw Error("the h exponent needs an explicit --d-param (no default is assumed)");

    std::optional<FPlugin> plugin;
    if (wants_f) {
        if (config.plugin_path.empty()) {
            // surface the documented stub diagnostic
            missing_f_stub()(std::vector<double>{0.0, 0.0, 0.0});
        }
        plugin = FPlugin::load(config.plugin_path);
    }

    // canonical axis order: alpha, a, b, r
    struct AxisView {
        const AxisSpec* spec;
        std::string name;
        bool used;
    };
    const std::vector<AxisView> views = {
        {&config.alpha, "alpha", true},
        {&config.a, "a", true},
        {&config.b, "b", wants_h},
        {&config.r, "r", wants_f},
    };

    BuiltObjective built;
    std::vector<int> slot(4, -1); // axis -> box index, -1 = fixed
    std::vector<double> fixed(4, 0.0);
    for (std::size_t i = 0; i < views.size(); ++i) {
        const AxisView& view = views[i];
        if (!view.used) continue;
        if (view.spec->swept()) {
            slot[i] = static_cast<int>(built.box.axes.size());
            built.box.axes.push_back(view.spec->bounds());
            built.axis_names.push_back(view.name);
        } else if (view.spec->has_fixed) {
            fixed[i] = view.spec->fixed;
        } else {
            throw Error("axis '" + view.name + "' needs --" + view.name + "-range or --" +
                        view.name);
        }
    }
    if (built.box.axes.empty()) throw Error("sweep needs at least one swept axis");

    const double d_param = config.d_param;
    const std::optional<double> rho = config.rho;
    const std::string objective = config.objective;
    built.fn = [slot, fixed, plugin, rho, d_param, objective,
                wants_f, wants_h](std::span<const double> point) -> double {
        auto value = [&](int axis) {
            return slot[static_cast<std::size_t>(axis)] >= 0
                       ? point[static_cast<std::size_t>(slot[static_cast<std::size_t>(axis)])]
                       : fixed[static_cast<std::size_t>(axis)];
        };
        const double alpha = value(0), a = value(1);
        double total = 0.0;
        if (wants_f) total += (*plugin)(alpha, a, value(3));
        if (wants_h) {
            const double rho_here = rho.has_value() ? *rho : rho_of_a(a);
            if (rho_here < 0.0 || rho_here > 1.0)
                return std::numeric_limits<double>::quiet_NaN(); // rejected seed
            total += exponent_h({alpha, a, value(2), rho_here, d_param});
        }
        return total;
    };
    return built;
}

int run_sweep(const SweepConfig& config, const CommonOptions& common) {
    const BuiltObjective built = build_objective(config);
    Report report(common.out_path);
    header(report, "sweep", common);
    {
        std::string names;
        for (const auto& name : built.axis_names) names += name + " ";
        report.row("axes", names);
        report.row("objective", config.objective);
    }

    if (!config.no_cells) {
        // stream one row per coarse grid cell
        const auto cells = contour_region(
            built.fn, -std::numeric_limits<double>::infinity(), built.box, config.step);
        for (const auto& cell : cells) {
            std::string coords;
            for (double c : cell.coords) coords += fmt(c) + "\t";
            report.row("cell", coords + fmt(cell.value));
        }
    }

    const SweepResult result =
        sweep_maximize(built.fn, built.box, config.step, config.refine);
    std::string argmax;
    for (double c : result.argmax) argmax += fmt(c) + "\t";
    report.row("argmax", argmax + fmt(result.max_value));
    report.row("evaluated", result.evaluated);
    report.row("nonfinite_cells", result.nonfinite);
    report.row("refined", result.refined ? "yes" : "no");

    std::cerr << "sweep: max=" << fmt(result.max_value) << " at " << argmax << "\n";
    return kExitOk;
}

int run_contour(const SweepConfig& config, double threshold, const CommonOptions& common) {
    const BuiltObjective built = build_objective(config);
    const auto cells = contour_region(built.fn, threshold, built.box, config.step);

    Report report(common.out_path);
    header(report, "contour", common);
    {
        std::string names;
        for (const auto& name : built.axis_names) names += name + " ";
        report.row("axes", names);
        report.row("threshold", fmt(threshold));
    }
    std::vector<double> lo(built.box.axes.size(), HUGE_VAL),
        hi(built.box.axes.size(), -HUGE_VAL);
    for (const auto& cell : cells) {
        std::string coords;
        for (std::size_t i = 0; i < cell.coords.size(); ++i) {
            coords += fmt(cell.coords[i]) + "\t";
            lo[i] = std::min(lo[i], cell.coords[i]);
            hi[i] = std::max(hi[i], cell.coords[i]);
        }
        report.row("cell", coords + fmt(cell.value));
    }
    report.row("cells", cells.size());
    if (!cells.empty()) {
        for (std::size_t i = 0; i < lo.size(); ++i)
            report.row("bounds", built.axis_names[i], fmt(lo[i]), fmt(hi[i]));
    }
    std::cerr << "contour: " << cells.size() << " cell(s) above " << fmt(threshold) << "\n";
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"weighting and ordering toolkit for estimating CSP satisfiability"};
    app.require_subcommand(1);

    CommonOptions common;

    // solve
    std::string csp_path, perm_path;
    auto* solve = app.add_subcommand("solve", "enumerate the solutions of a CSP instance");
    solve->add_option("--csp", csp_path, "CSP text file")->required();
    solve->add_option("--perm", perm_path, "apply this renaming before solving");
    add_common(solve, common);

    // network
    auto* network = app.add_subcommand("network", "emit cliques and components");
    network->add_option("--csp", csp_path, "CSP text file")->required();
    network->add_option("--perm", perm_path, "apply this renaming before building");
    add_common(network, common);

    // weigh
    std::string tables_path;
    bool homogeneous = false;
    auto* weigh = app.add_subcommand("weigh", "solution weights and weight conservation");
    weigh->add_option("--csp", csp_path, "CSP text file")->required();
    weigh->add_option("--tables", tables_path, "seed/dispatcher table file")->required();
    weigh->add_flag("--homogeneous", homogeneous, "copy the seed into the dispatcher");
    add_common(weigh, common);

    // orient
    std::string orders_path;
    auto* orient = app.add_subcommand("orient", "minimal elements under per-variable orders");
    orient->add_option("--csp", csp_path, "CSP text file")->required();
    orient->add_option("--orders", orders_path, "orders file")->required();
    add_common(orient, common);

    // greedy-order
    auto* greedy = app.add_subcommand("greedy-order",
                                      "greedy orientation construction and its bound");
    greedy->add_option("--csp", csp_path, "CSP text file")->required();
    greedy->add_option("--tables", tables_path, "seed/dispatcher table file")->required();
    greedy->add_flag("--homogeneous", homogeneous, "copy the seed into the dispatcher");
    add_common(greedy, common);

    // family-equal
    auto* family = app.add_subcommand("family-equal",
                                      "weighting/ordering equality on a renaming closure");
    family->add_option("--csp", csp_path, "CSP text file")->required();
    family->add_option("--tables", tables_path, "seed/dispatcher table file")->required();
    family->add_flag("--homogeneous", homogeneous, "copy the seed into the dispatcher");
    family->add_option("--orders", orders_path, "orders file")->required();
    add_common(family, common);

    // star-weigh
    std::string cnf_path, star_table, mode_name = "improved";
    std::optional<double> rho;
    auto* star = app.add_subcommand("star-weigh", "gamma of the {0,1,*} model");
    star->add_option("--cnf", cnf_path, "DIMACS CNF file")->required();
    star->add_option("--rho", rho, "uniform star seed: s*=rho, s0=s1=(1-rho)/2");
    star->add_option("--table", star_table, "per-variable seed triples file");
    star->add_option("--mode", mode_name, "improved (default) or maneva")
        ->check(CLI::IsMember({"improved", "maneva"}));
    add_common(star, common);

    // core
    std::string assignment;
    bool all_cores = false;
    auto* core = app.add_subcommand("core", "starring process and cover predicate");
    core->add_option("--cnf", cnf_path, "DIMACS CNF file")->required();
    core->add_option("--assign", assignment, "boolean solution as a 0/1 string");
    core->add_flag("--all", all_cores, "star every boolean solution");
    add_common(core, common);

    // moment-eval
    MomentParams params;
    auto* meval = app.add_subcommand("moment-eval", "clause census, Q and the first moment");
    meval->add_option("--n", params.n)->required();
    meval->add_option("--s", params.s)->required();
    meval->add_option("--t", params.t)->required();
    meval->add_option("--u", params.u);
    meval->add_option("--v", params.v);
    meval->add_option("--p", params.p)->required();
    meval->add_option("--rho", params.rho)->required();
    add_common(meval, common);

    // moment-mc
    std::uint64_t trials = 100000;
    auto* mc = app.add_subcommand("moment-mc", "Monte Carlo check of the first moment");
    mc->add_option("--n", params.n)->required();
    mc->add_option("--s", params.s)->required();
    mc->add_option("--t", params.t)->required();
    mc->add_option("--p", params.p)->required();
    mc->add_option("--rho", params.rho)->required();
    mc->add_option("--trials", trials);
    add_common(mc, common);

    // sweep
    SweepConfig sweep_config;
    auto* sweep = app.add_subcommand("sweep", "grid maximization of h or f+h");
    add_axes(sweep, sweep_config);
    sweep->add_option("--refine", sweep_config.refine, "refinement step near the incumbent");
    sweep->add_flag("--no-cells", sweep_config.no_cells, "emit only the summary rows");
    add_common(sweep, common);

    // contour
    double threshold = -0.0001;
    auto* contour = app.add_subcommand("contour", "grid cells above a threshold");
    add_axes(contour, sweep_config);
    contour->add_option("--threshold", threshold, "keep cells with objective above this");
    add_common(contour, common);

    CLI11_PARSE(app, argc, argv);

    try {
        if (solve->parsed()) return run_solve(csp_path, perm_path, common);
        if (network->parsed()) return run_network(csp_path, perm_path, common);
        if (weigh->parsed()) return run_weigh(csp_path, tables_path, homogeneous, common);
        if (orient->parsed()) return run_orient(csp_path, orders_path, common);
        if (greedy->parsed())
            return run_greedy_order(csp_path, tables_path, homogeneous, common);
        if (family->parsed())
            return run_family_equal(csp_path, tables_path, homogeneous, orders_path, common);
        if (star->parsed())
            return run_star_weigh(cnf_path, rho, star_table, mode_name, common);
        if (core->parsed()) return run_core(cnf_path, assignment, all_cores, common);
        if (meval->parsed()) return run_moment_eval(params, common);
        if (mc->parsed()) return run_moment_mc(params, trials, common);
        if (sweep->parsed()) return run_sweep(sweep_config, common);
        if (contour->parsed()) return run_contour(sweep_config, threshold, common);
    } catch (const ParseError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const CapacityError& e) {
        std::cerr << "capacity error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const PreconditionError& e) {
        std::cerr << "precondition error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const PluginError& e) {
        std::cerr << "plugin error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}

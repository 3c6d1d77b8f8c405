#include "estsat/weighting.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "estsat/errors.hpp"
#include "estsat/parallel.hpp"

namespace estsat {

double WeightTable::row_sum(int x) const {
    double total = 0.0;
    for (Value a = 0; a < domain_size; ++a) total += (*this)(x, a);
    return total;
}

bool WeightTable::unitary(double eps) const {
    for (int x = 0; x < variable_count; ++x)
        if (std::fabs(row_sum(x) - 1.0) > eps) return false;
    return true;
}

WeightTable WeightTable::uniform(int n, int d) {
    return WeightTable(n, d, 1.0 / static_cast<double>(d));
}

WeightingSystem::WeightingSystem(WeightTable seed_table, WeightTable dispatch_table)
    : seed(std::move(seed_table)), dispatch(std::move(dispatch_table)) {
    if (seed.variable_count != dispatch.variable_count ||
        seed.domain_size != dispatch.domain_size)
        throw Error("seed and dispatcher tables have mismatched shapes");
    for (double s : seed.entries)
        if (s < 0.0) throw Error("weighting seed entries must be nonnegative");
    for (double d : dispatch.entries)
        if (d <= 0.0) throw Error("dispatcher entries must be strictly positive");
}

WeightingSystem WeightingSystem::homogeneous(WeightTable seed_table) {
    WeightTable dispatch_table = seed_table;
    return WeightingSystem(std::move(seed_table), std::move(dispatch_table));
}

bool WeightingSystem::is_homogeneous(double eps) const {
    for (std::size_t i = 0; i < seed.entries.size(); ++i)
        if (std::fabs(seed.entries[i] - dispatch.entries[i]) > eps) return false;
    return true;
}

double WeightingSystem::unladen(const Valuation& v) const {
    double u = 1.0;
    for (int x = 0; x < seed.variable_count; ++x)
        u *= seed(x, v[static_cast<std::size_t>(x)]);
    return u;
}

double WeightingSystem::generator(int x, Value a, std::span<const Value> delta) const {
    bool member = false;
    double dispatch_sum = 0.0;
    for (Value b : delta) {
        dispatch_sum += dispatch(x, b);
        if (b == a) member = true;
    }
    if (!member) return 0.0;
    double outside_seed = seed.row_sum(x);
    for (Value b : delta) outside_seed -= seed(x, b);
    if (outside_seed < 0.0) outside_seed = 0.0; // guard fp cancellation
    return seed(x, a) + dispatch(x, a) / dispatch_sum * outside_seed;
}

double solution_weight(const WeightingSystem& sys, const SolutionNetwork& net, int sol) {
    if (sol < 0 || static_cast<std::size_t>(sol) >= net.size())
        throw Error("unknown solution index " + std::to_string(sol));
    const Valuation& s = net.solutions[static_cast<std::size_t>(sol)];
    double w = 1.0;
    for (int x = 0; x < net.variable_count; ++x)
        w *= sys.generator(x, s[static_cast<std::size_t>(x)], net.allowed_values(sol, x));
    return w;
}

double set_weight(const WeightingSystem& sys, const SolutionNetwork& net,
                  std::span<const int> sols) {
    double total = 0.0;
    for (int s : sols) total += solution_weight(sys, net, s);
    return total;
}

double set_weight(const WeightingSystem& sys, const SolutionNetwork& net) {
    double total = 0.0;
    for (int s = 0; s < static_cast<int>(net.size()); ++s)
        total += solution_weight(sys, net, s);
    return total;
}

double decomposer(const WeightingSystem& sys, const SolutionNetwork& net, int sol, int x,
                  Value a) {
    const Value sx = net.solutions[static_cast<std::size_t>(sol)][static_cast<std::size_t>(x)];
    if (a == sx) return sys.seed(x, a);
    const std::vector<Value>& clique_values = net.allowed_values(sol, x);
    if (std::binary_search(clique_values.begin(), clique_values.end(), a)) return 0.0;
    double dispatch_sum = 0.0;
    for (Value b : clique_values) dispatch_sum += sys.dispatch(x, b);
    return sys.dispatch(x, sx) / dispatch_sum * sys.seed(x, a);
}

double transfer(const WeightingSystem& sys, const SolutionNetwork& net, int sol,
                const Valuation& v) {
    double t = 1.0;
    for (int x = 0; x < net.variable_count; ++x) {
        t *= decomposer(sys, net, sol, x, v[static_cast<std::size_t>(x)]);
        if (t == 0.0) return 0.0;
    }
    return t;
}

namespace {

template <class MinFn>
double total_unladen_impl(const WeightingSystem& sys, std::uint64_t cap, MinFn sum) {
    const int n = sys.seed.variable_count;
    const int d = sys.seed.domain_size;
    const std::uint64_t count = valuation_count(n, d);
    if (count > cap) throw CapacityError("valuation sweep exceeds the cap");
    return sum(count, [&](std::uint64_t i) { return sys.unladen(valuation_at(i, n, d)); });
}

} // namespace

double total_unladen(const WeightingSystem& sys, std::uint64_t cap) {
    return total_unladen_impl(sys, cap,
                              [](std::uint64_t c, auto f) { return parallel_sum(c, f); });
}

double total_unladen_serial(const WeightingSystem& sys, std::uint64_t cap) {
    return total_unladen_impl(sys, cap,
                              [](std::uint64_t c, auto f) { return serial_sum(c, f); });
}

namespace {

template <class MinFn>
CoveringReport covering_impl(const SolutionNetwork& net, std::span<const int> sols,
                             const UnladenFn& unladen, const TransferFn& transfer_fn,
                             double eps, std::uint64_t cap, MinFn min_reduce) {
    const int n = net.variable_count;
    const int d = net.domain_size;
    const std::uint64_t count = valuation_count(n, d);
    if (count > cap) throw CapacityError("covering sweep exceeds the cap");

    auto slack_at = [&](std::uint64_t i) {
        const Valuation v = valuation_at(i, n, d);
        double sum = 0.0;
        for (int s : sols) sum += transfer_fn(s, v);
        return sum - unladen(v);
    };
    auto [slack, index] = min_reduce(count, slack_at);

    CoveringReport report;
    report.worst = valuation_at(index, n, d);
    double sum = 0.0;
    for (int s : sols) sum += transfer_fn(s, report.worst);
    report.transfer_sum = sum;
    report.unladen = unladen(report.worst);
    report.slack = slack;
    report.covered = slack >= -eps;
    return report;
}

} // namespace

CoveringReport check_covering(const SolutionNetwork& net, std::span<const int> sols,
                              const UnladenFn& unladen, const TransferFn& transfer_fn,
                              double eps, std::uint64_t cap) {
    return covering_impl(net, sols, unladen, transfer_fn, eps, cap,
                         [](std::uint64_t c, auto f) { return parallel_min(c, f); });
}

CoveringReport check_covering_serial(const SolutionNetwork& net, std::span<const int> sols,
                                     const UnladenFn& unladen, const TransferFn& transfer_fn,
                                     double eps, std::uint64_t cap) {
    return covering_impl(net, sols, unladen, transfer_fn, eps, cap,
                         [](std::uint64_t c, auto f) { return serial_min(c, f); });
}

CoveringReport check_covering(const WeightingSystem& sys, const SolutionNetwork& net,
                              std::span<const int> sols, double eps, std::uint64_t cap) {
    return check_covering(
        net, sols, [&](const Valuation& v) { return sys.unladen(v); },
        [&](int s, const Valuation& v) { return transfer(sys, net, s, v); }, eps, cap);
}

namespace {

// Solutions of the component extending a partial valuation (-1 = unset).
std::vector<int> extensions(const SolutionNetwork& net, std::span<const int> component,
                            const std::vector<Value>& partial) {
    std::vector<int> out;
    for (int s : component) {
        const Valuation& sol = net.solutions[static_cast<std::size_t>(s)];
        bool ok = true;
        for (std::size_t x = 0; x < partial.size(); ++x) {
            if (partial[x] >= 0 && sol[x] != partial[x]) {
                ok = false;
                break;
            }
        }
        if (ok) out.push_back(s);
    }
    return out;
}

void extend(const WeightingSystem& sys, const SolutionNetwork& net,
            std::span<const int> component, std::vector<Value>& partial, double fictitious,
            std::vector<WitnessEntry>& leaves) {
    // The unset variable of highest index plays the role of x_i at level i.
    int xi = -1;
    for (int x = static_cast<int>(partial.size()) - 1; x >= 0; --x) {
        if (partial[static_cast<std::size_t>(x)] < 0) {
            xi = x;
            break;
        }
    }
    if (xi < 0) {
        const int sol = net.solution_index(partial);
        leaves.push_back({sol, fictitious});
        return;
    }

    const std::vector<int> candidates = extensions(net, component, partial);
    int tau = candidates.front();
    double best_mass = -1.0;
    for (int s : candidates) {
        double mass = 0.0;
        for (Value b : net.allowed_values(s, xi)) mass += sys.dispatch(xi, b);
        if (mass > best_mass) { // first (lexicographically least) wins ties
            best_mass = mass;
            tau = s;
        }
    }

    const std::vector<Value>& values = net.allowed_values(tau, xi);
    for (Value a : values) {
        partial[static_cast<std::size_t>(xi)] = a;
        extend(sys, net, component, partial, fictitious * sys.dispatch(xi, a) / best_mass,
               leaves);
    }
    partial[static_cast<std::size_t>(xi)] = -1;
}

} // namespace

std::vector<WitnessEntry> extend_witness(const WeightingSystem& sys,
                                         const SolutionNetwork& net,
                                         std::span<const int> component, const Valuation& v) {
    if (component.empty()) throw PreconditionError("extend_witness needs a nonempty component");

    // Maximal restriction of v extensible in the component, grown greedily
    // in variable-index order (extensibility is antitone, so greedy growth
    // reaches a maximal element).
    std::vector<Value> partial(v.size(), -1);
    for (std::size_t x = 0; x < v.size(); ++x) {
        partial[x] = v[x];
        if (extensions(net, component, partial).empty()) partial[x] = -1;
    }

    std::vector<WitnessEntry> leaves;
    extend(sys, net, component, partial, sys.unladen(v), leaves);
    std::sort(leaves.begin(), leaves.end(),
              [](const WitnessEntry& a, const WitnessEntry& b) {
                  return a.solution < b.solution;
              });
    return leaves;
}

std::vector<ComponentWeight> verify_weight_conservation(const WeightingSystem& sys,
                                                        const SolutionNetwork& net,
                                                        double eps) {
    if (!sys.seed_unitary(eps))
        throw PreconditionError("weight conservation requires a unitary seed");
    std::vector<ComponentWeight> out;
    out.reserve(net.components.size());
    for (std::size_t c = 0; c < net.components.size(); ++c) {
        const double w = set_weight(sys, net, net.components[c]);
        out.push_back({static_cast<int>(c), w, w >= 1.0 - eps});
    }
    return out;
}

double AdhocWeights::solution_weight(int sol) const {
    double prod = 1.0;
    for (double x : w[static_cast<std::size_t>(sol)]) prod *= x;
    return prod;
}

double AdhocWeights::total() const {
    double t = 0.0;
    for (std::size_t s = 0; s < w.size(); ++s) t += solution_weight(static_cast<int>(s));
    return t;
}

TransferFn AdhocWeights::product_transfer(const WeightTable& seed) const {
    return [this, seed](int sol, const Valuation& v) {
        double t = 1.0;
        for (int x = 0; x < static_cast<int>(v.size()); ++x)
            t *= w[static_cast<std::size_t>(sol)][static_cast<std::size_t>(x)] *
                 seed(x, v[static_cast<std::size_t>(x)]);
        return t;
    };
}

ParsedTables parse_weight_tables(std::istream& in, int variable_count, int domain_size) {
    ParsedTables tables;
    tables.seed = WeightTable(variable_count, domain_size, 0.0);
    tables.dispatch = WeightTable::uniform(variable_count, domain_size);

    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        std::string kind;
        if (!(ls >> kind)) continue;
        if (kind == "uniform") {
            tables.seed = WeightTable::uniform(variable_count, domain_size);
            tables.dispatch = WeightTable::uniform(variable_count, domain_size);
            continue;
        }
        if (kind != "seed" && kind != "dispatch")
            throw ParseError("line " + std::to_string(lineno) + ": expected seed/dispatch/uniform");
        int x = -1, a = -1;
        double weight = 0.0;
        if (!(ls >> x >> a >> weight))
            throw ParseError("line " + std::to_string(lineno) + ": expected '<x> <value> <weight>'");
        if (x < 0 || x >= variable_count || a < 0 || a >= domain_size)
            throw ParseError("line " + std::to_string(lineno) + ": index out of range");
        if (kind == "seed") {
            tables.seed.at(x, a) = weight;
        } else {
            tables.dispatch.at(x, a) = weight;
            tables.saw_dispatch = true;
        }
    }
    return tables;
}

ParsedTables parse_weight_tables_file(const std::string& path, int variable_count,
                                      int domain_size) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path);
    return parse_weight_tables(in, variable_count, domain_size);
}

} // namespace estsat

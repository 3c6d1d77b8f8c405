#ifndef ESTSAT_WEIGHTING_HPP
#define ESTSAT_WEIGHTING_HPP

#include <functional>
#include <iosfwd>
#include <span>
#include <vector>

#include "estsat/network.hpp"

namespace estsat {

inline constexpr double kDefaultEps = 1e-9;

// Per-(variable, value) table backing both weighting seeds and dispatchers.
struct WeightTable {
    int variable_count = 0;
    int domain_size = 0;
    std::vector<double> entries; // row-major, variable * d + value

    WeightTable() = default;
    WeightTable(int n, int d, double fill = 0.0)
        : variable_count(n), domain_size(d),
          entries(static_cast<std::size_t>(n) * static_cast<std::size_t>(d), fill) {}

    double operator()(int x, Value a) const {
        return entries[static_cast<std::size_t>(x) * static_cast<std::size_t>(domain_size) +
                       static_cast<std::size_t>(a)];
    }
    double& at(int x, Value a) {
        return entries[static_cast<std::size_t>(x) * static_cast<std::size_t>(domain_size) +
                       static_cast<std::size_t>(a)];
    }

    double row_sum(int x) const;
    bool unitary(double eps = kDefaultEps) const; // every row sums to 1
    static WeightTable uniform(int n, int d);
};

// Weighting seed s_F plus dispatcher d_F. Seeds may contain zeros; the
// dispatcher must be strictly positive and the constructor enforces it.
struct WeightingSystem {
    WeightTable seed;
    WeightTable dispatch;

    WeightingSystem(WeightTable seed_table, WeightTable dispatch_table);
    static WeightingSystem homogeneous(WeightTable seed_table);

    bool is_homogeneous(double eps = kDefaultEps) const;
    bool seed_unitary(double eps = kDefaultEps) const { return seed.unitary(eps); }

    // Unladen weight U_F(v): product of seeds along the valuation.
    double unladen(const Valuation& v) const;

    // Weight generator: the seed of a, plus a's dispatcher share of the
    // seed mass sitting outside delta. Zero for a outside delta.
    double generator(int x, Value a, std::span<const Value> delta) const;
};

// Actual weight W_F(sigma) = prod_x generator(x, sigma(x), A_F(sigma, x)).
double solution_weight(const WeightingSystem& sys, const SolutionNetwork& net, int sol);
double set_weight(const WeightingSystem& sys, const SolutionNetwork& net,
                  std::span<const int> sols);
double set_weight(const WeightingSystem& sys, const SolutionNetwork& net);

// The dispatcher decomposer of w_F: seed at sigma(x), the dispatcher share
// of the seed for values outside the clique, zero inside the clique away
// from sigma(x). Row sums recover w_F.
double decomposer(const WeightingSystem& sys, const SolutionNetwork& net, int sol, int x,
                  Value a);

// T_{F, sigma -> v}: product of decomposers along v.
double transfer(const WeightingSystem& sys, const SolutionNetwork& net, int sol,
                const Valuation& v);

// Sum of U_F over all d^n valuations (equals 1 for unitary seeds).
double total_unladen(const WeightingSystem& sys, std::uint64_t cap = kDefaultCap);
double total_unladen_serial(const WeightingSystem& sys, std::uint64_t cap = kDefaultCap);

struct CoveringReport {
    bool covered = false;
    Valuation worst;        // valuation minimizing the slack
    double transfer_sum = 0.0; // sum of transfers into `worst`
    double unladen = 0.0;      // U_F(worst)
    double slack = 0.0;        // transfer_sum - unladen
};

// Checks that transfers from S dominate U_F on every valuation. The
// callback form accepts any (unladen, transfer) pair so that ad-hoc
// weightings can be probed; the system form uses the dispatcher
// decomposers above. OpenMP sweep with a serial reference.
using UnladenFn = std::function<double(const Valuation&)>;
using TransferFn = std::function<double(int sol, const Valuation&)>;

CoveringReport check_covering(const SolutionNetwork& net, std::span<const int> sols,
                              const UnladenFn& unladen, const TransferFn& transfer,
                              double eps = kDefaultEps, std::uint64_t cap = kDefaultCap);
CoveringReport check_covering_serial(const SolutionNetwork& net, std::span<const int> sols,
                                     const UnladenFn& unladen, const TransferFn& transfer,
                                     double eps = kDefaultEps,
                                     std::uint64_t cap = kDefaultCap);
CoveringReport check_covering(const WeightingSystem& sys, const SolutionNetwork& net,
                              std::span<const int> sols, double eps = kDefaultEps,
                              std::uint64_t cap = kDefaultCap);

// One leaf of the extension tree: a solution of the component and the
// fictitious weight routed to it.
struct WitnessEntry {
    int solution;
    double fictitious;
};

// The extension algorithm: pick the maximal restriction of v extensible in
// the component (grown greedily in variable-index order), then extend one
// variable at a time, always through a solution maximizing the dispatcher
// mass of its clique, splitting the fictitious weight proportionally to
// the dispatcher. The leaves satisfy sum f = U_F(v) and f <= T_{F,s->v}.
std::vector<WitnessEntry> extend_witness(const WeightingSystem& sys,
                                         const SolutionNetwork& net,
                                         std::span<const int> component, const Valuation& v);

struct ComponentWeight {
    int component;
    double weight;
    bool conserved; // weight >= 1 - eps
};

// Weight conservation check per connected component; requires a unitary
// seed (PreconditionError otherwise).
std::vector<ComponentWeight> verify_weight_conservation(const WeightingSystem& sys,
                                                        const SolutionNetwork& net,
                                                        double eps = kDefaultEps);

// An arbitrary per-(solution, variable) weight table, used to probe
// weightings that are not generated by seeds and dispatchers (for example
// hand-assigned clique-unitary tables).
struct AdhocWeights {
    std::vector<std::vector<double>> w; // [solution][variable]

    double solution_weight(int sol) const;
    double total() const;

    // Transfers for the product decomposer delta = w(s,x) * seed(x,a),
    // which trivially decomposes w; with a unitary seed this makes the
    // covering test meaningful for ad-hoc tables.
    TransferFn product_transfer(const WeightTable& seed) const;
};

// Seed/dispatcher text format: `seed <x> <value> <weight>` and `dispatch`
// lines, plus a bare `uniform` line that resets both tables to 1/d.
struct ParsedTables {
    WeightTable seed;
    WeightTable dispatch;
    bool saw_dispatch = false;
};
ParsedTables parse_weight_tables(std::istream& in, int variable_count, int domain_size);
ParsedTables parse_weight_tables_file(const std::string& path, int variable_count,
                                      int domain_size);

} // namespace estsat

#endif

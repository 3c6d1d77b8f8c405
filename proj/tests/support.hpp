#ifndef ESTSAT_TESTS_SUPPORT_HPP
#define ESTSAT_TESTS_SUPPORT_HPP

#include <algorithm>
#include <set>
#include <vector>

#include "estsat/csp.hpp"
#include "estsat/network.hpp"
#include "estsat/rng.hpp"
#include "estsat/starsat.hpp"
#include "estsat/weighting.hpp"

namespace estsat::testing {

// The running 6-solution example over D = {a, b, c} for two variables:
// solutions ab, aa, bb, ba, ca, bc.
inline CspInstance six_solution_instance() {
    CspInstance inst;
    inst.variable_count = 2;
    inst.domain = default_domain(3);
    Constraint c;
    c.scope = {0, 1};
    c.allowed = {{0, 0}, {0, 1}, {1, 0}, {1, 1}, {1, 2}, {2, 0}};
    std::sort(c.allowed.begin(), c.allowed.end());
    inst.constraints.push_back(c);
    return inst;
}

inline SolutionNetwork six_solution_network() {
    return build_network(enumerate_solutions(six_solution_instance()), 3);
}

// Seed table x: 0.1 0.2 0.7, y: 0.4 0.3 0.3.
inline WeightTable example_seed() {
    WeightTable s(2, 3);
    s.at(0, 0) = 0.1;
    s.at(0, 1) = 0.2;
    s.at(0, 2) = 0.7;
    s.at(1, 0) = 0.4;
    s.at(1, 1) = 0.3;
    s.at(1, 2) = 0.3;
    return s;
}

// Dispatcher x: 0.6 0.3 0.1, y: 0.2 0.5 0.3 (the heterogeneous variant).
inline WeightTable example_dispatch() {
    WeightTable d(2, 3);
    d.at(0, 0) = 0.6;
    d.at(0, 1) = 0.3;
    d.at(0, 2) = 0.1;
    d.at(1, 0) = 0.2;
    d.at(1, 1) = 0.5;
    d.at(1, 2) = 0.3;
    return d;
}

inline WeightingSystem homogeneous_example() {
    return WeightingSystem::homogeneous(example_seed());
}

inline WeightingSystem heterogeneous_example() {
    return WeightingSystem(example_seed(), example_dispatch());
}

// A clique-unitary but incorrect hand-assigned weight table on the running
// example; rows follow the sorted solution order aa, ab, ba, bb, bc, ca.
inline AdhocWeights bad_adhoc_weights() {
    AdhocWeights w;
    w.w = {
        {0.7, 0.1}, // aa
        {0.1, 0.9}, // ab
        {0.1, 0.7}, // ba
        {0.9, 0.1}, // bb
        {1.0, 0.2}, // bc
        {0.2, 1.0}, // ca
    };
    return w;
}

// Random positive weight in [0.05, 1.05) (dispatcher-safe).
inline double random_positive(Rng& rng) { return 0.05 + uniform01(rng); }

inline WeightTable random_unitary_seed(Rng& rng, int n, int d, bool strictly_positive) {
    WeightTable s(n, d);
    for (int x = 0; x < n; ++x) {
        double row = 0.0;
        for (Value a = 0; a < d; ++a) {
            double w = strictly_positive ? random_positive(rng) : uniform01(rng);
            s.at(x, a) = w;
            row += w;
        }
        for (Value a = 0; a < d; ++a) s.at(x, a) /= row;
    }
    return s;
}

inline WeightTable random_dispatcher(Rng& rng, int n, int d) {
    WeightTable t(n, d);
    for (int x = 0; x < n; ++x)
        for (Value a = 0; a < d; ++a) t.at(x, a) = random_positive(rng);
    return t;
}

// Random instance with 1..3 constraints of arity <= 2; resampled until it
// has at least one solution (and not too many, to keep sweeps quick).
inline CspInstance random_satisfiable_instance(Rng& rng, int max_n = 4, int max_d = 3,
                                               std::size_t max_solutions = 48) {
    for (;;) {
        CspInstance inst;
        inst.variable_count = 2 + static_cast<int>(uniform_below(rng, max_n - 1));
        const int d = 2 + static_cast<int>(uniform_below(rng, max_d - 1));
        inst.domain = default_domain(d);
        const int constraint_count = 1 + static_cast<int>(uniform_below(rng, 3));
        for (int c = 0; c < constraint_count; ++c) {
            Constraint con;
            const int arity = 1 + static_cast<int>(uniform_below(rng, 2));
            std::set<int> scope;
            while (static_cast<int>(scope.size()) < arity)
                scope.insert(static_cast<int>(uniform_below(rng, inst.variable_count)));
            con.scope.assign(scope.begin(), scope.end());
            const std::uint64_t tuples = valuation_count(arity, d);
            for (std::uint64_t t = 0; t < tuples; ++t)
                if (uniform01(rng) < 0.6)
                    con.allowed.push_back(valuation_at(t, arity, d));
            std::sort(con.allowed.begin(), con.allowed.end());
            inst.constraints.push_back(std::move(con));
        }
        const auto solutions = enumerate_solutions(inst);
        if (!solutions.empty() && solutions.size() <= max_solutions) return inst;
    }
}

// Random 3-CNF with distinct variables per clause; resampled until
// satisfiable in the boolean sense.
inline CnfFormula random_satisfiable_3cnf(Rng& rng, int max_n = 10) {
    for (;;) {
        CnfFormula f;
        f.variable_count = 3 + static_cast<int>(uniform_below(rng, max_n - 2));
        const int m = 1 + static_cast<int>(uniform_below(
                              rng, static_cast<std::uint64_t>(2 * f.variable_count)));
        for (int c = 0; c < m; ++c) {
            std::set<int> vars;
            while (static_cast<int>(vars.size()) < 3)
                vars.insert(1 + static_cast<int>(uniform_below(rng, f.variable_count)));
            std::vector<int> clause;
            for (int v : vars) clause.push_back(bernoulli(rng, 0.5) ? v : -v);
            f.clauses.push_back(std::move(clause));
        }
        if (!boolean_solutions(f).empty()) return f;
    }
}

} // namespace estsat::testing

#endif

// Timing comparison of the OpenMP sweeps against their serial reference
// implementations: covering slack, gamma, the unladen-weight sum, the grid
// maximizer and the Monte Carlo sampler.

#ifdef _OPENMP
#include <omp.h>
#endif

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>

#include "estsat/moment.hpp"
#include "estsat/rng.hpp"
#include "estsat/starsat.hpp"
#include "estsat/sweep.hpp"
#include "estsat/weighting.hpp"

using namespace estsat;

namespace {

double time_ms(const std::function<void()>& fn) {
    const auto start = std::chrono::steady_clock::now();
    fn();
    const auto stop = std::chrono::steady_clock::now();
    return std::chrono::duration<double, std::milli>(stop - start).count();
}

void row(const char* kernel, double serial_ms, double parallel_ms) {
    std::printf("%-24s %10.1f ms %10.1f ms %8.2fx\n", kernel, serial_ms, parallel_ms,
                serial_ms / parallel_ms);
}

CnfFormula random_formula(int n, int m, Rng& rng) {
    CnfFormula f;
    f.variable_count = n;
    for (int c = 0; c < m; ++c) {
        std::vector<int> clause;
        while (clause.size() < 3) {
            const int var = 1 + static_cast<int>(uniform_below(rng, n));
            bool seen = false;
            for (int lit : clause) seen = seen || std::abs(lit) == var;
            if (!seen) clause.push_back(bernoulli(rng, 0.5) ? var : -var);
        }
        f.clauses.push_back(std::move(clause));
    }
    return f;
}

} // namespace

int main() {
#ifdef _OPENMP
    std::printf("threads: %d\n", omp_get_max_threads());
#else
    std::printf("threads: 1 (built without OpenMP)\n");
#endif
    std::printf("%-24s %13s %13s %9s\n", "kernel", "serial", "parallel", "speedup");

    Rng rng(2);

    {
        // covering sweep: 14 binary variables chained by no-(0,0) constraints
        CspInstance inst;
        inst.variable_count = 14;
        inst.domain = default_domain(2);
        for (int x = 0; x + 1 < inst.variable_count; ++x) {
            Constraint c;
            c.scope = {x, x + 1};
            c.allowed = {{0, 1}, {1, 0}, {1, 1}};
            inst.constraints.push_back(std::move(c));
        }
        const SolutionNetwork net =
            build_network(enumerate_solutions(inst), inst.domain_size());
        WeightingSystem sys =
            WeightingSystem::homogeneous(WeightTable::uniform(14, 2));
        const UnladenFn unladen = [&](const Valuation& v) { return sys.unladen(v); };
        const TransferFn transfer_fn = [&](int s, const Valuation& v) {
            return transfer(sys, net, s, v);
        };
        double serial_ms = 0.0, parallel_ms = 0.0;
        serial_ms = time_ms([&] {
            (void)check_covering_serial(net, net.components[0], unladen, transfer_fn);
        });
        parallel_ms = time_ms(
            [&] { (void)check_covering(net, net.components[0], unladen, transfer_fn); });
        row("covering slack", serial_ms, parallel_ms);
    }

    {
        const CnfFormula f = random_formula(13, 26, rng);
        const StarWeights w = StarWeights::from_rho(f.variable_count, 0.4);
        double gs = 0.0, gp = 0.0;
        const double serial_ms = time_ms([&] { gs = gamma_serial(f, w); });
        const double parallel_ms = time_ms([&] { gp = gamma(f, w); });
        row("gamma 3^13", serial_ms, parallel_ms);
        if (std::fabs(gs - gp) > 1e-9 * std::fabs(gs))
            std::printf("  !! gamma mismatch: %.17g vs %.17g\n", gs, gp);
    }

    {
        const WeightingSystem sys =
            WeightingSystem::homogeneous(WeightTable::uniform(15, 3));
        const std::uint64_t cap = std::uint64_t{1} << 26;
        const double serial_ms = time_ms([&] { (void)total_unladen_serial(sys, cap); });
        const double parallel_ms = time_ms([&] { (void)total_unladen(sys, cap); });
        row("unladen sum 3^15", serial_ms, parallel_ms);
    }

    {
        const Objective wavy = [](std::span<const double> x) {
            return std::sin(3.0 * x[0]) * std::cos(2.0 * x[1]) - 0.1 * x[0] * x[1];
        };
        Box box;
        box.axes = {{0.0, 3.0}, {0.0, 3.0}};
        const double serial_ms =
            time_ms([&] { (void)sweep_maximize_serial(wavy, box, 0.001, 1e-5); });
        const double parallel_ms =
            time_ms([&] { (void)sweep_maximize(wavy, box, 0.001, 1e-5); });
        row("grid sweep 3001^2", serial_ms, parallel_ms);
    }

    {
        const double serial_ms =
            time_ms([&] { (void)moment_mc_serial(12, 2, 4, 0.6, 0.03, 100000, 7); });
        const double parallel_ms =
            time_ms([&] { (void)moment_mc(12, 2, 4, 0.6, 0.03, 100000, 7); });
        row("monte carlo 1e5", serial_ms, parallel_ms);
    }

    return 0;
}

#include <doctest.h>

#include <cmath>
#include <map>
#include <sstream>

#include "estsat/errors.hpp"
#include "estsat/parallel.hpp"
#include "support.hpp"

using namespace estsat;
using namespace estsat::testing;

namespace {
constexpr double kTol = 1e-12;
}

TEST_CASE("unladen weight is the product of seeds") {
    WeightingSystem uniform = WeightingSystem::homogeneous(WeightTable::uniform(3, 3));
    CHECK(uniform.unladen({0, 1, 2}) == doctest::Approx(1.0 / 27.0).epsilon(kTol));

    // seed table of the running example: U(ca) = 0.7 * 0.4
    CHECK(homogeneous_example().unladen({2, 0}) == doctest::Approx(0.28).epsilon(kTol));

    WeightTable zeroed = example_seed();
    zeroed.at(0, 0) = 0.0;
    WeightingSystem sys(zeroed, example_dispatch());
    CHECK(sys.unladen({0, 0}) == 0.0);
}

TEST_CASE("generator dispatches the forbidden seed mass") {
    const WeightingSystem homogeneous = homogeneous_example();
    const std::vector<Value> ab = {0, 1};

    // 0.2 + (0.2 / 0.3) * 0.7
    CHECK(homogeneous.generator(0, 1, ab) ==
          doctest::Approx(0.2 + 0.2 / 0.3 * 0.7).epsilon(kTol));
    CHECK(homogeneous.generator(0, 1, ab) == doctest::Approx(0.667).epsilon(1e-3));

    // heterogeneous variant: 0.1 + (0.6 / 0.9) * 0.7
    CHECK(heterogeneous_example().generator(0, 0, ab) ==
          doctest::Approx(0.567).epsilon(1e-3));

    // full clique dispatches nothing
    const std::vector<Value> full = {0, 1, 2};
    for (Value a = 0; a < 3; ++a)
        CHECK(homogeneous.generator(0, a, full) ==
              doctest::Approx(homogeneous.seed(0, a)).epsilon(kTol));

    // sole allowed value absorbs everything when the seed is unitary
    const std::vector<Value> only_a = {0};
    CHECK(homogeneous.generator(0, 0, only_a) == doctest::Approx(1.0).epsilon(kTol));

    // values outside the clique get zero
    CHECK(homogeneous.generator(0, 2, ab) == 0.0);
}

TEST_CASE("generator stays unitary on every nonempty clique") {
    Rng rng(11);
    for (int round = 0; round < 40; ++round) {
        const int d = 2 + static_cast<int>(uniform_below(rng, 3));
        WeightingSystem sys(random_unitary_seed(rng, 2, d, false), random_dispatcher(rng, 2, d));
        for (unsigned mask = 1; mask < (1u << d); ++mask) {
            std::vector<Value> delta;
            for (Value a = 0; a < d; ++a)
                if (mask >> a & 1u) delta.push_back(a);
            double total = 0.0;
            for (Value a : delta) total += sys.generator(0, a, delta);
            CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
        }
    }
}

TEST_CASE("solution and set weights reproduce the example totals") {
    const SolutionNetwork net = six_solution_network();
    const WeightingSystem homogeneous = homogeneous_example();
    const WeightingSystem heterogeneous = heterogeneous_example();

    const int ca = net.solution_index({2, 0});
    const int ba = net.solution_index({1, 0});
    CHECK(solution_weight(homogeneous, net, ca) == doctest::Approx(0.7).epsilon(kTol));
    CHECK(solution_weight(homogeneous, net, ba) == doctest::Approx(0.08).epsilon(kTol));

    CHECK(set_weight(homogeneous, net) == doctest::Approx(1.48).epsilon(1e-9));
    CHECK(set_weight(heterogeneous, net) == doctest::Approx(1.55).epsilon(1e-9));

    // singleton network with a unitary seed: every clique dispatches everything
    const SolutionNetwork single = build_network({{0, 1}}, 3);
    CHECK(solution_weight(homogeneous, single, 0) == doctest::Approx(1.0).epsilon(kTol));

    CHECK_THROWS_AS(solution_weight(homogeneous, net, 17), Error);
}

TEST_CASE("dispatcher decomposer matches the case split") {
    const SolutionNetwork net = six_solution_network();
    const WeightingSystem sys = homogeneous_example();
    const int bb = net.solution_index({1, 1});

    // a = sigma(x)
    CHECK(decomposer(sys, net, bb, 0, 1) == doctest::Approx(sys.seed(0, 1)).epsilon(kTol));
    // a inside the clique but not sigma(x)
    CHECK(decomposer(sys, net, bb, 0, 0) == 0.0);
    // a outside the clique {a, b}: (0.2 / 0.3) * 0.7
    CHECK(decomposer(sys, net, bb, 0, 2) == doctest::Approx(0.2 / 0.3 * 0.7).epsilon(kTol));
}

TEST_CASE("decomposer rows sum to the actual weight (all example solutions)") {
    const SolutionNetwork net = six_solution_network();
    for (const WeightingSystem& sys : {homogeneous_example(), heterogeneous_example()}) {
        for (int s = 0; s < static_cast<int>(net.size()); ++s) {
            for (int x = 0; x < net.variable_count; ++x) {
                double row = 0.0;
                for (Value a = 0; a < 3; ++a) row += decomposer(sys, net, s, x, a);
                const Value sx =
                    net.solutions[static_cast<std::size_t>(s)][static_cast<std::size_t>(x)];
                CHECK(row == doctest::Approx(sys.generator(x, sx, net.allowed_values(s, x)))
                                 .epsilon(1e-9));
            }
        }
    }
}

TEST_CASE("weights decompose into transfers over all valuations") {
    const SolutionNetwork net = six_solution_network();
    const WeightingSystem sys = heterogeneous_example();

    // v = sigma recovers the unladen weight of sigma
    const int ca = net.solution_index({2, 0});
    CHECK(transfer(sys, net, ca, {2, 0}) == doctest::Approx(sys.unladen({2, 0})).epsilon(kTol));

    // v hitting the clique away from sigma(x) kills the product
    const int bb = net.solution_index({1, 1});
    CHECK(transfer(sys, net, bb, {0, 1}) == 0.0);

    for (int s = 0; s < static_cast<int>(net.size()); ++s) {
        double total = 0.0;
        for (std::uint64_t i = 0; i < 9; ++i)
            total += transfer(sys, net, s, valuation_at(i, 2, 3));
        CHECK(total == doctest::Approx(solution_weight(sys, net, s)).epsilon(1e-9));
    }
}

TEST_CASE("unitary seeds have total unladen weight 1") {
    const WeightingSystem sys = homogeneous_example();
    CHECK(total_unladen(sys) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(total_unladen_serial(sys) == doctest::Approx(1.0).epsilon(1e-9));

    Rng rng(5);
    for (int round = 0; round < 20; ++round) {
        WeightingSystem random_sys(random_unitary_seed(rng, 4, 3, false),
                                   random_dispatcher(rng, 4, 3));
        CHECK(total_unladen(random_sys) == doctest::Approx(1.0).epsilon(4e-9));
    }
}

TEST_CASE("components cover the unladen weights") {
    const SolutionNetwork net = six_solution_network();
    const WeightingSystem sys = homogeneous_example();
    const CoveringReport report = check_covering(sys, net, net.components[0]);
    CHECK(report.covered);
    CHECK(report.slack >= -1e-9);

    // the serial reference agrees
    const CoveringReport serial = check_covering_serial(
        net, net.components[0], [&](const Valuation& v) { return sys.unladen(v); },
        [&](int s, const Valuation& v) { return transfer(sys, net, s, v); });
    CHECK(serial.covered == report.covered);
    CHECK(serial.slack == doctest::Approx(report.slack).epsilon(1e-12));
    CHECK(serial.worst == report.worst);

    // the empty set covers nothing
    const CoveringReport empty = check_covering(sys, net, std::span<const int>{});
    CHECK_FALSE(empty.covered);
}

TEST_CASE("the clique-unitary ad-hoc table is not a correct weighting") {
    const SolutionNetwork net = six_solution_network();
    const AdhocWeights bad = bad_adhoc_weights();
    CHECK(bad.total() == doctest::Approx(0.72).epsilon(1e-9));

    // with any unitary seed, a decomposable weighting of total < 1 cannot
    // cover; probe it with the product decomposer
    const WeightTable uniform = WeightTable::uniform(2, 3);
    const CoveringReport report = check_covering(
        net, net.components[0],
        [&](const Valuation& v) {
            double u = 1.0;
            for (int x = 0; x < 2; ++x) u *= uniform(x, v[static_cast<std::size_t>(x)]);
            return u;
        },
        bad.product_transfer(uniform));
    CHECK_FALSE(report.covered);
    CHECK(report.slack < 0.0);
}

TEST_CASE("extend witness: trivial case and the cc example") {
    const SolutionNetwork net = six_solution_network();
    const WeightingSystem sys = homogeneous_example();
    const auto& component = net.components[0];

    // v inside the component: single leaf with the unladen weight
    const Valuation ca = {2, 0};
    const auto leaves = extend_witness(sys, net, component, ca);
    REQUIRE(leaves.size() == 1);
    CHECK(leaves[0].solution == net.solution_index(ca));
    CHECK(leaves[0].fictitious == doctest::Approx(sys.unladen(ca)).epsilon(kTol));

    // v = cc is no solution; the leaves carry U(cc) = 0.7 * 0.3 = 0.21
    const Valuation cc = {2, 2};
    const auto spread = extend_witness(sys, net, component, cc);
    double total = 0.0;
    for (const auto& leaf : spread) {
        total += leaf.fictitious;
        CHECK(leaf.fictitious <=
              transfer(sys, net, leaf.solution, cc) + 1e-12); // f <= T
    }
    CHECK(total == doctest::Approx(0.21).epsilon(1e-9));

    CHECK_THROWS_AS(extend_witness(sys, net, std::span<const int>{}, cc), PreconditionError);
}

TEST_CASE("extend witness postconditions on random systems") {
    Rng rng(99);
    for (int round = 0; round < 25; ++round) {
        const CspInstance inst = random_satisfiable_instance(rng);
        const SolutionNetwork net =
            build_network(enumerate_solutions(inst), inst.domain_size());
        const int n = net.variable_count;
        const int d = net.domain_size;
        WeightingSystem sys(random_unitary_seed(rng, n, d, false),
                            random_dispatcher(rng, n, d));
        for (const auto& component : net.components) {
            for (std::uint64_t i = 0; i < valuation_count(n, d); ++i) {
                const Valuation v = valuation_at(i, n, d);
                const auto leaves = extend_witness(sys, net, component, v);
                double total = 0.0;
                for (const auto& leaf : leaves) {
                    total += leaf.fictitious;
                    CHECK(leaf.fictitious <= transfer(sys, net, leaf.solution, v) + 1e-9);
                }
                CHECK(total == doctest::Approx(sys.unladen(v)).epsilon(1e-9));
            }
        }
    }
}

TEST_CASE("weight conservation on the example systems") {
    const SolutionNetwork net = six_solution_network();
    for (const WeightingSystem& sys : {homogeneous_example(), heterogeneous_example()}) {
        const auto report = verify_weight_conservation(sys, net);
        REQUIRE(report.size() == 1);
        CHECK(report[0].conserved);
        CHECK(report[0].weight >= 1.0);
    }

    // non-unitary seed is rejected
    WeightTable bad_seed = example_seed();
    bad_seed.at(0, 0) = 0.9;
    WeightingSystem bad(bad_seed, example_dispatch());
    CHECK_THROWS_AS(verify_weight_conservation(bad, net), PreconditionError);
}

TEST_CASE("weight conservation on random satisfiable instances") {
    Rng rng(4242);
    for (int round = 0; round < 60; ++round) {
        const CspInstance inst = random_satisfiable_instance(rng);
        const SolutionNetwork net =
            build_network(enumerate_solutions(inst), inst.domain_size());
        WeightingSystem sys(
            random_unitary_seed(rng, net.variable_count, net.domain_size, false),
            random_dispatcher(rng, net.variable_count, net.domain_size));
        for (const auto& component : verify_weight_conservation(sys, net)) {
            CHECK(component.weight >= 1.0 - 1e-9);
            CHECK(component.conserved);
        }
    }
}

TEST_CASE("weight table text format") {
    std::istringstream in(
        "uniform\n"
        "seed 0 2 0.5\n"
        "dispatch 1 0 2.0\n");
    const ParsedTables tables = parse_weight_tables(in, 2, 3);
    CHECK(tables.seed(0, 2) == doctest::Approx(0.5));
    CHECK(tables.seed(0, 0) == doctest::Approx(1.0 / 3.0));
    CHECK(tables.dispatch(1, 0) == doctest::Approx(2.0));
    CHECK(tables.saw_dispatch);

    std::istringstream bad("seed 9 0 0.5\n");
    CHECK_THROWS_AS(parse_weight_tables(bad, 2, 3), ParseError);
}

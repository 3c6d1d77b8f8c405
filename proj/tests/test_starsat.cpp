#include <doctest.h>

#include <algorithm>
#include <sstream>

#include "estsat/errors.hpp"
#include "support.hpp"

using namespace estsat;
using namespace estsat::testing;

namespace {

// Independent counter of negatively prime solutions: boolean solutions
// where no variable at 0 can be flipped to 1 while keeping satisfaction
// (flipping 0 to 1 can only falsify a clause pinned by the negative
// literal, hence the name).
std::uint64_t count_nps(const CnfFormula& f) {
    std::uint64_t count = 0;
    for (const Valuation& solution : boolean_solutions(f)) {
        bool prime = true;
        Valuation flipped = solution;
        for (int x = 0; x < f.variable_count && prime; ++x) {
            if (flipped[static_cast<std::size_t>(x)] != 0) continue;
            flipped[static_cast<std::size_t>(x)] = 1;
            if (is_valid(f, flipped)) prime = false;
            flipped[static_cast<std::size_t>(x)] = 0;
        }
        if (prime) ++count;
    }
    return count;
}

CnfFormula triangle() {
    CnfFormula f;
    f.variable_count = 3;
    f.clauses = {{1, 2, 3}};
    return f;
}

// All eight sign patterns over three variables: unsatisfiable.
CnfFormula all_signs_unsat() {
    CnfFormula f;
    f.variable_count = 3;
    for (int mask = 0; mask < 8; ++mask) {
        std::vector<int> clause;
        for (int x = 0; x < 3; ++x) clause.push_back((mask >> x & 1) ? (x + 1) : -(x + 1));
        f.clauses.push_back(std::move(clause));
    }
    return f;
}

} // namespace

TEST_CASE("validity needs a true literal or two stars per clause") {
    const CnfFormula f = triangle();
    CHECK(is_valid(f, {kStar, kStar, kStar})); // the trivial core
    CHECK_FALSE(is_valid(f, {0, 0, kStar}));   // one star, no true literal
    CHECK(is_valid(f, {1, 0, 0}));
    CHECK(is_valid(f, {0, kStar, kStar}));

    for (const Valuation& solution : boolean_solutions(f)) CHECK(is_valid(f, solution));
}

TEST_CASE("star networks never have a {0,1} clique") {
    Rng rng(17);
    for (int round = 0; round < 15; ++round) {
        const CnfFormula f = random_satisfiable_3cnf(rng, 6);
        const SolutionNetwork net = star_network(f);
        for (int x = 0; x < net.variable_count; ++x)
            for (const auto& values : net.allowed[static_cast<std::size_t>(x)])
                CHECK(values != std::vector<Value>{0, 1});
    }

    // empty formula over one variable: the whole domain is one clique
    CnfFormula empty;
    empty.variable_count = 1;
    const SolutionNetwork net = star_network(empty);
    REQUIRE(net.size() == 3);
    CHECK(net.allowed_values(0, 0) == std::vector<Value>{0, 1, kStar});

    // positive unit clause: only {1} is valid, * alone is not
    CnfFormula unit;
    unit.variable_count = 1;
    unit.clauses = {{1}};
    const auto valuations = valid_valuations(unit);
    REQUIRE(valuations.size() == 1);
    CHECK(valuations[0] == Valuation{1});
}

TEST_CASE("parallel and serial valid-valuation enumeration agree") {
    Rng rng(18);
    for (int round = 0; round < 10; ++round) {
        const CnfFormula f = random_satisfiable_3cnf(rng, 7);
        CHECK(valid_valuations(f) == valid_valuations_serial(f));
    }
}

TEST_CASE("noticeable generator values of the improved weights") {
    const StarWeights w = StarWeights::from_rho(1, 0.25);
    const double s0 = w.s(0, 0), s1 = w.s(0, 1), sstar = w.s(0, kStar);

    const std::vector<Value> only0 = {0};
    const std::vector<Value> full = {0, 1, kStar};
    const std::vector<Value> zero_star = {0, kStar};

    CHECK(star_generator(w, 0, 0, only0) == doctest::Approx(1.0));
    for (Value a = 0; a <= kStar; ++a)
        CHECK(star_generator(w, 0, a, full) == doctest::Approx(w.s(0, a)));
    CHECK(star_generator(w, 0, 0, zero_star) == doctest::Approx(s0 + s1));
    CHECK(star_generator(w, 0, kStar, zero_star) == doctest::Approx(sstar));
    CHECK(star_generator(w, 0, 1, zero_star) == 0.0);
}

TEST_CASE("improved weights never exceed the maneva weights") {
    Rng rng(23);
    for (int round = 0; round < 20; ++round) {
        const CnfFormula f = random_satisfiable_3cnf(rng, 6);
        const double rho = uniform01(rng);
        const StarWeights improved = StarWeights::from_rho(f.variable_count, rho);
        const StarWeights maneva =
            StarWeights::from_rho(f.variable_count, rho, StarWeights::Mode::Maneva);
        for (Valuation sigma : valid_valuations(f)) {
            for (int x = 0; x < f.variable_count; ++x) {
                CHECK(star_weight(f, improved, sigma, x) <=
                      star_weight(f, maneva, sigma, x) + 1e-12);
            }
        }
    }
}

TEST_CASE("improved generator is almost unitary") {
    Rng rng(29);
    for (int round = 0; round < 20; ++round) {
        const CnfFormula f = random_satisfiable_3cnf(rng, 6);
        const StarWeights w = StarWeights::from_rho(f.variable_count, uniform01(rng));
        const SolutionNetwork net = star_network(f);
        for (int s = 0; s < static_cast<int>(net.size()); ++s) {
            for (int x = 0; x < net.variable_count; ++x) {
                const auto& delta = net.allowed_values(s, x);
                double total = 0.0;
                for (Value a : delta) total += star_generator(w, x, a, delta);
                if (delta == std::vector<Value>{kStar})
                    CHECK(total == doctest::Approx(w.s(x, kStar)).epsilon(1e-12));
                else
                    CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
            }
        }
    }
}

TEST_CASE("improved decomposer rows sum to the weight") {
    Rng rng(37);
    for (int round = 0; round < 15; ++round) {
        const CnfFormula f = random_satisfiable_3cnf(rng, 6);
        const StarWeights w = StarWeights::from_rho(f.variable_count, uniform01(rng));
        for (Valuation sigma : valid_valuations(f)) {
            for (int x = 0; x < f.variable_count; ++x) {
                double row = 0.0;
                for (Value a = 0; a <= kStar; ++a)
                    row += star_decomposer(f, w, sigma, x, a);
                CHECK(row == doctest::Approx(star_weight(f, w, sigma, x)).epsilon(1e-12));
            }
        }
    }
}

TEST_CASE("gamma is at least 1 on satisfiable formulas") {
    Rng rng(41);
    for (int round = 0; round < 30; ++round) {
        const CnfFormula f = random_satisfiable_3cnf(rng, 8);
        const StarWeights w = StarWeights::from_rho(f.variable_count, uniform01(rng));
        CHECK(gamma(f, w) >= 1.0 - 1e-9);
    }
}

TEST_CASE("gamma parallel/serial agreement") {
    Rng rng(43);
    const CnfFormula f = random_satisfiable_3cnf(rng, 8);
    const StarWeights w = StarWeights::from_rho(f.variable_count, 0.4);
    CHECK(gamma(f, w) == doctest::Approx(gamma_serial(f, w)).epsilon(1e-12));
}

TEST_CASE("unsatisfiable formulas can still carry weight below 1") {
    const CnfFormula f = all_signs_unsat();
    CHECK(boolean_solutions(f).empty());
    const double rho = 0.3;
    const StarWeights w = StarWeights::from_rho(f.variable_count, rho);
    // valid valuations: the trivial core plus the six single-boolean ones;
    // total rho^3 + 3 (1-rho) rho^2 = 0.216 at rho = 0.3
    CHECK(gamma(f, w) == doctest::Approx(0.216).epsilon(1e-12));
    CHECK(gamma(f, w) > 0.0);
    CHECK(gamma(f, w) < 1.0);
}

TEST_CASE("degenerate seeds (0,1,0) count negatively prime solutions") {
    Rng rng(47);
    for (int round = 0; round < 25; ++round) {
        const CnfFormula f = random_satisfiable_3cnf(rng, 7);
        StarWeights w = StarWeights::from_rho(f.variable_count, 0.0);
        for (auto& t : w.seed) t = {0.0, 1.0, 0.0};
        const double g = gamma(f, w);
        CHECK(g == doctest::Approx(static_cast<double>(count_nps(f))).epsilon(1e-9));
    }
}

TEST_CASE("cores: starring reaches a fixed point that is a cover") {
    const CnfFormula f = triangle();

    // every boolean solution of a single clause stars down to the trivial core
    for (const Valuation& solution : boolean_solutions(f)) {
        const Valuation core = core_of(f, solution);
        CHECK_FALSE(is_core_nontrivial(core));
    }

    CHECK(is_cover(f, {kStar, kStar, kStar}));

    CHECK_THROWS_AS(core_of(f, {0, 0, 0}), PreconditionError);       // not a solution
    CHECK_THROWS_AS(core_of(f, {kStar, kStar, 1}), PreconditionError); // not boolean
}

TEST_CASE("every core is a cover (exhaustive at small n)") {
    Rng rng(53);
    for (int round = 0; round < 25; ++round) {
        const CnfFormula f = random_satisfiable_3cnf(rng, 8);
        for (const Valuation& solution : boolean_solutions(f)) {
            const Valuation core = core_of(f, solution);
            CHECK(is_valid(f, core));
            CHECK(is_cover(f, core));
            CHECK(non_starred_count(core) <= non_starred_count(solution));
            // starring only stars: surviving values come from the solution
            for (std::size_t x = 0; x < core.size(); ++x)
                CHECK((core[x] == kStar || core[x] == solution[x]));
        }
    }
}

TEST_CASE("covers need not be cores") {
    // Fixture found by exhaustive search: (0, *, 1, 1, 1, *) is a cover of
    // this formula, yet the starring process started from any of its
    // boolean solutions never produces it.
    CnfFormula f;
    f.variable_count = 6;
    f.clauses = {{-3, 5, 4},  {3, -5, 1}, {-5, -3, -1}, {-3, -2, 6}, {-1, -5, 4},
                 {5, 1, -4},  {4, 1, -3}, {-6, -3, 2},  {6, 2, 5}};
    const Valuation v = {0, kStar, 1, 1, 1, kStar};
    CHECK(is_cover(f, v));
    CHECK(is_core_nontrivial(v));
    for (const Valuation& solution : boolean_solutions(f)) CHECK(core_of(f, solution) != v);
    // a valid valuation with a starrable non-starred variable is no cover
    CHECK_FALSE(is_cover(triangle(), {1, 1, 0}));
}

TEST_CASE("star covering: components with a boolean solution cover the unladen weights") {
    Rng rng(59);
    for (int round = 0; round < 10; ++round) {
        const CnfFormula f = random_satisfiable_3cnf(rng, 6);
        const StarWeights w = StarWeights::from_rho(f.variable_count, uniform01(rng));
        const SolutionNetwork net = star_network(f);
        for (const auto& component : net.components) {
            const bool has_boolean = std::any_of(
                component.begin(), component.end(), [&](int s) {
                    return is_boolean_solution(f,
                                               net.solutions[static_cast<std::size_t>(s)]);
                });
            if (!has_boolean) continue;
            const CoveringReport report = check_covering(
                net, component,
                [&](const Valuation& v) { return star_unladen(w, v); },
                [&](int s, const Valuation& v) {
                    return star_transfer(f, w, net.solutions[static_cast<std::size_t>(s)], v);
                });
            CHECK(report.covered);
        }
    }
}

TEST_CASE("DIMACS parsing") {
    std::istringstream in(
        "c example\n"
        "p cnf 3 2\n"
        "1 -2 3 0\n"
        "-1 2 0\n");
    const CnfFormula f = parse_dimacs(in);
    CHECK(f.variable_count == 3);
    REQUIRE(f.clauses.size() == 2);
    CHECK(f.clauses[0] == std::vector<int>{1, -2, 3});
    CHECK(f.clauses[1] == std::vector<int>{-1, 2});

    std::istringstream bad("p cnf 2 1\n1 5 0\n");
    CHECK_THROWS_AS(parse_dimacs(bad), ParseError);
    std::istringstream no_header("1 2 0\n");
    CHECK_THROWS_AS(parse_dimacs(no_header), ParseError);
}

TEST_CASE("maneva and improved rho seeds validate their invariants") {
    CHECK_NOTHROW(StarWeights::from_rho(3, 0.5).validate());
    CHECK_NOTHROW(StarWeights::from_rho(3, 0.5, StarWeights::Mode::Maneva).validate());
    CHECK_THROWS_AS(StarWeights::from_rho(3, 1.5), Error);

    StarWeights broken = StarWeights::from_rho(2, 0.5);
    broken.seed[0] = {0.9, 0.9, 0.9};
    CHECK_THROWS_AS(broken.validate(), Error);
}

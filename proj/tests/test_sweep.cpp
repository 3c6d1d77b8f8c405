#include <doctest.h>

#include <cmath>

#include "estsat/errors.hpp"
#include "estsat/moment.hpp"
#include "estsat/sweep.hpp"

using namespace estsat;

namespace {

// Golden-section refinement oracle for a locally unimodal maximum.
double golden_max(const std::function<double(double)>& f, double lo, double hi) {
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo, b = hi;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    for (int iter = 0; iter < 200; ++iter) {
        if (f(c) > f(d))
            b = d;
        else
            a = c;
        c = b - inv_phi * (b - a);
        d = a + inv_phi * (b - a);
    }
    return f(0.5 * (a + b));
}

} // namespace

TEST_CASE("paraboloid maximum is found and refined") {
    const Objective objective = [](std::span<const double> x) {
        const double dx = x[0] - 0.4321567;
        return -dx * dx;
    };
    Box box;
    box.axes = {{0.0, 1.0}};
    const SweepResult result = sweep_maximize(objective, box, 0.001, 1e-5);
    CHECK(result.refined);
    CHECK(std::fabs(result.argmax[0] - 0.4321567) <= 1e-5);
    CHECK(result.nonfinite == 0);

    // serial reference agrees bit for bit
    const SweepResult serial = sweep_maximize_serial(objective, box, 0.001, 1e-5);
    CHECK(serial.argmax[0] == result.argmax[0]);
    CHECK(serial.max_value == result.max_value);
}

TEST_CASE("multi-axis sweep with lexicographic tie-break") {
    // constant objective: every cell ties, the lexicographically smallest
    // corner must win
    const Objective flat = [](std::span<const double>) { return 1.0; };
    Box box;
    box.axes = {{0.25, 0.75}, {-1.0, 1.0}};
    const SweepResult result = sweep_maximize(flat, box, 0.25, 0.0);
    CHECK(result.argmax == std::vector<double>{0.25, -1.0});
    CHECK_FALSE(result.refined);
}

TEST_CASE("non-finite cells are excluded and counted") {
    const Objective partial = [](std::span<const double> x) {
        if (x[0] < 0.5) return std::numeric_limits<double>::quiet_NaN();
        return -x[0];
    };
    Box box;
    box.axes = {{0.0, 1.0}};
    const SweepResult result = sweep_maximize(partial, box, 0.125, 0.0);
    CHECK(result.nonfinite == 4);
    CHECK(result.argmax[0] == doctest::Approx(0.5));

    const Objective nowhere = [](std::span<const double>) {
        return std::numeric_limits<double>::infinity();
    };
    CHECK_THROWS_AS(sweep_maximize(nowhere, box, 0.5, 0.0), Error);
}

TEST_CASE("one-dimensional h scan cross-checked by golden section") {
    const double alpha = 4.419, a = 0.678206, rho = rho_of_a(a);
    for (double d_param : {0.0, 0.3}) {
        const Objective h_of_b = [&](std::span<const double> x) {
            return exponent_h({alpha, a, x[0], rho, d_param});
        };
        Box box;
        box.axes = {{0.0, 1.0 - a}};
        const SweepResult result = sweep_maximize(h_of_b, box, 0.001, 1e-6);
        CHECK(result.argmax[0] > 0.0);
        CHECK(result.argmax[0] < 1.0 - a);

        const double oracle = golden_max(
            [&](double b) { return exponent_h({alpha, a, b, rho, d_param}); },
            std::max(0.0, result.argmax[0] - 0.001),
            std::min(1.0 - a, result.argmax[0] + 0.001));
        CHECK(result.max_value == doctest::Approx(oracle).epsilon(1e-9));
    }
}

TEST_CASE("sweep is invariant under relabeling of axes") {
    const Objective forward = [](std::span<const double> x) {
        const double da = x[0] - 0.31, db = x[1] - 1.72;
        return -(da * da + 2.0 * db * db);
    };
    const Objective swapped = [&](std::span<const double> x) {
        return forward(std::vector<double>{x[1], x[0]});
    };
    Box fwd_box, swp_box;
    fwd_box.axes = {{0.0, 1.0}, {1.0, 2.0}};
    swp_box.axes = {{1.0, 2.0}, {0.0, 1.0}};
    const SweepResult a = sweep_maximize(forward, fwd_box, 0.01, 1e-4);
    const SweepResult b = sweep_maximize(swapped, swp_box, 0.01, 1e-4);
    CHECK(a.max_value == b.max_value);
    CHECK(a.argmax[0] == b.argmax[1]);
    CHECK(a.argmax[1] == b.argmax[0]);

    // runs repeat bit-identically
    const SweepResult again = sweep_maximize(forward, fwd_box, 0.01, 1e-4);
    CHECK(a.max_value == again.max_value);
    CHECK(a.argmax == again.argmax);
}

TEST_CASE("contour region collects cells above the threshold") {
    const Objective ridge = [](std::span<const double> x) { return -std::fabs(x[0] - 0.5); };
    Box box;
    box.axes = {{0.0, 1.0}};

    CHECK(contour_region(ridge, 1.0, box, 0.25).empty()); // everything below
    CHECK(contour_region(ridge, -10.0, box, 0.25).size() == 5); // full grid

    const auto cells = contour_region(ridge, -0.3, box, 0.25);
    REQUIRE(cells.size() == 3);
    CHECK(cells[0].coords[0] == doctest::Approx(0.25));
    CHECK(cells[1].coords[0] == doctest::Approx(0.5));
    CHECK(cells[2].coords[0] == doctest::Approx(0.75));
}

TEST_CASE("f plugin loading") {
    const FPlugin plugin = FPlugin::load(ESTSAT_TEST_PLUGIN);
    CHECK(plugin(4.45, 0.5, 2.0) == doctest::Approx(0.0));
    CHECK(plugin(4.45, 0.5, 4.0) == doctest::Approx(-1.0));

    CHECK_THROWS_AS(FPlugin::load("/nonexistent/path.so"), PluginError);

    // f + h sweep through the plugin: the machinery runs end to end
    const Objective fh = [&](std::span<const double> x) {
        // axes: alpha, a, b, r
        const double f_part = plugin(x[0], x[1], x[2] >= 0 ? x[3] : x[3]);
        const double h_part = exponent_h({x[0], x[1], x[2], rho_of_a(x[1]), 0.0});
        return f_part + h_part;
    };
    Box box;
    box.axes = {{4.419, 4.453}, {0.4, 0.6}, {0.0, 0.1}, {1.5, 2.5}};
    const SweepResult result = sweep_maximize(fh, box, 0.017, 0.0);
    CHECK(result.evaluated > 0);
    CHECK(std::isfinite(result.max_value));
}

TEST_CASE("the missing-f stub names the required interface") {
    const Objective stub = missing_f_stub();
    CHECK_THROWS_WITH_AS(stub(std::vector<double>{4.419, 0.5, 2.0}),
                         doctest::Contains("external formula required"), PluginError);
}

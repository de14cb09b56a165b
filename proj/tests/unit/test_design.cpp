#include <doctest.h>

#include <cmath>
#include <random>

#include "lostwork/balance.hpp"
#include "lostwork/design.hpp"
#include "support/generators.hpp"

using namespace lw;
using design::DesignSpace;
using design::ExtremumResult;
using design::Param;
using thermo::ProcessTimeline;

namespace {

// test-local builder: steady conduction with a prescribed entropy
// generation rate, so the action is T_a * tau * Sdot_g
ProcessTimeline conduction_for(double T_a, double tau, double Sdot_g) {
    double Qdot = 2.0 * T_a * Sdot_g;
    thermo::SystemSnapshot snap;
    snap.stationary = true;
    snap.ambient.T_a = T_a;
    snap.baths = {{"hot", 2.0 * T_a, Qdot}, {"cold", T_a, -Qdot}};
    return gen::constant_timeline(snap, tau);
}

// Sdot_g(x) = a/x + b x, the two-term irreversibility tradeoff
DesignSpace tradeoff_space(double a, double b, double T_a, double tau,
                           double scale = 1.0) {
    DesignSpace ds;
    ds.params = {{"x", 0.5, 8.0}};
    ds.builder = [a, b, T_a, tau, scale](std::span<const double> x) {
        return conduction_for(T_a, tau, scale * (a / x[0] + b * x[0]));
    };
    return ds;
}

// W_lambda(theta) = (theta - 1)^2 + 5 J
DesignSpace quadratic_space(double T_a = 300.0, double tau = 1.0) {
    DesignSpace ds;
    ds.params = {{"theta", -10.0, 10.0}};
    ds.builder = [T_a, tau](std::span<const double> x) {
        double W = (x[0] - 1.0) * (x[0] - 1.0) + 5.0;
        return conduction_for(T_a, tau, W / (T_a * tau));
    };
    return ds;
}

}  // namespace

TEST_CASE("action: lifetime integral of lost power") {
    SUBCASE("reversible timeline") {
        thermo::SystemSnapshot snap;
        snap.stationary = true;
        snap.ambient.T_a = 300;
        CHECK(design::action(gen::constant_timeline(snap, 10.0)) == 0.0);
    }
    SUBCASE("steady conduction, tau = 10") {
        auto tl =
            gen::constant_timeline(gen::conduction_snapshot(600, 300, 1000, 300), 10.0);
        CHECK(design::action(tl) == doctest::Approx(5000.0).epsilon(1e-12));
    }
    SUBCASE("scales linearly with flows") {
        auto snap = gen::conduction_snapshot(600, 300, 1000, 300);
        auto tl = gen::constant_timeline(snap, 10.0);
        for (auto& s : tl.snapshots)
            for (auto& b : s.baths) b.Qdot *= 3.0;
        CHECK(design::action(tl) == doctest::Approx(15000.0).epsilon(1e-12));
    }
    SUBCASE("invalid timeline is rejected") {
        ProcessTimeline tl;
        tl.tau = 1.0;
        CHECK_THROWS_AS(design::action(tl), Error);
    }
}

TEST_CASE("minimize_lost_work: convex quadratic to 1e-6") {
    DesignSpace ds = quadratic_space();
    ExtremumResult res = design::minimize_lost_work(ds, 200, 1e-9);
    CHECK(std::abs(res.params_star[0] - 1.0) <= 1e-6);
    CHECK(std::abs(res.W_lambda_star - 5.0) <= 1e-6);
    CHECK(res.evaluations <= 200);
    CHECK(res.failed_evaluations == 0);
    CHECK(res.params_star[0] >= ds.params[0].lower);
    CHECK(res.params_star[0] <= ds.params[0].upper);
}

TEST_CASE("minimize_lost_work: a/x + b x tradeoff against a grid oracle") {
    const double T_a = 300.0, tau = 10.0;
    DesignSpace ds = tradeoff_space(4.0, 1.0, T_a, tau);
    ExtremumResult res = design::minimize_lost_work(ds, 200, 1e-6);

    // brute-force grid over [0.5, 8] at 1e5 points
    double best_x = 0, best_f = 1e300;
    for (int i = 0; i < 100000; ++i) {
        double x = 0.5 + 7.5 * i / 99999.0;
        double f = 4.0 / x + x;
        if (f < best_f) {
            best_f = f;
            best_x = x;
        }
    }
    CHECK(std::abs(best_x - 2.0) <= 1e-4);  // analytic x* = sqrt(a/b)
    CHECK(std::abs(res.params_star[0] - best_x) <= 1e-3);
    CHECK(std::abs(res.params_star[0] - 2.0) <= 1e-3);
    // minimum value in Sdot_g units is 4, so W* = T_a * 4 * tau
    CHECK(std::abs(res.W_lambda_star / (T_a * tau) - 4.0) <= 1e-6);
    CHECK(res.evaluations <= 200);
}

TEST_CASE("minimize_lost_work: constant objective stays put") {
    DesignSpace ds;
    ds.params = {{"x", -1.0, 3.0}};
    ds.builder = [](std::span<const double>) {
        return conduction_for(300.0, 1.0, 1.0);
    };
    ExtremumResult res = design::minimize_lost_work(ds, 200, 1e-8);
    CHECK(res.params_star[0] >= -1.0);
    CHECK(res.params_star[0] <= 3.0);
    CHECK(res.stationarity <= 1e-9);
}

TEST_CASE("argmin is invariant under positive objective scaling") {
    ExtremumResult base =
        design::minimize_lost_work(tradeoff_space(4, 1, 300, 10, 1.0), 200, 1e-6);
    for (double k : {0.1, 10.0}) {
        ExtremumResult scaled = design::minimize_lost_work(
            tradeoff_space(4, 1, 300, 10, k), 200, 1e-6);
        CHECK(std::abs(scaled.params_star[0] - base.params_star[0]) <= 1e-6);
    }
}

TEST_CASE("no better point in a Monte-Carlo audit") {
    std::mt19937_64 rng(47);
    const double T_a = 300.0, tau = 10.0;

    DesignSpace spaces[] = {tradeoff_space(4, 1, T_a, tau), quadratic_space()};
    for (DesignSpace& ds : spaces) {
        ExtremumResult res = design::minimize_lost_work(ds, 200, 1e-8);
        double f_star = design::action(ds.builder(res.params_star));
        std::uniform_real_distribution<double> u(ds.params[0].lower,
                                                 ds.params[0].upper);
        for (int i = 0; i < 1000; ++i) {
            double x = u(rng);
            double f = design::action(ds.builder(std::vector<double>{x}));
            CHECK(f_star <= f + 1e-6 * std::max(1.0, std::abs(f)));
        }
    }
}

TEST_CASE("lost work and T_a S_g have the same argmin") {
    const double T_a = 300.0, tau = 10.0;
    DesignSpace ds = tradeoff_space(4, 1, T_a, tau);

    // same fine grid, two objective routes
    int best_w = -1, best_s = -1;
    double fw = 1e300, fs = 1e300;
    for (int i = 0; i < 2001; ++i) {
        double x = 0.5 + 7.5 * i / 2000.0;
        ProcessTimeline tl = ds.builder(std::vector<double>{x});
        double w = design::action(tl);
        double s = T_a * balance::integrate_over_lifetime(
                             tl, [](const thermo::SystemSnapshot& snap) {
                                 return balance::entropy_generation_rate(snap);
                             });
        if (w < fw) { fw = w; best_w = i; }
        if (s < fs) { fs = s; best_s = i; }
    }
    CHECK(best_w == best_s);

    ExtremumResult res = design::minimize_lost_work(ds, 200, 1e-6);
    CHECK(std::abs(res.params_star[0] - (0.5 + 7.5 * best_w / 2000.0)) <= 5e-3);
}

TEST_CASE("environment viewpoint finds the maximum") {
    DesignSpace ds;
    ds.params = {{"theta", -10.0, 10.0}};
    ds.builder = [](std::span<const double> x) {
        double W = -(x[0] - 1.0) * (x[0] - 1.0) + 10.0;  // peak at theta = 1
        return conduction_for(300.0, 1.0, W / 300.0);
    };
    design::SearchOptions opts;
    opts.viewpoint = design::Viewpoint::environment;
    ExtremumResult res = design::minimize_lost_work(ds, 200, 1e-9, opts);
    CHECK(std::abs(res.params_star[0] - 1.0) <= 1e-6);
    CHECK(std::abs(res.W_lambda_star - 10.0) <= 1e-6);
}

TEST_CASE("failed probe points are skipped and recorded") {
    DesignSpace ds;
    ds.params = {{"x", 0.5, 8.0}};
    ds.builder = [](std::span<const double> x) {
        if (x[0] < 1.0) throw Error("unbuildable", "region below 1 fails");
        return conduction_for(300.0, 1.0, (x[0] - 3.0) * (x[0] - 3.0) + 1.0);
    };
    ExtremumResult res = design::minimize_lost_work(ds, 200, 1e-9);
    CHECK(std::abs(res.params_star[0] - 3.0) <= 1e-6);

    DesignSpace broken;
    broken.params = {{"x", 0.0, 1.0}};
    broken.builder = [](std::span<const double>) -> ProcessTimeline {
        throw Error("unbuildable", "always fails");
    };
    try {
        design::minimize_lost_work(broken, 200, 1e-9);
        FAIL("expected design_evaluation_failed");
    } catch (const Error& e) {
        CHECK(e.code() == "design_evaluation_failed");
    }
}

TEST_CASE("preconditions of the search") {
    DesignSpace ds = quadratic_space();
    CHECK_THROWS_AS(design::minimize_lost_work(ds, 49, 1e-6), Error);
    DesignSpace empty;
    CHECK_THROWS_AS(design::minimize_lost_work(empty, 200, 1e-6), Error);
    DesignSpace five;
    five.params = std::vector<Param>(5, Param{"p", 0.0, 1.0});
    five.builder = ds.builder;
    CHECK_THROWS_AS(design::minimize_lost_work(five, 200, 1e-6), Error);
}

TEST_CASE("stationarity_check") {
    const double T_a = 300.0, tau = 10.0;

    SUBCASE("zero at the analytic quadratic minimum") {
        DesignSpace ds = quadratic_space();
        CHECK(design::stationarity_check(ds, std::vector<double>{1.0}) <= 1e-6);
    }
    SUBCASE("zero at the analytic tradeoff minimum") {
        DesignSpace ds = tradeoff_space(4, 1, T_a, tau);
        CHECK(design::stationarity_check(ds, std::vector<double>{2.0}) <=
              1e-4 * T_a * tau);
    }
    SUBCASE("analytic slope away from the minimum") {
        // d/dx (4/x + x) at x = 1 is -3, so |dA/dx| = 3 T_a tau
        DesignSpace ds = tradeoff_space(4, 1, T_a, tau);
        double stat = design::stationarity_check(ds, std::vector<double>{1.0});
        CHECK(stat == doctest::Approx(3.0 * T_a * tau).epsilon(1e-3));
    }
    SUBCASE("points near the bounds are rejected") {
        DesignSpace ds = tradeoff_space(4, 1, T_a, tau);
        try {
            design::stationarity_check(ds, std::vector<double>{0.5001});
            FAIL("expected fd_step_out_of_bounds");
        } catch (const Error& e) {
            CHECK(e.code() == "fd_step_out_of_bounds");
        }
    }
}

TEST_CASE("stationarity at found optima is small") {
    // bounds: 10x the placement error |x*-argmin| times the curvature of the
    // action, plus the finite-difference floor
    const double T_a = 300.0, tau = 10.0;
    ExtremumResult quad = design::minimize_lost_work(quadratic_space(), 200, 1e-9);
    CHECK(quad.stationarity <= 10.0 * (2.0 * 1e-6 + 1e-9));

    ExtremumResult trade =
        design::minimize_lost_work(tradeoff_space(4, 1, T_a, tau), 200, 1e-6);
    // curvature of the action at x* = 2: T_a tau * 2a/x^3 = 3000
    CHECK(trade.stationarity <= 10.0 * (3000.0 * 1e-3 + 1e-4 * T_a * tau));
}

#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "wpan/link_adapt.hpp"
#include "wpan/phy.hpp"

using namespace wpan;

namespace {

const ContentionTable& shared_table() {
    static const ContentionTable table = [] {
        std::vector<double> loads;
        for (int i = 1; i <= 10; ++i) loads.push_back(i / 10.0);
        loads.push_back(100 * 4.256e-3 / 983.04e-3);
        std::sort(loads.begin(), loads.end());
        const std::vector<int> payloads = {10, 20, 50, 100, 120, 123};
        SimConfig base;
        base.nodes = 100;
        base.superframes = 400;
        base.seed = 42;
        return build_contention_table(loads, payloads, base, MacTiming{}, MacParams{});
    }();
    return table;
}

EnergyCurve synthetic(double level, double a, double slope, const std::vector<double>& grid) {
    EnergyCurve c;
    c.tx_level_dbm = level;
    for (double x : grid) c.samples.push_back({x, a + slope * x, 0.0, 1.0});
    return c;
}

}  // namespace

TEST_CASE("pathloss grid is inclusive") {
    const auto g = pathloss_grid();
    CHECK(g.size() == 241);
    CHECK(g.front() == 40.0);
    CHECK(g.back() == 100.0);
    CHECK(pathloss_grid(0, 1, 0.5) == std::vector<double>{0, 0.5, 1});
    CHECK_THROWS(pathloss_grid(10, 0, 1));
    CHECK_THROWS(pathloss_grid(0, 10, 0));
}

TEST_CASE("derived case-study load") {
    CHECK(scenario_load(ModelParams{}, Scenario{}) == doctest::Approx(100 * 4.256e-3 / 983.04e-3).epsilon(1e-14));
    CHECK(scenario_load(ModelParams{}, Scenario{}) == doctest::Approx(0.433).epsilon(1e-3));
}

TEST_CASE("synthetic linear curves cross where expected") {
    const auto grid = pathloss_grid(0, 100, 0.5);
    for (double b : {10.0, 27.3, 40.1}) {
        const double a = 1.0;
        // a + x = b + x / 2  at  x = 2 (b - a)
        const std::vector<EnergyCurve> curves = {synthetic(-10, a, 1.0, grid), synthetic(0, b, 0.5, grid)};
        const auto t = compute_thresholds(curves);
        REQUIRE(t.crossings.size() == 1);
        CHECK(std::abs(t.crossings[0] - 2 * (b - a)) <= 0.5);
        CHECK_FALSE(t.has_warning());
    }
}

TEST_CASE("identical curves leave the crossing on a grid edge with a warning") {
    const auto grid = pathloss_grid(40, 100, 1);
    const std::vector<EnergyCurve> curves = {synthetic(-10, 5, 1, grid), synthetic(0, 5, 1, grid)};
    const auto t = compute_thresholds(curves);
    REQUIRE(t.crossings.size() == 1);
    CHECK(t.at_edge[0]);
    CHECK(t.has_warning());
    CHECK((t.crossings[0] == 40.0 || t.crossings[0] == 100.0));
}

TEST_CASE("curves on different grids are rejected") {
    const std::vector<EnergyCurve> curves = {synthetic(-10, 1, 1, pathloss_grid(0, 10, 1)),
                                             synthetic(0, 1, 1, pathloss_grid(0, 10, 0.5))};
    CHECK_THROWS(compute_thresholds(curves));
}

TEST_CASE("energy curves are flat and ordered by transmit power on clean links") {
    const ModelParams p;
    const auto grid = pathloss_grid(20, 40, 1);
    const auto curves = energy_curves(p, Scenario{}, shared_table(), grid);
    REQUIRE(curves.size() == 8);
    for (std::size_t k = 0; k < curves.size(); ++k) {
        const auto& s = curves[k].samples;
        CHECK(s.front().energy_per_bit == doctest::Approx(s.back().energy_per_bit).epsilon(1e-9));
        if (k > 0) CHECK(s.front().energy_per_bit > curves[k - 1].samples.front().energy_per_bit);
        for (const auto& x : s) {
            CHECK(std::isfinite(x.energy_per_bit));
            CHECK(x.energy_per_bit > 0);
        }
    }
}

TEST_CASE("threshold-selected level is the per-pathloss argmin") {
    const ModelParams p;
    const auto grid = pathloss_grid();
    const auto curves = energy_curves(p, Scenario{}, shared_table(), grid);
    const auto t = compute_thresholds(curves);
    REQUIRE(t.crossings.size() == 7);
    CHECK(std::is_sorted(t.crossings.begin(), t.crossings.end()));
    CHECK_FALSE(t.has_warning());

    auto argmin = [&](std::size_t j) {
        std::size_t best = 0;
        for (std::size_t k = 1; k < curves.size(); ++k)
            if (curves[k].samples[j].energy_per_bit < curves[best].samples[j].energy_per_bit) best = k;
        return curves[best].tx_level_dbm;
    };
    for (std::size_t j = 1; j + 1 < grid.size(); ++j) {
        if (grid[j] > t.feasibility_limit_db) break;
        const double chosen = select_tx_level(p.radio, t.crossings, grid[j]);
        const bool ok = chosen == argmin(j) || chosen == argmin(j - 1) || chosen == argmin(j + 1);
        CHECK_MESSAGE(ok, "pathloss ", grid[j]);
    }

    // maximum power is the efficient choice up to about 88 dB
    CHECK(std::abs(t.crossings.back() - 88.0) < 1.0);
    CHECK(t.feasibility_limit_db > t.crossings.back());
    CHECK(max_adaptation_saving(curves, t) > 0);
}

TEST_CASE("adaptation never does worse than fixed maximum power") {
    const ModelParams p;
    const auto& table = shared_table();
    const auto adaptive = evaluate_case_study(p, Scenario{}, table);
    CaseStudyOptions fixed_opts;
    fixed_opts.fixed_tx_level_dbm = 0.0;
    const auto fixed = evaluate_case_study(p, Scenario{}, table, fixed_opts);
    CHECK(adaptive.summary.energy_per_bit <= fixed.summary.energy_per_bit);
    CHECK(adaptive.summary.p_avg <= fixed.summary.p_avg);
}

TEST_CASE("case study aggregates the samples") {
    const ModelParams p;
    const auto r = evaluate_case_study(p, Scenario{}, shared_table());
    REQUIRE(r.samples.size() == 256);
    double w = 0, power = 0, fail = 0, delay = 0;
    for (std::size_t i = 0; i < r.samples.size(); ++i) {
        w += r.weights[i];
        power += r.weights[i] * r.samples[i].report.p_avg;
        fail += r.weights[i] * r.samples[i].report.pr_fail;
        delay += r.weights[i] * r.samples[i].report.delay;
        CHECK(r.samples[i].point.pathloss_db > 55);
        CHECK(r.samples[i].point.pathloss_db < 95);
    }
    CHECK(w == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(r.summary.p_avg == doctest::Approx(power).epsilon(1e-12));
    CHECK(r.summary.pr_fail == doctest::Approx(fail).epsilon(1e-12));
    CHECK(r.summary.delay == doctest::Approx(delay).epsilon(1e-12));
    CHECK(r.load == doctest::Approx(0.4329).epsilon(1e-3));
    const auto& b = r.summary.breakdown;
    double sum = 0;
    for (auto ph : kPhases) sum += b.energy(ph);
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));

    Scenario fixed;
    fixed.pathloss = FixedPathloss{70};
    const auto one = evaluate_case_study(p, fixed, shared_table());
    REQUIRE(one.samples.size() == 1);
    CHECK(one.summary.energy_per_bit == doctest::Approx(one.samples[0].report.energy_per_bit).epsilon(1e-12));
}

TEST_CASE("packet size sweep") {
    const ModelParams p;
    const auto& table = shared_table();
    const std::vector<int> sizes = {10, 20, 50, 100, 123};
    const auto pts = packet_size_sweep(p, Scenario{}, sizes, table);
    REQUIRE(pts.size() == sizes.size());
    for (std::size_t i = 1; i < pts.size(); ++i) {
        CHECK(pts[i].energy_per_bit < pts[i - 1].energy_per_bit);
        CHECK(pts[i].load < pts[i - 1].load);
    }

    const auto low = packet_size_sweep(p, Scenario{}, sizes, table, 0.3);
    const auto high = packet_size_sweep(p, Scenario{}, sizes, table, 0.45);
    for (std::size_t i = 0; i < sizes.size(); ++i) CHECK(high[i].energy_per_bit > low[i].energy_per_bit);

    const std::vector<int> bad = {0};
    CHECK_THROWS(packet_size_sweep(p, Scenario{}, bad, table));
    const std::vector<int> too_big = {124};
    CHECK_THROWS(packet_size_sweep(p, Scenario{}, too_big, table));
}

TEST_CASE("a single-size sweep at fixed pathloss equals the best curve value") {
    const ModelParams p;
    Scenario s;
    s.pathloss = FixedPathloss{80};
    const std::vector<int> sizes = {120};
    const auto pts = packet_size_sweep(p, s, sizes, shared_table());
    REQUIRE(pts.size() == 1);
    const std::vector<double> grid = {80};
    double best = INFINITY;
    for (const auto& c : energy_curves(p, s, shared_table(), grid)) best = std::min(best, c.samples[0].energy_per_bit);
    CHECK(pts[0].energy_per_bit == doctest::Approx(best).epsilon(1e-12));
}

TEST_CASE("case-study what-if") {
    const ModelParams p;
    const auto identity = what_if_case_study(p, Scenario{}, shared_table(), {});
    CHECK(identity.power_reduction == 0.0);
    WhatIfModifiers half;
    half.transition_scale = 0.5;
    const auto w = what_if_case_study(p, Scenario{}, shared_table(), half);
    CHECK(w.power_reduction > 0.0);
    CHECK(w.power_reduction < 0.5);
}

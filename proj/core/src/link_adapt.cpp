#include "wpan/link_adapt.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "wpan/phy.hpp"

namespace wpan {

namespace {

struct Node {
    double pathloss_db;
    double weight;
};

std::vector<Node> quadrature(const PathlossDistribution& dist, std::size_t points) {
    if (const auto* fixed = std::get_if<FixedPathloss>(&dist)) return {{fixed->db, 1.0}};
    if (points < 1) throw std::invalid_argument("quadrature_points must be >= 1");
    const auto& u = std::get<UniformPathloss>(dist);
    const double h = (u.high_db - u.low_db) / static_cast<double>(points);
    std::vector<Node> out;
    out.reserve(points);
    for (std::size_t i = 0; i < points; ++i)
        out.push_back({u.low_db + (static_cast<double>(i) + 0.5) * h, 1.0 / static_cast<double>(points)});
    return out;
}

// Finite-safe energy difference; NaN when both sides are infeasible.
double difference(double a, double b) {
    if (std::isinf(a) && std::isinf(b)) return std::numeric_limits<double>::quiet_NaN();
    return a - b;
}

double energy_at(const EnergyCurve& c, std::size_t j) { return c.samples[j].energy_per_bit; }

}  // namespace

bool ThresholdSet::has_warning() const { return std::find(at_edge.begin(), at_edge.end(), true) != at_edge.end(); }

std::vector<double> pathloss_grid(double low_db, double high_db, double step_db) {
    if (!(step_db > 0) || !(high_db >= low_db)) throw std::invalid_argument("pathloss_grid: bad range");
    const auto n = static_cast<std::size_t>(std::floor((high_db - low_db) / step_db + 1e-9)) + 1;
    std::vector<double> grid(n);
    for (std::size_t i = 0; i < n; ++i) grid[i] = low_db + static_cast<double>(i) * step_db;
    return grid;
}

double scenario_load(const ModelParams& params, const Scenario& scenario) {
    return scenario.nodes_per_channel * packet_airtime(params.timing, params.mac, scenario.payload_bytes) /
           inter_beacon_period(params.timing, scenario.beacon_order);
}

EnergyCurve energy_curve(const ModelParams& params, const Scenario& scenario, double tx_level_dbm,
                         const ContentionTable& table, std::span<const double> grid, std::optional<double> load,
                         const WhatIfModifiers& modifiers) {
    params.validate();
    scenario.validate();
    params.radio.tx_power(tx_level_dbm);
    for (std::size_t i = 1; i < grid.size(); ++i)
        if (!(grid[i - 1] < grid[i])) throw std::invalid_argument("energy_curve: grid must be strictly ascending");

    EnergyCurve curve;
    curve.tx_level_dbm = tx_level_dbm;
    curve.load = load.value_or(scenario_load(params, scenario));
    const ContentionStats stats = lookup_contention(table, curve.load, scenario.payload_bytes);
    curve.samples.reserve(grid.size());
    for (double x : grid) {
        const auto ev = evaluate_link(params, stats, {x, tx_level_dbm, scenario.payload_bytes, scenario.beacon_order},
                                      modifiers);
        curve.samples.push_back({x, ev.report.energy_per_bit, ev.report.pr_fail, ev.report.delay});
    }
    return curve;
}

std::vector<EnergyCurve> energy_curves(const ModelParams& params, const Scenario& scenario,
                                       const ContentionTable& table, std::span<const double> grid,
                                       std::optional<double> load, const WhatIfModifiers& modifiers) {
    std::vector<EnergyCurve> curves;
    for (double level : params.radio.levels_ascending())
        curves.push_back(energy_curve(params, scenario, level, table, grid, load, modifiers));
    return curves;
}

ThresholdSet compute_thresholds(std::span<const EnergyCurve> input, double feasibility_factor) {
    if (input.empty()) throw std::invalid_argument("compute_thresholds: no curves");
    std::vector<EnergyCurve> curves(input.begin(), input.end());
    std::sort(curves.begin(), curves.end(),
              [](const EnergyCurve& a, const EnergyCurve& b) { return a.tx_level_dbm < b.tx_level_dbm; });
    const std::size_t n = curves.front().samples.size();
    if (n == 0) throw std::invalid_argument("compute_thresholds: empty curve");
    for (const auto& c : curves) {
        if (c.samples.size() != n) throw std::invalid_argument("compute_thresholds: curves use different grids");
        for (std::size_t j = 0; j < n; ++j)
            if (c.samples[j].pathloss_db != curves.front().samples[j].pathloss_db)
                throw std::invalid_argument("compute_thresholds: curves use different grids");
    }
    const auto& grid_of = curves.front().samples;

    ThresholdSet out;
    for (std::size_t k = 0; k + 1 < curves.size(); ++k) {
        const auto& lower = curves[k];
        const auto& upper = curves[k + 1];
        std::optional<double> crossing;
        bool lower_ever_better = false;
        for (std::size_t j = 0; j < n && !crossing; ++j) {
            const double d = difference(energy_at(lower, j), energy_at(upper, j));
            if (d < 0) {
                lower_ever_better = true;
                continue;
            }
            if (!lower_ever_better) continue;
            // Sign change between j - 1 and j.
            const double d0 = difference(energy_at(lower, j - 1), energy_at(upper, j - 1));
            const double x0 = grid_of[j - 1].pathloss_db;
            const double x1 = grid_of[j].pathloss_db;
            crossing = std::isfinite(d) ? x0 + (x1 - x0) * (-d0) / (d - d0) : x0;
        }
        if (crossing) {
            out.crossings.push_back(*crossing);
            out.at_edge.push_back(false);
        } else {
            out.crossings.push_back(lower_ever_better ? grid_of.back().pathloss_db : grid_of.front().pathloss_db);
            out.at_edge.push_back(true);
        }
    }
    // A level that is never optimal collapses onto its neighbour.
    for (std::size_t k = 1; k < out.crossings.size(); ++k)
        out.crossings[k] = std::max(out.crossings[k], out.crossings[k - 1]);

    const auto& top = curves.back().samples;
    std::size_t best = 0;
    for (std::size_t j = 1; j < n; ++j)
        if (top[j].energy_per_bit < top[best].energy_per_bit) best = j;
    const double limit = feasibility_factor * top[best].energy_per_bit;
    out.feasibility_limit_db = top.back().pathloss_db;
    for (std::size_t j = best + 1; j < n; ++j) {
        if (top[j].energy_per_bit > limit) {
            const double e0 = top[j - 1].energy_per_bit;
            const double e1 = top[j].energy_per_bit;
            const double x0 = top[j - 1].pathloss_db;
            const double x1 = top[j].pathloss_db;
            out.feasibility_limit_db = std::isfinite(e1) ? x0 + (x1 - x0) * (limit - e0) / (e1 - e0) : x0;
            break;
        }
    }
    return out;
}

double max_adaptation_saving(std::span<const EnergyCurve> curves, const ThresholdSet& thresholds) {
    if (curves.empty()) return 0.0;
    std::vector<const EnergyCurve*> sorted;
    for (const auto& c : curves) sorted.push_back(&c);
    std::sort(sorted.begin(), sorted.end(),
              [](const EnergyCurve* a, const EnergyCurve* b) { return a->tx_level_dbm < b->tx_level_dbm; });
    if (thresholds.crossings.size() + 1 != sorted.size())
        throw std::invalid_argument("max_adaptation_saving: threshold count does not match the curves");
    const auto& top = sorted.back()->samples;
    double best = 0.0;
    for (std::size_t j = 0; j < top.size(); ++j) {
        std::size_t k = 0;
        while (k < thresholds.crossings.size() && top[j].pathloss_db >= thresholds.crossings[k]) ++k;
        const double e_top = top[j].energy_per_bit;
        const double e_sel = sorted[k]->samples[j].energy_per_bit;
        if (std::isfinite(e_top) && std::isfinite(e_sel) && e_top > 0) best = std::max(best, (e_top - e_sel) / e_top);
    }
    return best;
}

CaseStudyResult evaluate_case_study(const ModelParams& params, const Scenario& scenario,
                                    const ContentionTable& table, const CaseStudyOptions& options) {
    params.validate();
    scenario.validate();
    CaseStudyResult out;
    out.load = options.load.value_or(scenario_load(params, scenario));
    out.contention = lookup_contention(table, out.load, scenario.payload_bytes);

    if (!options.fixed_tx_level_dbm) {
        const auto curves = energy_curves(params, scenario, table, options.grid, out.load, options.modifiers);
        out.thresholds = compute_thresholds(curves, options.feasibility_factor);
    }

    double e_sum = 0.0;
    double delivered = 0.0;
    for (const auto& node : quadrature(scenario.pathloss, options.quadrature_points)) {
        const double level = options.fixed_tx_level_dbm
                                 ? *options.fixed_tx_level_dbm
                                 : select_tx_level(params.radio, out.thresholds.crossings, node.pathloss_db);
        auto ev = evaluate_link(params, out.contention,
                                {node.pathloss_db, level, scenario.payload_bytes, scenario.beacon_order},
                                options.modifiers);
        const auto& r = ev.report;
        auto& s = out.summary;
        s.occupancy.t_idle += node.weight * r.occupancy.t_idle;
        s.occupancy.t_tx += node.weight * r.occupancy.t_tx;
        s.occupancy.t_rx += node.weight * r.occupancy.t_rx;
        s.p_avg += node.weight * r.p_avg;
        s.pr_fail += node.weight * r.pr_fail;
        s.delay += node.weight * r.delay;
        out.mean_energy_per_bit += node.weight * r.energy_per_bit;
        for (std::size_t i = 0; i < kPhaseCount; ++i) {
            out.phase_energy[i] += node.weight * ev.phase_energy[i];
            out.phase_time[i] += node.weight * ev.phase_time[i];
        }
        e_sum += node.weight * r.p_avg * ev.t_ib;
        delivered += node.weight * (1.0 - r.pr_fail);
        out.samples.push_back(std::move(ev));
        out.weights.push_back(node.weight);
    }
    out.summary.energy_per_bit = delivered > 0 ? e_sum / (8.0 * scenario.payload_bytes * delivered)
                                               : std::numeric_limits<double>::infinity();
    out.summary.breakdown = phase_breakdown(out.phase_energy, out.phase_time);
    return out;
}

std::vector<SizePoint> packet_size_sweep(const ModelParams& params, const Scenario& scenario,
                                         std::span<const int> sizes, const ContentionTable& table,
                                         std::optional<double> reference_load, std::size_t quadrature_points) {
    params.validate();
    scenario.validate();
    for (int size : sizes)
        if (size < 1 || size > kMaxPayloadBytes)
            throw std::invalid_argument("packet_size_sweep: payload " + std::to_string(size) + " outside [1, " +
                                        std::to_string(kMaxPayloadBytes) + "]");

    const double ref_load = reference_load.value_or(scenario_load(params, scenario));
    const double lo = params.mac.l_overhead;
    const double ref_ratio = (lo + scenario.payload_bytes) / scenario.payload_bytes;
    const auto levels = params.radio.levels_ascending();
    const auto nodes = quadrature(scenario.pathloss, quadrature_points);

    std::vector<SizePoint> out;
    for (int size : sizes) {
        const double load = ref_load * ((lo + size) / size) / ref_ratio;
        const ContentionStats stats = lookup_contention(table, load, size);
        double e_sum = 0.0;
        double delivered = 0.0;
        for (const auto& node : nodes) {
            std::optional<EnergyReport> best;
            double best_t_ib = 0.0;
            for (double level : levels) {
                const auto ev =
                    evaluate_link(params, stats, {node.pathloss_db, level, size, scenario.beacon_order});
                if (!best || ev.report.energy_per_bit < best->energy_per_bit) {
                    best = ev.report;
                    best_t_ib = ev.t_ib;
                }
            }
            e_sum += node.weight * best->p_avg * best_t_ib;
            delivered += node.weight * (1.0 - best->pr_fail);
        }
        const double epb =
            delivered > 0 ? e_sum / (8.0 * size * delivered) : std::numeric_limits<double>::infinity();
        out.push_back({size, load, epb});
    }
    return out;
}

CaseStudyWhatIf what_if_case_study(const ModelParams& params, const Scenario& scenario,
                                   const ContentionTable& table, const WhatIfModifiers& modifiers,
                                   CaseStudyOptions options) {
    modifiers.validate();
    CaseStudyWhatIf out;
    options.modifiers = {};
    out.baseline = evaluate_case_study(params, scenario, table, options);
    options.modifiers = modifiers;
    out.modified = evaluate_case_study(params, scenario, table, options);
    const double base = out.baseline.summary.p_avg;
    out.power_reduction = base > 0 ? (base - out.modified.summary.p_avg) / base : 0.0;
    return out;
}

}  // namespace wpan

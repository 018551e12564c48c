#pragma once

// Transmit-power link adaptation and scenario-level evaluation.
//
// For every transmit level the energy per bit is tabulated against
// pathloss; the energy-optimal switching points are where adjacent level
// curves cross. A scenario is evaluated by selecting a level per pathloss
// (channel inversion) and taking expectations over the pathloss
// distribution with a midpoint rule.

#include <optional>
#include <span>
#include <vector>

#include "wpan/contention_table.hpp"
#include "wpan/energy_model.hpp"
#include "wpan/params.hpp"

namespace wpan {

struct CurveSample {
    double pathloss_db = 0.0;
    double energy_per_bit = 0.0;
    double pr_fail = 0.0;
    double delay = 0.0;
};

struct EnergyCurve {
    double tx_level_dbm = 0.0;
    double load = 0.0;
    std::vector<CurveSample> samples;  ///< ascending pathloss
};

struct ThresholdSet {
    /// One switching pathloss per adjacent level pair, lowest pair first.
    std::vector<double> crossings;
    /// Set where no sign change was found and the crossing sits on a grid edge.
    std::vector<bool> at_edge;
    /// Pathloss beyond which the top level exceeds feasibility_factor times
    /// its own minimum energy per bit.
    double feasibility_limit_db = 0.0;

    bool has_warning() const;
};

/// Inclusive grid low, low + step, ..., high.
std::vector<double> pathloss_grid(double low_db = 40.0, double high_db = 100.0, double step_db = 0.25);

/// Channel load offered by the scenario: nodes * t_packet / t_ib.
double scenario_load(const ModelParams& params, const Scenario& scenario);

/// Energy per bit against pathloss at one level. `load` defaults to the
/// scenario's own load; contention statistics come from the table.
EnergyCurve energy_curve(const ModelParams& params, const Scenario& scenario, double tx_level_dbm,
                         const ContentionTable& table, std::span<const double> grid,
                         std::optional<double> load = {}, const WhatIfModifiers& modifiers = {});

/// One curve per level, lowest level first.
std::vector<EnergyCurve> energy_curves(const ModelParams& params, const Scenario& scenario,
                                       const ContentionTable& table, std::span<const double> grid,
                                       std::optional<double> load = {}, const WhatIfModifiers& modifiers = {});

/// Curves must share one pathloss grid; they are ordered by level here.
ThresholdSet compute_thresholds(std::span<const EnergyCurve> curves, double feasibility_factor = 2.0);

/// Largest relative energy saving over the grid of the threshold-selected
/// level against always using the top level.
double max_adaptation_saving(std::span<const EnergyCurve> curves, const ThresholdSet& thresholds);

struct CaseStudyOptions {
    std::vector<double> grid = pathloss_grid();
    std::size_t quadrature_points = 256;
    double feasibility_factor = 2.0;
    /// Overrides the scenario's own load for the contention lookup.
    std::optional<double> load;
    /// Pins every node to one level instead of adapting.
    std::optional<double> fixed_tx_level_dbm;
    WhatIfModifiers modifiers;
};

struct CaseStudyResult {
    double load = 0.0;
    ContentionStats contention;
    ThresholdSet thresholds;
    std::vector<LinkEvaluation> samples;
    std::vector<double> weights;
    /// Expectations over the pathloss distribution. energy_per_bit is the
    /// population figure: expected energy over expected delivered bits.
    EnergyReport summary;
    PhaseValues phase_energy{};  ///< expected J per inter-beacon period
    PhaseValues phase_time{};    ///< expected s per inter-beacon period
    /// Mean over pathloss samples of the per-node energy per bit.
    double mean_energy_per_bit = 0.0;
};

CaseStudyResult evaluate_case_study(const ModelParams& params, const Scenario& scenario,
                                    const ContentionTable& table, const CaseStudyOptions& options = {});

struct SizePoint {
    int payload_bytes = 0;
    double load = 0.0;
    double energy_per_bit = 0.0;
};

/// Energy per delivered bit against payload size at a constant application
/// data rate: buffering into larger packets sends them proportionally less
/// often, so the load at size L is reference_load scaled by
/// ((l_overhead + L) / L) / ((l_overhead + L0) / L0), L0 the scenario
/// payload. Each pathloss sample uses its energy-optimal level. Sizes must
/// lie in [1, 123].
std::vector<SizePoint> packet_size_sweep(const ModelParams& params, const Scenario& scenario,
                                         std::span<const int> sizes, const ContentionTable& table,
                                         std::optional<double> reference_load = {},
                                         std::size_t quadrature_points = 256);

inline constexpr int kMaxPayloadBytes = 123;

struct CaseStudyWhatIf {
    CaseStudyResult baseline;
    CaseStudyResult modified;
    /// (baseline - modified) / baseline scenario-averaged power.
    double power_reduction = 0.0;
};

/// Re-evaluates the whole case study, thresholds included, under
/// `modifiers`.
CaseStudyWhatIf what_if_case_study(const ModelParams& params, const Scenario& scenario,
                                   const ContentionTable& table, const WhatIfModifiers& modifiers,
                                   CaseStudyOptions options = {});

}  // namespace wpan

#pragma once

// Closed-form node energy model for one packet per superframe under the
// duty-cycled activation policy:
//
//   shutdown -> idle (t_si) -> receive beacon -> idle
//   -> contention (idle, receiver on for t_ia per clear channel assessment)
//   -> transmit -> idle for t_ack_min -> receive until the acknowledgement
//   -> shutdown.
//
// Two failure probabilities are kept apart:
//   pr_caf  channel access failure reported by the contention procedure;
//   pr_tf   per-attempt loss once on air, 1 - (1 - pr_col)(1 - pr_e).
// The attempt distribution is geometric in pr_tf; the leading access
// failure terms of the occupancy and the failure probability use pr_caf.

#include <array>
#include <optional>
#include <string_view>
#include <vector>

#include "wpan/csma_sim.hpp"
#include "wpan/params.hpp"

namespace wpan {

struct AttemptDistribution {
    /// p_tr[i - 1] = probability that exactly i transmissions are needed.
    std::vector<double> p_tr;
    /// Probability that n_max transmissions are not enough.
    double p_overflow = 0.0;
    /// sum_i i * p_tr(i) + n_max * p_overflow.
    double expected_attempts = 1.0;
};

/// Time spent per inter-beacon period in each radio state, transition
/// delays folded into the arrival state.
struct StateOccupancy {
    double t_idle = 0.0;
    double t_tx = 0.0;
    double t_rx = 0.0;
};

/// The individual terms of StateOccupancy, kept separate so that each can
/// be charged to a protocol phase.
struct OccupancyTerms {
    double startup_idle = 0.0;     ///< t_si
    double contention_idle = 0.0;  ///< contention waits in idle
    double ack_idle = 0.0;         ///< t_ack_min after each transmission
    double transmit = 0.0;         ///< packet airtime over all attempts
    double beacon_rx = 0.0;        ///< t_ia + t_beacon
    double cca_rx = 0.0;           ///< t_ia per channel assessment
    double ack_retry_rx = 0.0;     ///< t_ack_max waits of failed attempts
    double ack_frame_rx = 0.0;     ///< acknowledgement reception

    StateOccupancy occupancy() const;
};

enum class Phase : std::size_t { beacon_listen, contention, transmission, ack_wait, startup_idle };
inline constexpr std::size_t kPhaseCount = 5;
inline constexpr std::array<Phase, kPhaseCount> kPhases = {
    Phase::beacon_listen, Phase::contention, Phase::transmission, Phase::ack_wait, Phase::startup_idle};
std::string_view phase_name(Phase phase);

using PhaseValues = std::array<double, kPhaseCount>;

struct PhaseBreakdown {
    PhaseValues energy_fraction{};
    PhaseValues time_fraction{};

    double energy(Phase p) const { return energy_fraction[static_cast<std::size_t>(p)]; }
    double time(Phase p) const { return time_fraction[static_cast<std::size_t>(p)]; }
};

struct EnergyReport {
    StateOccupancy occupancy;
    double p_avg = 0.0;
    double pr_fail = 0.0;
    double delay = 0.0;
    double energy_per_bit = 0.0;
    PhaseBreakdown breakdown;
};

double per_attempt_failure(double pr_col, double pr_e);

AttemptDistribution attempt_distribution(double pr_tf, int n_max);

OccupancyTerms occupancy_terms(const ContentionStats& stats, const AttemptDistribution& dist,
                               const MacTiming& timing, const RadioProfile& profile, double t_packet);

StateOccupancy state_occupancy(const ContentionStats& stats, const AttemptDistribution& dist,
                               const MacTiming& timing, const RadioProfile& profile, double t_packet);

/// t_ib_min * 2^bo, bo in [0, 15].
double inter_beacon_period(const MacTiming& timing, int bo);

/// Shutdown leakage is not charged.
double average_power(const StateOccupancy& occ, const RadioProfile& profile, double tx_level_dbm, double t_ib);

/// 1 - (1 - pr_caf)(1 - p_overflow).
double transmission_failure(double pr_caf, const AttemptDistribution& dist);

/// t_ib / (1 - pr_fail); the application retries in the next superframe.
/// Throws std::domain_error when pr_fail is 1.
double expected_delay(double t_ib, double pr_fail);

/// p_avg * delay / (8 * payload_bytes).
double energy_per_bit(double p_avg, double delay, int payload_bytes);

/// Receive power used for channel assessments and acknowledgement waits;
/// defaults to the profile's p_rx.
struct PhasePowers {
    double idle = 0.0;
    double rx = 0.0;
    double tx = 0.0;
    double sense = 0.0;

    static PhasePowers from(const RadioProfile& profile, double tx_level_dbm);
};

PhaseValues phase_energies(const OccupancyTerms& terms, const PhasePowers& powers);
PhaseValues phase_durations(const OccupancyTerms& terms);

/// Energy and time fractions per phase; each set sums to 1.
PhaseBreakdown phase_breakdown(const ContentionStats& stats, const AttemptDistribution& dist,
                               const MacTiming& timing, const RadioProfile& profile, double tx_level_dbm,
                               double t_packet);
PhaseBreakdown phase_breakdown(const PhaseValues& energies, const PhaseValues& durations);

/// Hypothetical hardware changes: scale both transition times, and/or a
/// low-power receive mode for channel sensing and acknowledgement waits.
struct WhatIfModifiers {
    double transition_scale = 1.0;
    std::optional<double> sense_power;

    void validate() const;
};

RadioProfile scaled_transitions(const RadioProfile& profile, double factor);

struct OperatingPoint {
    double pathloss_db = 0.0;
    double tx_level_dbm = 0.0;
    int payload_bytes = 0;
    int beacon_order = 0;
};

/// Full pipeline for one node: link budget, error probabilities, attempt
/// distribution, occupancy, power, failure, delay and energy per bit.
/// A certain failure yields infinite delay and energy per bit.
struct LinkEvaluation {
    OperatingPoint point;
    double t_packet = 0.0;
    double t_ib = 0.0;
    double pr_bit = 0.0;
    double pr_e = 0.0;
    double pr_tf = 0.0;
    AttemptDistribution attempts;
    OccupancyTerms terms;
    PhaseValues phase_energy{};  ///< J per inter-beacon period
    PhaseValues phase_time{};    ///< s per inter-beacon period
    EnergyReport report;
};

LinkEvaluation evaluate_link(const ModelParams& params, const ContentionStats& stats, const OperatingPoint& point,
                             const WhatIfModifiers& modifiers = {});

struct LinkWhatIf {
    LinkEvaluation baseline;
    LinkEvaluation modified;
    /// (baseline - modified) / baseline average power.
    double power_reduction = 0.0;
};

LinkWhatIf what_if(const ModelParams& params, const ContentionStats& stats, const OperatingPoint& point,
                   const WhatIfModifiers& modifiers);

}  // namespace wpan

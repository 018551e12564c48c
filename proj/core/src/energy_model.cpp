#include "wpan/energy_model.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "wpan/phy.hpp"

namespace wpan {

namespace {

void require_probability(double p, const char* what) {
    if (!(p >= 0.0 && p <= 1.0)) throw std::domain_error(std::string(what) + " must be in [0, 1]");
}

constexpr std::size_t idx(Phase p) { return static_cast<std::size_t>(p); }

}  // namespace

StateOccupancy OccupancyTerms::occupancy() const {
    return {startup_idle + contention_idle + ack_idle, transmit, beacon_rx + cca_rx + ack_retry_rx + ack_frame_rx};
}

std::string_view phase_name(Phase phase) {
    switch (phase) {
        case Phase::beacon_listen: return "beacon_listen";
        case Phase::contention: return "contention";
        case Phase::transmission: return "transmission";
        case Phase::ack_wait: return "ack_wait";
        case Phase::startup_idle: return "startup_idle";
    }
    return "unknown";
}

double per_attempt_failure(double pr_col, double pr_e) {
    require_probability(pr_col, "pr_col");
    require_probability(pr_e, "pr_e");
    return 1.0 - (1.0 - pr_col) * (1.0 - pr_e);
}

AttemptDistribution attempt_distribution(double pr_tf, int n_max) {
    require_probability(pr_tf, "pr_tf");
    if (n_max < 1) throw std::domain_error("n_max must be >= 1");
    AttemptDistribution d;
    d.p_tr.resize(static_cast<std::size_t>(n_max));
    double reach = 1.0;  // probability that attempt i is needed
    double expected = 0.0;
    for (int i = 1; i <= n_max; ++i) {
        d.p_tr[static_cast<std::size_t>(i - 1)] = reach * (1.0 - pr_tf);
        expected += i * d.p_tr[static_cast<std::size_t>(i - 1)];
        reach *= pr_tf;
    }
    d.p_overflow = reach;
    d.expected_attempts = expected + n_max * d.p_overflow;
    return d;
}

OccupancyTerms occupancy_terms(const ContentionStats& stats, const AttemptDistribution& dist,
                               const MacTiming& timing, const RadioProfile& profile, double t_packet) {
    require_probability(stats.pr_caf, "pr_caf");
    if (dist.p_tr.empty()) throw std::invalid_argument("attempt distribution is empty");
    const double caf = stats.pr_caf;
    const double attempts = (1.0 - caf) * dist.expected_attempts;

    double retries = 0.0;  // sum over i >= 2 of P_tr(i) * (i - 1)
    for (std::size_t i = 1; i < dist.p_tr.size(); ++i) retries += dist.p_tr[i] * static_cast<double>(i);

    OccupancyTerms t;
    t.startup_idle = profile.t_si;
    t.contention_idle = caf * stats.t_cont_mean + attempts * stats.t_cont_mean;
    t.ack_idle = attempts * timing.t_ack_min;
    t.transmit = attempts * t_packet;
    t.beacon_rx = profile.t_ia + timing.t_beacon;
    t.cca_rx = caf * stats.n_cca_mean * profile.t_ia + attempts * stats.n_cca_mean * profile.t_ia;
    t.ack_retry_rx = retries * timing.t_ack_max;
    t.ack_frame_rx = (1.0 - dist.p_overflow) * timing.t_ack_frame;
    return t;
}

StateOccupancy state_occupancy(const ContentionStats& stats, const AttemptDistribution& dist,
                               const MacTiming& timing, const RadioProfile& profile, double t_packet) {
    return occupancy_terms(stats, dist, timing, profile, t_packet).occupancy();
}

double inter_beacon_period(const MacTiming& timing, int bo) {
    if (bo < 0 || bo > 15) throw std::domain_error("beacon order must be in [0, 15]");
    return timing.t_ib_min * std::ldexp(1.0, bo);
}

double average_power(const StateOccupancy& occ, const RadioProfile& profile, double tx_level_dbm, double t_ib) {
    if (!(t_ib > 0)) throw std::domain_error("inter-beacon period must be > 0");
    const double p_tx = profile.tx_power(tx_level_dbm);
    return (profile.p_idle * occ.t_idle + p_tx * occ.t_tx + profile.p_rx * occ.t_rx) / t_ib;
}

double transmission_failure(double pr_caf, const AttemptDistribution& dist) {
    require_probability(pr_caf, "pr_caf");
    return 1.0 - (1.0 - pr_caf) * (1.0 - dist.p_overflow);
}

double expected_delay(double t_ib, double pr_fail) {
    require_probability(pr_fail, "pr_fail");
    if (pr_fail >= 1.0) throw std::domain_error("expected_delay: transmission always fails, delay is unbounded");
    return t_ib / (1.0 - pr_fail);
}

double energy_per_bit(double p_avg, double delay, int payload_bytes) {
    if (payload_bytes < 1) throw std::domain_error("energy_per_bit: payload_bytes must be >= 1");
    if (p_avg == 0.0) return 0.0;
    return p_avg * delay / (8.0 * payload_bytes);
}

PhasePowers PhasePowers::from(const RadioProfile& profile, double tx_level_dbm) {
    return {profile.p_idle, profile.p_rx, profile.tx_power(tx_level_dbm), profile.p_rx};
}

PhaseValues phase_energies(const OccupancyTerms& t, const PhasePowers& p) {
    PhaseValues e{};
    e[idx(Phase::startup_idle)] = p.idle * t.startup_idle;
    e[idx(Phase::beacon_listen)] = p.rx * t.beacon_rx;
    e[idx(Phase::contention)] = p.idle * t.contention_idle + p.sense * t.cca_rx;
    e[idx(Phase::transmission)] = p.tx * t.transmit;
    e[idx(Phase::ack_wait)] = p.idle * t.ack_idle + p.sense * (t.ack_retry_rx + t.ack_frame_rx);
    return e;
}

PhaseValues phase_durations(const OccupancyTerms& t) {
    PhaseValues d{};
    d[idx(Phase::startup_idle)] = t.startup_idle;
    d[idx(Phase::beacon_listen)] = t.beacon_rx;
    d[idx(Phase::contention)] = t.contention_idle + t.cca_rx;
    d[idx(Phase::transmission)] = t.transmit;
    d[idx(Phase::ack_wait)] = t.ack_idle + t.ack_retry_rx + t.ack_frame_rx;
    return d;
}

PhaseBreakdown phase_breakdown(const PhaseValues& energies, const PhaseValues& durations) {
    PhaseBreakdown b;
    const double e_total = std::accumulate(energies.begin(), energies.end(), 0.0);
    const double t_total = std::accumulate(durations.begin(), durations.end(), 0.0);
    for (std::size_t i = 0; i < kPhaseCount; ++i) {
        b.energy_fraction[i] = e_total > 0 ? energies[i] / e_total : 0.0;
        b.time_fraction[i] = t_total > 0 ? durations[i] / t_total : 0.0;
    }
    return b;
}

PhaseBreakdown phase_breakdown(const ContentionStats& stats, const AttemptDistribution& dist,
                               const MacTiming& timing, const RadioProfile& profile, double tx_level_dbm,
                               double t_packet) {
    const auto terms = occupancy_terms(stats, dist, timing, profile, t_packet);
    return phase_breakdown(phase_energies(terms, PhasePowers::from(profile, tx_level_dbm)), phase_durations(terms));
}

void WhatIfModifiers::validate() const {
    if (!(transition_scale > 0.0 && std::isfinite(transition_scale)))
        throw std::domain_error("transition_scale must be > 0");
    if (sense_power && !(*sense_power >= 0.0 && std::isfinite(*sense_power)))
        throw std::domain_error("sense_power must be >= 0");
}

RadioProfile scaled_transitions(const RadioProfile& profile, double factor) {
    RadioProfile out = profile;
    out.t_si *= factor;
    out.t_ia *= factor;
    out.e_si *= factor;
    return out;
}

LinkEvaluation evaluate_link(const ModelParams& params, const ContentionStats& stats, const OperatingPoint& point,
                             const WhatIfModifiers& modifiers) {
    modifiers.validate();
    const RadioProfile profile = modifiers.transition_scale == 1.0
                                     ? params.radio
                                     : scaled_transitions(params.radio, modifiers.transition_scale);

    LinkEvaluation ev;
    ev.point = point;
    ev.t_packet = packet_airtime(params.timing, params.mac, point.payload_bytes);
    ev.t_ib = inter_beacon_period(params.timing, point.beacon_order);
    ev.pr_bit = bit_error_probability(params.ber, received_power(point.tx_level_dbm, point.pathloss_db));
    ev.pr_e = packet_error_probability(ev.pr_bit, params.mac.l_overhead + point.payload_bytes, params.mac);
    ev.pr_tf = per_attempt_failure(stats.pr_col, ev.pr_e);
    ev.attempts = attempt_distribution(ev.pr_tf, params.mac.n_max);
    ev.terms = occupancy_terms(stats, ev.attempts, params.timing, profile, ev.t_packet);

    PhasePowers powers = PhasePowers::from(profile, point.tx_level_dbm);
    if (modifiers.sense_power) powers.sense = *modifiers.sense_power;
    ev.phase_energy = phase_energies(ev.terms, powers);
    ev.phase_time = phase_durations(ev.terms);

    auto& r = ev.report;
    r.occupancy = ev.terms.occupancy();
    r.p_avg = modifiers.sense_power
                  ? std::accumulate(ev.phase_energy.begin(), ev.phase_energy.end(), 0.0) / ev.t_ib
                  : average_power(r.occupancy, profile, point.tx_level_dbm, ev.t_ib);
    r.pr_fail = transmission_failure(stats.pr_caf, ev.attempts);
    if (r.pr_fail < 1.0) {
        r.delay = expected_delay(ev.t_ib, r.pr_fail);
        r.energy_per_bit = energy_per_bit(r.p_avg, r.delay, point.payload_bytes);
    } else {
        r.delay = std::numeric_limits<double>::infinity();
        r.energy_per_bit = std::numeric_limits<double>::infinity();
    }
    r.breakdown = phase_breakdown(ev.phase_energy, ev.phase_time);
    return ev;
}

LinkWhatIf what_if(const ModelParams& params, const ContentionStats& stats, const OperatingPoint& point,
                   const WhatIfModifiers& modifiers) {
    LinkWhatIf out;
    out.baseline = evaluate_link(params, stats, point);
    out.modified = evaluate_link(params, stats, point, modifiers);
    const double base = out.baseline.report.p_avg;
    out.power_reduction = base > 0 ? (base - out.modified.report.p_avg) / base : 0.0;
    return out;
}

}  // namespace wpan

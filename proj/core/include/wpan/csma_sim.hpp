#pragma once

// Monte Carlo model of the slotted CSMA/CA uplink contention of a beacon
// enabled star network.
//
// Time is discrete in backoff slots of t_slot counted from the end of the
// beacon. Per superframe every node joins with a Bernoulli participation
// probability; a joining node's packet becomes ready at a uniformly drawn
// slot of the contention access period and the node then
//   1. waits a uniform backoff in [0, 2^BE - 1] slots, BE = min_be,
//   2. senses the channel in cw_init consecutive slots,
//   3. transmits in the slot after the last clear sense.
// A busy sense restarts step 1 with BE + 1. After max_be_increments
// increments a further busy sense reports a channel access failure.
// Packets starting in the same slot collide for their whole airtime.

#include <cstdint>

#include "wpan/params.hpp"

namespace wpan {

struct ContentionStats {
    /// Mean time from packet ready to transmission start (or failure report), s.
    double t_cont_mean = 0.0;
    /// Mean number of clear channel assessments per contention procedure.
    double n_cca_mean = 0.0;
    /// Fraction of transmissions lost to a simultaneous start.
    double pr_col = 0.0;
    /// Fraction of contention procedures ending in channel access failure.
    double pr_caf = 0.0;
    /// Contention procedures observed.
    std::uint64_t trials = 0;
    double se_t_cont = 0.0;
    double se_n_cca = 0.0;
    double se_pr_col = 0.0;
    double se_pr_caf = 0.0;

    friend bool operator==(const ContentionStats&, const ContentionStats&) = default;
};

struct SimConfig {
    int nodes = 100;
    int payload_bytes = 120;
    /// Offered channel load: expected airtime per inter-beacon period.
    double load = 0.4;
    std::uint64_t superframes = 10000;
    std::uint64_t seed = 1;

    void validate() const;
};

/// How a requested load is realized. The beacon order is the largest one
/// whose full-participation load still reaches `load`; participation then
/// scales it down to exactly `load`. When even BO = 0 cannot reach the
/// requested load every node participates and offered_load reports the
/// lower value actually simulated.
struct SuperframePlan {
    int beacon_order = 0;
    double inter_beacon_period = 0.0;
    double participation = 1.0;
    double offered_load = 0.0;
    int contention_slots = 0;
    int packet_slots = 0;
    int ack_slots = 0;
};

SuperframePlan plan_superframes(const SimConfig& cfg, const MacTiming& timing, const MacParams& mac,
                                const SimOptions& opts = {});

/// Bookkeeping exposed for invariant checks.
struct SimDiagnostics {
    std::uint64_t cca_events = 0;         ///< senses performed by the engine
    std::uint64_t attempt_cca_total = 0;  ///< sum of per-procedure counts
    std::uint64_t transmissions = 0;
    std::uint64_t failures = 0;
    std::uint64_t min_ccas_before_tx = 0; ///< smallest count seen before a transmission
    std::uint64_t misaligned_events = 0;  ///< events off the slot grid (always 0)
};

/// Deterministic in (cfg, timing, mac, opts.ack_occupies_channel);
/// opts.workers only changes wall time.
ContentionStats simulate_contention(const SimConfig& cfg, const MacTiming& timing, const MacParams& mac,
                                    const SimOptions& opts = {}, SimDiagnostics* diagnostics = nullptr);

}  // namespace wpan

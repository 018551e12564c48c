#include "wpan/csma_sim.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>
#include <queue>
#include <stdexcept>
#include <thread>
#include <vector>

#include "wpan/phy.hpp"
#include "wpan/rng.hpp"

namespace wpan {

namespace {

int ceil_slots(double duration, double t_slot) {
    return static_cast<int>(std::ceil(duration / t_slot - 1e-9));
}

unsigned resolve_workers(unsigned requested) {
    if (requested != 0) return requested;
    return std::max(1u, std::thread::hardware_concurrency());
}

// Integer sums keep the reduction exact and independent of worker count.
struct Tally {
    std::uint64_t attempts = 0;
    std::uint64_t transmissions = 0;
    std::uint64_t collided = 0;
    std::uint64_t failures = 0;
    std::uint64_t slots = 0;
    std::uint64_t slots_sq = 0;
    std::uint64_t ccas = 0;
    std::uint64_t ccas_sq = 0;
    std::uint64_t cca_events = 0;
    std::uint64_t min_ccas_before_tx = std::numeric_limits<std::uint64_t>::max();
    std::uint64_t misaligned = 0;

    void merge(const Tally& o) {
        attempts += o.attempts;
        transmissions += o.transmissions;
        collided += o.collided;
        failures += o.failures;
        slots += o.slots;
        slots_sq += o.slots_sq;
        ccas += o.ccas;
        ccas_sq += o.ccas_sq;
        cca_events += o.cca_events;
        min_ccas_before_tx = std::min(min_ccas_before_tx, o.min_ccas_before_tx);
        misaligned += o.misaligned;
    }
};

struct NodeState {
    int arrival = 0;
    int be = 0;
    int cw = 0;
    std::uint64_t ccas = 0;
};

class SuperframeEngine {
public:
    SuperframeEngine(const SimConfig& cfg, const MacParams& mac, const SuperframePlan& plan)
        : cfg_(cfg), mac_(mac), plan_(plan), nodes_(static_cast<std::size_t>(cfg.nodes)) {}

    void run(std::uint64_t index, Tally& tally) {
        Xoshiro256 rng(mix_seed(cfg_.seed, index));
        busy_.assign(static_cast<std::size_t>(plan_.contention_slots), 0);

        for (std::size_t n = 0; n < nodes_.size(); ++n) {
            if (plan_.participation < 1.0 && !(rng.uniform() < plan_.participation)) continue;
            auto& node = nodes_[n];
            node.arrival = static_cast<int>(rng.below(static_cast<std::uint64_t>(plan_.contention_slots)));
            node.be = mac_.min_be;
            node.cw = mac_.cw_init;
            node.ccas = 0;
            const int backoff = static_cast<int>(rng.below(std::uint64_t{1} << node.be));
            queue_.push({node.arrival + backoff, static_cast<int>(n)});
            ++tally.attempts;
        }

        std::vector<int> batch;
        while (!queue_.empty()) {
            const int slot = queue_.top().first;
            batch.clear();
            while (!queue_.empty() && queue_.top().first == slot) {
                batch.push_back(queue_.top().second);
                queue_.pop();
            }
            transmit(slot, batch, tally);
            sense(slot, batch, rng, tally);
        }
    }

private:
    using Event = std::pair<int, int>;  // (slot, node)

    bool is_busy(int slot) const {
        return static_cast<std::size_t>(slot) < busy_.size() && busy_[static_cast<std::size_t>(slot)] != 0;
    }

    void occupy(int from, int count) {
        const auto end = static_cast<std::size_t>(from + count);
        if (busy_.size() < end) busy_.resize(end, 0);
        for (auto s = static_cast<std::size_t>(from); s < end; ++s) ++busy_[s];
    }

    void finish(const NodeState& node, int end_slot, Tally& tally) {
        const auto waited = static_cast<std::uint64_t>(end_slot - node.arrival);
        tally.slots += waited;
        tally.slots_sq += waited * waited;
        tally.ccas += node.ccas;
        tally.ccas_sq += node.ccas * node.ccas;
    }

    void transmit(int slot, const std::vector<int>& batch, Tally& tally) {
        int starting = 0;
        for (int n : batch)
            if (nodes_[static_cast<std::size_t>(n)].cw == 0) ++starting;
        if (starting == 0) return;
        const bool collision = starting > 1;
        for (int n : batch) {
            const auto& node = nodes_[static_cast<std::size_t>(n)];
            if (node.cw != 0) continue;
            occupy(slot, plan_.packet_slots);
            ++tally.transmissions;
            if (collision) ++tally.collided;
            tally.min_ccas_before_tx = std::min(tally.min_ccas_before_tx, node.ccas);
            if (slot - node.arrival < mac_.cw_init) ++tally.misaligned;
            finish(node, slot, tally);
        }
        if (!collision && plan_.ack_slots > 0) occupy(slot + plan_.packet_slots, plan_.ack_slots);
    }

    void sense(int slot, const std::vector<int>& batch, Xoshiro256& rng, Tally& tally) {
        const int be_cap = mac_.min_be + mac_.max_be_increments;
        for (int n : batch) {
            auto& node = nodes_[static_cast<std::size_t>(n)];
            if (node.cw == 0) continue;
            ++node.ccas;
            ++tally.cca_events;
            if (!is_busy(slot)) {
                --node.cw;
                queue_.push({slot + 1, n});
            } else if (node.be >= be_cap) {
                ++tally.failures;
                finish(node, slot + 1, tally);
            } else {
                ++node.be;
                node.cw = mac_.cw_init;
                const int backoff = static_cast<int>(rng.below(std::uint64_t{1} << node.be));
                queue_.push({slot + 1 + backoff, n});
            }
        }
    }

    const SimConfig& cfg_;
    const MacParams& mac_;
    const SuperframePlan& plan_;
    std::vector<NodeState> nodes_;
    std::vector<std::uint32_t> busy_;
    std::priority_queue<Event, std::vector<Event>, std::greater<>> queue_;
};

double mean_se(std::uint64_t sum, std::uint64_t sum_sq, std::uint64_t n) {
    if (n < 2) return 0.0;
    const double mean = static_cast<double>(sum) / static_cast<double>(n);
    const double var = (static_cast<double>(sum_sq) - static_cast<double>(n) * mean * mean) /
                       static_cast<double>(n - 1);
    return std::sqrt(std::max(0.0, var) / static_cast<double>(n));
}

double proportion_se(double p, std::uint64_t n) {
    return n == 0 ? 0.0 : std::sqrt(p * (1.0 - p) / static_cast<double>(n));
}

}  // namespace

void SimConfig::validate() const {
    if (nodes < 1) throw std::invalid_argument("SimConfig: nodes must be >= 1");
    if (payload_bytes < 0) throw std::invalid_argument("SimConfig: payload_bytes must be >= 0");
    if (!(load > 0.0 && load <= 1.0)) throw std::invalid_argument("SimConfig: load must be in (0, 1]");
    if (superframes < 1) throw std::invalid_argument("SimConfig: superframes must be >= 1");
}

SuperframePlan plan_superframes(const SimConfig& cfg, const MacTiming& timing, const MacParams& mac,
                                const SimOptions& opts) {
    cfg.validate();
    const double t_packet = packet_airtime(timing, mac, cfg.payload_bytes);
    const double demand = cfg.nodes * t_packet;  // airtime if every node sends once

    SuperframePlan plan;
    for (int bo = 15; bo >= 0; --bo) {
        if (demand / (timing.t_ib_min * std::ldexp(1.0, bo)) >= cfg.load) {
            plan.beacon_order = bo;
            break;
        }
    }
    plan.inter_beacon_period = timing.t_ib_min * std::ldexp(1.0, plan.beacon_order);
    plan.participation = std::min(1.0, cfg.load * plan.inter_beacon_period / demand);
    plan.offered_load = plan.participation * demand / plan.inter_beacon_period;
    plan.contention_slots =
        static_cast<int>(std::floor((plan.inter_beacon_period - timing.t_beacon) / timing.t_slot + 1e-9));
    plan.packet_slots = std::max(1, ceil_slots(t_packet, timing.t_slot));
    plan.ack_slots = opts.ack_occupies_channel ? ceil_slots(timing.t_ack_min + timing.t_ack_frame, timing.t_slot) : 0;
    if (plan.contention_slots < 1) throw std::invalid_argument("SimConfig: contention period shorter than a slot");
    return plan;
}

ContentionStats simulate_contention(const SimConfig& cfg, const MacTiming& timing, const MacParams& mac,
                                    const SimOptions& opts, SimDiagnostics* diagnostics) {
    timing.validate();
    mac.validate();
    const SuperframePlan plan = plan_superframes(cfg, timing, mac, opts);

    const auto workers = static_cast<std::uint64_t>(
        std::min<std::uint64_t>(resolve_workers(opts.workers), cfg.superframes));
    std::vector<Tally> partial(workers);
    auto work = [&](std::uint64_t w) {
        SuperframeEngine engine(cfg, mac, plan);
        const std::uint64_t begin = cfg.superframes * w / workers;
        const std::uint64_t end = cfg.superframes * (w + 1) / workers;
        for (std::uint64_t k = begin; k < end; ++k) engine.run(k, partial[w]);
    };
    if (workers == 1) {
        work(0);
    } else {
        std::vector<std::jthread> threads;
        for (std::uint64_t w = 0; w < workers; ++w) threads.emplace_back(work, w);
    }
    Tally total;
    for (const auto& t : partial) total.merge(t);

    ContentionStats s;
    s.trials = total.attempts;
    if (total.attempts > 0) {
        const auto n = static_cast<double>(total.attempts);
        s.t_cont_mean = static_cast<double>(total.slots) / n * timing.t_slot;
        s.n_cca_mean = static_cast<double>(total.ccas) / n;
        s.pr_caf = static_cast<double>(total.failures) / n;
        s.se_t_cont = mean_se(total.slots, total.slots_sq, total.attempts) * timing.t_slot;
        s.se_n_cca = mean_se(total.ccas, total.ccas_sq, total.attempts);
        s.se_pr_caf = proportion_se(s.pr_caf, total.attempts);
    }
    if (total.transmissions > 0) {
        s.pr_col = static_cast<double>(total.collided) / static_cast<double>(total.transmissions);
        s.se_pr_col = proportion_se(s.pr_col, total.transmissions);
    }
    assert(total.cca_events == total.ccas);
    assert(total.misaligned == 0);

    if (diagnostics) {
        diagnostics->cca_events = total.cca_events;
        diagnostics->attempt_cca_total = total.ccas;
        diagnostics->transmissions = total.transmissions;
        diagnostics->failures = total.failures;
        diagnostics->min_ccas_before_tx = total.transmissions > 0 ? total.min_ccas_before_tx : 0;
        diagnostics->misaligned_events = total.misaligned;
    }
    return s;
}

}  // namespace wpan

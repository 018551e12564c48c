#include <doctest.h>

#include <cmath>
#include <random>

#include "oracle/straight_line_model.hpp"
#include "wpan/energy_model.hpp"

namespace {

bool rel_close(double a, double b, double tol = 1e-9) {
    if (a == b) return true;
    return std::abs(a - b) <= tol * std::max(std::abs(a), std::abs(b));
}

oracle::Inputs to_oracle(const wpan::ModelParams& p, const wpan::ContentionStats& s, const wpan::OperatingPoint& pt) {
    oracle::Inputs in{};
    in.p_idle = p.radio.p_idle;
    in.p_rx = p.radio.p_rx;
    in.p_tx = p.radio.tx_power(pt.tx_level_dbm);
    in.t_si = p.radio.t_si;
    in.t_ia = p.radio.t_ia;
    in.t_byte = p.timing.t_byte;
    in.t_ack_min = p.timing.t_ack_min;
    in.t_ack_max = p.timing.t_ack_max;
    in.t_ib_min = p.timing.t_ib_min;
    in.t_beacon = p.timing.t_beacon;
    in.t_ack_frame = p.timing.t_ack_frame;
    in.l_overhead = p.mac.l_overhead;
    in.l_preamble = p.mac.l_preamble;
    in.n_max = p.mac.n_max;
    in.ber_a = p.ber.coeff_a;
    in.ber_b = p.ber.coeff_b;
    in.pathloss_db = pt.pathloss_db;
    in.tx_dbm = pt.tx_level_dbm;
    in.payload_bytes = pt.payload_bytes;
    in.beacon_order = pt.beacon_order;
    in.t_cont = s.t_cont_mean;
    in.n_cca = s.n_cca_mean;
    in.pr_col = s.pr_col;
    in.pr_caf = s.pr_caf;
    return in;
}

}  // namespace

TEST_CASE("oracle reproduces the hand-derived reference values") {
    oracle::Inputs in{};
    in.p_idle = 712e-6;
    in.p_rx = 33.84e-3;
    in.p_tx = 31.32e-3;
    in.t_si = 1e-3;
    in.t_ia = 194e-6;
    in.t_byte = 32e-6;
    in.t_ack_min = 192e-6;
    in.t_ack_max = 864e-6;
    in.t_ib_min = 15.36e-3;
    in.t_beacon = 608e-6;
    in.t_ack_frame = 352e-6;
    in.l_overhead = 13;
    in.l_preamble = 4;
    in.n_max = 5;
    in.ber_a = 2.35e-30;
    in.ber_b = 0.659;
    in.pathloss_db = 90;
    in.tx_dbm = 0;
    in.payload_bytes = 120;
    in.beacon_order = 6;
    const auto o = oracle::evaluate(in);
    CHECK(o.pr_bit == doctest::Approx(1.346088406956123e-4).epsilon(1e-12));
    CHECK(o.t_packet == doctest::Approx(4256e-6).epsilon(1e-12));
    CHECK(o.t_ib == doctest::Approx(983.04e-3).epsilon(1e-12));

    in.pr_col = 0.2;
    in.ber_a = 0;  // isolate collisions: pr_tf = 0.2
    const auto g = oracle::evaluate(in);
    const double want[] = {0.8, 0.16, 0.032, 0.0064, 0.00128};
    for (int i = 0; i < 5; ++i) CHECK(g.p_tr[i] == doctest::Approx(want[i]).epsilon(1e-12));
    CHECK(g.p_over == doctest::Approx(3.2e-4).epsilon(1e-12));
}

TEST_CASE("library pipeline agrees with the straight-line oracle on random parameter sets") {
    std::mt19937_64 rng(20240601);
    std::uniform_real_distribution<double> u(0, 1);
    auto between = [&](double lo, double hi) { return lo + (hi - lo) * u(rng); };

    for (int trial = 0; trial < 100; ++trial) {
        wpan::ModelParams p;
        p.radio.p_idle = between(100e-6, 2e-3);
        p.radio.p_rx = between(5e-3, 60e-3);
        p.radio.t_si = between(0.1e-3, 3e-3);
        p.radio.t_ia = between(50e-6, 500e-6);
        p.radio.p_tx_table.clear();
        double level = 0;
        for (int k = 0; k < 8; ++k) {
            p.radio.p_tx_table.push_back({level, between(5e-3, 60e-3)});
            level -= between(0.5, 5);
        }
        const double sym = between(8e-6, 32e-6);
        p.timing.t_symbol = sym;
        p.timing.t_byte = 2 * sym;
        p.timing.t_slot = 20 * sym;
        p.timing.t_ack_min = between(100e-6, 400e-6);
        p.timing.t_ack_max = p.timing.t_ack_min + between(100e-6, 1e-3);
        p.timing.t_ib_min = between(5e-3, 30e-3);
        p.timing.t_beacon = between(200e-6, 2e-3);
        p.timing.t_ack_frame = between(100e-6, 800e-6);
        p.mac.l_overhead = 8 + static_cast<int>(rng() % 20);
        p.mac.l_preamble = static_cast<int>(rng() % static_cast<unsigned>(p.mac.l_overhead));
        p.mac.n_max = 1 + static_cast<int>(rng() % 8);
        p.ber.coeff_a = 2.35e-30 * between(0.2, 5);
        p.ber.coeff_b = between(0.55, 0.75);
        p.validate();

        wpan::ContentionStats s;
        s.t_cont_mean = between(0, 20e-3);
        s.n_cca_mean = between(0, 6);
        s.pr_col = between(0, 0.4);
        s.pr_caf = between(0, 0.6);

        const auto& lv = p.radio.p_tx_table[rng() % 8];
        wpan::OperatingPoint pt{between(40, 100), lv.dbm, 1 + static_cast<int>(rng() % 123),
                                static_cast<int>(rng() % 16)};

        const auto ev = wpan::evaluate_link(p, s, pt);
        const auto o = oracle::evaluate(to_oracle(p, s, pt));

        INFO("trial ", trial);
        CHECK(rel_close(ev.pr_bit, o.pr_bit));
        CHECK(rel_close(ev.pr_e, o.pr_e));
        CHECK(rel_close(ev.pr_tf, o.pr_tf));
        for (int i = 0; i < p.mac.n_max; ++i) CHECK(std::abs(ev.attempts.p_tr[static_cast<std::size_t>(i)] - o.p_tr[i]) <= 1e-12);
        CHECK(std::abs(ev.attempts.p_overflow - o.p_over) <= 1e-12);
        CHECK(rel_close(ev.attempts.expected_attempts, o.attempts));
        CHECK(rel_close(ev.report.occupancy.t_idle, o.t_idle));
        CHECK(rel_close(ev.report.occupancy.t_tx, o.t_tx));
        CHECK(rel_close(ev.report.occupancy.t_rx, o.t_rx));
        CHECK(rel_close(ev.report.p_avg, o.p_avg));
        CHECK(rel_close(ev.report.pr_fail, o.pr_fail));
        CHECK(rel_close(ev.report.delay, o.delay));
        CHECK(rel_close(ev.report.energy_per_bit, o.energy_per_bit));
    }
}

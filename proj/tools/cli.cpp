#include "cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <limits>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string_view>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ostream.h>

#include "wpan/config.hpp"
#include "wpan/contention_table.hpp"
#include "wpan/csv.hpp"
#include "wpan/energy_model.hpp"
#include "wpan/error.hpp"
#include "wpan/phy.hpp"

namespace wpan::cli {

namespace fs = std::filesystem;

namespace {

class StageError : public std::runtime_error {
public:
    StageError(std::string stage, const std::string& what) : std::runtime_error(what), stage_(std::move(stage)) {}
    const std::string& stage() const { return stage_; }

private:
    std::string stage_;
};

template <class F>
auto stage(const char* name, F&& f) {
    try {
        return f();
    } catch (const StageError&) {
        throw;
    } catch (const std::exception& e) {
        throw StageError(name, e.what());
    }
}

struct GlobalFlags {
    std::string config_path;
    std::vector<std::string> overrides;
    std::uint64_t seed = 1;
    std::string out_dir = ".";
    std::string table_path;
};

struct ContentionFlags {
    std::optional<int> nodes;
    std::vector<double> loads;
    std::vector<int> payloads;
    std::optional<std::uint64_t> trials;
};

struct TableFlags {
    std::vector<double> loads;
    std::vector<int> payloads;
};

struct SweepFlags {
    std::optional<double> load;
    double step = 0.25;
    double low = 40.0;
    double high = 100.0;
};

struct SizeFlags {
    std::vector<int> sizes = {10, 20, 50, 100, 120, 123};
};

struct WhatIfFlags {
    std::optional<double> transition_scale;
    std::optional<double> sense_power;
    bool low_power_sense = false;
};

std::vector<double> sorted_unique(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
}

std::vector<int> sorted_unique(std::vector<int> v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
}

std::vector<double> default_loads(double scenario_load_value) {
    std::vector<double> loads;
    for (int i = 1; i <= 10; ++i) loads.push_back(i / 10.0);
    if (scenario_load_value > 0 && scenario_load_value <= 1.0) loads.push_back(scenario_load_value);
    return sorted_unique(loads);
}

std::vector<int> default_payloads(int scenario_payload) {
    return sorted_unique(std::vector<int>{10, 20, 50, 100, 120, 123, scenario_payload});
}

std::string describe(const PathlossDistribution& d) {
    if (const auto* f = std::get_if<FixedPathloss>(&d)) return fmt::format("fixed {:g} dB", f->db);
    const auto& u = std::get<UniformPathloss>(d);
    return fmt::format("uniform {:g}-{:g} dB", u.low_db, u.high_db);
}

class Session {
public:
    Session(const GlobalFlags& flags, std::ostream& out) : flags_(flags), out_(out) {
        cfg_ = stage("config", [&] {
            Config c = flags_.config_path.empty() ? Config{} : load_config(flags_.config_path);
            for (const auto& o : flags_.overrides) apply_override(c, o);
            c.validate();
            return c;
        });
        params_ = cfg_.model();
    }

    const Config& config() const { return cfg_; }
    const ModelParams& params() const { return params_; }

    SimConfig sim_base() const {
        SimConfig s;
        s.nodes = cfg_.scenario.nodes_per_channel;
        s.payload_bytes = cfg_.scenario.payload_bytes;
        s.superframes = cfg_.sim.superframes;
        s.seed = flags_.seed;
        return s;
    }

    double load() const {
        return stage("model", [&] { return scenario_load(params_, cfg_.scenario); });
    }

    /// The cached table when --table is given, otherwise a fresh build over
    /// the default grid extended with `extra_loads` and `extra_payloads`.
    ContentionTable table(std::vector<double> extra_loads = {}, std::vector<int> extra_payloads = {}) {
        if (!flags_.table_path.empty()) {
            return stage("simulation", [&] {
                std::ifstream in(flags_.table_path);
                if (!in) throw std::runtime_error("cannot open table " + flags_.table_path);
                try {
                    return read_contention_csv(in);
                } catch (const std::exception& e) {
                    throw std::runtime_error(flags_.table_path + ": " + e.what());
                }
            });
        }
        auto loads = default_loads(load());
        loads.insert(loads.end(), extra_loads.begin(), extra_loads.end());
        auto payloads = default_payloads(cfg_.scenario.payload_bytes);
        payloads.insert(payloads.end(), extra_payloads.begin(), extra_payloads.end());
        return build(sorted_unique(loads), sorted_unique(payloads), sim_base());
    }

    ContentionTable build(const std::vector<double>& loads, const std::vector<int>& payloads,
                          const SimConfig& base) const {
        return stage("simulation", [&] {
            return build_contention_table(loads, payloads, base, cfg_.timing, cfg_.mac, cfg_.sim);
        });
    }

    template <class Writer>
    fs::path write(const std::string& name, Writer&& writer) const {
        return stage("output", [&] {
            const fs::path dir(flags_.out_dir);
            fs::create_directories(dir);
            const fs::path path = dir / name;
            std::ofstream file(path, std::ios::binary);
            if (!file) throw std::runtime_error("cannot write " + path.string());
            writer(file);
            file.close();
            if (!file) throw std::runtime_error("write failed: " + path.string());
            out_ << "wrote " << path.string() << '\n';
            return path;
        });
    }

    void print_scenario_header() const {
        const auto& s = cfg_.scenario;
        fmt::print(out_, "scenario: {} nodes/channel, {} B payload, BO {} (t_ib {:.2f} ms), pathloss {}\n",
                   s.nodes_per_channel, s.payload_bytes, s.beacon_order,
                   inter_beacon_period(cfg_.timing, s.beacon_order) * 1e3, describe(s.pathloss));
    }

private:
    const GlobalFlags& flags_;
    std::ostream& out_;
    Config cfg_;
    ModelParams params_;
};

void print_contention(std::ostream& out, const ContentionStats& s) {
    fmt::print(out, "  pr_caf {:.4f} (se {:.4f})  pr_col {:.4f} (se {:.4f})\n", s.pr_caf, s.se_pr_caf, s.pr_col,
               s.se_pr_col);
    fmt::print(out, "  t_cont {:.4f} ms (se {:.4f})  n_cca {:.3f} (se {:.3f})  trials {}\n", s.t_cont_mean * 1e3,
               s.se_t_cont * 1e3, s.n_cca_mean, s.se_n_cca, s.trials);
}

void print_breakdown(std::ostream& out, const PhaseBreakdown& b) {
    fmt::print(out, "  {:<14} {:>8} {:>8}\n", "phase", "energy", "time");
    for (auto p : kPhases)
        fmt::print(out, "  {:<14} {:>7.1f}% {:>7.1f}%\n", phase_name(p), 100 * b.energy(p), 100 * b.time(p));
}

void print_thresholds(std::ostream& out, const ThresholdSet& t, std::span<const double> levels) {
    out << "thresholds (dB):";
    for (std::size_t i = 0; i < t.crossings.size(); ++i)
        fmt::print(out, " {:g}->{:g}@{:.2f}{}", levels[i], levels[i + 1], t.crossings[i], t.at_edge[i] ? "*" : "");
    fmt::print(out, "\nfeasibility limit: {:.2f} dB\n", t.feasibility_limit_db);
    if (t.has_warning()) out << "warning: crossings marked * found no sign change and sit on a grid edge\n";
}

void print_report(std::ostream& out, const EnergyReport& r) {
    fmt::print(out, "average power:   {:.1f} uW\n", r.p_avg * 1e6);
    fmt::print(out, "failure prob:    {:.2f} %\n", r.pr_fail * 100);
    fmt::print(out, "delay:           {:.4f} s\n", r.delay);
    fmt::print(out, "energy per bit:  {:.1f} nJ/bit\n", r.energy_per_bit * 1e9);
}

int cmd_contention(Session& s, const ContentionFlags& f, std::ostream& out) {
    SimConfig base = s.sim_base();
    if (f.nodes) base.nodes = *f.nodes;
    if (f.trials) base.superframes = *f.trials;
    const auto loads = f.loads.empty() ? std::vector<double>{s.load()} : sorted_unique(f.loads);
    const auto payloads =
        f.payloads.empty() ? std::vector<int>{s.config().scenario.payload_bytes} : sorted_unique(f.payloads);
    const auto table = s.build(loads, payloads, base);

    for (std::size_t pi = 0; pi < payloads.size(); ++pi)
        for (std::size_t li = 0; li < loads.size(); ++li) {
            fmt::print(out, "nodes {} load {:.4g} payload {} B\n", base.nodes, loads[li], payloads[pi]);
            print_contention(out, table.at(li, pi));
        }
    s.write("contention.csv", [&](std::ostream& o) { write_contention_csv(o, table); });
    return 0;
}

int cmd_table(Session& s, const TableFlags& f, std::ostream& out) {
    const auto loads = f.loads.empty() ? default_loads(s.load()) : sorted_unique(f.loads);
    const auto payloads =
        f.payloads.empty() ? default_payloads(s.config().scenario.payload_bytes) : sorted_unique(f.payloads);
    const auto table = s.build(loads, payloads, s.sim_base());
    fmt::print(out, "contention table: {} loads x {} payloads, {} nodes, {} superframes per cell\n", loads.size(),
               payloads.size(), s.sim_base().nodes, s.sim_base().superframes);
    s.write("contention_table.csv", [&](std::ostream& o) { write_contention_csv(o, table); });
    return 0;
}

int cmd_pathloss_sweep(Session& s, const SweepFlags& f, std::ostream& out) {
    const auto table = s.table(f.load ? std::vector<double>{*f.load} : std::vector<double>{});
    const auto grid = stage("config", [&] {
        if (!(f.step > 0) || !(f.low < f.high)) throw std::invalid_argument("pathloss grid needs low < high, step > 0");
        return pathloss_grid(f.low, f.high, f.step);
    });
    const auto curves =
        stage("model", [&] { return energy_curves(s.params(), s.config().scenario, table, grid, f.load); });
    const auto thresholds = stage("optimizer", [&] { return compute_thresholds(curves); });
    const double saving = stage("optimizer", [&] { return max_adaptation_saving(curves, thresholds); });

    s.print_scenario_header();
    fmt::print(out, "load: {:.4f}\n", curves.front().load);
    print_thresholds(out, thresholds, s.config().radio.levels_ascending());
    fmt::print(out, "max adaptation saving vs {:g} dBm: {:.1f} %\n", s.config().radio.max_level(), 100 * saving);
    s.write("fig7.csv", [&](std::ostream& o) { write_curves_csv(o, curves); });
    return 0;
}

int cmd_packet_sweep(Session& s, const SizeFlags& f, std::ostream& out) {
    const auto sizes = sorted_unique(f.sizes);
    const auto table = s.table({}, sizes);
    const auto points =
        stage("optimizer", [&] { return packet_size_sweep(s.params(), s.config().scenario, sizes, table); });
    s.print_scenario_header();
    fmt::print(out, "  {:>8} {:>8} {:>14}\n", "payload", "load", "nJ/bit");
    for (const auto& p : points)
        fmt::print(out, "  {:>8} {:>8.4f} {:>14.1f}\n", p.payload_bytes, p.load, p.energy_per_bit * 1e9);
    s.write("fig8.csv", [&](std::ostream& o) { write_sizes_csv(o, points); });
    return 0;
}

CaseStudyResult run_case_study(Session& s, const ContentionTable& table, const CaseStudyOptions& opts = {}) {
    return stage("model", [&] { return evaluate_case_study(s.params(), s.config().scenario, table, opts); });
}

int cmd_case_study(Session& s, std::ostream& out) {
    const auto table = s.table();
    const auto r = run_case_study(s, table);
    s.print_scenario_header();
    fmt::print(out, "contention at load {:.4f}:\n", r.load);
    print_contention(out, r.contention);
    print_report(out, r.summary);
    fmt::print(out, "mean per-node energy per bit: {:.1f} nJ/bit\n", r.mean_energy_per_bit * 1e9);
    print_thresholds(out, r.thresholds, s.config().radio.levels_ascending());
    out << "breakdown:\n";
    print_breakdown(out, r.summary.breakdown);
    s.write("case_study.csv", [&](std::ostream& o) { write_case_study_csv(o, r); });
    s.write("fig9.csv", [&](std::ostream& o) { write_breakdown_csv(o, r.summary.breakdown); });
    return 0;
}

int cmd_breakdown(Session& s, std::ostream& out) {
    const auto table = s.table();
    const auto r = run_case_study(s, table);
    s.print_scenario_header();
    fmt::print(out, "average power {:.1f} uW, load {:.4f}\n", r.summary.p_avg * 1e6, r.load);
    print_breakdown(out, r.summary.breakdown);
    s.write("fig9.csv", [&](std::ostream& o) { write_breakdown_csv(o, r.summary.breakdown); });
    return 0;
}

int cmd_what_if(Session& s, const WhatIfFlags& f, std::ostream& out) {
    WhatIfModifiers mods;
    if (f.transition_scale) mods.transition_scale = *f.transition_scale;
    if (f.sense_power) mods.sense_power = *f.sense_power;
    else if (f.low_power_sense) mods.sense_power = s.config().radio.p_rx / 10.0;
    stage("config", [&] { mods.validate(); return 0; });

    const auto table = s.table();
    struct Row {
        std::string name;
        CaseStudyResult result;
        double reduction;
    };
    std::vector<Row> rows;
    const auto full = stage("model", [&] {
        return what_if_case_study(s.params(), s.config().scenario, table, mods);
    });
    rows.push_back({"baseline", full.baseline, 0.0});
    const bool both = f.transition_scale && mods.sense_power;
    if (both) {
        WhatIfModifiers scale_only;
        scale_only.transition_scale = mods.transition_scale;
        const auto partial = stage("model", [&] {
            return what_if_case_study(s.params(), s.config().scenario, table, scale_only);
        });
        rows.push_back({"transition_only", partial.modified, partial.power_reduction});
    }
    rows.push_back({"modified", full.modified, full.power_reduction});

    s.print_scenario_header();
    fmt::print(out, "transition scale {:g}, sense power {}\n", mods.transition_scale,
               mods.sense_power ? fmt::format("{:.3f} mW", *mods.sense_power * 1e3) : std::string("unchanged"));
    for (const auto& r : rows)
        fmt::print(out, "  {:<16} power {:8.1f} uW  delta {:+6.1f} %\n", r.name, r.result.summary.p_avg * 1e6,
                   -100 * r.reduction + 0.0);
    if (both)
        fmt::print(out, "additional reduction from low-power sensing: {:.1f} %\n",
                   100 * (rows[2].reduction - rows[1].reduction));

    s.write("what_if.csv", [&](std::ostream& o) {
        CsvWriter w(o);
        w.header({"variant", "transition_scale", "sense_power", "p_avg", "pr_fail", "delay", "energy_per_bit",
                  "power_reduction"});
        for (const auto& r : rows) {
            const bool modified = r.name != "baseline";
            const double sense =
                (r.name == "modified" && mods.sense_power) ? *mods.sense_power : s.config().radio.p_rx;
            w.field(r.name)
                .field(modified ? mods.transition_scale : 1.0)
                .field(sense)
                .field(r.result.summary.p_avg)
                .field(r.result.summary.pr_fail)
                .field(r.result.summary.delay)
                .field(r.result.summary.energy_per_bit)
                .field(r.reduction);
            w.end_row();
        }
    });
    return 0;
}

}  // namespace

void write_curves_csv(std::ostream& out, std::span<const EnergyCurve> curves) {
    CsvWriter w(out);
    w.header({"pathloss_db", "tx_level_dbm", "energy_per_bit", "pr_fail", "delay", "load"});
    for (const auto& c : curves)
        for (const auto& s : c.samples) {
            w.field(s.pathloss_db).field(c.tx_level_dbm).field(s.energy_per_bit).field(s.pr_fail).field(s.delay);
            w.field(c.load);
            w.end_row();
        }
}

void write_sizes_csv(std::ostream& out, std::span<const SizePoint> points) {
    CsvWriter w(out);
    w.header({"payload_bytes", "load", "energy_per_bit"});
    for (const auto& p : points) {
        w.field(p.payload_bytes).field(p.load).field(p.energy_per_bit);
        w.end_row();
    }
}

void write_case_study_csv(std::ostream& out, const CaseStudyResult& result) {
    CsvWriter w(out);
    std::vector<std::string> cols = {"row",  "pathloss_db", "weight",  "tx_level_dbm", "t_idle",
                                     "t_tx", "t_rx",        "p_avg",   "pr_fail",      "delay",
                                     "energy_per_bit"};
    for (auto p : kPhases) cols.push_back("energy_fraction_" + std::string(phase_name(p)));
    for (auto p : kPhases) cols.push_back("time_fraction_" + std::string(phase_name(p)));
    w.header(cols);

    auto row = [&](std::string_view kind, double pathloss, double weight, double level, const EnergyReport& r) {
        w.field(kind).field(pathloss).field(weight).field(level);
        w.field(r.occupancy.t_idle).field(r.occupancy.t_tx).field(r.occupancy.t_rx);
        w.field(r.p_avg).field(r.pr_fail).field(r.delay).field(r.energy_per_bit);
        for (double v : r.breakdown.energy_fraction) w.field(v);
        for (double v : r.breakdown.time_fraction) w.field(v);
        w.end_row();
    };
    const double nan = std::numeric_limits<double>::quiet_NaN();
    row("summary", nan, 1.0, nan, result.summary);
    for (std::size_t i = 0; i < result.samples.size(); ++i) {
        const auto& s = result.samples[i];
        row("sample", s.point.pathloss_db, result.weights[i], s.point.tx_level_dbm, s.report);
    }
}

void write_breakdown_csv(std::ostream& out, const PhaseBreakdown& breakdown) {
    CsvWriter w(out);
    w.header({"phase", "energy_fraction", "time_fraction"});
    for (auto p : kPhases) {
        w.field(phase_name(p)).field(breakdown.energy(p)).field(breakdown.time(p));
        w.end_row();
    }
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Energy model of a duty-cycled IEEE 802.15.4 beacon-enabled uplink", "wpan-energy"};
    app.require_subcommand(1, 1);

    GlobalFlags g;
    app.add_option("--config", g.config_path, "Configuration file (key = value lines)")->check(CLI::ExistingFile);
    app.add_option("--set", g.overrides, "Override one key, key=value (repeatable, last wins)")
        ->allow_extra_args(false);
    app.add_option("--seed", g.seed, "Base seed of the contention simulator");
    app.add_option("--out", g.out_dir, "Output directory for CSV files");
    app.add_option("--table", g.table_path, "Reuse a contention table CSV instead of simulating");

    auto* contention = app.add_subcommand("contention", "Simulate one or more contention cells");
    ContentionFlags cf;
    contention->add_option("--nodes", cf.nodes, "Nodes on the channel")->check(CLI::PositiveNumber);
    contention->add_option("--load", cf.loads, "Offered load(s)")->delimiter(',');
    contention->add_option("--payload", cf.payloads, "Payload size(s), bytes")->delimiter(',');
    contention->add_option("--trials", cf.trials, "Superframes to simulate");

    auto* table = app.add_subcommand("table", "Build and cache the contention table");
    TableFlags tf;
    table->add_option("--loads", tf.loads, "Load grid, comma separated")->delimiter(',');
    table->add_option("--payloads", tf.payloads, "Payload grid, comma separated")->delimiter(',');

    auto* sweep = app.add_subcommand("pathloss-sweep", "Energy per bit against pathloss for every level");
    SweepFlags sf;
    sweep->add_option("--load", sf.load, "Channel load (defaults to the scenario load)");
    sweep->add_option("--step", sf.step, "Pathloss grid step, dB");
    sweep->add_option("--low", sf.low, "Pathloss grid start, dB");
    sweep->add_option("--high", sf.high, "Pathloss grid end, dB");

    auto* sizes = app.add_subcommand("packet-sweep", "Energy per bit against payload size");
    SizeFlags zf;
    sizes->add_option("--sizes", zf.sizes, "Payload sizes, comma separated")->delimiter(',');

    auto* case_study = app.add_subcommand("case-study", "Scenario power, failure, delay and breakdown");
    auto* breakdown = app.add_subcommand("breakdown", "Energy and time per protocol phase");

    auto* what_if = app.add_subcommand("what-if", "Effect of hypothetical hardware improvements");
    WhatIfFlags wf;
    what_if->add_option("--transition-scale", wf.transition_scale, "Scale of both transition times");
    auto* sense_opt = what_if->add_option("--sense-power", wf.sense_power, "Receive power while sensing, W");
    what_if->add_flag("--low-power-sense", wf.low_power_sense, "Sense at one tenth of the receive power")
        ->excludes(sense_opt);

    for (auto* sub : app.get_subcommands({})) sub->fallthrough();

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
        if (what_if->parsed() && !wf.transition_scale && !wf.sense_power && !wf.low_power_sense)
            throw CLI::ValidationError("what-if", "needs --transition-scale, --sense-power or --low-power-sense");
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return 2;
    }

    try {
        Session session(g, out);
        if (contention->parsed()) return cmd_contention(session, cf, out);
        if (table->parsed()) return cmd_table(session, tf, out);
        if (sweep->parsed()) return cmd_pathloss_sweep(session, sf, out);
        if (sizes->parsed()) return cmd_packet_sweep(session, zf, out);
        if (case_study->parsed()) return cmd_case_study(session, out);
        if (breakdown->parsed()) return cmd_breakdown(session, out);
        if (what_if->parsed()) return cmd_what_if(session, wf, out);
    } catch (const StageError& e) {
        fmt::print(err, "error [{}]: {}\n", e.stage(), e.what());
        return 1;
    } catch (const std::exception& e) {
        fmt::print(err, "error: {}\n", e.what());
        return 1;
    }
    return 2;
}

}  // namespace wpan::cli

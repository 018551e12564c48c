#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "wpan/contention_table.hpp"
#include "wpan/csv.hpp"

using namespace wpan;
namespace fs = std::filesystem;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result invoke(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

fs::path fresh_dir(const std::string& name) {
    auto dir = fs::temp_directory_path() / ("wpan_cli_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

CsvDocument read_file(const fs::path& p) {
    std::ifstream in(p);
    return read_csv(in);
}

const std::string kFast = "sim.superframes=150";

}  // namespace

TEST_CASE("single-node contention run reports no collisions or failures") {
    const auto dir = fresh_dir("contention");
    const auto r = invoke({"contention", "--nodes", "1", "--load", "0.01", "--payload", "100", "--trials", "10000",
                           "--seed", "7", "--out", dir.string()});
    REQUIRE(r.code == 0);
    const auto doc = read_file(dir / "contention.csv");
    REQUIRE(doc.rows.size() == 1);
    CHECK(doc.number(0, "pr_col") == 0.0);
    CHECK(doc.number(0, "pr_caf") == 0.0);
    CHECK(doc.number(0, "payload_bytes") == 100);
}

TEST_CASE("cached tables reload identically and builds are reproducible") {
    const auto a = fresh_dir("table_a");
    const auto b = fresh_dir("table_b");
    for (const auto& dir : {a, b}) {
        const auto r = invoke({"--set", kFast, "--seed", "3", "table", "--loads", "0.2,0.4,0.6", "--payloads",
                               "20,120", "--out", dir.string()});
        REQUIRE(r.code == 0);
    }
    CHECK(slurp(a / "contention_table.csv") == slurp(b / "contention_table.csv"));

    std::ifstream in(a / "contention_table.csv");
    const auto table = read_contention_csv(in);
    const std::vector<double> loads = {0.2, 0.4, 0.6};
    const std::vector<int> payloads = {20, 120};
    SimConfig base;
    base.superframes = 150;
    base.seed = 3;
    const auto direct = build_contention_table(loads, payloads, base, MacTiming{}, MacParams{});
    CHECK(table == direct);
    for (double l : {0.25, 0.5})
        for (double p : {20.0, 64.0}) CHECK(lookup_contention(table, l, p) == lookup_contention(direct, l, p));
}

TEST_CASE("a table with the wrong schema is rejected naming the column") {
    const auto dir = fresh_dir("schema");
    std::ofstream(dir / "bad.csv") << "load,payload_bytes,t_cont_mean\n0.4,120,0.001\n";
    const auto r = invoke({"case-study", "--table", (dir / "bad.csv").string(), "--out", dir.string()});
    CHECK(r.code == 1);
    CHECK(r.err.find("error [simulation]") != std::string::npos);
    CHECK(r.err.find("missing column n_cca_mean") != std::string::npos);
}

TEST_CASE("case study, breakdown, sweeps and what-if from a cached table") {
    const auto dir = fresh_dir("pipeline");
    REQUIRE(invoke({"--set", kFast, "table", "--out", dir.string()}).code == 0);
    const std::string table = (dir / "contention_table.csv").string();

    const auto cs = invoke({"case-study", "--config", std::string(WPAN_SOURCE_DIR) + "/configs/case_study.cfg",
                            "--table", table, "--out", dir.string()});
    REQUIRE(cs.code == 0);
    CHECK(cs.out.find("average power") != std::string::npos);
    CHECK(cs.out.find("delay") != std::string::npos);
    CHECK(cs.out.find("failure") != std::string::npos);
    CHECK(cs.out.find("contention") != std::string::npos);
    const auto doc = read_file(dir / "case_study.csv");
    REQUIRE(doc.rows.size() == 257);
    CHECK(doc.text(0, "row") == "summary");
    CHECK(doc.number(0, "p_avg") > 0);
    for (const char* col : {"t_idle", "t_tx", "t_rx", "p_avg", "pr_fail", "delay", "energy_per_bit"})
        CHECK_NOTHROW(doc.column(col));
    const std::string first = slurp(dir / "case_study.csv");

    const auto again = invoke({"case-study", "--config", std::string(WPAN_SOURCE_DIR) + "/configs/case_study.cfg",
                               "--table", table, "--out", dir.string()});
    REQUIRE(again.code == 0);
    CHECK(slurp(dir / "case_study.csv") == first);
    CHECK(again.out == cs.out);

    REQUIRE(invoke({"breakdown", "--table", table, "--out", dir.string()}).code == 0);
    const auto fig9 = read_file(dir / "fig9.csv");
    REQUIRE(fig9.rows.size() == 5);
    double total = 0;
    for (std::size_t i = 0; i < 5; ++i) total += fig9.number(i, "energy_fraction");
    CHECK(total == doctest::Approx(1.0).epsilon(1e-9));

    REQUIRE(invoke({"pathloss-sweep", "--table", table, "--out", dir.string()}).code == 0);
    const auto fig7 = read_file(dir / "fig7.csv");
    CHECK(fig7.rows.size() == 8 * 241);
    for (const char* col : {"pathloss_db", "tx_level_dbm", "energy_per_bit", "load"}) CHECK_NOTHROW(fig7.column(col));

    REQUIRE(invoke({"packet-sweep", "--sizes", "10,50,123", "--table", table, "--out", dir.string()}).code == 0);
    const auto fig8 = read_file(dir / "fig8.csv");
    REQUIRE(fig8.rows.size() == 3);
    CHECK(fig8.number(0, "energy_per_bit") > fig8.number(2, "energy_per_bit"));

    const auto wi = invoke({"what-if", "--transition-scale", "0.5", "--table", table, "--out", dir.string()});
    REQUIRE(wi.code == 0);
    const auto w = read_file(dir / "what_if.csv");
    REQUIRE(w.rows.size() == 2);
    CHECK(w.text(1, "variant") == "modified");
    CHECK(w.number(1, "power_reduction") > 0);
    CHECK(wi.out.find("delta") != std::string::npos);

    const auto both = invoke({"what-if", "--transition-scale", "0.5", "--low-power-sense", "--table", table, "--out",
                              dir.string()});
    REQUIRE(both.code == 0);
    CHECK(read_file(dir / "what_if.csv").rows.size() == 3);
    CHECK(both.out.find("additional") != std::string::npos);
}

TEST_CASE("exit codes") {
    CHECK(invoke({}).code == 2);
    CHECK(invoke({"bogus"}).code == 2);
    CHECK(invoke({"case-study", "--unknown-flag"}).code == 2);
    CHECK(invoke({"what-if"}).code == 2);
    CHECK(invoke({"--help"}).code == 0);

    const auto bad_key = invoke({"--set", "radio.nope=1", "case-study"});
    CHECK(bad_key.code == 1);
    CHECK(bad_key.err.find("error [config]") != std::string::npos);
    CHECK(bad_key.err.find("radio.nope") != std::string::npos);

    const auto bad_ack = invoke({"--set", "mac.t_ack_min=1e-3", "--set", "mac.t_ack_max=0.5e-3", "breakdown"});
    CHECK(bad_ack.code == 1);
    CHECK(bad_ack.err.find("mac.t_ack_min") != std::string::npos);

    const auto bad_load = invoke({"contention", "--load", "1.5", "--trials", "10"});
    CHECK(bad_load.code == 1);
    CHECK(bad_load.err.find("error [simulation]") != std::string::npos);

    const auto bad_size = invoke({"--set", kFast, "packet-sweep", "--sizes", "200", "--out",
                                  fresh_dir("size").string()});
    CHECK(bad_size.code == 1);
    CHECK(bad_size.err.find("error [optimizer]") != std::string::npos);
}

TEST_CASE("emitters round-trip through the reader") {
    std::vector<EnergyCurve> curves(2);
    curves[0].tx_level_dbm = -25;
    curves[0].load = 0.4329;
    curves[0].samples = {{55.25, 1.234567890123e-7, 0.17, 1.2}, {55.5, 1.3e-7, 0.18, 1.21}};
    curves[1] = curves[0];
    curves[1].tx_level_dbm = 0;
    std::stringstream ss;
    cli::write_curves_csv(ss, curves);
    const auto doc = read_csv(ss);
    REQUIRE(doc.rows.size() == 4);
    CHECK(doc.number(0, "energy_per_bit") == 1.234567890123e-7);
    CHECK(doc.number(3, "tx_level_dbm") == 0);
    CHECK(doc.number(1, "load") == 0.4329);

    std::vector<SizePoint> sizes = {{10, 0.9, 2.9e-6}, {123, 0.43, 2.1e-7}};
    std::stringstream s2;
    cli::write_sizes_csv(s2, sizes);
    const auto d2 = read_csv(s2);
    CHECK(d2.number(1, "payload_bytes") == 123);
    CHECK(d2.number(0, "energy_per_bit") == 2.9e-6);

    PhaseBreakdown b;
    b.energy_fraction = {0.1, 0.2, 0.3, 0.25, 0.15};
    b.time_fraction = {0.2, 0.2, 0.2, 0.2, 0.2};
    std::stringstream s3;
    cli::write_breakdown_csv(s3, b);
    const auto d3 = read_csv(s3);
    CHECK(d3.text(1, "phase") == "contention");
    CHECK(d3.number(3, "energy_fraction") == 0.25);
}

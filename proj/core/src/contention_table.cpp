#include "wpan/contention_table.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>
#include <stdexcept>
#include <thread>

#include "wpan/csv.hpp"
#include "wpan/rng.hpp"

namespace wpan {

namespace {

template <class T>
bool strictly_ascending(const std::vector<T>& v) {
    return std::adjacent_find(v.begin(), v.end(), [](const T& a, const T& b) { return !(a < b); }) == v.end();
}

// Bracketing indices and weight of the upper neighbour, clamped at the edges.
struct Bracket {
    std::size_t lo;
    std::size_t hi;
    double w;
};

template <class T>
Bracket bracket(const std::vector<T>& axis, double x) {
    if (axis.size() == 1 || x <= static_cast<double>(axis.front())) return {0, 0, 0.0};
    if (x >= static_cast<double>(axis.back())) return {axis.size() - 1, axis.size() - 1, 0.0};
    std::size_t hi = 1;
    while (static_cast<double>(axis[hi]) < x) ++hi;
    if (static_cast<double>(axis[hi]) == x) return {hi, hi, 0.0};
    const double a = static_cast<double>(axis[hi - 1]);
    const double b = static_cast<double>(axis[hi]);
    return {hi - 1, hi, (x - a) / (b - a)};
}

ContentionStats blend(const ContentionStats& a, const ContentionStats& b, double w) {
    if (w == 0.0) return a;
    auto mix = [w](double x, double y) { return x + w * (y - x); };
    ContentionStats s;
    s.t_cont_mean = mix(a.t_cont_mean, b.t_cont_mean);
    s.n_cca_mean = mix(a.n_cca_mean, b.n_cca_mean);
    s.pr_col = mix(a.pr_col, b.pr_col);
    s.pr_caf = mix(a.pr_caf, b.pr_caf);
    s.se_t_cont = mix(a.se_t_cont, b.se_t_cont);
    s.se_n_cca = mix(a.se_n_cca, b.se_n_cca);
    s.se_pr_col = mix(a.se_pr_col, b.se_pr_col);
    s.se_pr_caf = mix(a.se_pr_caf, b.se_pr_caf);
    s.trials = std::min(a.trials, b.trials);
    return s;
}

const std::vector<std::string> kColumns = {"load",    "payload_bytes", "t_cont_mean", "n_cca_mean",
                                           "pr_col",  "pr_caf",        "se_t_cont",   "se_n_cca",
                                           "se_pr_col", "se_pr_caf",   "trials"};

}  // namespace

const ContentionStats& ContentionTable::at(std::size_t load_index, std::size_t payload_index) const {
    return cells.at(payload_index * loads.size() + load_index);
}

void ContentionTable::validate() const {
    if (loads.empty() || payloads.empty()) throw std::invalid_argument("contention table: empty axis");
    if (!strictly_ascending(loads) || !strictly_ascending(payloads))
        throw std::invalid_argument("contention table: axes must be strictly ascending");
    if (cells.size() != loads.size() * payloads.size())
        throw std::invalid_argument("contention table: cell count does not match the grid");
}

std::uint64_t cell_seed(std::uint64_t base, std::size_t load_index, std::size_t payload_index) {
    return mix_seed(base, load_index, payload_index);
}

ContentionTable build_contention_table(std::span<const double> loads, std::span<const int> payloads,
                                       const SimConfig& base, const MacTiming& timing, const MacParams& mac,
                                       const SimOptions& opts) {
    ContentionTable table;
    table.loads.assign(loads.begin(), loads.end());
    table.payloads.assign(payloads.begin(), payloads.end());
    table.cells.resize(loads.size() * payloads.size());
    table.validate();

    const std::size_t count = table.cells.size();
    unsigned workers = opts.workers != 0 ? opts.workers : std::max(1u, std::thread::hardware_concurrency());
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, count));

    // Parallelism is across cells; each cell runs single-threaded.
    SimOptions cell_opts = opts;
    cell_opts.workers = 1;
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::atomic<bool> failed{false};
    auto work = [&] {
        for (std::size_t i = next++; i < count && !failed; i = next++) {
            const std::size_t li = i % loads.size();
            const std::size_t pi = i / loads.size();
            SimConfig cfg = base;
            cfg.load = table.loads[li];
            cfg.payload_bytes = table.payloads[pi];
            cfg.seed = cell_seed(base.seed, li, pi);
            try {
                table.cells[i] = simulate_contention(cfg, timing, mac, cell_opts);
            } catch (...) {
                if (!failed.exchange(true)) failure = std::current_exception();
            }
        }
    };
    if (workers <= 1) {
        work();
    } else {
        std::vector<std::jthread> threads;
        for (unsigned w = 0; w < workers; ++w) threads.emplace_back(work);
    }
    if (failure) std::rethrow_exception(failure);
    return table;
}

ContentionStats lookup_contention(const ContentionTable& table, double load, double payload_bytes) {
    if (table.cells.empty()) throw std::invalid_argument("lookup_contention: empty table");
    const auto bl = bracket(table.loads, load);
    const auto bp = bracket(table.payloads, payload_bytes);
    const auto lower = blend(table.at(bl.lo, bp.lo), table.at(bl.hi, bp.lo), bl.w);
    const auto upper = blend(table.at(bl.lo, bp.hi), table.at(bl.hi, bp.hi), bl.w);
    return blend(lower, upper, bp.w);
}

void write_contention_csv(std::ostream& out, const ContentionTable& table) {
    CsvWriter w(out);
    w.header(kColumns);
    for (std::size_t pi = 0; pi < table.payloads.size(); ++pi) {
        for (std::size_t li = 0; li < table.loads.size(); ++li) {
            const auto& s = table.at(li, pi);
            w.field(table.loads[li]).field(table.payloads[pi]);
            w.field(s.t_cont_mean).field(s.n_cca_mean).field(s.pr_col).field(s.pr_caf);
            w.field(s.se_t_cont).field(s.se_n_cca).field(s.se_pr_col).field(s.se_pr_caf);
            w.field(static_cast<unsigned long long>(s.trials));
            w.end_row();
        }
    }
}

ContentionTable read_contention_csv(std::istream& in) {
    const CsvDocument doc = read_csv(in);
    for (const auto& c : kColumns) doc.column(c);

    std::map<std::pair<int, double>, ContentionStats> by_cell;
    std::vector<double> loads;
    std::vector<int> payloads;
    for (std::size_t r = 0; r < doc.rows.size(); ++r) {
        const double load = doc.number(r, "load");
        const auto payload = static_cast<int>(parse_integer(doc.text(r, "payload_bytes"), "payload_bytes"));
        ContentionStats s;
        s.t_cont_mean = doc.number(r, "t_cont_mean");
        s.n_cca_mean = doc.number(r, "n_cca_mean");
        s.pr_col = doc.number(r, "pr_col");
        s.pr_caf = doc.number(r, "pr_caf");
        s.se_t_cont = doc.number(r, "se_t_cont");
        s.se_n_cca = doc.number(r, "se_n_cca");
        s.se_pr_col = doc.number(r, "se_pr_col");
        s.se_pr_caf = doc.number(r, "se_pr_caf");
        s.trials = static_cast<std::uint64_t>(parse_integer(doc.text(r, "trials"), "trials"));
        if (!by_cell.emplace(std::pair{payload, load}, s).second)
            throw std::runtime_error("contention table: duplicate cell at row " + std::to_string(r + 1));
        loads.push_back(load);
        payloads.push_back(payload);
    }
    std::sort(loads.begin(), loads.end());
    loads.erase(std::unique(loads.begin(), loads.end()), loads.end());
    std::sort(payloads.begin(), payloads.end());
    payloads.erase(std::unique(payloads.begin(), payloads.end()), payloads.end());

    ContentionTable table;
    table.loads = loads;
    table.payloads = payloads;
    for (int p : payloads) {
        for (double l : loads) {
            auto it = by_cell.find({p, l});
            if (it == by_cell.end())
                throw std::runtime_error("contention table: missing cell load=" + format_double(l) +
                                         " payload=" + std::to_string(p));
            table.cells.push_back(it->second);
        }
    }
    table.validate();
    return table;
}

}  // namespace wpan

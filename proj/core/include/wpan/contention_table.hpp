#pragma once

// Grid of contention statistics over (offered load, payload size), with
// bilinear lookup and a lossless CSV form:
//
//   load,payload_bytes,t_cont_mean,n_cca_mean,pr_col,pr_caf,
//   se_t_cont,se_n_cca,se_pr_col,se_pr_caf,trials

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "wpan/csma_sim.hpp"

namespace wpan {

struct ContentionTable {
    std::vector<double> loads;  ///< strictly ascending
    std::vector<int> payloads;  ///< strictly ascending
    /// Row-major by payload: cells[p * loads.size() + l].
    std::vector<ContentionStats> cells;

    const ContentionStats& at(std::size_t load_index, std::size_t payload_index) const;
    void validate() const;

    friend bool operator==(const ContentionTable&, const ContentionTable&) = default;
};

/// Seed of cell (load_index, payload_index): mix_seed(base, load_index, payload_index).
std::uint64_t cell_seed(std::uint64_t base, std::size_t load_index, std::size_t payload_index);

/// One simulate_contention run per cell; `base` supplies nodes,
/// superframes and the base seed. Cells are spread over opts.workers
/// threads; the table does not depend on the worker count.
ContentionTable build_contention_table(std::span<const double> loads, std::span<const int> payloads,
                                       const SimConfig& base, const MacTiming& timing, const MacParams& mac,
                                       const SimOptions& opts = {});

/// Bilinear interpolation of every statistic over (load, payload); queries
/// outside the grid are clamped to the nearest edge. `trials` is the
/// smallest count among the contributing cells.
ContentionStats lookup_contention(const ContentionTable& table, double load, double payload_bytes);

void write_contention_csv(std::ostream& out, const ContentionTable& table);
/// Throws std::runtime_error on a schema mismatch ("missing column <name>")
/// or a malformed grid.
ContentionTable read_contention_csv(std::istream& in);

}  // namespace wpan

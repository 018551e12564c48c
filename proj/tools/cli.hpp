#pragma once

// Command-line front end. `run` is the whole program minus process
// plumbing so that tests can drive it in-process.
//
// Exit status: 0 success, 1 pipeline failure (the diagnostic names the
// failing stage), 2 usage error.

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "wpan/link_adapt.hpp"

namespace wpan::cli {

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// CSV emitters. Every file they produce reads back through read_csv.

/// pathloss_db,tx_level_dbm,energy_per_bit,pr_fail,delay,load
void write_curves_csv(std::ostream& out, std::span<const EnergyCurve> curves);
/// payload_bytes,load,energy_per_bit
void write_sizes_csv(std::ostream& out, std::span<const SizePoint> points);
/// One `summary` row followed by one `sample` row per pathloss point.
void write_case_study_csv(std::ostream& out, const CaseStudyResult& result);
/// phase,energy_fraction,time_fraction
void write_breakdown_csv(std::ostream& out, const PhaseBreakdown& breakdown);

}  // namespace wpan::cli

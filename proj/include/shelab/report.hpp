#pragma once

#include <json.hpp>
#include <ostream>
#include <string>
#include <vector>

#include "shelab/verifier.hpp"

namespace shelab {

/// Lower-case, filesystem-safe version of a check name.
std::string file_stem(const std::string& name);

nlohmann::json report_to_json(const CheckReport& r);

/// One row per report: name, statistic, bound, coarse, fine, stderr, pass, inconclusive, runtime, note.
void write_summary_csv(const std::string& path, const std::vector<CheckReport>& reports);
/// {"reports": [...], plus every key of `extra`}.
void write_summary_json(const std::string& path, const std::vector<CheckReport>& reports, const nlohmann::json& extra);
void write_detail_csv(const std::string& path, const DetailTable& table);
/// Static line plot of the last detail column against the first parameter column, one line per
/// grid level. Axes are logarithmic when the data are positive.
void write_detail_svg(const std::string& path, const CheckReport& r);
void write_json(const std::string& path, const nlohmann::json& doc);

/// "PASS name statistic=... bound=..." lines for the terminal.
void print_reports(std::ostream& os, const std::vector<CheckReport>& reports);

}  // namespace shelab

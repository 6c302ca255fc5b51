#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "nwopt/core_types.hpp"
#include "nwopt/experiments.hpp"

namespace nwopt::io {

/// 17 significant digits, enough to round-trip any double.
std::string format_real(double value);

/// Parses "0.3,0.5" into {0.3, 0.5}. Throws ParseError.
std::vector<double> parse_real_list(std::string_view text);

/// Dataset CSV: header g1,...,gp,xi1,...,xiq then one observation per line.
/// Errors name the offending line and column.
Dataset read_dataset_csv(std::istream& in);
Dataset read_dataset_csv_file(const std::string& path);
void write_dataset_csv(std::ostream& out, const Dataset& data);
void write_dataset_csv_file(const std::string& path, const Dataset& data);

/// One line per trial record.
void write_trials_csv(std::ostream& out, const ExperimentReport& report);

}  // namespace nwopt::io

#pragma once

#include <map>
#include <string>
#include <vector>

#include "cooplift/simulation.hpp"

namespace cooplift::output {

std::vector<std::string> timeseries_header(std::size_t n);

/// Summary metrics as ordered key/value pairs.
std::vector<std::pair<std::string, std::string>> metrics(const RunLog& log);

/// Writes timeseries.csv, metrics.txt, plotdata/panel_[a-f]_*.csv and, when
/// the diagnostic was computed, lyapunov.csv. Throws IoError.
void write_outputs(const RunLog& log, const std::string& dir);

/// Parses a metrics.txt file back into a map.
std::map<std::string, std::string> read_metrics(const std::string& path);

}  // namespace cooplift::output

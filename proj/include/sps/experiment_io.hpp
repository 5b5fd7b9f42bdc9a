#pragma once

#include <stdexcept>
#include <string>

#include "sps/model.hpp"
#include "sps/montecarlo.hpp"

namespace sps {

// Raised on malformed input files (data CSV or experiment plans).
class DataFileError : public std::runtime_error {
 public:
  explicit DataFileError(const std::string& what) : std::runtime_error(what) {}
};

// Parses a flat key-value plan ("key = value" lines, '#' comments). Unknown
// keys are rejected. Confidence enters as exact integers m and q, or as a
// rational p from which the minimal pair is derived.
ExperimentPlan parse_plan_text(const std::string& text);
ExperimentPlan parse_plan_file(const std::string& path);

// Reads a two-column CSV of regressors and outputs. A first line that does
// not parse as two numbers is treated as a header.
DataSet read_xy_csv(const std::string& path);

// One row per grid point, fixed column order:
// n,emp_exact,emp_outer,theo_exact,theo_outer,coverage,k,seed
std::string results_csv(const ExperimentSummary& summary, bool timestamp);

// Self-contained SVG with one polyline per finite curve and the full row
// data embedded as comments, so plots are diffable without a viewer.
std::string results_svg(const ExperimentSummary& summary,
                        const ExperimentPlan& plan, bool timestamp);

void write_file(const std::string& path, const std::string& content);

}  // namespace sps

// Copyright 2026 The qwalk Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef QWALK_IO_H_
#define QWALK_IO_H_

#include <string>
#include <string_view>
#include <vector>

#include "qwalk/experiments.h"

namespace qwalk {

enum class OutputFormat { Csv, Json };

std::string_view format_name(OutputFormat format);
OutputFormat parse_format(std::string_view name);

/// Everything a run needs. Parsed from a JSON document of the form
///
///   {
///     "experiment": {
///       "kind": "two-fold",
///       "n_steps": 11,
///       "layers": [{"omega": 1.5707963267948966, "gamma": 0, "transmission": 0.99}],
///       "mu_alpha": 0.1, "mu_xi": 0.026, "overlap": 0.7, ...
///     },
///     "output": {"path": "out.csv", "format": "csv"},
///     "oracle_check": false
///   }
///
/// A single entry in "layers" is repeated for every step; otherwise there
/// must be exactly n_steps entries. Unknown keys are rejected.
struct RunConfig {
    ExperimentSpec experiment;
    /// Largest walk length for step evolution (defaults to n_steps).
    int n_max = 0;
    HomAxis hom_axis = HomAxis::Overlap;
    /// Points of a HOM scan; empty means the single configured point.
    std::vector<double> hom_values;
    double fit_target = 0.70;
    double fit_tolerance = 1e-3;
    std::string output_path;
    OutputFormat format = OutputFormat::Csv;
    bool oracle_check = false;
};

RunConfig parse_config(std::string_view text);
RunConfig load_config(const std::string &path);

/// Canonical JSON of a resolved config; parse_config of the result gives
/// back the same config.
std::string config_to_json(const RunConfig &config);

std::string format_double(double value);

/// One file holding one or more distributions (several for step
/// evolution), with the resolved config echoed in the header.
std::string render_distributions(const RunConfig &config, const std::vector<Distribution> &dists);

struct HomRow {
    double value = 0.0;
    double visibility = 0.0;
};
std::string render_hom(const RunConfig &config, const std::vector<HomRow> &rows);

std::string render_fit(const RunConfig &config, const OverlapFit &fit);

/// Reads a single distribution written by render_distributions (either
/// format, detected from the content).
Distribution parse_distribution(std::string_view text);
Distribution read_distribution(const std::string &path);

std::string read_file(const std::string &path);
void write_file(const std::string &path, const std::string &content);

}  // namespace qwalk

#endif  // QWALK_IO_H_

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

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "CLI11.hpp"
#include "qwalk/error.h"
#include "qwalk/experiments.h"
#include "qwalk/io.h"
#include "qwalk/metrics.h"

namespace {

using qwalk::ExperimentKind;

constexpr int kExitError = 1;
constexpr int kExitOracleMismatch = 3;
constexpr double kOracleTolerance = 1e-6;
constexpr int kOracleMaxSteps = 3;

struct RunFlags {
    std::string config_path;
    std::string out_path;
    std::string format;
    std::string kind;
    bool oracle = false;
    std::optional<bool> heralded;
    bool classical = false;
};

void print_error(std::string_view code, const std::string &message) {
    nlohmann::json err;
    err["error"] = std::string(code);
    err["message"] = message;
    std::cerr << err.dump() << "\n";
}

qwalk::RunConfig resolve(const RunFlags &flags) {
    qwalk::RunConfig config =
        flags.config_path.empty() ? qwalk::parse_config("{}") : qwalk::load_config(flags.config_path);
    if (!flags.kind.empty()) {
        config.experiment.kind = qwalk::parse_kind(flags.kind);
    }
    if (!flags.out_path.empty()) {
        config.output_path = flags.out_path;
    }
    if (!flags.format.empty()) {
        config.format = qwalk::parse_format(flags.format);
    }
    if (flags.heralded) {
        config.experiment.heralded = *flags.heralded;
    }
    if (flags.classical) {
        config.experiment.pair_source = qwalk::SourceKind::SquashedPair;
    }
    config.oracle_check = config.oracle_check || flags.oracle;
    config.experiment.validate();
    return config;
}

void emit(const qwalk::RunConfig &config, const std::string &content) {
    if (config.output_path.empty()) {
        std::cout << content;
    } else {
        qwalk::write_file(config.output_path, content);
    }
}

int run_oracle_check(const qwalk::RunConfig &config) {
    const auto &spec = config.experiment;
    const int steps = spec.kind == ExperimentKind::HomScan ? 1 : spec.walk.n_steps;
    if (steps > kOracleMaxSteps) {
        throw qwalk::Error(qwalk::ErrorCode::ResourceBound, "the oracle check is limited to walks of at most " +
                                                                std::to_string(kOracleMaxSteps) + " steps");
    }
    qwalk::OracleOptions options;
    options.cutoff = spec.oracle_cutoff;
    const auto cmp = qwalk::compare_with_oracle(spec, spec.kind, options);
    nlohmann::ordered_json report;
    report["oracle_max_abs_diff"] = cmp.max_abs_diff;
    report["patterns_compared"] = cmp.compared;
    report["truncation_leak"] = cmp.truncation_leak;
    report["tolerance"] = kOracleTolerance;
    report["pass"] = cmp.max_abs_diff < kOracleTolerance;
    std::cerr << report.dump() << "\n";
    return cmp.max_abs_diff < kOracleTolerance ? 0 : kExitOracleMismatch;
}

int simulate(const RunFlags &flags) {
    const qwalk::RunConfig config = resolve(flags);
    const auto &spec = config.experiment;
    switch (spec.kind) {
        case ExperimentKind::OneFold:
        case ExperimentKind::TwoFold:
        case ExperimentKind::ThreeFoldPartial:
            emit(config, qwalk::render_distributions(config, {qwalk::run_distribution(spec, spec.kind)}));
            break;
        case ExperimentKind::StepEvolution:
            emit(config, qwalk::render_distributions(config, qwalk::step_evolution(spec, config.n_max)));
            break;
        case ExperimentKind::HomScan: {
            std::vector<double> values = config.hom_values;
            if (values.empty()) {
                values.push_back(config.hom_axis == qwalk::HomAxis::Overlap ? spec.overlap : spec.mu_alpha);
            }
            const auto vis = qwalk::hom_scan(spec, config.hom_axis, values);
            std::vector<qwalk::HomRow> rows;
            for (std::size_t i = 0; i < values.size(); ++i) {
                rows.push_back({values[i], vis[i]});
            }
            emit(config, qwalk::render_hom(config, rows));
            break;
        }
    }
    return config.oracle_check ? run_oracle_check(config) : 0;
}

int compare(const std::string &a, const std::string &b, bool squared) {
    const auto p = qwalk::read_distribution(a);
    const auto q = qwalk::read_distribution(b);
    const auto report = qwalk::bhattacharyya(
        p, q, squared ? qwalk::SimilarityConvention::BhattacharyyaSquared : qwalk::SimilarityConvention::Bhattacharyya);
    std::printf("%.6f\n", report.value);
    return 0;
}

int fit_overlap(const RunFlags &flags) {
    const qwalk::RunConfig config = resolve(flags);
    const auto fit = qwalk::fit_overlap(config.experiment, config.fit_target, config.fit_tolerance);
    emit(config, qwalk::render_fit(config, fit));
    return 0;
}

void add_run_flags(CLI::App *cmd, RunFlags &flags) {
    cmd->add_option("--config", flags.config_path, "JSON run configuration")->check(CLI::ExistingFile);
    cmd->add_option("--out", flags.out_path, "Output file (stdout when omitted)");
    cmd->add_option("--format", flags.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
    auto *h = cmd->add_flag_callback("--heralded", [&flags] { flags.heralded = true; }, "Condition on APD1");
    auto *u = cmd->add_flag_callback("--unheralded", [&flags] { flags.heralded = false; }, "Do not condition on APD1");
    h->excludes(u);
    cmd->add_flag("--classical-source", flags.classical, "Replace the pair source by a squashed state");
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Multiphoton time-bin quantum walk simulator"};
    app.require_subcommand(1);

    RunFlags sim_flags;
    auto *sim = app.add_subcommand("simulate", "Compute click distributions");
    sim->add_option("kind", sim_flags.kind, "one-fold | two-fold | three-fold | hom | step-evolution")
        ->check(CLI::IsMember({"one-fold", "two-fold", "three-fold", "hom", "step-evolution"}));
    add_run_flags(sim, sim_flags);
    sim->add_flag("--oracle", sim_flags.oracle, "Cross-check against the Fock oracle (N <= 3)");

    std::string first;
    std::string second;
    bool squared = false;
    auto *cmp = app.add_subcommand("compare", "Bhattacharyya similarity of two distribution files");
    cmp->add_option("first", first)->required()->check(CLI::ExistingFile);
    cmp->add_option("second", second)->required()->check(CLI::ExistingFile);
    cmp->add_flag("--squared", squared, "Report the squared coefficient");

    RunFlags fit_flags;
    auto *fit = app.add_subcommand("fit-overlap", "Find the overlap giving the target HOM visibility");
    add_run_flags(fit, fit_flags);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        if (e.get_exit_code() == 0) {
            return app.exit(e);
        }
        print_error("ConfigInvalid", e.what());
        return kExitError;
    }

    try {
        if (*sim) {
            return simulate(sim_flags);
        }
        if (*cmp) {
            return compare(first, second, squared);
        }
        return fit_overlap(fit_flags);
    } catch (const qwalk::Error &e) {
        print_error(qwalk::error_code_name(e.code()), e.what());
    } catch (const std::exception &e) {
        print_error("Internal", e.what());
    }
    return kExitError;
}

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

#ifndef QWALK_EXPERIMENTS_H_
#define QWALK_EXPERIMENTS_H_

#include <array>
#include <span>
#include <string>
#include <vector>

#include "qwalk/detection.h"
#include "qwalk/fock.h"
#include "qwalk/setup.h"
#include "qwalk/walk.h"

namespace qwalk {

enum class ExperimentKind { OneFold, TwoFold, ThreeFoldPartial, HomScan, StepEvolution };

enum class InputModel {
    /// Attenuated coherent state in |V,t1> plus the signal of a pair source
    /// in |H,t1>, idler on APD1.
    CoherentAndPair,
    /// One photon in |H,t1> and one in |V,t1>, no herald. Needs the Fock
    /// oracle.
    IdealPhotons,
};

struct ExperimentSpec {
    WalkConfig walk = WalkConfig::uniform(11);
    double mu_alpha = 0.1;
    double mu_xi = 0.026;
    double overlap = 0.7;
    double eta_kerr = kDefaultKerrEfficiency;
    double eta_idler = 1.0;
    double eta_sys = 1.0;
    bool heralded = true;
    ExperimentKind kind = ExperimentKind::OneFold;
    /// TMSV, or SquashedPair for the classical comparison model.
    SourceKind pair_source = SourceKind::TMSV;
    InputModel inputs = InputModel::CoherentAndPair;
    /// Experiment repeated for each prefix by step evolution.
    ExperimentKind evolution_kind = ExperimentKind::OneFold;
    /// Cutoff used when the Fock oracle evaluates the experiment.
    int oracle_cutoff = 10;

    void validate() const;
    /// Sources, walk and losses, with both gates off.
    OpticalSetup setup() const;
};

std::string_view kind_name(ExperimentKind kind);
ExperimentKind parse_kind(std::string_view name);

/// (m) for one-fold, (m1, m2) for two-fold, (m1, m2, [rest]) for three-fold.
struct OutcomeLabel {
    std::vector<int> bins;
    bool remainder = false;

    std::string to_string() const;
    bool operator==(const OutcomeLabel &) const = default;
};

enum class Normalization { RawPattern, NormalizedOverOutcomes };

struct Distribution {
    std::vector<OutcomeLabel> labels;
    std::vector<double> probs;
    /// Click probability behind each entry before normalization (conditioned
    /// on the herald when heralded).
    std::vector<double> raw;
    Normalization normalization = Normalization::NormalizedOverOutcomes;
    /// False when every raw probability is zero; probs are then all zero.
    bool normalization_defined = true;
    /// Walk length this distribution belongs to.
    int steps = 0;

    double sum() const;
};

/// One gate setting and the detector pattern read out for one outcome.
struct ScanPoint {
    OutcomeLabel label;
    std::array<GateSpec, 2> gates{};
    ClickPattern pattern;
};

/// The gate settings and patterns behind a one-, two- or three-fold scan.
std::vector<ScanPoint> scan_points(const ExperimentSpec &spec, ExperimentKind kind);

enum class Engine { Gaussian, FockOracle };

/// Raw probability of each scan point; heralded specs are conditioned on
/// APD1. Points are evaluated in parallel.
std::vector<double> evaluate_points(const ExperimentSpec &spec, std::span<const ScanPoint> points, Engine engine);

/// Normalizes raw probabilities over the outcomes.
Distribution make_distribution(std::vector<OutcomeLabel> labels, std::vector<double> raw, int steps);

Distribution run_one_fold(const ExperimentSpec &spec);
Distribution run_two_fold(const ExperimentSpec &spec);
Distribution run_three_fold_partial(const ExperimentSpec &spec);
/// Dispatches on spec.kind (one-, two- or three-fold).
Distribution run_distribution(const ExperimentSpec &spec, ExperimentKind kind);

/// Distributions for walk prefixes 1..n_max, each with the same layers.
std::vector<Distribution> step_evolution(const ExperimentSpec &spec, int n_max);

/// One-layer walk used for HOM: a balanced coin with the first layer's
/// transmission (or the default).
WalkConfig hom_walk(const ExperimentSpec &spec);

/// Coincidence on the two output arms of a one-step walk, in coincidence
/// with APD1 when heralded, at the given overlap.
double hom_coincidence(const ExperimentSpec &spec, double overlap);

/// (C(o = 0) - C(o)) / C(o = 0) at spec.overlap.
double hom_visibility(const ExperimentSpec &spec);

enum class HomAxis { Overlap, MuAlpha };

std::vector<double> hom_scan(const ExperimentSpec &spec, HomAxis axis, std::span<const double> values);

struct OverlapFit {
    double overlap = 0.0;
    double mu_alpha = 0.0;  // coherent brightness maximizing the visibility at `overlap`
    double visibility = 0.0;
};

/// Highest visibility over the coherent brightness at a fixed overlap.
OverlapFit max_hom_visibility(const ExperimentSpec &spec, double overlap);

struct OracleComparison {
    double max_abs_diff = 0.0;
    /// Number of pattern probabilities compared.
    std::size_t compared = 0;
    double truncation_leak = 0.0;
};

/// Evaluates every fully specified click pattern behind each scan point of
/// `kind` with both engines. HomScan compares the HOM readout at
/// spec.overlap; StepEvolution compares spec.evolution_kind at full length.
OracleComparison compare_with_oracle(const ExperimentSpec &spec, ExperimentKind kind,
                                     const OracleOptions &options = {});

/// Solves max_{mu_alpha} V(o) = target for o by bisection, to |V - target| < tol.
OverlapFit fit_overlap(const ExperimentSpec &spec, double target = 0.70, double tol = 1e-3);

}  // namespace qwalk

#endif  // QWALK_EXPERIMENTS_H_

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

#include "qwalk/experiments.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "qwalk/error.h"
#include "qwalk/parallel.h"

namespace qwalk {

namespace {

void check_unit(double value, const char *name) {
    if (!(value >= 0.0 && value <= 1.0)) {
        throw Error(ErrorCode::InvalidArgument, std::string(name) + " must lie in [0, 1]");
    }
}

ClickPattern readout_pattern(bool heralded, std::initializer_list<DetectorSlot> clicked) {
    ClickPattern p(kNumDetectors, Click::Any);
    for (auto d : clicked) {
        p[d] = Click::On;
    }
    if (heralded) {
        p[kHeraldDetector] = Click::On;
    }
    return p;
}

bool uses_herald(const ExperimentSpec &spec) {
    return spec.heralded && spec.inputs == InputModel::CoherentAndPair;
}

double conditioned(double joint, double herald) {
    if (!(herald > 0.0)) {
        throw Error(ErrorCode::ZeroHeraldRate, "the herald detector never clicks");
    }
    return joint / herald;
}

double oracle_point(const OpticalSetup &setup, const ClickPattern &pattern, bool heralded, int cutoff) {
    OracleOptions options;
    options.cutoff = cutoff;
    if (!heralded) {
        return oracle_pattern_prob(setup, pattern, options);
    }
    ClickPattern herald(kNumDetectors, Click::Any);
    herald[kHeraldDetector] = Click::On;
    const ClickPattern both[] = {pattern, herald};
    const auto result = oracle_pattern_probs(setup, both, options);
    return conditioned(result.probabilities[0], result.probabilities[1]);
}

ExperimentSpec hom_spec(const ExperimentSpec &spec, double overlap) {
    ExperimentSpec out = spec;
    out.walk = hom_walk(spec);
    out.overlap = overlap;
    return out;
}

}  // namespace

void ExperimentSpec::validate() const {
    walk.validate();
    if (!(mu_alpha >= 0.0) || !std::isfinite(mu_alpha) || !(mu_xi >= 0.0) || !std::isfinite(mu_xi)) {
        throw Error(ErrorCode::InvalidArgument, "mean photon numbers must be finite and non-negative");
    }
    check_unit(overlap, "overlap");
    check_unit(eta_kerr, "eta_kerr");
    check_unit(eta_idler, "eta_idler");
    check_unit(eta_sys, "eta_sys");
    if (pair_source != SourceKind::TMSV && pair_source != SourceKind::SquashedPair) {
        throw Error(ErrorCode::InvalidArgument, "pair source must be TMSV or SquashedPair");
    }
    if ((kind == ExperimentKind::TwoFold || kind == ExperimentKind::ThreeFoldPartial) && walk.n_steps < 1) {
        throw Error(ErrorCode::InvalidArgument, "two gated bins need a walk of at least one step");
    }
    if (oracle_cutoff < 1) {
        throw Error(ErrorCode::InvalidArgument, "oracle cutoff must be positive");
    }
}

OpticalSetup ExperimentSpec::setup() const {
    OpticalSetup s;
    s.walk = walk;
    s.eta_sys = eta_sys;
    s.eta_idler = eta_idler;
    const ModeIndex h1{Polarization::H, 1, kInterferingSector};
    const ModeIndex v1{Polarization::V, 1, kInterferingSector};
    if (inputs == InputModel::IdealPhotons) {
        s.sources.push_back({SourceKind::Fock1, 1.0, 0.0, h1, 1.0});
        s.sources.push_back({SourceKind::Fock1, 1.0, 0.0, v1, overlap});
    } else {
        s.sources.push_back({pair_source, mu_xi, 0.0, h1, 1.0});
        s.sources.push_back({SourceKind::Coherent, mu_alpha, 0.0, v1, overlap});
    }
    return s;
}

std::string_view kind_name(ExperimentKind kind) {
    switch (kind) {
        case ExperimentKind::OneFold:
            return "one-fold";
        case ExperimentKind::TwoFold:
            return "two-fold";
        case ExperimentKind::ThreeFoldPartial:
            return "three-fold";
        case ExperimentKind::HomScan:
            return "hom";
        case ExperimentKind::StepEvolution:
            return "step-evolution";
    }
    return "unknown";
}

ExperimentKind parse_kind(std::string_view name) {
    for (auto k : {ExperimentKind::OneFold, ExperimentKind::TwoFold, ExperimentKind::ThreeFoldPartial,
                   ExperimentKind::HomScan, ExperimentKind::StepEvolution}) {
        if (kind_name(k) == name) {
            return k;
        }
    }
    throw Error(ErrorCode::ConfigInvalid, "unknown experiment kind '" + std::string(name) + "'");
}

std::string OutcomeLabel::to_string() const {
    std::string s;
    for (std::size_t i = 0; i < bins.size(); ++i) {
        if (i > 0) {
            s += '-';
        }
        s += std::to_string(bins[i]);
    }
    if (remainder) {
        s += "-[rest]";
    }
    return s;
}

double Distribution::sum() const {
    return std::accumulate(probs.begin(), probs.end(), 0.0);
}

std::vector<ScanPoint> scan_points(const ExperimentSpec &spec, ExperimentKind kind) {
    const int bins = spec.walk.n_steps + 1;
    const bool herald = uses_herald(spec);
    std::vector<ScanPoint> points;
    switch (kind) {
        case ExperimentKind::OneFold:
            // A single gate is enough; it reports on APD4.
            for (int m = 1; m <= bins; ++m) {
                ScanPoint p;
                p.label.bins = {m};
                p.gates[1] = {m, spec.eta_kerr, true};
                p.pattern = readout_pattern(herald, {kGate2Detector});
                points.push_back(std::move(p));
            }
            break;
        case ExperimentKind::TwoFold:
        case ExperimentKind::ThreeFoldPartial: {
            const bool three = kind == ExperimentKind::ThreeFoldPartial;
            for (int m1 = 1; m1 <= bins; ++m1) {
                for (int m2 = m1 + 1; m2 <= bins; ++m2) {
                    ScanPoint p;
                    p.label.bins = {m1, m2};
                    p.label.remainder = three;
                    p.gates[0] = {m1, spec.eta_kerr, true};
                    p.gates[1] = {m2, spec.eta_kerr, true};
                    p.pattern = three ? readout_pattern(herald, {kGate1Detector, kGate2Detector, kBucketDetector})
                                      : readout_pattern(herald, {kGate1Detector, kGate2Detector});
                    points.push_back(std::move(p));
                }
            }
            break;
        }
        default:
            throw Error(ErrorCode::InvalidArgument, "scan points exist for one-, two- and three-fold runs only");
    }
    return points;
}

std::vector<double> evaluate_points(const ExperimentSpec &spec, std::span<const ScanPoint> points, Engine engine) {
    spec.validate();
    const bool herald = uses_herald(spec);
    const OpticalSetup base = spec.setup();
    if (engine == Engine::FockOracle) {
        return parallel_map(points.size(), [&](std::size_t i) {
            OpticalSetup setup = base;
            setup.gates = points[i].gates;
            return oracle_point(setup, points[i].pattern, herald, spec.oracle_cutoff);
        });
    }
    const GaussianState propagated = propagate_gaussian(base);
    return parallel_map(points.size(), [&](std::size_t i) {
        const RoutedState routed = build_layout(propagated, points[i].gates);
        return herald ? heralded_prob(routed.state, routed.layout, points[i].pattern)
                      : pattern_prob(routed.state, routed.layout, points[i].pattern);
    });
}

Distribution make_distribution(std::vector<OutcomeLabel> labels, std::vector<double> raw, int steps) {
    Distribution d;
    d.labels = std::move(labels);
    d.raw = std::move(raw);
    d.steps = steps;
    d.normalization = Normalization::NormalizedOverOutcomes;
    const double total = std::accumulate(d.raw.begin(), d.raw.end(), 0.0);
    d.probs.assign(d.raw.size(), 0.0);
    if (total > 0.0) {
        for (std::size_t i = 0; i < d.raw.size(); ++i) {
            d.probs[i] = d.raw[i] / total;
        }
    } else {
        d.normalization_defined = false;
    }
    return d;
}

Distribution run_distribution(const ExperimentSpec &spec, ExperimentKind kind) {
    const auto points = scan_points(spec, kind);
    const Engine engine = spec.inputs == InputModel::IdealPhotons ? Engine::FockOracle : Engine::Gaussian;
    std::vector<double> raw = evaluate_points(spec, points, engine);
    std::vector<OutcomeLabel> labels;
    labels.reserve(points.size());
    for (const auto &p : points) {
        labels.push_back(p.label);
    }
    return make_distribution(std::move(labels), std::move(raw), spec.walk.n_steps);
}

Distribution run_one_fold(const ExperimentSpec &spec) {
    return run_distribution(spec, ExperimentKind::OneFold);
}

Distribution run_two_fold(const ExperimentSpec &spec) {
    return run_distribution(spec, ExperimentKind::TwoFold);
}

Distribution run_three_fold_partial(const ExperimentSpec &spec) {
    return run_distribution(spec, ExperimentKind::ThreeFoldPartial);
}

std::vector<Distribution> step_evolution(const ExperimentSpec &spec, int n_max) {
    if (n_max < 1 || n_max > spec.walk.n_steps) {
        throw Error(ErrorCode::InvalidArgument, "step evolution needs 1 <= n_max <= n_steps");
    }
    std::vector<Distribution> out;
    for (int n = 1; n <= n_max; ++n) {
        ExperimentSpec step = spec;
        step.walk = spec.walk.prefix(n);
        step.kind = spec.evolution_kind;
        out.push_back(run_distribution(step, spec.evolution_kind));
    }
    return out;
}

WalkConfig hom_walk(const ExperimentSpec &spec) {
    LayerParams layer;
    if (!spec.walk.layers.empty()) {
        layer.transmission = spec.walk.layers.front().transmission;
    }
    return WalkConfig::uniform(1, layer);
}

double hom_coincidence(const ExperimentSpec &spec, double overlap) {
    const ExperimentSpec hom = hom_spec(spec, overlap);
    hom.validate();
    OpticalSetup setup = hom.setup();
    setup.readout = Readout::HomArms;
    const ClickPattern pattern = readout_pattern(uses_herald(hom), {kBucketDetector, kGate2Detector});
    if (hom.inputs == InputModel::IdealPhotons) {
        OracleOptions options;
        options.cutoff = hom.oracle_cutoff;
        return oracle_pattern_prob(setup, pattern, options);
    }
    const RoutedState routed = simulate_gaussian(setup);
    return pattern_prob(routed.state, routed.layout, pattern);
}

double hom_visibility(const ExperimentSpec &spec) {
    const double distinguishable = hom_coincidence(spec, 0.0);
    if (!(distinguishable > 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "no coincidences in the distinguishable limit");
    }
    return (distinguishable - hom_coincidence(spec, spec.overlap)) / distinguishable;
}

std::vector<double> hom_scan(const ExperimentSpec &spec, HomAxis axis, std::span<const double> values) {
    return parallel_map(values.size(), [&](std::size_t i) {
        ExperimentSpec point = spec;
        if (axis == HomAxis::Overlap) {
            point.overlap = values[i];
        } else {
            point.mu_alpha = values[i];
        }
        return hom_visibility(point);
    });
}

OverlapFit max_hom_visibility(const ExperimentSpec &spec, double overlap) {
    ExperimentSpec point = spec;
    point.overlap = overlap;
    if (spec.inputs == InputModel::IdealPhotons) {
        return {overlap, spec.mu_alpha, hom_visibility(point)};
    }
    auto visibility_at = [&](double log_mu) {
        point.mu_alpha = std::exp(log_mu);
        return hom_visibility(point);
    };
    // Golden-section search in log(mu_alpha); the visibility is unimodal in
    // the coherent brightness.
    const double ratio = (std::sqrt(5.0) - 1.0) / 2.0;
    double lo = std::log(1e-3);
    double hi = std::log(3.0);
    double a = hi - ratio * (hi - lo);
    double b = lo + ratio * (hi - lo);
    double va = visibility_at(a);
    double vb = visibility_at(b);
    for (int it = 0; it < 80 && hi - lo > 1e-10; ++it) {
        if (va > vb) {
            hi = b;
            b = a;
            vb = va;
            a = hi - ratio * (hi - lo);
            va = visibility_at(a);
        } else {
            lo = a;
            a = b;
            va = vb;
            b = lo + ratio * (hi - lo);
            vb = visibility_at(b);
        }
    }
    const double best = 0.5 * (lo + hi);
    return {overlap, std::exp(best), visibility_at(best)};
}

OverlapFit fit_overlap(const ExperimentSpec &spec, double target, double tol) {
    if (!(target > 0.0 && target < 1.0) || !(tol > 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "target visibility must lie in (0, 1)");
    }
    const OverlapFit full = max_hom_visibility(spec, 1.0);
    if (full.visibility < target) {
        throw Error(ErrorCode::InvalidArgument, "visibility " + std::to_string(full.visibility) +
                                                    " at perfect overlap is below the target");
    }
    double lo = 0.0;
    double hi = 1.0;
    OverlapFit fit = full;
    for (int it = 0; it < 100; ++it) {
        const double mid = 0.5 * (lo + hi);
        fit = max_hom_visibility(spec, mid);
        if (std::abs(fit.visibility - target) < 0.1 * tol) {
            break;
        }
        (fit.visibility < target ? lo : hi) = mid;
    }
    if (std::abs(fit.visibility - target) >= tol) {
        throw Error(ErrorCode::NumericalInstability, "overlap bisection did not converge");
    }
    return fit;
}

OracleComparison compare_with_oracle(const ExperimentSpec &spec, ExperimentKind kind, const OracleOptions &options) {
    if (kind == ExperimentKind::StepEvolution) {
        kind = spec.evolution_kind;
    }
    const ExperimentSpec checked = kind == ExperimentKind::HomScan ? hom_spec(spec, spec.overlap) : spec;
    checked.validate();
    OpticalSetup base = checked.setup();
    std::vector<std::array<GateSpec, 2>> settings;
    if (kind == ExperimentKind::HomScan) {
        base.readout = Readout::HomArms;
        settings.emplace_back();
    } else {
        for (const auto &point : scan_points(checked, kind)) {
            settings.push_back(point.gates);
        }
    }
    const auto patterns = all_patterns(kNumDetectors);
    const GaussianState propagated = propagate_gaussian(base);
    const auto results = parallel_map(settings.size(), [&](std::size_t i) {
        OpticalSetup setup = base;
        setup.gates = settings[i];
        const RoutedState routed = route_gaussian(propagated, setup);
        const OracleResult oracle = oracle_pattern_probs(setup, patterns, options);
        OracleComparison c;
        c.truncation_leak = oracle.truncation_leak;
        for (std::size_t k = 0; k < patterns.size(); ++k) {
            const double g = pattern_prob(routed.state, routed.layout, patterns[k]);
            c.max_abs_diff = std::max(c.max_abs_diff, std::abs(g - oracle.probabilities[k]));
            ++c.compared;
        }
        return c;
    });
    OracleComparison total;
    for (const auto &c : results) {
        total.max_abs_diff = std::max(total.max_abs_diff, c.max_abs_diff);
        total.truncation_leak = std::max(total.truncation_leak, c.truncation_leak);
        total.compared += c.compared;
    }
    return total;
}

}  // namespace qwalk

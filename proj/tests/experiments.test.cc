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
#include <cstdlib>

#include "gtest/gtest.h"
#include "qwalk/error.h"
#include "qwalk/metrics.h"
#include "test_util.h"

using namespace qwalk;

namespace {

LayerParams lossless() {
    LayerParams layer;
    layer.transmission = 1.0;
    return layer;
}

// Heralded TMSV this faint behaves as a single photon to ~1e-10.
ExperimentSpec single_photon(int n) {
    ExperimentSpec spec;
    spec.walk = WalkConfig::uniform(n, lossless());
    spec.mu_alpha = 0.0;
    spec.mu_xi = 1e-10;
    spec.eta_kerr = 1.0;
    spec.heralded = true;
    return spec;
}

// |U|^2 over the H outputs for one input column, renormalized.
std::vector<double> h_column(const WalkConfig &walk, int pol) {
    const auto amps = test::iterate_walk(walk, {{{1, pol}, 1.0}});
    std::vector<double> out(static_cast<std::size_t>(walk.n_steps + 1), 0.0);
    double total = 0;
    for (const auto &[key, amp] : amps) {
        if (key.second == 0) {
            out[static_cast<std::size_t>(key.first - 1)] += std::norm(amp);
            total += std::norm(amp);
        }
    }
    for (auto &p : out) {
        p /= total;
    }
    return out;
}

Distribution as_distribution(const std::vector<double> &probs) {
    std::vector<OutcomeLabel> labels;
    for (std::size_t m = 0; m < probs.size(); ++m) {
        labels.push_back({{static_cast<int>(m + 1)}, false});
    }
    return make_distribution(labels, probs, 0);
}

double max_raw(const Distribution &d) {
    return *std::max_element(d.raw.begin(), d.raw.end());
}

}  // namespace

TEST(Spec, setup_sources) {
    ExperimentSpec spec;
    const auto setup = spec.setup();
    ASSERT_EQ(setup.sources.size(), 2u);
    ASSERT_EQ(setup.sources[0].kind, SourceKind::TMSV);
    ASSERT_EQ(setup.sources[0].target, (ModeIndex{Polarization::H, 1, 0}));
    ASSERT_EQ(setup.sources[1].kind, SourceKind::Coherent);
    ASSERT_EQ(setup.sources[1].target, (ModeIndex{Polarization::V, 1, 0}));
    ASSERT_EQ(setup.sources[1].overlap, spec.overlap);
    spec.inputs = InputModel::IdealPhotons;
    ASSERT_EQ(spec.setup().sources[1].kind, SourceKind::Fock1);
}

TEST(Spec, validation) {
    ExperimentSpec spec;
    spec.overlap = 1.2;
    ASSERT_THROW(spec.validate(), Error);
    spec = {};
    spec.mu_alpha = -1;
    ASSERT_THROW(spec.validate(), Error);
    spec = {};
    spec.pair_source = SourceKind::Thermal;
    ASSERT_THROW(spec.validate(), Error);
    spec = {};
    spec.kind = ExperimentKind::TwoFold;
    spec.walk = WalkConfig::uniform(0);
    ASSERT_THROW(spec.validate(), Error);
    ASSERT_EQ(parse_kind("three-fold"), ExperimentKind::ThreeFoldPartial);
    ASSERT_EQ(kind_name(ExperimentKind::StepEvolution), "step-evolution");
    ASSERT_THROW(parse_kind("four-fold"), Error);
}

TEST(Labels, formatting) {
    ASSERT_EQ((OutcomeLabel{{3}, false}).to_string(), "3");
    ASSERT_EQ((OutcomeLabel{{2, 7}, false}).to_string(), "2-7");
    ASSERT_EQ((OutcomeLabel{{2, 7}, true}).to_string(), "2-7-[rest]");
}

TEST(ScanPoints, shapes) {
    ExperimentSpec spec;
    spec.walk = WalkConfig::uniform(4);
    ASSERT_EQ(scan_points(spec, ExperimentKind::OneFold).size(), 5u);
    const auto pairs = scan_points(spec, ExperimentKind::TwoFold);
    ASSERT_EQ(pairs.size(), 10u);
    for (const auto &p : pairs) {
        ASSERT_LT(p.label.bins[0], p.label.bins[1]);
        ASSERT_EQ(p.gates[0].bin, p.label.bins[0]);
        ASSERT_EQ(p.gates[1].bin, p.label.bins[1]);
        ASSERT_EQ(p.pattern, (ClickPattern{Click::On, Click::Any, Click::On, Click::On}));
    }
    const auto triples = scan_points(spec, ExperimentKind::ThreeFoldPartial);
    ASSERT_TRUE(triples[0].label.remainder);
    ASSERT_EQ(triples[0].pattern, (ClickPattern{Click::On, Click::On, Click::On, Click::On}));
    spec.heralded = false;
    const auto one = scan_points(spec, ExperimentKind::OneFold);
    ASSERT_EQ(one[0].pattern, (ClickPattern{Click::Any, Click::Any, Click::Any, Click::On}));
    ASSERT_THROW(scan_points(spec, ExperimentKind::HomScan), Error);
}

TEST(OneFold, nothing_happened_yet) {
    const auto d = run_one_fold(single_photon(0));
    ASSERT_EQ(d.probs.size(), 1u);
    ASSERT_NEAR(d.probs[0], 1.0, 1e-12);
}

TEST(OneFold, one_balanced_step) {
    const auto d = run_one_fold(single_photon(1));
    ASSERT_NEAR(d.probs[0], 1.0, 1e-9);
    ASSERT_NEAR(d.probs[1], 0.0, 1e-9);
}

TEST(OneFold, single_photon_matches_amplitude_walk) {
    for (int n = 1; n <= 11; ++n) {
        const auto spec = single_photon(n);
        const auto d = run_one_fold(spec);
        const auto expect = h_column(spec.walk, 0);
        for (std::size_t m = 0; m < expect.size(); ++m) {
            ASSERT_NEAR(d.probs[m], expect[m], 1e-9) << "n=" << n << " m=" << m + 1;
        }
    }
}

TEST(OneFold, dominated_by_the_right_source) {
    ExperimentSpec spec;
    spec.walk = WalkConfig::uniform(11);
    spec.mu_alpha = 0.1;
    spec.heralded = false;
    const double unheralded =
        bhattacharyya(run_one_fold(spec), as_distribution(h_column(spec.walk, 1))).value;
    spec.heralded = true;
    const double heralded = bhattacharyya(run_one_fold(spec), as_distribution(h_column(spec.walk, 0))).value;
    ASSERT_GT(unheralded, 0.95);
    ASSERT_GT(heralded, 0.95);
}

TEST(OneFold, zero_herald_rate) {
    ExperimentSpec spec;
    spec.walk = WalkConfig::uniform(2);
    spec.mu_xi = 0.0;
    try {
        run_one_fold(spec);
        FAIL();
    } catch (const Error &e) {
        ASSERT_EQ(e.code(), ErrorCode::ZeroHeraldRate);
    }
}

TEST(TwoFold, vacuum_inputs) {
    ExperimentSpec spec;
    spec.walk = WalkConfig::uniform(3);
    spec.mu_alpha = 0.0;
    spec.mu_xi = 0.0;
    spec.heralded = false;
    const auto d = run_two_fold(spec);
    ASSERT_FALSE(d.normalization_defined);
    for (double p : d.probs) {
        ASSERT_EQ(p, 0.0);
    }
}

TEST(TwoFold, ideal_photons_one_step) {
    ExperimentSpec spec;
    spec.walk = WalkConfig::uniform(1, lossless());
    spec.inputs = InputModel::IdealPhotons;
    spec.overlap = 1.0;
    spec.heralded = false;
    const auto d = run_two_fold(spec);
    ASSERT_EQ(d.raw.size(), 1u);
    ASSERT_LT(d.raw[0], 1e-12);
}

TEST(TwoFold, heralding_and_classical_source) {
    ExperimentSpec spec;
    spec.overlap = 0.8;
    spec.walk = WalkConfig::uniform(11);
    double previous_ratio = INFINITY;
    for (double mu : {0.1, 0.24, 0.95}) {
        spec.mu_alpha = mu;
        spec.heralded = true;
        const double h = max_raw(run_two_fold(spec));
        spec.heralded = false;
        const double u = max_raw(run_two_fold(spec));
        ASSERT_GT(h / u, 1.0);
        ASSERT_LT(h / u, previous_ratio);
        previous_ratio = h / u;
    }
    spec.mu_alpha = 0.1;
    spec.heralded = true;
    const double tmsv = max_raw(run_two_fold(spec));
    spec.pair_source = SourceKind::SquashedPair;
    ASSERT_GT(tmsv, max_raw(run_two_fold(spec)));
}

TEST(ThreeFold, two_photons_never_click_three_times) {
    ExperimentSpec spec;
    spec.walk = WalkConfig::uniform(3, lossless());
    spec.inputs = InputModel::IdealPhotons;
    spec.heralded = false;
    const auto d = run_three_fold_partial(spec);
    ASSERT_FALSE(d.normalization_defined);
    for (double p : d.raw) {
        ASSERT_LT(std::abs(p), 1e-14);
    }
    // Faint heralded pair and no coherent light: third clicks need a second pair.
    auto faint = single_photon(3);
    for (double p : run_three_fold_partial(faint).raw) {
        ASSERT_LT(p, 1e-9);
    }
}

TEST(ThreeFold, nine_steps_bright) {
    ExperimentSpec spec;
    spec.walk = WalkConfig::uniform(9);
    spec.mu_alpha = 0.95;
    const auto d = run_three_fold_partial(spec);
    ASSERT_EQ(d.probs.size(), 45u);
    for (double p : d.probs) {
        ASSERT_TRUE(std::isfinite(p));
        ASSERT_GE(p, 0.0);
    }
    ASSERT_NEAR(d.sum(), 1.0, 1e-9);
}

TEST(ThreeFold, oracle_agreement) {
    ExperimentSpec spec;
    spec.walk = WalkConfig::uniform(2);
    spec.mu_alpha = 0.3;
    OracleOptions options;
    options.cutoff = 6;
    options.limits.max_leak = 1e-4;
    ASSERT_LT(compare_with_oracle(spec, ExperimentKind::ThreeFoldPartial, options).max_abs_diff, 1e-6);
}

TEST(Engines, scan_points_agree) {
    ExperimentSpec spec;
    spec.walk = WalkConfig::uniform(2);
    spec.mu_alpha = 0.2;
    spec.oracle_cutoff = 12;
    for (bool heralded : {true, false}) {
        spec.heralded = heralded;
        const auto points = scan_points(spec, ExperimentKind::TwoFold);
        const auto g = evaluate_points(spec, points, Engine::Gaussian);
        const auto f = evaluate_points(spec, points, Engine::FockOracle);
        for (std::size_t i = 0; i < g.size(); ++i) {
            ASSERT_NEAR(g[i], f[i], 1e-8);
        }
    }
}

TEST(Loss, monotone_in_system_efficiency) {
    ExperimentSpec spec;
    spec.walk = WalkConfig::uniform(4);
    spec.heralded = false;
    spec.mu_alpha = 0.3;
    std::vector<double> previous;
    for (double eta : {1.0, 0.8, 0.5, 0.2}) {
        spec.eta_sys = eta;
        const auto raw = evaluate_points(spec, scan_points(spec, ExperimentKind::TwoFold), Engine::Gaussian);
        for (std::size_t i = 0; i < previous.size(); ++i) {
            ASSERT_LE(raw[i], previous[i] + 1e-15);
        }
        previous = raw;
    }
}

TEST(StepEvolution, prefixes) {
    ExperimentSpec spec;
    spec.walk = WalkConfig::uniform(5);
    const auto steps = step_evolution(spec, 5);
    ASSERT_EQ(steps.size(), 5u);
    for (int n = 1; n <= 5; ++n) {
        ExperimentSpec direct = spec;
        direct.walk = spec.walk.prefix(n);
        const auto d = run_one_fold(direct);
        ASSERT_EQ(steps[static_cast<std::size_t>(n - 1)].steps, n);
        ASSERT_EQ(steps[static_cast<std::size_t>(n - 1)].probs, d.probs);
        ASSERT_NEAR(bhattacharyya(steps[static_cast<std::size_t>(n - 1)], d).value, 1.0, 1e-12);
    }
    ASSERT_THROW(step_evolution(spec, 6), Error);
    ASSERT_THROW(step_evolution(spec, 0), Error);
}

TEST(StepEvolution, single_photon_oracle) {
    const auto spec = single_photon(11);
    const auto steps = step_evolution(spec, 11);
    for (int n = 1; n <= 11; ++n) {
        const auto expect = h_column(spec.walk.prefix(n), 0);
        for (std::size_t m = 0; m < expect.size(); ++m) {
            ASSERT_NEAR(steps[static_cast<std::size_t>(n - 1)].probs[m], expect[m], 1e-9);
        }
    }
}

TEST(Hom, limits) {
    ExperimentSpec spec;
    spec.overlap = 0.0;
    ASSERT_NEAR(hom_visibility(spec), 0.0, 1e-15);
    ExperimentSpec ideal;
    ideal.inputs = InputModel::IdealPhotons;
    ideal.heralded = false;
    ideal.overlap = 1.0;
    ASSERT_NEAR(hom_visibility(ideal), 1.0, 1e-12);
    ASSERT_LT(hom_coincidence(ideal, 1.0), 1e-12);
    ideal.overlap = 0.5;
    ASSERT_NEAR(hom_visibility(ideal), 0.5, 1e-12);
}

TEST(Hom, scan_is_monotone_in_overlap) {
    ExperimentSpec spec;
    const std::vector<double> overlaps = {0.0, 0.25, 0.5, 0.75, 1.0};
    const auto v = hom_scan(spec, HomAxis::Overlap, overlaps);
    for (std::size_t i = 1; i < v.size(); ++i) {
        ASSERT_GT(v[i], v[i - 1]);
    }
    const std::vector<double> brightness = {0.05, 0.3, 2.0};
    const auto w = hom_scan(spec, HomAxis::MuAlpha, brightness);
    ASSERT_GT(w[1], w[0]);
    ASSERT_GT(w[1], w[2]);
}

TEST(Hom, fit_overlap) {
    ExperimentSpec spec;
    const auto fit = fit_overlap(spec, 0.70, 1e-3);
    ASSERT_GT(fit.overlap, 0.0);
    ASSERT_LT(fit.overlap, 1.0);
    ASSERT_NEAR(fit.visibility, 0.70, 1e-3);
    ExperimentSpec check = spec;
    check.overlap = fit.overlap;
    check.mu_alpha = fit.mu_alpha;
    ASSERT_NEAR(hom_visibility(check), fit.visibility, 1e-12);
    ASSERT_THROW(fit_overlap(spec, 0.99, 1e-3), Error);
}

TEST(Parallel, thread_count_does_not_change_results) {
    ExperimentSpec spec;
    spec.kind = ExperimentKind::TwoFold;
    ::setenv("QWALK_THREADS", "1", 1);
    const auto a = run_two_fold(spec);
    ::setenv("QWALK_THREADS", "4", 1);
    const auto b = run_two_fold(spec);
    ::unsetenv("QWALK_THREADS");
    ASSERT_EQ(a.probs, b.probs);
    ASSERT_EQ(a.raw, b.raw);
}

TEST(Normalization, make_distribution) {
    const auto d = make_distribution({{{1}, false}, {{2}, false}}, {0.2, 0.6}, 1);
    ASSERT_NEAR(d.probs[0], 0.25, 1e-15);
    ASSERT_EQ(d.normalization, Normalization::NormalizedOverOutcomes);
    ASSERT_TRUE(d.normalization_defined);
    const auto z = make_distribution({{{1}, false}}, {0.0}, 1);
    ASSERT_FALSE(z.normalization_defined);
    ASSERT_EQ(z.probs[0], 0.0);
}

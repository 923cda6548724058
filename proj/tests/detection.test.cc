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

#include "qwalk/detection.h"

#include <cmath>
#include <numeric>

#include "gtest/gtest.h"
#include "qwalk/error.h"
#include "test_util.h"

using namespace qwalk;

namespace {

const ModeIndex kH1{Polarization::H, 1, 0};
const ModeIndex kV1{Polarization::V, 1, 0};

GaussianState from_sources(std::initializer_list<SourceSpec> sources, int bins) {
    const std::vector<SourceSpec> list(sources);
    return prepare(list, ModeRegistry(bins));
}

double pattern_sum(const GaussianState &s, const DetectorLayout &layout) {
    double total = 0;
    for (const auto &p : all_patterns(layout.size())) {
        total += pattern_prob(s, layout, p);
    }
    return total;
}

constexpr Click On = Click::On;
constexpr Click Off = Click::Off;
constexpr Click Any = Click::Any;

}  // namespace

TEST(Layout, gates_disabled) {
    const auto s = from_sources({{SourceKind::TMSV, 0.1, 0, kH1, 1}}, 3);
    const GateSpec gates[] = {{1, 0.97, false}, {2, 0.97, false}};
    const auto routed = build_layout(s, gates);
    ASSERT_EQ(routed.layout.detectors[kHeraldDetector], (std::vector<std::size_t>{12}));
    ASSERT_EQ(routed.layout.detectors[kBucketDetector], ModeRegistry(3).horizontal_modes());
    ASSERT_TRUE(routed.layout.detectors[kGate1Detector].empty());
    ASSERT_TRUE(routed.layout.detectors[kGate2Detector].empty());
    ASSERT_EQ(routed.state.num_modes(), s.num_modes());
    routed.layout.validate(routed.state.num_modes());
}

TEST(Layout, perfect_gate_moves_everything) {
    const auto s = from_sources({{SourceKind::Coherent, 0.4, 0, {Polarization::H, 3, 0}, 1}}, 3);
    const GateSpec gates[] = {{3, 1.0, true}};
    const auto routed = build_layout(s, gates);
    const auto &apd3 = routed.layout.detectors[kGate1Detector];
    ASSERT_EQ(apd3.size(), 2u);
    ASSERT_NEAR(routed.state.mean_photon_number(apd3[0]), 0.4, 1e-15);
    ASSERT_NEAR(routed.state.mean_photon_number(ModeRegistry(3).flatten({Polarization::H, 3, 0})), 0.0, 1e-15);
}

TEST(Layout, leakage_stays_on_bucket) {
    const double mu = 0.4;
    const auto s = from_sources({{SourceKind::Coherent, mu, 0, {Polarization::H, 3, 0}, 1}}, 3);
    const GateSpec gates[] = {{3, 0.97, true}};
    const auto routed = build_layout(s, gates);
    const auto &apd3 = routed.layout.detectors[kGate1Detector];
    ASSERT_NEAR(routed.state.mean_photon_number(apd3[0]), 0.97 * mu, 1e-15);
    ASSERT_NEAR(routed.state.mean_photon_number(4), 0.03 * mu, 1e-15);
    ASSERT_TRUE(std::find(routed.layout.detectors[kBucketDetector].begin(),
                          routed.layout.detectors[kBucketDetector].end(),
                          4) != routed.layout.detectors[kBucketDetector].end());
}

TEST(Layout, sectors_share_detectors) {
    const auto s = from_sources({{SourceKind::Coherent, 0.5, 0, kH1, 0.3}}, 2);
    const GateSpec gates[] = {{1, 1.0, false}, {1, 1.0, true}};
    const auto routed = build_layout(s, gates);
    const auto &apd4 = routed.layout.detectors[kGate2Detector];
    ASSERT_EQ(apd4.size(), 2u);
    ASSERT_NEAR(routed.state.mean_photon_number(apd4[0]), 0.15, 1e-15);
    ASSERT_NEAR(routed.state.mean_photon_number(apd4[1]), 0.35, 1e-15);
}

TEST(Layout, errors) {
    const auto s = from_sources({}, 3);
    const GateSpec dup[] = {{2, 0.97, true}, {2, 0.97, true}};
    try {
        build_layout(s, dup);
        FAIL();
    } catch (const Error &e) {
        ASSERT_EQ(e.code(), ErrorCode::DuplicateGateBin);
    }
    const GateSpec eta[] = {{2, 1.5, true}};
    try {
        build_layout(s, eta);
        FAIL();
    } catch (const Error &e) {
        ASSERT_EQ(e.code(), ErrorCode::EtaOutOfRange);
    }
    const GateSpec far[] = {{4, 0.9, true}};
    ASSERT_THROW(build_layout(s, far), Error);
}

TEST(Layout, hom_arms) {
    const auto s = from_sources({{SourceKind::TMSV, 0.1, 0, kH1, 1}}, 2);
    const auto routed = hom_layout(s);
    ASSERT_EQ(routed.layout.detectors[kBucketDetector], ModeRegistry(2).horizontal_modes());
    ASSERT_EQ(routed.layout.detectors[kGate2Detector], ModeRegistry(2).vertical_modes());
    ASSERT_TRUE(routed.layout.detectors[kGate1Detector].empty());
    routed.layout.validate(routed.state.num_modes());
}

TEST(NoClick, closed_forms) {
    const auto vac = from_sources({}, 1);
    const std::size_t m0[] = {0};
    const std::size_t all[] = {0, 1, 2, 3};
    ASSERT_EQ(no_click_prob(vac, all), 1.0);
    ASSERT_EQ(no_click_prob(vac, {}), 1.0);

    const auto coh = from_sources({{SourceKind::Coherent, 0.1, 0.3, kH1, 1}}, 1);
    ASSERT_NEAR(no_click_prob(coh, m0), std::exp(-0.1), 1e-15);
    ASSERT_NEAR(no_click_prob(coh, m0), 0.90484, 1e-5);

    const auto th = from_sources({{SourceKind::Thermal, 0.026, 0, kH1, 1}}, 1);
    ASSERT_NEAR(no_click_prob(th, m0), 1 / 1.026, 1e-15);
    ASSERT_NEAR(no_click_prob(th, m0), 0.97466, 1e-5);
    ASSERT_NEAR(log_no_click_prob(th, m0), -std::log1p(0.026), 1e-15);
}

TEST(NoClick, tiny_thermal_keeps_relative_precision) {
    const double mu = 1e-13;
    const auto th = from_sources({{SourceKind::Thermal, mu, 0, kH1, 1}}, 1);
    const DetectorLayout layout{{{0}}};
    const double click = pattern_prob(th, layout, {On});
    ASSERT_NEAR(click / (mu / (1 + mu)), 1.0, 1e-9);
}

TEST(NoClick, singular_matrix) {
    auto s = from_sources({}, 1);
    s.mutable_excess_covariance()(0, 0) = -1.0;
    const std::size_t m0[] = {0};
    try {
        no_click_prob(s, m0);
        FAIL();
    } catch (const Error &e) {
        ASSERT_EQ(e.code(), ErrorCode::SingularMatrix);
    }
}

TEST(Pattern, coherent_single_detector) {
    const double mu = 0.37;
    const auto coh = from_sources({{SourceKind::Coherent, mu, 0, kV1, 1}}, 1);
    const DetectorLayout layout{{{1}}};
    ASSERT_NEAR(pattern_prob(coh, layout, {On}), 1 - std::exp(-mu), 1e-15);
    ASSERT_NEAR(pattern_prob(coh, layout, {Off}), std::exp(-mu), 1e-15);
    ASSERT_EQ(pattern_prob(coh, layout, {Any}), 1.0);
    const auto vac = from_sources({}, 1);
    ASSERT_EQ(pattern_prob(vac, DetectorLayout{{{0}, {1}}}, {Off, Off}), 1.0);
    ASSERT_THROW(pattern_prob(vac, layout, {On, On}), Error);
}

TEST(Pattern, coherent_products_factorize) {
    // Independent oracle: a multimode coherent state stays coherent under a
    // unitary, and each detector clicks independently with 1 - exp(-n_d).
    auto rng = test::fixed_rng(20);
    const int bins = 3;
    const ModeRegistry reg(bins);
    std::uniform_real_distribution<double> mu(0.0, 0.8), phase(0, 6.28);
    for (int trial = 0; trial < 10; ++trial) {
        std::vector<SourceSpec> sources;
        Eigen::VectorXcd alpha = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(reg.size()));
        for (int b = 1; b <= bins; ++b) {
            const double m = mu(rng), ph = phase(rng);
            const ModeIndex mode{Polarization::V, b, 0};
            sources.push_back({SourceKind::Coherent, m, ph, mode, 1});
            alpha(static_cast<Eigen::Index>(reg.flatten(mode))) = std::polar(std::sqrt(m), ph);
        }
        const auto u = test::random_unitary(rng, static_cast<Eigen::Index>(reg.size()));
        const auto s = apply_passive(prepare(sources, reg), u);
        const Eigen::VectorXcd out = u * alpha;
        const DetectorLayout layout{{{0, 5}, {1, 2, 3}, {7}, {4, 9, 10}}};
        std::vector<double> click(4);
        for (std::size_t d = 0; d < 4; ++d) {
            double n = 0;
            for (auto m : layout.detectors[d]) {
                n += std::norm(out(static_cast<Eigen::Index>(m)));
            }
            click[d] = 1 - std::exp(-n);
        }
        for (const auto &p : all_patterns(4)) {
            double expect = 1;
            for (std::size_t d = 0; d < 4; ++d) {
                expect *= p[d] == On ? click[d] : 1 - click[d];
            }
            ASSERT_NEAR(pattern_prob(s, layout, p), expect, 1e-13);
        }
    }
}

TEST(Pattern, completeness_and_marginals) {
    auto rng = test::fixed_rng(21);
    const ModeRegistry reg(3);
    for (int trial = 0; trial < 10; ++trial) {
        std::vector<SourceSpec> sources = {{SourceKind::TMSV, 0.2 + 0.1 * trial, 0, kH1, 1},
                                           {SourceKind::Coherent, 0.3, 0.5, kV1, 0.6},
                                           {SourceKind::Thermal, 0.1, 0, {Polarization::H, 2, 0}, 1}};
        auto s = prepare(sources, reg);
        s = apply_passive(s, test::random_unitary(rng, static_cast<Eigen::Index>(reg.size())),
                          [&] {
                              std::vector<std::size_t> m(reg.size());
                              std::iota(m.begin(), m.end(), std::size_t{0});
                              return m;
                          }());
        const GateSpec gates[] = {{1, 0.97, true}, {3, 0.9, true}};
        const auto routed = build_layout(s, gates);
        ASSERT_NEAR(pattern_sum(routed.state, routed.layout), 1.0, 1e-12);

        // Summing out APD4 gives the APD3 marginal of a layout without gate 2.
        const GateSpec only_first[] = {{1, 0.97, true}, {3, 0.9, false}};
        const auto single = build_layout(s, only_first);
        for (Click c3 : {Off, On}) {
            const double sum = pattern_prob(routed.state, routed.layout, {Any, Any, c3, On}) +
                               pattern_prob(routed.state, routed.layout, {Any, Any, c3, Off});
            ASSERT_NEAR(sum, pattern_prob(single.state, single.layout, {Any, Any, c3, Any}), 1e-12);
        }
    }
}

TEST(Pattern, gate_order_immaterial) {
    const auto s = from_sources(
        {{SourceKind::TMSV, 0.3, 0, kH1, 1}, {SourceKind::Coherent, 0.4, 0, kV1, 0.8}}, 4);
    auto walked = apply_passive(s, sector_extend(walk_unitary(WalkConfig::uniform(3))),
                                [&] {
                                    std::vector<std::size_t> m(16);
                                    std::iota(m.begin(), m.end(), std::size_t{0});
                                    return m;
                                }());
    const GateSpec ab[] = {{2, 0.97, true}, {3, 0.9, true}};
    const GateSpec ba[] = {{3, 0.9, true}, {2, 0.97, true}};
    const auto x = build_layout(walked, ab);
    const auto y = build_layout(walked, ba);
    for (const auto &p : all_patterns(4)) {
        ClickPattern swapped = p;
        std::swap(swapped[kGate1Detector], swapped[kGate2Detector]);
        ASSERT_NEAR(pattern_prob(x.state, x.layout, p), pattern_prob(y.state, y.layout, swapped), 1e-14);
    }
}

TEST(Pattern, detector_relabeling) {
    const auto s = from_sources(
        {{SourceKind::TMSV, 0.3, 0, kH1, 1}, {SourceKind::Coherent, 0.4, 0, kV1, 0.8}}, 2);
    const DetectorLayout a{{{8}, {0, 2}, {1}, {4, 5}}};
    const DetectorLayout b{{{4, 5}, {1}, {8}, {0, 2}}};
    for (const auto &p : all_patterns(4)) {
        const ClickPattern q = {p[3], p[2], p[0], p[1]};
        ASSERT_NEAR(pattern_prob(s, a, p), pattern_prob(s, b, q), 1e-15);
    }
}

TEST(Herald, tmsv_rate) {
    const auto s = from_sources({{SourceKind::TMSV, 0.026, 0, kH1, 1}}, 1);
    const auto routed = build_layout(s, {});
    const double herald = pattern_prob(routed.state, routed.layout, {On, Any, Any, Any});
    ASSERT_NEAR(herald, 0.026 / 1.026, 1e-15);
    ASSERT_NEAR(herald, 0.02534, 1e-5);
    ASSERT_NEAR(heralded_prob(routed.state, routed.layout, {Any, Any, Any, Any}), 1.0, 1e-15);
    // A TMSV herald heralds the signal with certainty when lossless.
    ASSERT_NEAR(heralded_prob(routed.state, routed.layout, {Any, On, Any, Any}), 1.0, 1e-12);
}

TEST(Herald, zero_rate) {
    const auto s = from_sources({{SourceKind::TMSV, 0.0, 0, kH1, 1}}, 1);
    const auto routed = build_layout(s, {});
    try {
        heralded_prob(routed.state, routed.layout, {Any, On, Any, Any});
        FAIL();
    } catch (const Error &e) {
        ASSERT_EQ(e.code(), ErrorCode::ZeroHeraldRate);
    }
}

TEST(Herald, squashed_heralds_worse) {
    for (double mu : {0.026, 0.1, 0.5}) {
        const auto tm = build_layout(from_sources({{SourceKind::TMSV, mu, 0, kH1, 1}}, 1), {});
        const auto sq = build_layout(from_sources({{SourceKind::SquashedPair, mu, 0, kH1, 1}}, 1), {});
        const ClickPattern signal = {Any, On, Any, Any};
        const double p_tm = heralded_prob(tm.state, tm.layout, signal);
        const double p_sq = heralded_prob(sq.state, sq.layout, signal);
        ASSERT_LT(p_sq, p_tm);
        // Brute-force oracle for the squashed pair: a Poissonian mixture over
        // |alpha>|conj alpha> with |alpha|^2 exponential of mean mu gives
        // P(both click) = 1 - 2/(1+mu) + 1/(1+2mu), P(idler) = mu/(1+mu).
        const double both = 1 - 2 / (1 + mu) + 1 / (1 + 2 * mu);
        ASSERT_NEAR(p_sq, both / (mu / (1 + mu)), 1e-12);
    }
}

TEST(Patterns, enumeration_order) {
    const auto ps = all_patterns(3);
    ASSERT_EQ(ps.size(), 8u);
    ASSERT_EQ(ps[0], (ClickPattern{Off, Off, Off}));
    ASSERT_EQ(ps[1], (ClickPattern{On, Off, Off}));
    ASSERT_EQ(ps[6], (ClickPattern{Off, On, On}));
}

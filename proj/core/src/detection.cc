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
#include <limits>
#include <string>
#include <unordered_map>

#include "qwalk/error.h"

namespace qwalk {

namespace {

constexpr double kMaxCondition = 1e12;
constexpr double kRoundoffFloor = 1e-12;

struct VacuumOverlap {
    double log_prob;
    double condition;
};

// The reduced sigma + I/2 equals I + excess, so diagonalizing the excess
// block gives log det via log1p without losing digits for weak states.
VacuumOverlap vacuum_overlap(const GaussianState &state, std::span<const std::size_t> modes) {
    if (modes.empty()) {
        return {0.0, 1.0};
    }
    std::vector<Eigen::Index> idx;
    idx.reserve(2 * modes.size());
    for (std::size_t m : modes) {
        if (m >= state.num_modes()) {
            throw Error(ErrorCode::IndexOutOfRange, "detector mode " + std::to_string(m) + " out of range");
        }
        idx.push_back(static_cast<Eigen::Index>(2 * m));
        idx.push_back(static_cast<Eigen::Index>(2 * m + 1));
    }
    const Eigen::MatrixXd excess = state.excess_covariance()(idx, idx);
    const Eigen::VectorXd mean = state.mean()(idx);

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(excess);
    const Eigen::VectorXd &lambda = solver.eigenvalues();
    const double smallest = 1.0 + lambda.minCoeff();
    if (!(smallest > std::numeric_limits<double>::epsilon())) {
        throw Error(ErrorCode::SingularMatrix, "sigma + I/2 is singular; the state is unphysical");
    }
    double log_det = 0.0;
    for (Eigen::Index k = 0; k < lambda.size(); ++k) {
        log_det += std::log1p(lambda(k));
    }
    const Eigen::VectorXd projected = solver.eigenvectors().transpose() * mean;
    double quad = 0.0;
    for (Eigen::Index k = 0; k < lambda.size(); ++k) {
        quad += projected(k) * projected(k) / (1.0 + lambda(k));
    }
    return {-0.5 * quad - 0.5 * log_det, (1.0 + lambda.maxCoeff()) / smallest};
}

// Inclusion-exclusion over the clicked detectors, organized so the innermost
// difference is formed with expm1 of a log ratio rather than by subtracting
// two nearly equal probabilities.
class PatternEvaluator {
   public:
    PatternEvaluator(const GaussianState &state, const DetectorLayout &layout, const ClickPattern &pattern)
        : state_(state), layout_(layout) {
        for (std::size_t d = 0; d < pattern.size(); ++d) {
            if (pattern[d] == Click::On) {
                clicked_.push_back(d);
            } else if (pattern[d] == Click::Off) {
                const auto &modes = layout.detectors[d];
                off_modes_.insert(off_modes_.end(), modes.begin(), modes.end());
            }
        }
    }

    double evaluate() {
        return difference(clicked_.size(), 0);
    }

   private:
    double log_no_click(std::uint32_t forced_off) {
        auto it = cache_.find(forced_off);
        if (it != cache_.end()) {
            return it->second;
        }
        std::vector<std::size_t> modes = off_modes_;
        for (std::size_t k = 0; k < clicked_.size(); ++k) {
            if (forced_off & (1u << k)) {
                const auto &extra = layout_.detectors[clicked_[k]];
                modes.insert(modes.end(), extra.begin(), extra.end());
            }
        }
        const VacuumOverlap overlap = vacuum_overlap(state_, modes);
        if (overlap.condition > kMaxCondition) {
            throw Error(ErrorCode::NumericalInstability,
                        "vacuum-overlap matrix condition " + std::to_string(overlap.condition) + " too large");
        }
        cache_.emplace(forced_off, overlap.log_prob);
        return overlap.log_prob;
    }

    // Sum over subsets T of the first k clicked detectors of
    // (-1)^|T| P0(off + forced_off + T).
    double difference(std::size_t k, std::uint32_t forced_off) {
        if (k == 0) {
            return std::exp(log_no_click(forced_off));
        }
        if (k == 1) {
            const double base = log_no_click(forced_off);
            const double with = log_no_click(forced_off | 1u);
            return -std::exp(base) * std::expm1(with - base);
        }
        const std::uint32_t bit = 1u << (k - 1);
        return difference(k - 1, forced_off) - difference(k - 1, forced_off | bit);
    }

    const GaussianState &state_;
    const DetectorLayout &layout_;
    std::vector<std::size_t> clicked_;
    std::vector<std::size_t> off_modes_;
    std::unordered_map<std::uint32_t, double> cache_;
};

void check_pattern(const DetectorLayout &layout, const ClickPattern &pattern) {
    if (pattern.size() != layout.size()) {
        throw Error(ErrorCode::DimensionMismatch, "pattern has " + std::to_string(pattern.size()) +
                                                      " entries for " + std::to_string(layout.size()) + " detectors");
    }
    if (layout.size() > 31) {
        throw Error(ErrorCode::ResourceBound, "at most 31 detectors are supported");
    }
}

Eigen::Matrix2cd routing_splitter(double efficiency) {
    const double reflect = std::sqrt(efficiency);
    const double transmit = std::sqrt(1.0 - efficiency);
    Eigen::Matrix2cd bs;
    // Columns: (gated H mode, fresh routing mode). Row 1 is the routed output.
    bs << transmit, -reflect, reflect, transmit;
    return bs;
}

}  // namespace

void DetectorLayout::validate(std::size_t num_modes) const {
    std::vector<int> owner(num_modes, -1);
    for (std::size_t d = 0; d < detectors.size(); ++d) {
        for (std::size_t m : detectors[d]) {
            if (m >= num_modes) {
                throw Error(ErrorCode::IndexOutOfRange, "detector mode " + std::to_string(m) + " out of range");
            }
            if (owner[m] >= 0) {
                throw Error(ErrorCode::InvalidArgument, "mode " + std::to_string(m) + " read by two detectors");
            }
            owner[m] = static_cast<int>(d);
        }
    }
}

RoutedState build_layout(const GaussianState &state, std::span<const GateSpec> gates) {
    if (gates.size() > 2) {
        throw Error(ErrorCode::InvalidArgument, "at most two Kerr gates are available");
    }
    const ModeRegistry &registry = state.registry();
    if (state.num_modes() < registry.size()) {
        throw Error(ErrorCode::DimensionMismatch, "state does not contain the walk registry");
    }
    for (const auto &gate : gates) {
        if (!gate.enabled) {
            continue;
        }
        if (!(gate.efficiency >= 0.0 && gate.efficiency <= 1.0)) {
            throw Error(ErrorCode::EtaOutOfRange, "Kerr efficiency must lie in [0, 1]");
        }
        if (gate.bin < 1 || gate.bin > registry.bin_capacity()) {
            throw Error(ErrorCode::IndexOutOfRange, "gate bin " + std::to_string(gate.bin) + " out of range");
        }
    }
    if (gates.size() == 2 && gates[0].enabled && gates[1].enabled && gates[0].bin == gates[1].bin) {
        throw Error(ErrorCode::DuplicateGateBin, "both gates target bin " + std::to_string(gates[0].bin));
    }

    DetectorLayout layout;
    layout.detectors.resize(kNumDetectors);
    for (std::size_t m = registry.size(); m < state.num_modes(); ++m) {
        layout.detectors[kHeraldDetector].push_back(m);
    }
    layout.detectors[kBucketDetector] = registry.horizontal_modes();

    std::size_t enabled = 0;
    for (const auto &gate : gates) {
        enabled += gate.enabled ? 1 : 0;
    }
    GaussianState routed = append_modes(state, 2 * enabled);
    std::size_t next = state.num_modes();
    for (std::size_t g = 0; g < gates.size(); ++g) {
        if (!gates[g].enabled) {
            continue;
        }
        const Eigen::Matrix2cd bs = routing_splitter(gates[g].efficiency);
        auto &target = layout.detectors[kGate1Detector + g];
        for (int sector : {kInterferingSector, kOrthogonalSector}) {
            const std::size_t h = registry.flatten({Polarization::H, gates[g].bin, sector});
            const std::size_t modes[] = {h, next};
            routed = apply_passive(routed, bs, modes);
            target.push_back(next++);
        }
    }
    return {std::move(routed), std::move(layout)};
}

RoutedState hom_layout(const GaussianState &state) {
    const ModeRegistry &registry = state.registry();
    DetectorLayout layout;
    layout.detectors.resize(kNumDetectors);
    for (std::size_t m = registry.size(); m < state.num_modes(); ++m) {
        layout.detectors[kHeraldDetector].push_back(m);
    }
    layout.detectors[kBucketDetector] = registry.horizontal_modes();
    layout.detectors[kGate2Detector] = registry.vertical_modes();
    return {state, std::move(layout)};
}

double log_no_click_prob(const GaussianState &state, std::span<const std::size_t> modes) {
    return vacuum_overlap(state, modes).log_prob;
}

double no_click_prob(const GaussianState &state, std::span<const std::size_t> modes) {
    return std::exp(log_no_click_prob(state, modes));
}

double pattern_prob(const GaussianState &state, const DetectorLayout &layout, const ClickPattern &pattern) {
    check_pattern(layout, pattern);
    double p = PatternEvaluator(state, layout, pattern).evaluate();
    if (p < 0.0) {
        if (p < -kRoundoffFloor) {
            throw Error(ErrorCode::NumericalInstability, "inclusion-exclusion produced " + std::to_string(p));
        }
        p = 0.0;
    }
    if (p > 1.0) {
        if (p > 1.0 + kRoundoffFloor) {
            throw Error(ErrorCode::NumericalInstability, "inclusion-exclusion produced " + std::to_string(p));
        }
        p = 1.0;
    }
    return p;
}

double heralded_prob(const GaussianState &state, const DetectorLayout &layout, const ClickPattern &pattern_rest) {
    check_pattern(layout, pattern_rest);
    if (layout.size() <= kHeraldDetector) {
        throw Error(ErrorCode::InvalidArgument, "layout has no herald detector");
    }
    ClickPattern herald_only(layout.size(), Click::Any);
    herald_only[kHeraldDetector] = Click::On;
    const double herald = pattern_prob(state, layout, herald_only);
    if (!(herald > 0.0)) {
        throw Error(ErrorCode::ZeroHeraldRate, "the herald detector never clicks");
    }
    ClickPattern joint = pattern_rest;
    joint[kHeraldDetector] = Click::On;
    return pattern_prob(state, layout, joint) / herald;
}

std::vector<ClickPattern> all_patterns(std::size_t detectors) {
    std::vector<ClickPattern> out;
    const std::size_t count = std::size_t{1} << detectors;
    out.reserve(count);
    for (std::size_t bits = 0; bits < count; ++bits) {
        ClickPattern p(detectors);
        for (std::size_t d = 0; d < detectors; ++d) {
            p[d] = (bits >> d) & 1 ? Click::On : Click::Off;
        }
        out.push_back(std::move(p));
    }
    return out;
}

}  // namespace qwalk

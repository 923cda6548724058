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

#ifndef QWALK_DETECTION_H_
#define QWALK_DETECTION_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "qwalk/gaussian.h"

namespace qwalk {

inline constexpr double kDefaultKerrEfficiency = 0.97;

/// A Kerr gate that diverts the H light of one time bin to its own detector.
struct GateSpec {
    int bin = 1;
    double efficiency = kDefaultKerrEfficiency;
    bool enabled = false;
};

/// Detector slots in every layout.
enum DetectorSlot : std::size_t {
    kHeraldDetector = 0,  // APD1, idler
    kBucketDetector = 1,  // APD2, ungated H light plus gate leakage
    kGate1Detector = 2,   // APD3
    kGate2Detector = 3,   // APD4
    kNumDetectors = 4,
};

/// Mode sets read out by each threshold detector. Sets are pairwise
/// disjoint; modes outside every set are discarded.
struct DetectorLayout {
    std::vector<std::vector<std::size_t>> detectors;

    std::size_t size() const noexcept {
        return detectors.size();
    }
    void validate(std::size_t num_modes) const;
};

enum class Click : std::uint8_t {
    Off,  // no click
    On,   // click
    Any,  // marginalized
};

using ClickPattern = std::vector<Click>;

struct RoutedState {
    GaussianState state;
    DetectorLayout layout;
};

/// Expands the state with one routing mode per H mode of each enabled gate's
/// bin and wires up the four detectors.
///
/// Modes beyond the walk registry present on entry (idlers) all feed APD1.
/// The routing beam splitter sends a fraction eta_K of the gated H light to
/// the gate's detector; the rest stays on its walk mode, which APD2 reads.
/// Gate 1 is applied before gate 2.
RoutedState build_layout(const GaussianState &state, std::span<const GateSpec> gates);

/// HOM readout with both gates off: APD2 reads every H walk mode, APD4
/// every V walk mode, APD1 the idlers and APD3 nothing.
RoutedState hom_layout(const GaussianState &state);

/// log of the probability that no photon is found in `modes`.
double log_no_click_prob(const GaussianState &state, std::span<const std::size_t> modes);

/// exp(-d^T (sigma + I/2)^-1 d / 2) / sqrt(det(sigma + I/2)) on the reduced
/// state; 1 for an empty mode set.
double no_click_prob(const GaussianState &state, std::span<const std::size_t> modes);

/// Probability of a click pattern by inclusion-exclusion over vacuum
/// overlaps. Detectors marked Any are traced out.
double pattern_prob(const GaussianState &state, const DetectorLayout &layout, const ClickPattern &pattern);

/// P(pattern_rest and APD1 click) / P(APD1 click). The APD1 entry of
/// `pattern_rest` is ignored.
double heralded_prob(const GaussianState &state, const DetectorLayout &layout, const ClickPattern &pattern_rest);

/// Every fully specified Off/On pattern over `detectors` detectors, in
/// binary counting order with detector 0 as the least significant bit.
std::vector<ClickPattern> all_patterns(std::size_t detectors);

}  // namespace qwalk

#endif  // QWALK_DETECTION_H_

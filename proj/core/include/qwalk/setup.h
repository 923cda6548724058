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

#ifndef QWALK_SETUP_H_
#define QWALK_SETUP_H_

#include <array>
#include <vector>

#include "qwalk/detection.h"
#include "qwalk/gaussian.h"
#include "qwalk/walk.h"

namespace qwalk {

enum class Readout {
    Gated,    // Kerr-gate demultiplexing, see build_layout
    HomArms,  // both gates off, H and V arms read separately, see hom_layout
};

/// A complete optical configuration: sources, walk, losses and readout.
/// Both the Gaussian pipeline and the Fock-space oracle consume it.
///
/// Loss model: every walk mode sees the aggregate transmission
/// walk.total_transmission() * eta_sys after the walk and before the
/// gates; idlers see eta_idler.
struct OpticalSetup {
    std::vector<SourceSpec> sources;
    WalkConfig walk;
    std::array<GateSpec, 2> gates{};
    double eta_sys = 1.0;
    double eta_idler = 1.0;
    Readout readout = Readout::Gated;

    ModeRegistry registry() const {
        return ModeRegistry(walk.bin_capacity);
    }
    double walk_transmission() const {
        return walk.total_transmission() * eta_sys;
    }
    void validate() const;
};

/// Sources, walk and loss; no readout yet.
GaussianState propagate_gaussian(const OpticalSetup &setup);

/// Routes an already propagated state through the setup's readout.
RoutedState route_gaussian(const GaussianState &propagated, const OpticalSetup &setup);

/// propagate_gaussian followed by route_gaussian.
RoutedState simulate_gaussian(const OpticalSetup &setup);

}  // namespace qwalk

#endif  // QWALK_SETUP_H_

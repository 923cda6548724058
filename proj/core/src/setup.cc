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

#include "qwalk/setup.h"

#include <numeric>

#include "qwalk/error.h"

namespace qwalk {

void OpticalSetup::validate() const {
    walk.validate();
    if (!(eta_sys >= 0.0 && eta_sys <= 1.0)) {
        throw Error(ErrorCode::EtaOutOfRange, "eta_sys must lie in [0, 1]");
    }
    if (!(eta_idler >= 0.0 && eta_idler <= 1.0)) {
        throw Error(ErrorCode::EtaOutOfRange, "eta_idler must lie in [0, 1]");
    }
}

GaussianState propagate_gaussian(const OpticalSetup &setup) {
    setup.validate();
    const ModeRegistry registry = setup.registry();
    GaussianState state = prepare(setup.sources, registry);

    const Eigen::MatrixXcd walk = sector_extend(walk_unitary(setup.walk));
    std::vector<std::size_t> walk_modes(registry.size());
    std::iota(walk_modes.begin(), walk_modes.end(), std::size_t{0});
    state = apply_passive(state, walk, walk_modes);
    state = apply_loss(state, setup.walk_transmission(), walk_modes);

    std::vector<std::size_t> idlers(state.num_extra_modes());
    std::iota(idlers.begin(), idlers.end(), registry.size());
    return apply_loss(state, setup.eta_idler, idlers);
}

RoutedState route_gaussian(const GaussianState &propagated, const OpticalSetup &setup) {
    if (setup.readout == Readout::HomArms) {
        return hom_layout(propagated);
    }
    return build_layout(propagated, setup.gates);
}

RoutedState simulate_gaussian(const OpticalSetup &setup) {
    return route_gaussian(propagate_gaussian(setup), setup);
}

}  // namespace qwalk

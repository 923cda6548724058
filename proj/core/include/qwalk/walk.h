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

#ifndef QWALK_WALK_H_
#define QWALK_WALK_H_

#include <Eigen/Dense>
#include <cstddef>
#include <numbers>
#include <vector>

namespace qwalk {

enum class Polarization { H = 0, V = 1 };

/// Distinguishability sector. Sector 0 holds light that interferes with the
/// heralded photon; sector 1 is an orthogonal copy seen by the same optics.
inline constexpr int kInterferingSector = 0;
inline constexpr int kOrthogonalSector = 1;

/// Nominal time-bin spacing set by a 10 mm crystal. Informational only.
inline constexpr double kBinSpacingPicoseconds = 4.3;

struct ModeIndex {
    Polarization pol = Polarization::H;
    int bin = 1;  // 1-based time bin t_m
    int sector = kInterferingSector;

    bool operator==(const ModeIndex &) const = default;
};

/// Flat numbering of (sector, bin, polarization) walk modes.
///
/// Within one sector the index is 2 * (bin - 1) + pol, so a single-sector
/// walk unitary is 2B x 2B. Sector s occupies [s * 2B, (s + 1) * 2B).
class ModeRegistry {
   public:
    explicit ModeRegistry(int bin_capacity);

    int bin_capacity() const noexcept {
        return bin_capacity_;
    }
    /// Modes in one sector (2B).
    std::size_t sector_size() const noexcept {
        return 2 * static_cast<std::size_t>(bin_capacity_);
    }
    /// All walk modes, both sectors (4B).
    std::size_t size() const noexcept {
        return 2 * sector_size();
    }

    std::size_t flatten(const ModeIndex &mode) const;
    ModeIndex unflatten(std::size_t index) const;

    /// Every H-polarized mode in both sectors, ordered by flat index.
    std::vector<std::size_t> horizontal_modes() const;
    std::vector<std::size_t> vertical_modes() const;

   private:
    int bin_capacity_;
};

/// Per-crystal loss bound of 0.045 dB used as the nominal value.
inline const double kDefaultCrystalTransmission = 0.9896918638691029;  // 10^(-0.0045)

struct LayerParams {
    double omega = std::numbers::pi / 2;  // splitting angle
    double gamma = 0.0;                   // relative phase
    double transmission = kDefaultCrystalTransmission;
};

struct WalkConfig {
    int n_steps = 0;
    std::vector<LayerParams> layers;
    int bin_capacity = 1;

    /// N identical layers with the minimal bin capacity N + 1.
    static WalkConfig uniform(int n_steps, const LayerParams &layer = {});

    /// Throws InvalidArgument when the invariants do not hold.
    void validate() const;

    /// Product of the per-layer transmissions.
    double total_transmission() const;

    /// The first `n` layers with capacity n + 1.
    WalkConfig prefix(int n) const;
};

/// 2x2 coin acting on (H, V).
Eigen::Matrix2cd coin_matrix(const LayerParams &layer);

/// One walk step S * (C (x) I) on a single sector of B bins.
///
/// The column image of |V, t_B> has nowhere to go; the matrix sends it to
/// |V, t_1> so the result stays a permutation-times-coin unitary. Physical
/// states never populate that slot when B >= N + 1 and the walker starts in
/// t_1; `propagate` checks it explicitly.
Eigen::MatrixXcd step_unitary(const LayerParams &layer, int bin_capacity);

/// U_N ... U_1 with layer 1 applied first. Transmission is not folded in.
Eigen::MatrixXcd walk_unitary(const WalkConfig &config);

/// U (+) U, acting identically on both distinguishability sectors.
Eigen::MatrixXcd sector_extend(const Eigen::MatrixXcd &unitary);

/// Applies the walk step by step to a single-sector amplitude vector.
/// Throws OverflowPolicyViolation if any V amplitude in bin B would shift
/// past the last bin.
Eigen::VectorXcd propagate(const WalkConfig &config, const Eigen::VectorXcd &amplitudes);

}  // namespace qwalk

#endif  // QWALK_WALK_H_

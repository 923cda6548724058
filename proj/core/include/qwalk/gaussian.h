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

#ifndef QWALK_GAUSSIAN_H_
#define QWALK_GAUSSIAN_H_

#include <Eigen/Dense>
#include <cstddef>
#include <span>
#include <vector>

#include "qwalk/walk.h"

namespace qwalk {

enum class SourceKind { Vacuum, Coherent, Thermal, TMSV, SquashedPair, Fock1 };

/// One independent light source placed on a walk mode.
///
/// `overlap` is the squared mode overlap with the interfering sector: the
/// source mode is sqrt(o) of the sector-0 copy of `target` plus sqrt(1 - o)
/// of its sector-1 copy. Pair sources (TMSV, SquashedPair) also own an idler
/// mode appended after the walk registry, in source order. Fock1 is only
/// understood by the Fock-space oracle.
struct SourceSpec {
    SourceKind kind = SourceKind::Vacuum;
    double mean_photon = 0.0;
    double phase = 0.0;
    ModeIndex target;
    double overlap = 1.0;

    bool is_pair() const noexcept {
        return kind == SourceKind::TMSV || kind == SourceKind::SquashedPair;
    }
};

/// Multimode Gaussian state in the hbar = 1 convention with interleaved
/// (x_i, p_i) quadratures and vacuum covariance I/2.
///
/// The covariance is stored as its excess over vacuum, cov - I/2. Passive
/// optics and loss both act on it without an additive term, and weak states
/// keep their full relative precision, which the threshold-detector
/// formulas rely on.
class GaussianState {
   public:
    GaussianState(ModeRegistry registry, std::size_t num_modes);

    static GaussianState vacuum(const ModeRegistry &registry, std::size_t extra_modes = 0);
    static GaussianState from_covariance(const ModeRegistry &registry, Eigen::VectorXd mean,
                                         const Eigen::MatrixXd &covariance);

    const ModeRegistry &registry() const noexcept {
        return registry_;
    }
    std::size_t num_modes() const noexcept {
        return num_modes_;
    }
    /// Modes beyond the walk registry (idlers, routing outputs).
    std::size_t num_extra_modes() const noexcept {
        return num_modes_ > registry_.size() ? num_modes_ - registry_.size() : 0;
    }

    const Eigen::VectorXd &mean() const noexcept {
        return mean_;
    }
    const Eigen::MatrixXd &excess_covariance() const noexcept {
        return excess_;
    }
    Eigen::MatrixXd covariance() const;

    Eigen::VectorXd &mutable_mean() noexcept {
        return mean_;
    }
    Eigen::MatrixXd &mutable_excess_covariance() noexcept {
        return excess_;
    }

    double mean_photon_number(std::size_t mode) const;
    double total_mean_photon_number() const;

    /// Smallest eigenvalue of cov + (i/2) Omega.
    double min_uncertainty_eigenvalue() const;
    bool is_physical(double tol = 1e-10) const;
    /// cov - I/2 >= 0, i.e. a positive P-function.
    bool is_classical(double tol = 1e-10) const;

   private:
    ModeRegistry registry_;
    std::size_t num_modes_;
    Eigen::VectorXd mean_;
    Eigen::MatrixXd excess_;
};

/// Tensor product of the given sources on a fresh vacuum over the registry.
GaussianState prepare(std::span<const SourceSpec> sources, const ModeRegistry &registry);

/// Real orthogonal-symplectic image of a passive unitary acting on mode
/// amplitudes (alpha -> U alpha).
Eigen::MatrixXd passive_symplectic(const Eigen::MatrixXcd &unitary);

/// Applies U to all modes of the state.
GaussianState apply_passive(const GaussianState &state, const Eigen::MatrixXcd &unitary);
/// Applies U to the listed modes only; U is |modes| x |modes|.
GaussianState apply_passive(const GaussianState &state, const Eigen::MatrixXcd &unitary,
                            std::span<const std::size_t> modes);

/// Pure-loss channel of transmission eta on each listed mode.
GaussianState apply_loss(const GaussianState &state, double eta, std::span<const std::size_t> modes);

/// Appends `count` vacuum modes after the existing ones.
GaussianState append_modes(const GaussianState &state, std::size_t count);
/// New mode i is old mode permutation[i].
GaussianState reorder(const GaussianState &state, std::span<const std::size_t> permutation);
/// Marginal on `subset`, in the given order. The registry of the result is
/// kept for bookkeeping but the modes are simply the subset.
GaussianState reduce(const GaussianState &state, std::span<const std::size_t> subset);

}  // namespace qwalk

#endif  // QWALK_GAUSSIAN_H_

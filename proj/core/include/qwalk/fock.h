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

#ifndef QWALK_FOCK_H_
#define QWALK_FOCK_H_

// Truncated Fock-space simulator. It shares no numerics with the Gaussian
// engine and exists to check it on small instances.

#include <Eigen/Dense>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <utility>
#include <vector>

#include "qwalk/detection.h"
#include "qwalk/gaussian.h"
#include "qwalk/setup.h"

namespace qwalk {

using Occupation = std::vector<std::uint8_t>;

/// Pure state over occupation tuples with total photon number <= cutoff.
struct FockState {
    std::size_t num_modes = 0;
    int cutoff = 0;
    std::map<Occupation, std::complex<double>> amplitudes;

    static FockState vacuum(std::size_t num_modes, int cutoff);

    double norm_squared() const;
    /// 1 - norm^2; the weight lost to truncation.
    double truncation_leak() const {
        return 1.0 - norm_squared();
    }
};

/// Convex mixture of pure truncated states.
struct MixedFockState {
    std::vector<std::pair<double, FockState>> ensemble;

    double total_weight() const;
    double truncation_leak() const;
};

struct OracleLimits {
    double max_leak = 1e-8;
    std::size_t max_terms = 4'000'000;
};

/// Ryser's formula with Gray-code updates.
std::complex<double> permanent(const Eigen::MatrixXcd &matrix);

/// <out| U |in> for the linear-optical map a_k^dag -> sum_j U_jk a_j^dag.
std::complex<double> transition_amplitude(const Eigen::MatrixXcd &unitary, const Occupation &in,
                                          const Occupation &out);

/// Applies the mode map a_k^dag -> sum_j U_jk a_j^dag to every basis tuple by
/// expanding the creation-operator products. Throws CutoffTooSmall when the
/// input leak exceeds limits.max_leak and ResourceBound when the output has
/// more than limits.max_terms tuples.
FockState evolve(const FockState &state, const Eigen::MatrixXcd &unitary, const OracleLimits &limits = {});

/// Gauss-Hermite nodes and weights for the weight exp(-x^2).
std::pair<std::vector<double>, std::vector<double>> gauss_hermite(int order);

/// Photon-number decomposition of one source over its own modes (one mode,
/// or signal then idler for pair sources). Overlap and target are ignored
/// here; the network handles them.
MixedFockState input_decompose(const SourceSpec &source, int cutoff, int quadrature_order = 12);

enum class OracleMethod {
    /// Projects the detector modes onto vacuum in the span of the evolved
    /// input modes. Cheap; the default.
    Projected,
    /// Evolves the full Fock state through the square network unitary and
    /// sums output tuples. Small instances only.
    FullEvolution,
};

struct OracleOptions {
    int cutoff = 10;
    int quadrature_order = 12;
    OracleMethod method = OracleMethod::Projected;
    OracleLimits limits;
};

struct OracleResult {
    std::vector<double> probabilities;
    double truncation_leak = 0.0;
};

/// Click-pattern probabilities of the full pipeline in Fock space: sources
/// decomposed into number states, the sector-extended walk, beam-splitter
/// loss with traced-out ancillas, routing beam splitters, and threshold
/// click/no-click projectors. Inputs are limited to 12 walk bins.
OracleResult oracle_pattern_probs(const OpticalSetup &setup, std::span<const ClickPattern> patterns,
                                  const OracleOptions &options = {});

double oracle_pattern_prob(const OpticalSetup &setup, const ClickPattern &pattern, const OracleOptions &options = {});

}  // namespace qwalk

#endif  // QWALK_FOCK_H_

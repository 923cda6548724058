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

#include "qwalk/gaussian.h"

#include <cmath>
#include <complex>
#include <string>

#include "qwalk/error.h"

namespace qwalk {

namespace {

using cd = std::complex<double>;

void check_modes(const GaussianState &state, std::span<const std::size_t> modes) {
    std::vector<bool> seen(state.num_modes(), false);
    for (std::size_t m : modes) {
        if (m >= state.num_modes()) {
            throw Error(ErrorCode::IndexOutOfRange,
                        "mode " + std::to_string(m) + " not in a " + std::to_string(state.num_modes()) + "-mode state");
        }
        if (seen[m]) {
            throw Error(ErrorCode::InvalidArgument, "mode " + std::to_string(m) + " listed twice");
        }
        seen[m] = true;
    }
}

void check_unitary(const Eigen::MatrixXcd &u) {
    if (u.rows() != u.cols()) {
        throw Error(ErrorCode::DimensionMismatch, "passive transformation must be square");
    }
    const Eigen::MatrixXcd defect = u.adjoint() * u - Eigen::MatrixXcd::Identity(u.rows(), u.cols());
    if (defect.size() > 0 && defect.cwiseAbs().maxCoeff() > 1e-10) {
        throw Error(ErrorCode::NonUnitary, "matrix is not unitary within 1e-10");
    }
}

std::vector<Eigen::Index> quadrature_indices(std::span<const std::size_t> modes) {
    std::vector<Eigen::Index> idx;
    idx.reserve(2 * modes.size());
    for (std::size_t m : modes) {
        idx.push_back(static_cast<Eigen::Index>(2 * m));
        idx.push_back(static_cast<Eigen::Index>(2 * m + 1));
    }
    return idx;
}

// Places a symmetric two-mode excess block for pair sources.
void set_pair_block(Eigen::MatrixXd &excess, std::size_t signal, std::size_t idler, double diag, double cross) {
    const auto s = static_cast<Eigen::Index>(2 * signal);
    const auto i = static_cast<Eigen::Index>(2 * idler);
    excess(s, s) = diag;
    excess(s + 1, s + 1) = diag;
    excess(i, i) = diag;
    excess(i + 1, i + 1) = diag;
    excess(s, i) = excess(i, s) = cross;
    excess(s + 1, i + 1) = excess(i + 1, s + 1) = -cross;
}

}  // namespace

GaussianState::GaussianState(ModeRegistry registry, std::size_t num_modes)
    : registry_(registry),
      num_modes_(num_modes),
      mean_(Eigen::VectorXd::Zero(static_cast<Eigen::Index>(2 * num_modes))),
      excess_(Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(2 * num_modes),
                                    static_cast<Eigen::Index>(2 * num_modes))) {
}

GaussianState GaussianState::vacuum(const ModeRegistry &registry, std::size_t extra_modes) {
    return GaussianState(registry, registry.size() + extra_modes);
}

GaussianState GaussianState::from_covariance(const ModeRegistry &registry, Eigen::VectorXd mean,
                                             const Eigen::MatrixXd &covariance) {
    if (mean.size() % 2 != 0 || covariance.rows() != mean.size() || covariance.cols() != mean.size()) {
        throw Error(ErrorCode::DimensionMismatch, "mean and covariance sizes disagree");
    }
    GaussianState state(registry, static_cast<std::size_t>(mean.size() / 2));
    state.mean_ = std::move(mean);
    state.excess_ = covariance - 0.5 * Eigen::MatrixXd::Identity(covariance.rows(), covariance.cols());
    return state;
}

Eigen::MatrixXd GaussianState::covariance() const {
    return excess_ + 0.5 * Eigen::MatrixXd::Identity(excess_.rows(), excess_.cols());
}

double GaussianState::mean_photon_number(std::size_t mode) const {
    if (mode >= num_modes_) {
        throw Error(ErrorCode::IndexOutOfRange, "mode " + std::to_string(mode) + " out of range");
    }
    const auto q = static_cast<Eigen::Index>(2 * mode);
    return 0.5 * (excess_(q, q) + excess_(q + 1, q + 1) + mean_(q) * mean_(q) + mean_(q + 1) * mean_(q + 1));
}

double GaussianState::total_mean_photon_number() const {
    return 0.5 * (excess_.trace() + mean_.squaredNorm());
}

double GaussianState::min_uncertainty_eigenvalue() const {
    const auto dim = excess_.rows();
    if (dim == 0) {
        return 0.5;
    }
    Eigen::MatrixXcd m = covariance().cast<cd>();
    for (Eigen::Index k = 0; k < dim; k += 2) {
        m(k, k + 1) += cd(0.0, 0.5);
        m(k + 1, k) -= cd(0.0, 0.5);
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(m, Eigen::EigenvaluesOnly);
    return solver.eigenvalues().minCoeff();
}

bool GaussianState::is_physical(double tol) const {
    const double asym = (excess_ - excess_.transpose()).cwiseAbs().maxCoeff();
    return asym <= 1e-12 && min_uncertainty_eigenvalue() >= -tol;
}

bool GaussianState::is_classical(double tol) const {
    if (excess_.rows() == 0) {
        return true;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(excess_, Eigen::EigenvaluesOnly);
    return solver.eigenvalues().minCoeff() >= -tol;
}

GaussianState prepare(std::span<const SourceSpec> sources, const ModeRegistry &registry) {
    std::size_t pairs = 0;
    for (const auto &src : sources) {
        pairs += src.is_pair() ? 1 : 0;
    }
    GaussianState state = GaussianState::vacuum(registry, pairs);
    auto &mean = state.mutable_mean();
    auto &excess = state.mutable_excess_covariance();

    std::vector<bool> occupied(state.num_modes(), false);
    auto claim = [&](std::size_t mode) {
        if (occupied[mode]) {
            throw Error(ErrorCode::ModeCollision, "two sources target mode " + std::to_string(mode));
        }
        occupied[mode] = true;
    };

    struct Split {
        std::size_t interfering;
        std::size_t orthogonal;
        double overlap;
    };
    std::vector<Split> splits;
    std::size_t next_idler = registry.size();

    for (const auto &src : sources) {
        if (!(src.mean_photon >= 0.0) || !std::isfinite(src.mean_photon)) {
            throw Error(ErrorCode::InvalidArgument, "mean photon number must be finite and non-negative");
        }
        if (!(src.overlap >= 0.0 && src.overlap <= 1.0)) {
            throw Error(ErrorCode::InvalidArgument, "mode overlap must lie in [0, 1]");
        }
        if (src.kind == SourceKind::Fock1) {
            throw Error(ErrorCode::UnsupportedSource, "Fock1 sources are only available in the Fock-space oracle");
        }
        const std::size_t mode = registry.flatten(src.target);
        claim(mode);
        if (src.overlap < 1.0) {
            if (src.target.sector != kInterferingSector) {
                throw Error(ErrorCode::InvalidArgument, "a partially overlapping source must target sector 0");
            }
            ModeIndex copy = src.target;
            copy.sector = kOrthogonalSector;
            const std::size_t other = registry.flatten(copy);
            claim(other);
            splits.push_back({mode, other, src.overlap});
        }

        const auto q = static_cast<Eigen::Index>(2 * mode);
        const double mu = src.mean_photon;
        switch (src.kind) {
            case SourceKind::Vacuum:
                break;
            case SourceKind::Coherent: {
                const cd alpha = std::polar(std::sqrt(mu), src.phase);
                mean(q) = std::sqrt(2.0) * alpha.real();
                mean(q + 1) = std::sqrt(2.0) * alpha.imag();
                break;
            }
            case SourceKind::Thermal:
                excess(q, q) = mu;
                excess(q + 1, q + 1) = mu;
                break;
            case SourceKind::TMSV:
                set_pair_block(excess, mode, next_idler++, mu, std::sqrt(mu * (mu + 1.0)));
                break;
            case SourceKind::SquashedPair:
                set_pair_block(excess, mode, next_idler++, mu, mu);
                break;
            case SourceKind::Fock1:
                break;
        }
    }

    for (const auto &split : splits) {
        const double t = std::sqrt(split.overlap);
        const double r = std::sqrt(1.0 - split.overlap);
        Eigen::Matrix2cd bs;
        bs << t, -r, r, t;
        const std::size_t modes[] = {split.interfering, split.orthogonal};
        state = apply_passive(state, bs, modes);
    }
    return state;
}

Eigen::MatrixXd passive_symplectic(const Eigen::MatrixXcd &unitary) {
    const auto n = unitary.rows();
    Eigen::MatrixXd s(2 * n, 2 * unitary.cols());
    for (Eigen::Index j = 0; j < n; ++j) {
        for (Eigen::Index k = 0; k < unitary.cols(); ++k) {
            const double re = unitary(j, k).real();
            const double im = unitary(j, k).imag();
            s(2 * j, 2 * k) = re;
            s(2 * j, 2 * k + 1) = -im;
            s(2 * j + 1, 2 * k) = im;
            s(2 * j + 1, 2 * k + 1) = re;
        }
    }
    return s;
}

GaussianState apply_passive(const GaussianState &state, const Eigen::MatrixXcd &unitary) {
    if (unitary.rows() != static_cast<Eigen::Index>(state.num_modes())) {
        throw Error(ErrorCode::DimensionMismatch, "unitary is " + std::to_string(unitary.rows()) + "x" +
                                                      std::to_string(unitary.cols()) + " but the state has " +
                                                      std::to_string(state.num_modes()) + " modes");
    }
    check_unitary(unitary);
    const Eigen::MatrixXd s = passive_symplectic(unitary);
    GaussianState out = state;
    out.mutable_mean() = s * state.mean();
    out.mutable_excess_covariance() = s * state.excess_covariance() * s.transpose();
    return out;
}

GaussianState apply_passive(const GaussianState &state, const Eigen::MatrixXcd &unitary,
                            std::span<const std::size_t> modes) {
    check_modes(state, modes);
    if (unitary.rows() != static_cast<Eigen::Index>(modes.size())) {
        throw Error(ErrorCode::DimensionMismatch, "unitary does not match the number of target modes");
    }
    check_unitary(unitary);
    const Eigen::MatrixXd s = passive_symplectic(unitary);
    const auto idx = quadrature_indices(modes);

    GaussianState out = state;
    auto &mean = out.mutable_mean();
    auto &excess = out.mutable_excess_covariance();
    const Eigen::VectorXd sub_mean = mean(idx);
    mean(idx) = s * sub_mean;
    const Eigen::MatrixXd rows = excess(idx, Eigen::all);
    excess(idx, Eigen::all) = s * rows;
    const Eigen::MatrixXd cols = excess(Eigen::all, idx);
    excess(Eigen::all, idx) = cols * s.transpose();
    return out;
}

GaussianState apply_loss(const GaussianState &state, double eta, std::span<const std::size_t> modes) {
    if (!(eta >= 0.0 && eta <= 1.0)) {
        throw Error(ErrorCode::EtaOutOfRange, "transmission " + std::to_string(eta) + " outside [0, 1]");
    }
    check_modes(state, modes);
    Eigen::VectorXd scale = Eigen::VectorXd::Ones(state.mean().size());
    const double root = std::sqrt(eta);
    for (auto q : quadrature_indices(modes)) {
        scale(q) = root;
    }
    GaussianState out = state;
    out.mutable_mean() = scale.cwiseProduct(state.mean());
    out.mutable_excess_covariance() = scale.asDiagonal() * state.excess_covariance() * scale.asDiagonal();
    return out;
}

GaussianState append_modes(const GaussianState &state, std::size_t count) {
    GaussianState out(state.registry(), state.num_modes() + count);
    const auto dim = state.mean().size();
    out.mutable_mean().head(dim) = state.mean();
    out.mutable_excess_covariance().topLeftCorner(dim, dim) = state.excess_covariance();
    return out;
}

GaussianState reorder(const GaussianState &state, std::span<const std::size_t> permutation) {
    if (permutation.size() != state.num_modes()) {
        throw Error(ErrorCode::DimensionMismatch, "permutation length must equal the number of modes");
    }
    check_modes(state, permutation);
    return reduce(state, permutation);
}

GaussianState reduce(const GaussianState &state, std::span<const std::size_t> subset) {
    check_modes(state, subset);
    const auto idx = quadrature_indices(subset);
    GaussianState out(state.registry(), subset.size());
    out.mutable_mean() = state.mean()(idx);
    out.mutable_excess_covariance() = state.excess_covariance()(idx, idx);
    return out;
}

}  // namespace qwalk

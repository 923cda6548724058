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

#include "qwalk/walk.h"

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>

#include "qwalk/error.h"

namespace qwalk {

namespace {

using cd = std::complex<double>;

std::size_t in_sector(int bin, Polarization pol) {
    return 2 * static_cast<std::size_t>(bin - 1) + static_cast<std::size_t>(pol);
}

}  // namespace

ModeRegistry::ModeRegistry(int bin_capacity) : bin_capacity_(bin_capacity) {
    if (bin_capacity < 1) {
        throw Error(ErrorCode::InvalidArgument, "bin capacity must be at least 1");
    }
}

std::size_t ModeRegistry::flatten(const ModeIndex &mode) const {
    if (mode.bin < 1 || mode.bin > bin_capacity_ || (mode.sector != 0 && mode.sector != 1)) {
        throw Error(ErrorCode::IndexOutOfRange,
                    "mode (bin " + std::to_string(mode.bin) + ", sector " + std::to_string(mode.sector) +
                        ") outside registry of " + std::to_string(bin_capacity_) + " bins");
    }
    return static_cast<std::size_t>(mode.sector) * sector_size() + in_sector(mode.bin, mode.pol);
}

ModeIndex ModeRegistry::unflatten(std::size_t index) const {
    if (index >= size()) {
        throw Error(ErrorCode::IndexOutOfRange, "flat mode index " + std::to_string(index) + " out of range");
    }
    ModeIndex mode;
    mode.sector = static_cast<int>(index / sector_size());
    std::size_t local = index % sector_size();
    mode.bin = static_cast<int>(local / 2) + 1;
    mode.pol = (local % 2 == 0) ? Polarization::H : Polarization::V;
    return mode;
}

std::vector<std::size_t> ModeRegistry::horizontal_modes() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < size(); i += 2) {
        out.push_back(i);
    }
    return out;
}

std::vector<std::size_t> ModeRegistry::vertical_modes() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 1; i < size(); i += 2) {
        out.push_back(i);
    }
    return out;
}

WalkConfig WalkConfig::uniform(int n_steps, const LayerParams &layer) {
    WalkConfig config;
    config.n_steps = n_steps;
    config.layers.assign(static_cast<std::size_t>(std::max(n_steps, 0)), layer);
    config.bin_capacity = n_steps + 1;
    return config;
}

void WalkConfig::validate() const {
    if (n_steps < 0) {
        throw Error(ErrorCode::InvalidArgument, "n_steps must be non-negative");
    }
    if (layers.size() != static_cast<std::size_t>(n_steps)) {
        throw Error(ErrorCode::InvalidArgument, "expected " + std::to_string(n_steps) + " layers, got " +
                                                    std::to_string(layers.size()));
    }
    if (bin_capacity < n_steps + 1) {
        throw Error(ErrorCode::InvalidArgument, "bin capacity " + std::to_string(bin_capacity) +
                                                    " cannot hold an " + std::to_string(n_steps) + "-step walk");
    }
    for (const auto &layer : layers) {
        if (!std::isfinite(layer.omega) || !std::isfinite(layer.gamma)) {
            throw Error(ErrorCode::InvalidArgument, "coin angles must be finite");
        }
        if (!(layer.transmission > 0.0 && layer.transmission <= 1.0)) {
            throw Error(ErrorCode::InvalidArgument, "layer transmission must lie in (0, 1]");
        }
    }
}

double WalkConfig::total_transmission() const {
    double eta = 1.0;
    for (const auto &layer : layers) {
        eta *= layer.transmission;
    }
    return eta;
}

WalkConfig WalkConfig::prefix(int n) const {
    if (n < 0 || n > n_steps) {
        throw Error(ErrorCode::InvalidArgument, "prefix length out of range");
    }
    WalkConfig out;
    out.n_steps = n;
    out.layers.assign(layers.begin(), layers.begin() + n);
    out.bin_capacity = n + 1;
    return out;
}

Eigen::Matrix2cd coin_matrix(const LayerParams &layer) {
    const double c = std::cos(layer.omega / 2);
    const double s = std::sin(layer.omega / 2);
    const cd phase = std::polar(1.0, layer.gamma);
    Eigen::Matrix2cd coin;
    coin << c, phase * s, std::conj(phase) * s, -c;
    return coin;
}

Eigen::MatrixXcd step_unitary(const LayerParams &layer, int bin_capacity) {
    if (bin_capacity < 1) {
        throw Error(ErrorCode::InvalidArgument, "bin capacity must be at least 1");
    }
    const auto dim = 2 * static_cast<Eigen::Index>(bin_capacity);
    const Eigen::Matrix2cd coin = coin_matrix(layer);
    Eigen::MatrixXcd step = Eigen::MatrixXcd::Zero(dim, dim);
    for (int m = 1; m <= bin_capacity; ++m) {
        const int v_target = (m < bin_capacity) ? m + 1 : 1;  // overflow slot wraps
        const auto h_out = static_cast<Eigen::Index>(in_sector(m, Polarization::H));
        const auto v_out = static_cast<Eigen::Index>(in_sector(v_target, Polarization::V));
        for (int in_pol = 0; in_pol < 2; ++in_pol) {
            const auto col = static_cast<Eigen::Index>(in_sector(m, static_cast<Polarization>(in_pol)));
            step(h_out, col) = coin(0, in_pol);
            step(v_out, col) = coin(1, in_pol);
        }
    }
    return step;
}

Eigen::MatrixXcd walk_unitary(const WalkConfig &config) {
    config.validate();
    const auto dim = 2 * static_cast<Eigen::Index>(config.bin_capacity);
    Eigen::MatrixXcd total = Eigen::MatrixXcd::Identity(dim, dim);
    for (const auto &layer : config.layers) {
        total = step_unitary(layer, config.bin_capacity) * total;
    }
    return total;
}

Eigen::MatrixXcd sector_extend(const Eigen::MatrixXcd &unitary) {
    if (unitary.rows() != unitary.cols()) {
        throw Error(ErrorCode::DimensionMismatch, "sector_extend expects a square matrix");
    }
    const auto n = unitary.rows();
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(2 * n, 2 * n);
    out.topLeftCorner(n, n) = unitary;
    out.bottomRightCorner(n, n) = unitary;
    return out;
}

Eigen::VectorXcd propagate(const WalkConfig &config, const Eigen::VectorXcd &amplitudes) {
    config.validate();
    const int bins = config.bin_capacity;
    if (amplitudes.size() != 2 * static_cast<Eigen::Index>(bins)) {
        throw Error(ErrorCode::DimensionMismatch, "amplitude vector does not match bin capacity");
    }
    const auto last_v = static_cast<Eigen::Index>(in_sector(bins, Polarization::V));
    Eigen::VectorXcd state = amplitudes;
    for (std::size_t n = 0; n < config.layers.size(); ++n) {
        const Eigen::Matrix2cd coin = coin_matrix(config.layers[n]);
        Eigen::VectorXcd coined(state.size());
        for (int m = 1; m <= bins; ++m) {
            const auto h = static_cast<Eigen::Index>(in_sector(m, Polarization::H));
            coined.segment(h, 2) = coin * state.segment(h, 2);
        }
        if (std::abs(coined(last_v)) != 0.0) {
            throw Error(ErrorCode::OverflowPolicyViolation,
                        "layer " + std::to_string(n + 1) + " would shift V amplitude past bin " + std::to_string(bins));
        }
        state = step_unitary(config.layers[n], bins) * state;
    }
    return state;
}

}  // namespace qwalk

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

#include "qwalk/fock.h"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <string>
#include <unordered_map>

#include "qwalk/error.h"

namespace qwalk {

namespace {

std::string sci(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3e", x);
    return buf;
}

using cd = std::complex<double>;

// Polynomial in creation operators acting on vacuum: sum_n c_n prod (a_k^dag)^n_k.
using Poly = std::map<Occupation, cd>;

int total_photons(const Occupation &occ) {
    int n = 0;
    for (auto k : occ) {
        n += k;
    }
    return n;
}

double factorial_product(const Occupation &occ) {
    double f = 1.0;
    for (auto k : occ) {
        for (int i = 2; i <= k; ++i) {
            f *= i;
        }
    }
    return f;
}

Poly multiply(const Poly &a, const Poly &b) {
    Poly out;
    for (const auto &[ea, ca] : a) {
        for (const auto &[eb, cb] : b) {
            Occupation e(ea.size());
            for (std::size_t k = 0; k < e.size(); ++k) {
                e[k] = static_cast<std::uint8_t>(ea[k] + eb[k]);
            }
            out[e] += ca * cb;
        }
    }
    return out;
}

// Expands (sum_r coeffs[r] y_r)^n.
class LinearPowers {
   public:
    LinearPowers(std::vector<cd> coeffs) : coeffs_(std::move(coeffs)) {
        Poly one;
        one[Occupation(coeffs_.size(), 0)] = 1.0;
        powers_.push_back(std::move(one));
        for (std::size_t r = 0; r < coeffs_.size(); ++r) {
            if (coeffs_[r] != 0.0) {
                Occupation e(coeffs_.size(), 0);
                e[r] = 1;
                linear_[e] = coeffs_[r];
            }
        }
    }

    const Poly &power(int n) {
        while (static_cast<int>(powers_.size()) <= n) {
            powers_.push_back(multiply(powers_.back(), linear_));
        }
        return powers_[static_cast<std::size_t>(n)];
    }

   private:
    std::vector<cd> coeffs_;
    Poly linear_;
    std::vector<Poly> powers_;
};

// Substitutes x_k -> sum_r map(k, r) y_r in a polynomial over the x's.
Poly substitute(const Poly &poly, const Eigen::MatrixXcd &map, std::size_t max_terms) {
    std::vector<LinearPowers> powers;
    powers.reserve(static_cast<std::size_t>(map.rows()));
    for (Eigen::Index k = 0; k < map.rows(); ++k) {
        std::vector<cd> row(static_cast<std::size_t>(map.cols()));
        for (Eigen::Index r = 0; r < map.cols(); ++r) {
            row[static_cast<std::size_t>(r)] = map(k, r);
        }
        powers.emplace_back(std::move(row));
    }
    Poly out;
    for (const auto &[exps, coeff] : poly) {
        Poly term;
        term[Occupation(static_cast<std::size_t>(map.cols()), 0)] = coeff;
        for (std::size_t k = 0; k < exps.size(); ++k) {
            if (exps[k] > 0) {
                term = multiply(term, powers[k].power(exps[k]));
            }
        }
        for (const auto &[e, c] : term) {
            out[e] += c;
        }
        if (out.size() > max_terms) {
            throw Error(ErrorCode::ResourceBound,
                        "Fock expansion exceeds " + std::to_string(max_terms) + " terms; lower the cutoff");
        }
    }
    return out;
}

Poly to_poly(const FockState &state) {
    Poly p;
    for (const auto &[occ, amp] : state.amplitudes) {
        p[occ] = amp / std::sqrt(factorial_product(occ));
    }
    return p;
}

double poly_norm_squared(const Poly &poly) {
    double n = 0.0;
    for (const auto &[occ, c] : poly) {
        n += std::norm(c) * factorial_product(occ);
    }
    return n;
}

FockState coherent_product(std::span<const cd> alphas, int cutoff) {
    // prod_k e^{-|a_k|^2/2} sum_n a_k^n / sqrt(n!) |n>, truncated on total n.
    FockState state;
    state.num_modes = alphas.size();
    state.cutoff = cutoff;
    state.amplitudes[Occupation(alphas.size(), 0)] = 1.0;
    for (std::size_t k = 0; k < alphas.size(); ++k) {
        const double envelope = std::exp(-0.5 * std::norm(alphas[k]));
        std::map<Occupation, cd> next;
        for (const auto &[occ, amp] : state.amplitudes) {
            const int room = cutoff - total_photons(occ);
            cd term = amp * envelope;
            for (int n = 0; n <= room; ++n) {
                if (n > 0) {
                    term *= alphas[k] / std::sqrt(static_cast<double>(n));
                }
                Occupation o = occ;
                o[k] = static_cast<std::uint8_t>(n);
                next[o] += term;
            }
        }
        state.amplitudes = std::move(next);
    }
    return state;
}

MixedFockState pure(FockState state) {
    MixedFockState mix;
    mix.ensemble.emplace_back(1.0, std::move(state));
    return mix;
}

// Product of independent sources; each factor was truncated on its own, so
// nothing is dropped here and the cutoffs add.
MixedFockState tensor(const MixedFockState &a, const MixedFockState &b) {
    MixedFockState out;
    for (const auto &[wa, sa] : a.ensemble) {
        for (const auto &[wb, sb] : b.ensemble) {
            FockState s;
            s.num_modes = sa.num_modes + sb.num_modes;
            s.cutoff = sa.cutoff + sb.cutoff;
            for (const auto &[oa, ca] : sa.amplitudes) {
                for (const auto &[ob, cb] : sb.amplitudes) {
                    Occupation o = oa;
                    o.insert(o.end(), ob.begin(), ob.end());
                    s.amplitudes[o] += ca * cb;
                }
            }
            out.ensemble.emplace_back(wa * wb, std::move(s));
        }
    }
    return out;
}

// Square network over every mode the pipeline touches, plus the detector
// sets and the input slot of each source mode.
struct Network {
    Eigen::MatrixXcd unitary;
    std::vector<std::size_t> input_slots;
    std::vector<std::vector<std::size_t>> detectors;
};

void mix_pair(Eigen::MatrixXcd &net, std::size_t keep, std::size_t other, double t) {
    // Beam splitter on rows (keep, other): keep -> t keep + r other.
    const double r = std::sqrt(std::max(0.0, 1.0 - t * t));
    const Eigen::RowVectorXcd a = net.row(static_cast<Eigen::Index>(keep));
    const Eigen::RowVectorXcd b = net.row(static_cast<Eigen::Index>(other));
    net.row(static_cast<Eigen::Index>(keep)) = t * a - r * b;
    net.row(static_cast<Eigen::Index>(other)) = r * a + t * b;
}

Network build_network(const OpticalSetup &setup) {
    const ModeRegistry registry = setup.registry();
    const std::size_t walk_modes = registry.size();
    std::size_t pairs = 0;
    for (const auto &src : setup.sources) {
        pairs += src.is_pair() ? 1 : 0;
    }
    std::size_t routed = 0;
    if (setup.readout == Readout::Gated) {
        for (const auto &g : setup.gates) {
            routed += g.enabled ? 2 : 0;
        }
    }
    const std::size_t idler0 = walk_modes;
    const std::size_t route0 = idler0 + pairs;
    const std::size_t ancilla0 = route0 + routed;
    const std::size_t total = ancilla0 + walk_modes + pairs;
    const auto dim = static_cast<Eigen::Index>(total);

    Network net;
    net.unitary = Eigen::MatrixXcd::Identity(dim, dim);

    // Source placement, including the overlap split into the orthogonal sector.
    std::vector<bool> occupied(total, false);
    auto claim = [&](std::size_t m) {
        if (occupied[m]) {
            throw Error(ErrorCode::ModeCollision, "two sources target mode " + std::to_string(m));
        }
        occupied[m] = true;
    };
    std::size_t next_idler = idler0;
    for (const auto &src : setup.sources) {
        if (!(src.overlap >= 0.0 && src.overlap <= 1.0)) {
            throw Error(ErrorCode::InvalidArgument, "mode overlap must lie in [0, 1]");
        }
        const std::size_t slot = registry.flatten(src.target);
        claim(slot);
        net.input_slots.push_back(slot);
        if (src.overlap < 1.0) {
            if (src.target.sector != kInterferingSector) {
                throw Error(ErrorCode::InvalidArgument, "a partially overlapping source must target sector 0");
            }
            ModeIndex copy = src.target;
            copy.sector = kOrthogonalSector;
            const std::size_t other = registry.flatten(copy);
            claim(other);
            mix_pair(net.unitary, slot, other, std::sqrt(src.overlap));
        }
        if (src.is_pair()) {
            net.input_slots.push_back(next_idler++);
        }
    }

    // Walk on both sectors.
    const Eigen::MatrixXcd walk = walk_unitary(setup.walk);
    const auto half = walk.rows();
    for (Eigen::Index s = 0; s < 2; ++s) {
        net.unitary.middleRows(s * half, half) = (walk * net.unitary.middleRows(s * half, half)).eval();
    }

    // Loss, each mode against its own ancilla.
    const double walk_t = std::sqrt(setup.walk_transmission());
    for (std::size_t m = 0; m < walk_modes; ++m) {
        mix_pair(net.unitary, m, ancilla0 + m, walk_t);
    }
    const double idler_t = std::sqrt(setup.eta_idler);
    for (std::size_t p = 0; p < pairs; ++p) {
        mix_pair(net.unitary, idler0 + p, ancilla0 + walk_modes + p, idler_t);
    }

    net.detectors.assign(kNumDetectors, {});
    for (std::size_t p = 0; p < pairs; ++p) {
        net.detectors[kHeraldDetector].push_back(idler0 + p);
    }
    for (std::size_t m = 0; m < walk_modes; ++m) {
        const bool horizontal = registry.unflatten(m).pol == Polarization::H;
        if (horizontal) {
            net.detectors[kBucketDetector].push_back(m);
        } else if (setup.readout == Readout::HomArms) {
            net.detectors[kGate2Detector].push_back(m);
        }
    }

    if (setup.readout == Readout::Gated) {
        std::size_t next_route = route0;
        for (std::size_t g = 0; g < setup.gates.size(); ++g) {
            const GateSpec &gate = setup.gates[g];
            if (!gate.enabled) {
                continue;
            }
            if (gate.bin < 1 || gate.bin > registry.bin_capacity()) {
                throw Error(ErrorCode::IndexOutOfRange, "gate bin out of range");
            }
            if (!(gate.efficiency >= 0.0 && gate.efficiency <= 1.0)) {
                throw Error(ErrorCode::EtaOutOfRange, "Kerr efficiency must lie in [0, 1]");
            }
            for (int sector : {kInterferingSector, kOrthogonalSector}) {
                const std::size_t h = registry.flatten({Polarization::H, gate.bin, sector});
                mix_pair(net.unitary, h, next_route, std::sqrt(1.0 - gate.efficiency));
                net.detectors[kGate1Detector + g].push_back(next_route++);
            }
        }
        if (setup.gates[0].enabled && setup.gates[1].enabled && setup.gates[0].bin == setup.gates[1].bin) {
            throw Error(ErrorCode::DuplicateGateBin, "both gates target the same bin");
        }
    }
    return net;
}

MixedFockState combined_inputs(const OpticalSetup &setup, const OracleOptions &options) {
    MixedFockState all = pure(FockState::vacuum(0, 0));
    for (const auto &src : setup.sources) {
        all = tensor(all, input_decompose(src, options.cutoff, options.quadrature_order));
    }
    return all;
}

std::uint32_t pattern_mask(const ClickPattern &pattern, Click which) {
    std::uint32_t mask = 0;
    for (std::size_t d = 0; d < pattern.size(); ++d) {
        if (pattern[d] == which) {
            mask |= 1u << d;
        }
    }
    return mask;
}

// P(no photon in the detectors of `mask`) for every pattern, via the Gram
// matrix of the evolved input modes restricted to the unmeasured outputs.
std::vector<double> projected_probs(const Network &net, const MixedFockState &inputs,
                                    std::span<const ClickPattern> patterns, const OracleLimits &limits) {
    const auto k_inputs = static_cast<Eigen::Index>(net.input_slots.size());
    Eigen::MatrixXcd columns(net.unitary.rows(), k_inputs);
    for (Eigen::Index k = 0; k < k_inputs; ++k) {
        columns.col(k) = net.unitary.col(static_cast<Eigen::Index>(net.input_slots[static_cast<std::size_t>(k)]));
    }

    std::vector<Poly> member_polys;
    for (const auto &[w, member] : inputs.ensemble) {
        member_polys.push_back(to_poly(member));
    }

    std::unordered_map<std::uint32_t, double> cache;
    auto vacuum_prob = [&](std::uint32_t mask) {
        if (auto it = cache.find(mask); it != cache.end()) {
            return it->second;
        }
        std::vector<bool> measured(static_cast<std::size_t>(net.unitary.rows()), false);
        for (std::size_t d = 0; d < net.detectors.size(); ++d) {
            if (mask & (1u << d)) {
                for (auto m : net.detectors[d]) {
                    measured[m] = true;
                }
            }
        }
        if (k_inputs == 0) {
            // No source modes: only the vacuum member contributes.
            double p = 0.0;
            for (std::size_t i = 0; i < member_polys.size(); ++i) {
                p += inputs.ensemble[i].first * poly_norm_squared(member_polys[i]);
            }
            return p;
        }
        Eigen::MatrixXcd gram = Eigen::MatrixXcd::Zero(k_inputs, k_inputs);
        for (Eigen::Index j = 0; j < columns.rows(); ++j) {
            if (!measured[static_cast<std::size_t>(j)]) {
                gram += columns.row(j).adjoint() * columns.row(j);
            }
        }
        // e_k^dag = sum_r L(k, r) c_r^dag with orthonormal c, L L^dag = gram^T.
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(gram.transpose());
        Eigen::VectorXd root = solver.eigenvalues().cwiseMax(0.0).cwiseSqrt();
        const Eigen::MatrixXcd map = solver.eigenvectors() * root.asDiagonal();
        double p = 0.0;
        for (std::size_t i = 0; i < member_polys.size(); ++i) {
            const double w = inputs.ensemble[i].first;
            if (w == 0.0 || member_polys[i].empty()) {
                continue;
            }
            p += w * poly_norm_squared(substitute(member_polys[i], map, limits.max_terms));
        }
        cache.emplace(mask, p);
        return p;
    };

    std::vector<double> out;
    out.reserve(patterns.size());
    for (const auto &pattern : patterns) {
        const std::uint32_t off = pattern_mask(pattern, Click::Off);
        const std::uint32_t on = pattern_mask(pattern, Click::On);
        // Expand prod_{on} (1 - P0_d) prod_{off} P0_d over subsets of `on`.
        double p = 0.0;
        for (std::uint32_t sub = on;; sub = (sub - 1) & on) {
            const int parity = __builtin_popcount(sub) % 2;
            p += (parity ? -1.0 : 1.0) * vacuum_prob(off | sub);
            if (sub == 0) {
                break;
            }
        }
        out.push_back(p);
    }
    return out;
}

std::vector<double> full_evolution_probs(const Network &net, const MixedFockState &inputs,
                                         std::span<const ClickPattern> patterns, const OracleOptions &options) {
    const std::size_t modes = static_cast<std::size_t>(net.unitary.rows());
    std::vector<int> detector_of(modes, -1);
    for (std::size_t d = 0; d < net.detectors.size(); ++d) {
        for (auto m : net.detectors[d]) {
            detector_of[m] = static_cast<int>(d);
        }
    }
    std::vector<double> out(patterns.size(), 0.0);
    for (const auto &[w, member] : inputs.ensemble) {
        if (w == 0.0 || member.amplitudes.empty()) {
            continue;
        }
        FockState embedded = FockState::vacuum(modes, member.cutoff);
        embedded.amplitudes.clear();
        for (const auto &[occ, amp] : member.amplitudes) {
            Occupation full(modes, 0);
            for (std::size_t k = 0; k < occ.size(); ++k) {
                full[net.input_slots[k]] = occ[k];
            }
            embedded.amplitudes[full] = amp;
        }
        OracleLimits unchecked = options.limits;
        unchecked.max_leak = 1.0;  // truncation is accounted for by the caller
        const FockState evolved = evolve(embedded, net.unitary, unchecked);
        for (const auto &[occ, amp] : evolved.amplitudes) {
            std::vector<bool> clicked(net.detectors.size(), false);
            for (std::size_t m = 0; m < modes; ++m) {
                if (occ[m] > 0 && detector_of[m] >= 0) {
                    clicked[static_cast<std::size_t>(detector_of[m])] = true;
                }
            }
            const double prob = w * std::norm(amp);
            for (std::size_t i = 0; i < patterns.size(); ++i) {
                bool match = true;
                for (std::size_t d = 0; d < patterns[i].size() && match; ++d) {
                    if (patterns[i][d] == Click::On) {
                        match = clicked[d];
                    } else if (patterns[i][d] == Click::Off) {
                        match = !clicked[d];
                    }
                }
                if (match) {
                    out[i] += prob;
                }
            }
        }
    }
    return out;
}

}  // namespace

FockState FockState::vacuum(std::size_t num_modes, int cutoff) {
    FockState s;
    s.num_modes = num_modes;
    s.cutoff = cutoff;
    s.amplitudes[Occupation(num_modes, 0)] = 1.0;
    return s;
}

double FockState::norm_squared() const {
    double n = 0.0;
    for (const auto &[occ, amp] : amplitudes) {
        n += std::norm(amp);
    }
    return n;
}

double MixedFockState::total_weight() const {
    double w = 0.0;
    for (const auto &[weight, s] : ensemble) {
        w += weight;
    }
    return w;
}

double MixedFockState::truncation_leak() const {
    double kept = 0.0;
    for (const auto &[weight, s] : ensemble) {
        kept += weight * s.norm_squared();
    }
    return 1.0 - kept;
}

cd permanent(const Eigen::MatrixXcd &matrix) {
    if (matrix.rows() != matrix.cols()) {
        throw Error(ErrorCode::DimensionMismatch, "permanent of a non-square matrix");
    }
    const auto n = matrix.rows();
    if (n == 0) {
        return 1.0;
    }
    if (n > 30) {
        throw Error(ErrorCode::ResourceBound, "permanent larger than 30x30");
    }
    // perm(A) = (-1)^n sum_S (-1)^|S| prod_i sum_{j in S} a_ij, walked in Gray order.
    Eigen::VectorXcd row_sums = Eigen::VectorXcd::Zero(n);
    cd total = 0.0;
    const std::uint64_t subsets = std::uint64_t{1} << n;
    std::uint64_t gray = 0;
    for (std::uint64_t i = 1; i < subsets; ++i) {
        const std::uint64_t next = i ^ (i >> 1);
        const std::uint64_t changed = next ^ gray;
        const auto j = static_cast<Eigen::Index>(__builtin_ctzll(changed));
        if (next & changed) {
            row_sums += matrix.col(j);
        } else {
            row_sums -= matrix.col(j);
        }
        gray = next;
        const int size = __builtin_popcountll(gray);
        const cd prod = row_sums.prod();
        total += ((size % 2) == 0 ? 1.0 : -1.0) * prod;
    }
    return (n % 2 == 0) ? total : -total;
}

cd transition_amplitude(const Eigen::MatrixXcd &unitary, const Occupation &in, const Occupation &out) {
    if (in.size() != static_cast<std::size_t>(unitary.cols()) || out.size() != static_cast<std::size_t>(unitary.rows())) {
        throw Error(ErrorCode::DimensionMismatch, "occupation lengths do not match the unitary");
    }
    if (total_photons(in) != total_photons(out)) {
        return 0.0;
    }
    std::vector<Eigen::Index> rows;
    std::vector<Eigen::Index> cols;
    for (std::size_t j = 0; j < out.size(); ++j) {
        rows.insert(rows.end(), out[j], static_cast<Eigen::Index>(j));
    }
    for (std::size_t k = 0; k < in.size(); ++k) {
        cols.insert(cols.end(), in[k], static_cast<Eigen::Index>(k));
    }
    const Eigen::MatrixXcd sub = unitary(rows, cols);
    return permanent(sub) / std::sqrt(factorial_product(in) * factorial_product(out));
}

FockState evolve(const FockState &state, const Eigen::MatrixXcd &unitary, const OracleLimits &limits) {
    if (unitary.rows() != unitary.cols() || static_cast<std::size_t>(unitary.rows()) != state.num_modes) {
        throw Error(ErrorCode::DimensionMismatch, "unitary does not match the Fock state");
    }
    const double leak = state.truncation_leak();
    if (leak > limits.max_leak) {
        throw Error(ErrorCode::CutoffTooSmall, "truncation leak " + sci(leak) + " exceeds " + sci(limits.max_leak));
    }
    const Poly evolved = substitute(to_poly(state), unitary.transpose(), limits.max_terms);
    FockState out;
    out.num_modes = state.num_modes;
    out.cutoff = state.cutoff;
    for (const auto &[occ, c] : evolved) {
        const cd amp = c * std::sqrt(factorial_product(occ));
        if (amp != 0.0) {
            out.amplitudes[occ] = amp;
        }
    }
    return out;
}

std::pair<std::vector<double>, std::vector<double>> gauss_hermite(int order) {
    if (order < 1) {
        throw Error(ErrorCode::InvalidArgument, "quadrature order must be positive");
    }
    // Golub-Welsch on the Hermite Jacobi matrix.
    Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(order, order);
    for (int k = 1; k < order; ++k) {
        jacobi(k, k - 1) = jacobi(k - 1, k) = std::sqrt(0.5 * k);
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(jacobi);
    std::vector<double> nodes(static_cast<std::size_t>(order));
    std::vector<double> weights(static_cast<std::size_t>(order));
    for (int k = 0; k < order; ++k) {
        nodes[static_cast<std::size_t>(k)] = solver.eigenvalues()(k);
        const double v = solver.eigenvectors()(0, k);
        weights[static_cast<std::size_t>(k)] = std::sqrt(std::numbers::pi) * v * v;
    }
    return {nodes, weights};
}

MixedFockState input_decompose(const SourceSpec &source, int cutoff, int quadrature_order) {
    if (cutoff < 0) {
        throw Error(ErrorCode::CutoffTooSmall, "cutoff must be non-negative");
    }
    if (!(source.mean_photon >= 0.0) || !std::isfinite(source.mean_photon)) {
        throw Error(ErrorCode::InvalidArgument, "mean photon number must be finite and non-negative");
    }
    const double mu = source.mean_photon;
    switch (source.kind) {
        case SourceKind::Vacuum:
            return pure(FockState::vacuum(1, cutoff));
        case SourceKind::Fock1: {
            if (cutoff < 1) {
                throw Error(ErrorCode::CutoffTooSmall, "a single photon needs cutoff >= 1");
            }
            FockState s;
            s.num_modes = 1;
            s.cutoff = cutoff;
            s.amplitudes[Occupation{1}] = 1.0;
            return pure(std::move(s));
        }
        case SourceKind::Coherent: {
            const cd alpha[] = {std::polar(std::sqrt(mu), source.phase)};
            return pure(coherent_product(alpha, cutoff));
        }
        case SourceKind::Thermal: {
            MixedFockState mix;
            double kept = 0.0;
            for (int n = 0; n <= cutoff; ++n) {
                const double w = std::pow(mu / (1.0 + mu), n) / (1.0 + mu);
                FockState s;
                s.num_modes = 1;
                s.cutoff = cutoff;
                s.amplitudes[Occupation{static_cast<std::uint8_t>(n)}] = 1.0;
                mix.ensemble.emplace_back(w, std::move(s));
                kept += w;
            }
            // Tail weight carried by an empty member so the weights sum to one.
            FockState tail;
            tail.num_modes = 1;
            tail.cutoff = cutoff;
            mix.ensemble.emplace_back(std::max(0.0, 1.0 - kept), std::move(tail));
            return mix;
        }
        case SourceKind::TMSV: {
            if (cutoff < 2) {
                throw Error(ErrorCode::CutoffTooSmall, "pair sources need cutoff >= 2");
            }
            const double lambda = std::sqrt(mu / (1.0 + mu));
            FockState s;
            s.num_modes = 2;
            s.cutoff = cutoff;
            double amp = 1.0 / std::sqrt(1.0 + mu);
            for (int n = 0; 2 * n <= cutoff; ++n) {
                const auto k = static_cast<std::uint8_t>(n);
                s.amplitudes[Occupation{k, k}] = amp;
                amp *= lambda;
            }
            return pure(std::move(s));
        }
        case SourceKind::SquashedPair: {
            if (cutoff < 2) {
                throw Error(ErrorCode::CutoffTooSmall, "pair sources need cutoff >= 2");
            }
            if (mu == 0.0) {
                return pure(FockState::vacuum(2, cutoff));
            }
            // Positive P-function: |alpha>|conj(alpha)> with alpha complex
            // Gaussian of variance mu, integrated on a Gauss-Hermite grid.
            const auto [nodes, weights] = gauss_hermite(quadrature_order);
            MixedFockState mix;
            const double scale = std::sqrt(mu);
            for (std::size_t i = 0; i < nodes.size(); ++i) {
                for (std::size_t j = 0; j < nodes.size(); ++j) {
                    const cd alpha(scale * nodes[i], scale * nodes[j]);
                    const cd pair[] = {alpha, std::conj(alpha)};
                    mix.ensemble.emplace_back(weights[i] * weights[j] / std::numbers::pi,
                                              coherent_product(pair, cutoff));
                }
            }
            return mix;
        }
    }
    throw Error(ErrorCode::UnsupportedSource, "unknown source kind");
}

OracleResult oracle_pattern_probs(const OpticalSetup &setup, std::span<const ClickPattern> patterns,
                                  const OracleOptions &options) {
    setup.validate();
    if (setup.walk.bin_capacity > 12) {
        throw Error(ErrorCode::ResourceBound, "the oracle handles at most 12 time bins");
    }
    for (const auto &pattern : patterns) {
        if (pattern.size() != kNumDetectors) {
            throw Error(ErrorCode::DimensionMismatch, "oracle patterns cover exactly four detectors");
        }
    }
    const Network net = build_network(setup);
    const MixedFockState inputs = combined_inputs(setup, options);
    const double leak = inputs.truncation_leak();
    if (leak > options.limits.max_leak) {
        throw Error(ErrorCode::CutoffTooSmall,
                    "truncation leak " + sci(leak) + " exceeds " + sci(options.limits.max_leak) + "; raise the cutoff");
    }
    OracleResult result;
    result.truncation_leak = leak;
    result.probabilities = options.method == OracleMethod::Projected
                               ? projected_probs(net, inputs, patterns, options.limits)
                               : full_evolution_probs(net, inputs, patterns, options);
    return result;
}

double oracle_pattern_prob(const OpticalSetup &setup, const ClickPattern &pattern, const OracleOptions &options) {
    const ClickPattern one[] = {pattern};
    return oracle_pattern_probs(setup, one, options).probabilities.front();
}

}  // namespace qwalk

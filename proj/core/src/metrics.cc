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

#include "qwalk/metrics.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

#include "qwalk/error.h"

namespace qwalk {

namespace {

constexpr double kNormTolerance = 1e-9;

std::map<std::string, double> check_and_index(const Distribution &d, const char *name) {
    if (d.labels.size() != d.probs.size()) {
        throw Error(ErrorCode::DimensionMismatch, std::string(name) + " has a label count different from its probabilities");
    }
    double total = 0.0;
    std::map<std::string, double> out;
    for (std::size_t i = 0; i < d.probs.size(); ++i) {
        const double p = d.probs[i];
        if (!(p >= -kNormTolerance) || !std::isfinite(p)) {
            throw Error(ErrorCode::NotNormalized, std::string(name) + " has a negative or non-finite entry");
        }
        total += p;
        if (!out.emplace(d.labels[i].to_string(), std::max(p, 0.0)).second) {
            throw Error(ErrorCode::LabelMismatch, std::string(name) + " repeats label " + d.labels[i].to_string());
        }
    }
    if (std::abs(total - 1.0) > kNormTolerance) {
        throw Error(ErrorCode::NotNormalized, std::string(name) + " sums to " + std::to_string(total));
    }
    return out;
}

}  // namespace

SimilarityReport bhattacharyya(const Distribution &p, const Distribution &q, SimilarityConvention convention) {
    const auto a = check_and_index(p, "first distribution");
    const auto b = check_and_index(q, "second distribution");
    if (a.size() != b.size()) {
        throw Error(ErrorCode::LabelMismatch, "distributions have different outcome sets");
    }
    double sum = 0.0;
    for (const auto &[label, pa] : a) {
        const auto it = b.find(label);
        if (it == b.end()) {
            throw Error(ErrorCode::LabelMismatch, "outcome " + label + " missing from the second distribution");
        }
        sum += std::sqrt(pa * it->second);
    }
    // Rounding can push a perfect match a hair above one.
    sum = std::clamp(sum, 0.0, 1.0);
    if (convention == SimilarityConvention::BhattacharyyaSquared) {
        sum *= sum;
    }
    return {sum, convention};
}

}  // namespace qwalk

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

#ifndef QWALK_METRICS_H_
#define QWALK_METRICS_H_

#include "qwalk/experiments.h"

namespace qwalk {

enum class SimilarityConvention { Bhattacharyya, BhattacharyyaSquared };

struct SimilarityReport {
    double value = 0.0;
    SimilarityConvention convention = SimilarityConvention::Bhattacharyya;
};

/// sum_i sqrt(p_i q_i), or its square. Entries are matched by label, so the
/// two distributions may list outcomes in different orders.
SimilarityReport bhattacharyya(
    const Distribution &p, const Distribution &q,
    SimilarityConvention convention = SimilarityConvention::Bhattacharyya);

}  // namespace qwalk

#endif  // QWALK_METRICS_H_

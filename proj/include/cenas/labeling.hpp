// Copyright 2026 The CENAS Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef CENAS_LABELING_HPP
#define CENAS_LABELING_HPP

#include <cstddef>
#include <span>
#include <vector>

#include "cenas/pareto.hpp"
#include "cenas/random.hpp"
#include "cenas/refpoints.hpp"

namespace cenas {

struct LabeledSample {
    ObjectiveVector features;
    bool good { false }; // true iff no reference point (alpha-)dominates the sample
    double alpha_used { 0.0 };
    std::size_t source_index { 0 }; // position in the labeled archive
};

// Good iff no reference point alpha-dominates the sample; alpha = 0 is plain
// Pareto dominance.
[[nodiscard]] auto label_samples(ReferenceSet const& refs, std::span<ObjectiveVector const> archive, double alpha) -> std::vector<LabeledSample>;

// Relabeling threshold presets for the imbalance rate.
inline constexpr double default_ir_threshold = 4.0;
inline constexpr double strict_listing_ir_threshold = 9.0;

// Magnitudes walked by regulate_imbalance, smallest first.
[[nodiscard]] auto default_alpha_ladder() -> std::vector<double>;

struct LadderStep {
    double alpha;
    std::size_t good;
    std::size_t poor;
};

struct Regulated {
    std::vector<LabeledSample> samples;
    double alpha_used { 0.0 };
    double imbalance { 1.0 };
    bool exhausted { false };      // no step reached the threshold
    std::vector<LadderStep> trace; // alpha = 0 first, then every step tried
};

// Labels at alpha = 0 and, if the imbalance rate exceeds ir_threshold, walks
// the ladder with the sign that grows the minority class: positive alpha
// enlarges the regions dominated by the references (more poor labels),
// negative alpha shrinks them (more good labels). Negative magnitudes at or
// above 1/(m-1) are skipped because the relaxed relation stops shrinking
// the dominated region there. Returns the first labeling within the
// threshold, otherwise the tried labeling with minimal imbalance flagged as
// exhausted. Throws SingleClass if no labeling has two nonempty classes.
[[nodiscard]] auto regulate_imbalance(ReferenceSet const& refs, std::span<ObjectiveVector const> archive, double ir_threshold,
    std::span<double const> alpha_ladder) -> Regulated;

struct DataSplit {
    std::vector<LabeledSample> train;
    std::vector<LabeledSample> validation;
};

// Stratified 3/5 : 2/5 split per class. The train share is rounded up but
// always leaves one sample of each class for validation. Throws
// ClassTooSmall if a class has fewer than two samples.
[[nodiscard]] auto split_train_val(std::span<LabeledSample const> samples, Rng& rng) -> DataSplit;

} // namespace cenas

#endif

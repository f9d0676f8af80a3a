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

#include "cenas/labeling.hpp"

#include <algorithm>
#include <limits>
#include <optional>

#include <fmt/format.h>

#include "cenas/error.hpp"

namespace cenas {

auto label_samples(ReferenceSet const& refs, std::span<ObjectiveVector const> archive, double alpha) -> std::vector<LabeledSample>
{
    std::vector<LabeledSample> samples;
    samples.reserve(archive.size());
    for (std::size_t i = 0; i < archive.size(); ++i) {
        auto const dominated = std::any_of(refs.points.begin(), refs.points.end(),
            [&](auto const& r) { return alpha_dominates(r, archive[i], alpha); });
        samples.push_back({ archive[i], !dominated, alpha, i });
    }
    return samples;
}

auto default_alpha_ladder() -> std::vector<double>
{
    return { 0.05, 0.1, 0.2, 0.4 };
}

namespace {

auto count_good(std::vector<LabeledSample> const& samples) -> std::size_t
{
    return static_cast<std::size_t>(std::count_if(samples.begin(), samples.end(), [](auto const& s) { return s.good; }));
}

auto rate(std::size_t good, std::size_t poor) -> std::optional<double>
{
    if (good == 0 || poor == 0) {
        return std::nullopt;
    }
    return static_cast<double>(std::max(good, poor)) / static_cast<double>(std::min(good, poor));
}

} // namespace

auto regulate_imbalance(ReferenceSet const& refs, std::span<ObjectiveVector const> archive, double ir_threshold,
    std::span<double const> alpha_ladder) -> Regulated
{
    if (!(ir_threshold > 1.0)) {
        throw Error(ErrorCode::InvalidArgument, fmt::format("imbalance threshold {} must exceed 1", ir_threshold));
    }
    Regulated out;
    auto samples = label_samples(refs, archive, 0.0);
    auto good = count_good(samples);
    auto poor = samples.size() - good;
    out.trace.push_back({ 0.0, good, poor });

    std::optional<Regulated> best;
    auto consider = [&](std::vector<LabeledSample>&& labels, double alpha, std::size_t g, std::size_t p) -> bool {
        auto const ir = rate(g, p);
        if (!ir) {
            return false;
        }
        if (!best || *ir < best->imbalance) {
            best = Regulated { std::move(labels), alpha, *ir, false, {} };
        }
        return *ir <= ir_threshold;
    };
    if (consider(std::move(samples), 0.0, good, poor)) {
        best->trace = std::move(out.trace);
        return std::move(*best);
    }

    // Minority poor (or no poor at all) needs larger dominated regions.
    auto const sign = poor <= good ? 1.0 : -1.0;
    auto const m = archive.empty() ? std::size_t { 2 } : archive.front().size();
    auto const negative_limit = m > 1 ? 1.0 / static_cast<double>(m - 1) : std::numeric_limits<double>::infinity();
    for (auto magnitude : alpha_ladder) {
        if (sign < 0.0 && magnitude >= negative_limit) {
            continue;
        }
        auto const alpha = sign * magnitude;
        auto relabeled = label_samples(refs, archive, alpha);
        good = count_good(relabeled);
        poor = relabeled.size() - good;
        out.trace.push_back({ alpha, good, poor });
        if (consider(std::move(relabeled), alpha, good, poor)) {
            best->trace = std::move(out.trace);
            return std::move(*best);
        }
    }
    if (!best) {
        throw Error(ErrorCode::SingleClass, "no alpha on the ladder yields two nonempty classes");
    }
    best->exhausted = true;
    best->trace = std::move(out.trace);
    return std::move(*best);
}

auto split_train_val(std::span<LabeledSample const> samples, Rng& rng) -> DataSplit
{
    std::vector<std::size_t> good;
    std::vector<std::size_t> poor;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        (samples[i].good ? good : poor).push_back(i);
    }
    if (good.size() < 2 || poor.size() < 2) {
        throw Error(ErrorCode::ClassTooSmall, fmt::format("{} good and {} poor samples; each class needs 2", good.size(), poor.size()));
    }
    DataSplit split;
    for (auto* cls : { &good, &poor }) {
        rng.shuffle(std::span<std::size_t>(*cls));
        auto const n = cls->size();
        auto const train = std::min((3 * n + 4) / 5, n - 1);
        for (std::size_t k = 0; k < n; ++k) {
            (k < train ? split.train : split.validation).push_back(samples[(*cls)[k]]);
        }
    }
    return split;
}

} // namespace cenas

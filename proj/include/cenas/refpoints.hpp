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

#ifndef CENAS_REFPOINTS_HPP
#define CENAS_REFPOINTS_HPP

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "cenas/pareto.hpp"

namespace cenas {

// Per-objective min-max scaling to [0, 1]; zero-range objectives map to 0.
[[nodiscard]] auto normalize(std::span<ObjectiveVector const> population) -> std::vector<ObjectiveVector>;

// Min-max frame computed over one set and applied to others.
class NormalizationFrame {
public:
    explicit NormalizationFrame(std::span<ObjectiveVector const> population);

    [[nodiscard]] auto apply(ObjectiveVector const& x) const -> ObjectiveVector;
    [[nodiscard]] auto apply(std::span<ObjectiveVector const> xs) const -> std::vector<ObjectiveVector>;

private:
    std::vector<double> lower_;
    std::vector<double> range_;
};

// Acute angle between two objective vectors, in [0, pi/2]. A zero vector
// (the normalized ideal point) has angle 0 to everything.
[[nodiscard]] auto angle(ObjectiveVector const& x, ObjectiveVector const& y) -> double;

struct Cluster {
    std::vector<std::size_t> member_indices;
    ObjectiveVector centroid;
};

// Ward-style linkage on angles:
// sqrt(2 |r| |s| / (|r| + |s|)) * angle(centroid_r, centroid_s).
[[nodiscard]] auto degree_angle(Cluster const& r, Cluster const& s) -> double;

// Componentwise mean.
[[nodiscard]] auto cluster_centroid(std::span<ObjectiveVector const> members) -> ObjectiveVector;

struct Merge {
    std::size_t left;  // position of the surviving cluster before the merge
    std::size_t right; // position of the absorbed cluster before the merge
    double distance;
};

struct Clustering {
    std::vector<Cluster> clusters;
    std::vector<Merge> merges; // full history, run to a single cluster
};

// Agglomerative clustering of a (normalized) first front. Duplicate vectors
// are collapsed before merging and re-attached to their cluster afterwards.
// Merges run to completion; the partition returned is the one just before
// the largest gap in the sorted merge distances, with the cluster count
// clamped to [2, ceil(n/2)] (a single cluster only for fewer than 4 points).
[[nodiscard]] auto hierarchical_cluster(std::span<ObjectiveVector const> front) -> Clustering;

enum class ReferenceSource { Center, Boundary };

struct ReferenceSet {
    std::vector<ObjectiveVector> points;
    std::vector<ReferenceSource> source;
    // Index into the input population when the point coincides with a real
    // member; synthetic centroids have none.
    std::vector<std::optional<std::size_t>> member;

    [[nodiscard]] auto size() const noexcept -> std::size_t { return points.size(); }
};

// Reference points of explicit clusters over `points`: the centroid when a
// cluster has at most n_c members, otherwise the centroid plus the two
// members spanning the largest acute angle. Duplicates are dropped.
[[nodiscard]] auto select_reference(std::span<ObjectiveVector const> points, std::span<Cluster const> clusters, std::size_t n_c) -> ReferenceSet;

// Full selection on a normalized population: first front, angle clustering,
// per-cluster selection.
[[nodiscard]] auto select_reference(std::span<ObjectiveVector const> population, std::size_t n_c) -> ReferenceSet;

} // namespace cenas

#endif

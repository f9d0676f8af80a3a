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

#include "cenas/refpoints.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "cenas/error.hpp"

namespace cenas {

NormalizationFrame::NormalizationFrame(std::span<ObjectiveVector const> population)
{
    if (population.empty()) {
        throw Error(ErrorCode::EmptyPopulation, "cannot normalize an empty population");
    }
    auto const m = population.front().size();
    lower_.assign(m, 0.0);
    range_.assign(m, 0.0);
    for (std::size_t k = 0; k < m; ++k) {
        auto lo = population.front()[k];
        auto hi = lo;
        for (auto const& p : population) {
            if (p.size() != m) {
                throw Error(ErrorCode::DimensionMismatch, "population has mixed objective counts");
            }
            lo = std::min(lo, p[k]);
            hi = std::max(hi, p[k]);
        }
        lower_[k] = lo;
        range_[k] = hi - lo;
    }
}

auto NormalizationFrame::apply(ObjectiveVector const& x) const -> ObjectiveVector
{
    if (x.size() != lower_.size()) {
        throw Error(ErrorCode::DimensionMismatch, "vector does not match normalization frame");
    }
    std::vector<double> out(x.size());
    for (std::size_t k = 0; k < x.size(); ++k) {
        out[k] = range_[k] > 0.0 ? (x[k] - lower_[k]) / range_[k] : 0.0;
    }
    return ObjectiveVector(std::move(out));
}

auto NormalizationFrame::apply(std::span<ObjectiveVector const> xs) const -> std::vector<ObjectiveVector>
{
    std::vector<ObjectiveVector> out;
    out.reserve(xs.size());
    for (auto const& x : xs) {
        out.push_back(apply(x));
    }
    return out;
}

auto normalize(std::span<ObjectiveVector const> population) -> std::vector<ObjectiveVector>
{
    return NormalizationFrame(population).apply(population);
}

auto angle(ObjectiveVector const& x, ObjectiveVector const& y) -> double
{
    if (x.size() != y.size()) {
        throw Error(ErrorCode::DimensionMismatch, "angle between vectors of different size");
    }
    double dot = 0.0;
    double xx = 0.0;
    double yy = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) {
        dot += x[k] * y[k];
        xx += x[k] * x[k];
        yy += y[k] * y[k];
    }
    if (xx == 0.0 || yy == 0.0) {
        return 0.0;
    }
    auto const cosine = std::min(1.0, std::abs(dot) / (std::sqrt(xx) * std::sqrt(yy)));
    return std::acos(cosine);
}

auto degree_angle(Cluster const& r, Cluster const& s) -> double
{
    auto const nr = static_cast<double>(r.member_indices.size());
    auto const ns = static_cast<double>(s.member_indices.size());
    return std::sqrt(2.0 * nr * ns / (nr + ns)) * angle(r.centroid, s.centroid);
}

auto cluster_centroid(std::span<ObjectiveVector const> members) -> ObjectiveVector
{
    if (members.empty()) {
        throw Error(ErrorCode::EmptyPopulation, "centroid of an empty cluster");
    }
    std::vector<double> sum(members.front().size(), 0.0);
    for (auto const& p : members) {
        if (p.size() != sum.size()) {
            throw Error(ErrorCode::DimensionMismatch, "cluster has mixed objective counts");
        }
        for (std::size_t k = 0; k < sum.size(); ++k) {
            sum[k] += p[k];
        }
    }
    for (auto& v : sum) {
        v /= static_cast<double>(members.size());
    }
    return ObjectiveVector(std::move(sum));
}

namespace {

auto centroid_of(std::span<ObjectiveVector const> points, std::vector<std::size_t> const& indices) -> ObjectiveVector
{
    std::vector<ObjectiveVector> members;
    members.reserve(indices.size());
    for (auto i : indices) {
        members.push_back(points[i]);
    }
    return cluster_centroid(members);
}

// Cluster count chosen from the merge history; see hierarchical_cluster.
auto cut_count(std::vector<Merge> const& merges, std::size_t n) -> std::size_t
{
    std::size_t k = 1;
    if (merges.size() >= 2) {
        std::vector<double> sorted;
        sorted.reserve(merges.size());
        for (auto const& m : merges) {
            sorted.push_back(m.distance);
        }
        std::sort(sorted.begin(), sorted.end());
        std::size_t below = 1;
        double widest = sorted[1] - sorted[0];
        for (std::size_t j = 2; j < sorted.size(); ++j) {
            if (sorted[j] - sorted[j - 1] > widest) {
                widest = sorted[j] - sorted[j - 1];
                below = j;
            }
        }
        k = n - below;
    }
    auto const lo = n >= 4 ? std::size_t { 2 } : std::size_t { 1 };
    auto const hi = std::max(lo, (n + 1) / 2);
    return std::clamp(k, lo, hi);
}

} // namespace

auto hierarchical_cluster(std::span<ObjectiveVector const> front) -> Clustering
{
    Clustering result;
    if (front.empty()) {
        return result;
    }

    // Collapse duplicates: unique[u] is the first index of each distinct vector.
    std::map<ObjectiveVector, std::size_t> seen;
    std::vector<std::size_t> unique;
    std::vector<std::size_t> owner(front.size());
    for (std::size_t i = 0; i < front.size(); ++i) {
        auto [it, inserted] = seen.emplace(front[i], unique.size());
        if (inserted) {
            unique.push_back(i);
        }
        owner[i] = it->second;
    }
    auto const n = unique.size();

    auto singletons = [&] {
        std::vector<Cluster> clusters;
        clusters.reserve(n);
        for (std::size_t u = 0; u < n; ++u) {
            clusters.push_back({ { u }, front[unique[u]] });
        }
        return clusters;
    };
    std::vector<ObjectiveVector> unique_points;
    unique_points.reserve(n);
    for (auto i : unique) {
        unique_points.push_back(front[i]);
    }

    // Merge to completion with a symmetric distance matrix.
    auto active = singletons();
    std::vector<std::vector<double>> distance(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            distance[i][j] = distance[j][i] = degree_angle(active[i], active[j]);
        }
    }
    while (active.size() > 1) {
        std::size_t best_i = 0;
        std::size_t best_j = 1;
        for (std::size_t i = 0; i < active.size(); ++i) {
            for (std::size_t j = i + 1; j < active.size(); ++j) {
                if (distance[i][j] < distance[best_i][best_j]) {
                    best_i = i;
                    best_j = j;
                }
            }
        }
        result.merges.push_back({ best_i, best_j, distance[best_i][best_j] });
        auto& merged = active[best_i];
        merged.member_indices.insert(merged.member_indices.end(), active[best_j].member_indices.begin(), active[best_j].member_indices.end());
        merged.centroid = centroid_of(unique_points, merged.member_indices);
        active.erase(active.begin() + static_cast<std::ptrdiff_t>(best_j));
        distance.erase(distance.begin() + static_cast<std::ptrdiff_t>(best_j));
        for (auto& row : distance) {
            row.erase(row.begin() + static_cast<std::ptrdiff_t>(best_j));
        }
        for (std::size_t j = 0; j < active.size(); ++j) {
            if (j != best_i) {
                distance[best_i][j] = distance[j][best_i] = degree_angle(active[best_i], active[j]);
            }
        }
    }

    // Replay the merge history up to the cut.
    auto const k = cut_count(result.merges, n);
    auto clusters = singletons();
    for (std::size_t r = 0; r < n - k; ++r) {
        auto const& m = result.merges[r];
        auto& into = clusters[m.left].member_indices;
        into.insert(into.end(), clusters[m.right].member_indices.begin(), clusters[m.right].member_indices.end());
        clusters.erase(clusters.begin() + static_cast<std::ptrdiff_t>(m.right));
    }

    // Expand unique ids back to input indices, duplicates included.
    std::vector<std::size_t> cluster_of_unique(n);
    for (std::size_t c = 0; c < clusters.size(); ++c) {
        for (auto u : clusters[c].member_indices) {
            cluster_of_unique[u] = c;
        }
    }
    result.clusters.assign(clusters.size(), Cluster {});
    for (std::size_t i = 0; i < front.size(); ++i) {
        result.clusters[cluster_of_unique[owner[i]]].member_indices.push_back(i);
    }
    for (auto& c : result.clusters) {
        c.centroid = centroid_of(front, c.member_indices);
    }
    return result;
}

auto select_reference(std::span<ObjectiveVector const> points, std::span<Cluster const> clusters, std::size_t n_c) -> ReferenceSet
{
    ReferenceSet refs;
    auto add = [&refs](ObjectiveVector const& p, ReferenceSource source, std::optional<std::size_t> member) {
        if (std::find(refs.points.begin(), refs.points.end(), p) != refs.points.end()) {
            return;
        }
        refs.points.push_back(p);
        refs.source.push_back(source);
        refs.member.push_back(member);
    };
    for (auto const& cluster : clusters) {
        auto const& members = cluster.member_indices;
        if (members.empty()) {
            continue;
        }
        auto const center = centroid_of(points, members);
        std::optional<std::size_t> center_member;
        for (auto i : members) {
            if (points[i] == center) {
                center_member = i;
                break;
            }
        }
        add(center, ReferenceSource::Center, center_member);
        if (members.size() <= n_c) {
            continue;
        }
        if (members.size() == 1) {
            add(points[members.front()], ReferenceSource::Boundary, members.front());
            continue;
        }
        std::size_t best_a = members[0];
        std::size_t best_b = members[1];
        double widest = -1.0;
        for (std::size_t a = 0; a < members.size(); ++a) {
            for (std::size_t b = a + 1; b < members.size(); ++b) {
                auto const theta = angle(points[members[a]], points[members[b]]);
                if (theta > widest) {
                    widest = theta;
                    best_a = members[a];
                    best_b = members[b];
                }
            }
        }
        add(points[best_a], ReferenceSource::Boundary, best_a);
        add(points[best_b], ReferenceSource::Boundary, best_b);
    }
    return refs;
}

auto select_reference(std::span<ObjectiveVector const> population, std::size_t n_c) -> ReferenceSet
{
    auto const partition = fast_nondominated_sort(population);
    auto const& first = partition.fronts.front();
    std::vector<ObjectiveVector> front;
    front.reserve(first.size());
    for (auto i : first) {
        front.push_back(population[i]);
    }
    auto clustering = hierarchical_cluster(front);
    for (auto& c : clustering.clusters) {
        for (auto& i : c.member_indices) {
            i = first[i];
        }
    }
    return select_reference(population, clustering.clusters, n_c);
}

} // namespace cenas

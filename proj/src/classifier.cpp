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

#include "cenas/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "cenas/error.hpp"

namespace cenas {

auto examples_from(std::span<LabeledSample const> samples) -> std::vector<Example>
{
    std::vector<Example> out;
    out.reserve(samples.size());
    for (auto const& s : samples) {
        out.push_back({ std::vector<double>(s.features.begin(), s.features.end()), s.good });
    }
    return out;
}

auto kernel_value(KernelKind kind, double gamma, std::span<double const> a, std::span<double const> b) -> double
{
    if (a.size() != b.size()) {
        throw Error(ErrorCode::DimensionMismatch, fmt::format("feature vectors of size {} and {}", a.size(), b.size()));
    }
    if (kind == KernelKind::Linear) {
        double dot = 0.0;
        for (std::size_t k = 0; k < a.size(); ++k) {
            dot += a[k] * b[k];
        }
        return dot;
    }
    double squared = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        auto const d = a[k] - b[k];
        squared += d * d;
    }
    return std::exp(-gamma * squared);
}

auto MarginClassifier::decision(std::span<double const> x) const -> double
{
    double sum = bias;
    for (std::size_t i = 0; i < support_vectors.size(); ++i) {
        sum += alphas[i] * labels[i] * kernel_value(kernel, gamma, support_vectors[i], x);
    }
    return sum;
}

auto resolve_gamma(std::span<Example const> train, SvmHyper const& hyper) -> double
{
    if (hyper.gamma) {
        return *hyper.gamma;
    }
    if (train.empty() || train.front().features.empty()) {
        return 1.0;
    }
    double sum = 0.0;
    double squares = 0.0;
    std::size_t count = 0;
    for (auto const& e : train) {
        for (auto v : e.features) {
            sum += v;
            squares += v * v;
            ++count;
        }
    }
    auto const mean = sum / static_cast<double>(count);
    auto const variance = squares / static_cast<double>(count) - mean * mean;
    auto const dims = static_cast<double>(train.front().features.size());
    return variance > 1e-12 ? 1.0 / (dims * variance) : 1.0;
}

auto train_base(std::span<Example const> train, SvmHyper const& hyper) -> MarginClassifier
{
    auto const n = train.size();
    auto const positives = std::count_if(train.begin(), train.end(), [](auto const& e) { return e.good; });
    if (positives == 0 || static_cast<std::size_t>(positives) == n) {
        throw Error(ErrorCode::SingleClassTrainingSet, fmt::format("{} of {} training samples are good", positives, n));
    }
    constexpr double tau = 1e-12;
    auto const gamma = resolve_gamma(train, hyper);

    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; ++i) {
        y[i] = train[i].good ? 1.0 : -1.0;
    }
    // Per-sample box bound; balanced weights scale each class by n / (2 n_class).
    auto const negatives = static_cast<double>(n) - static_cast<double>(positives);
    auto const c_pos = hyper.balanced ? hyper.c * static_cast<double>(n) / (2.0 * static_cast<double>(positives)) : hyper.c;
    auto const c_neg = hyper.balanced ? hyper.c * static_cast<double>(n) / (2.0 * negatives) : hyper.c;
    std::vector<double> bound(n);
    for (std::size_t i = 0; i < n; ++i) {
        bound[i] = y[i] > 0 ? c_pos : c_neg;
    }
    std::vector<std::vector<double>> kernel(n, std::vector<double>(n));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i; j < n; ++j) {
            kernel[i][j] = kernel[j][i] = kernel_value(hyper.kernel, gamma, train[i].features, train[j].features);
        }
    }

    // Dual: min 0.5 a'Qa - e'a, y'a = 0, 0 <= a <= C, Q_ij = y_i y_j K_ij.
    std::vector<double> alpha(n, 0.0);
    std::vector<double> grad(n, -1.0);
    auto in_up = [&](std::size_t t) { return y[t] > 0 ? alpha[t] < bound[t] : alpha[t] > 0.0; };
    auto in_low = [&](std::size_t t) { return y[t] > 0 ? alpha[t] > 0.0 : alpha[t] < bound[t]; };

    MarginClassifier model;
    model.converged = false;
    std::size_t iter = 0;
    for (; iter < hyper.max_iterations; ++iter) {
        // First index: maximal violation -y_t G_t over the "up" set.
        double g_max = -std::numeric_limits<double>::infinity();
        std::size_t i = n;
        for (std::size_t t = 0; t < n; ++t) {
            if (in_up(t) && -y[t] * grad[t] > g_max) {
                g_max = -y[t] * grad[t];
                i = t;
            }
        }
        // Second index: largest guaranteed objective decrease.
        double g_min = std::numeric_limits<double>::infinity();
        double best_decrease = std::numeric_limits<double>::infinity();
        std::size_t j = n;
        for (std::size_t t = 0; t < n; ++t) {
            if (!in_low(t)) {
                continue;
            }
            auto const v = -y[t] * grad[t];
            g_min = std::min(g_min, v);
            if (i == n) {
                continue;
            }
            auto const b = g_max - v;
            if (b > 0.0) {
                auto a = kernel[i][i] + kernel[t][t] - 2.0 * kernel[i][t];
                if (a <= 0.0) {
                    a = tau;
                }
                auto const decrease = -(b * b) / a;
                if (decrease <= best_decrease) {
                    best_decrease = decrease;
                    j = t;
                }
            }
        }
        if (i == n || j == n || g_max - g_min < hyper.tolerance) {
            model.converged = true;
            break;
        }

        auto const c_i = bound[i];
        auto const c_j = bound[j];
        auto const old_i = alpha[i];
        auto const old_j = alpha[j];
        auto quad = kernel[i][i] + kernel[j][j] - 2.0 * kernel[i][j];
        if (quad <= 0.0) {
            quad = tau;
        }
        if (y[i] != y[j]) {
            auto const delta = (-grad[i] - grad[j]) / quad;
            auto const diff = alpha[i] - alpha[j];
            alpha[i] += delta;
            alpha[j] += delta;
            if (diff > 0.0) {
                if (alpha[j] < 0.0) {
                    alpha[j] = 0.0;
                    alpha[i] = diff;
                }
            } else if (alpha[i] < 0.0) {
                alpha[i] = 0.0;
                alpha[j] = -diff;
            }
            if (diff > c_i - c_j) {
                if (alpha[i] > c_i) {
                    alpha[i] = c_i;
                    alpha[j] = c_i - diff;
                }
            } else if (alpha[j] > c_j) {
                alpha[j] = c_j;
                alpha[i] = c_j + diff;
            }
        } else {
            auto const delta = (grad[i] - grad[j]) / quad;
            auto const sum = alpha[i] + alpha[j];
            alpha[i] -= delta;
            alpha[j] += delta;
            if (sum > c_i) {
                if (alpha[i] > c_i) {
                    alpha[i] = c_i;
                    alpha[j] = sum - c_i;
                }
            } else if (alpha[j] < 0.0) {
                alpha[j] = 0.0;
                alpha[i] = sum;
            }
            if (sum > c_j) {
                if (alpha[j] > c_j) {
                    alpha[j] = c_j;
                    alpha[i] = sum - c_j;
                }
            } else if (alpha[i] < 0.0) {
                alpha[i] = 0.0;
                alpha[j] = sum;
            }
        }
        auto const di = alpha[i] - old_i;
        auto const dj = alpha[j] - old_j;
        for (std::size_t t = 0; t < n; ++t) {
            grad[t] += y[t] * (y[i] * kernel[i][t] * di + y[j] * kernel[j][t] * dj);
        }
    }
    model.iterations = iter;

    // Offset from free vectors, or the midpoint of the feasible interval.
    double upper = std::numeric_limits<double>::infinity();
    double lower = -std::numeric_limits<double>::infinity();
    double free_sum = 0.0;
    std::size_t free_count = 0;
    for (std::size_t t = 0; t < n; ++t) {
        auto const yg = y[t] * grad[t];
        if (alpha[t] >= bound[t]) {
            if (y[t] < 0) {
                upper = std::min(upper, yg);
            } else {
                lower = std::max(lower, yg);
            }
        } else if (alpha[t] <= 0.0) {
            if (y[t] > 0) {
                upper = std::min(upper, yg);
            } else {
                lower = std::max(lower, yg);
            }
        } else {
            free_sum += yg;
            ++free_count;
        }
    }
    auto const rho = free_count > 0 ? free_sum / static_cast<double>(free_count) : (upper + lower) / 2.0;

    model.bias = -rho;
    model.kernel = hyper.kernel;
    model.gamma = gamma;
    model.c = hyper.c;
    for (std::size_t t = 0; t < n; ++t) {
        if (alpha[t] > 0.0) {
            model.support_vectors.push_back(train[t].features);
            model.alphas.push_back(alpha[t]);
            model.labels.push_back(y[t]);
        }
    }
    return model;
}

auto DominanceEnsemble::predict(std::span<double const> x) const -> Prediction
{
    if (members.empty()) {
        return { false, 0.0 };
    }
    std::vector<double> scaled;
    if (!offset.empty()) {
        if (x.size() != offset.size()) {
            throw Error(ErrorCode::DimensionMismatch, fmt::format("feature vector of size {}, expected {}", x.size(), offset.size()));
        }
        scaled.resize(x.size());
        for (std::size_t k = 0; k < x.size(); ++k) {
            scaled[k] = (x[k] - offset[k]) / scale[k];
        }
        x = scaled;
    }
    std::size_t votes = 0;
    for (auto const& m : members) {
        votes += m.predict(x) ? 1U : 0U;
    }
    auto const score = static_cast<double>(votes) / static_cast<double>(members.size());
    return { 2 * votes > members.size(), score };
}

auto train_ensemble(std::span<Example const> train, std::size_t k, SvmHyper const& hyper, Rng& rng) -> DominanceEnsemble
{
    constexpr int max_redraws = 100;
    auto const n = train.size();
    auto const positives = std::count_if(train.begin(), train.end(), [](auto const& e) { return e.good; });
    if (positives == 0 || static_cast<std::size_t>(positives) == n) {
        throw Error(ErrorCode::SingleClassTrainingSet, fmt::format("{} of {} training samples are good", positives, n));
    }
    DominanceEnsemble ensemble;
    std::vector<Example> standardized;
    if (hyper.standardize && n > 0) {
        auto const d = train.front().features.size();
        ensemble.offset.assign(d, 0.0);
        ensemble.scale.assign(d, 0.0);
        for (auto const& e : train) {
            for (std::size_t k = 0; k < d; ++k) {
                ensemble.offset[k] += e.features[k];
            }
        }
        for (auto& m : ensemble.offset) {
            m /= static_cast<double>(n);
        }
        for (auto const& e : train) {
            for (std::size_t k = 0; k < d; ++k) {
                auto const dev = e.features[k] - ensemble.offset[k];
                ensemble.scale[k] += dev * dev;
            }
        }
        for (auto& s : ensemble.scale) {
            s = std::sqrt(s / static_cast<double>(n));
            // Constant features stay constant.
            s = s > 1e-12 ? s : 1.0;
        }
        standardized.assign(train.begin(), train.end());
        for (auto& e : standardized) {
            for (std::size_t k = 0; k < d; ++k) {
                e.features[k] = (e.features[k] - ensemble.offset[k]) / ensemble.scale[k];
            }
        }
        train = standardized;
    }
    auto member_hyper = hyper;
    member_hyper.gamma = resolve_gamma(train, hyper);

    ensemble.members.reserve(k);
    std::vector<Example> resample(n);
    for (std::size_t member = 0; member < k; ++member) {
        bool both = false;
        for (int attempt = 0; attempt < max_redraws && !both; ++attempt) {
            bool has_good = false;
            bool has_poor = false;
            for (std::size_t s = 0; s < n; ++s) {
                resample[s] = train[rng.uniform_index(n)];
                has_good = has_good || resample[s].good;
                has_poor = has_poor || !resample[s].good;
            }
            both = has_good && has_poor;
        }
        if (!both) {
            throw Error(ErrorCode::BootstrapExhausted, fmt::format("member {}: every bootstrap lost a class", member));
        }
        ensemble.members.push_back(train_base(resample, member_hyper));
    }
    return ensemble;
}

auto auc_from_scores(std::span<double const> positive, std::span<double const> negative) -> double
{
    if (positive.empty() || negative.empty()) {
        throw Error(ErrorCode::SingleClassValidation, fmt::format("{} positive and {} negative scores", positive.size(), negative.size()));
    }
    // Rank-sum form: tied scores share their mid-rank, which credits each
    // tied positive/negative pair with 1/2.
    struct Scored {
        double score;
        bool positive;
    };
    std::vector<Scored> all;
    all.reserve(positive.size() + negative.size());
    for (auto p : positive) {
        all.push_back({ p, true });
    }
    for (auto q : negative) {
        all.push_back({ q, false });
    }
    std::sort(all.begin(), all.end(), [](auto const& a, auto const& b) { return a.score < b.score; });
    double positive_rank_sum = 0.0;
    for (std::size_t begin = 0; begin < all.size();) {
        auto end = begin;
        std::size_t tied_positives = 0;
        while (end < all.size() && all[end].score == all[begin].score) {
            tied_positives += all[end].positive ? 1U : 0U;
            ++end;
        }
        auto const mid_rank = (static_cast<double>(begin + 1) + static_cast<double>(end)) / 2.0;
        positive_rank_sum += mid_rank * static_cast<double>(tied_positives);
        begin = end;
    }
    auto const m = static_cast<double>(positive.size());
    auto const n = static_cast<double>(negative.size());
    return (positive_rank_sum - m * (m + 1.0) / 2.0) / (m * n);
}

auto auc(DominanceEnsemble const& ensemble, std::span<Example const> validation) -> double
{
    std::vector<double> positive;
    std::vector<double> negative;
    for (auto const& e : validation) {
        (e.good ? positive : negative).push_back(ensemble.predict(e.features).score);
    }
    return auc_from_scores(positive, negative);
}

} // namespace cenas

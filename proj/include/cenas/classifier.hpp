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

#ifndef CENAS_CLASSIFIER_HPP
#define CENAS_CLASSIFIER_HPP

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "cenas/labeling.hpp"
#include "cenas/random.hpp"

namespace cenas {

struct Example {
    std::vector<double> features;
    bool good { false };
};

// Examples whose features are the (normalized) objective values.
[[nodiscard]] auto examples_from(std::span<LabeledSample const> samples) -> std::vector<Example>;

enum class KernelKind { Rbf, Linear };

struct SvmHyper {
    KernelKind kernel { KernelKind::Rbf };
    std::optional<double> gamma; // unset: 1 / (d * variance of all feature values)
    double c { 1.0 };
    bool balanced { false };    // per-class bound C * n / (2 n_class)
    bool standardize { false }; // z-score each feature on the training set
    double tolerance { 1e-3 };
    std::size_t max_iterations { 10000 };
};

// Soft-margin SVM in dual form. Labels are +1 for good, -1 for poor.
class MarginClassifier {
public:
    [[nodiscard]] auto decision(std::span<double const> x) const -> double;
    [[nodiscard]] auto predict(std::span<double const> x) const -> bool { return decision(x) > 0.0; }

    std::vector<std::vector<double>> support_vectors;
    std::vector<double> alphas;    // dual coefficients, 0 < alpha <= class bound
    std::vector<double> labels;    // +1 / -1 per support vector
    double bias { 0.0 };
    KernelKind kernel { KernelKind::Rbf };
    double gamma { 1.0 };
    double c { 1.0 };
    bool converged { true };
    std::size_t iterations { 0 };
};

[[nodiscard]] auto kernel_value(KernelKind kind, double gamma, std::span<double const> a, std::span<double const> b) -> double;

// Resolves an unset gamma from the training features.
[[nodiscard]] auto resolve_gamma(std::span<Example const> train, SvmHyper const& hyper) -> double;

// Sequential minimal optimization with second-order working-set selection.
// Stops when the maximal KKT violation drops below hyper.tolerance; after
// hyper.max_iterations the best-so-far model is returned with
// converged = false. Throws SingleClassTrainingSet.
[[nodiscard]] auto train_base(std::span<Example const> train, SvmHyper const& hyper) -> MarginClassifier;

struct Prediction {
    bool good;
    double score; // fraction of members voting good
};

struct DominanceEnsemble {
    std::vector<MarginClassifier> members;
    std::optional<double> auc;
    // Feature transform x -> (x - offset) / scale; empty means identity.
    std::vector<double> offset;
    std::vector<double> scale;

    // Majority vote; an exact tie resolves to poor.
    [[nodiscard]] auto predict(std::span<double const> x) const -> Prediction;
};

// K members, each trained on a bootstrap resample of the training set. A
// resample missing a class is redrawn up to 100 times before throwing
// BootstrapExhausted.
[[nodiscard]] auto train_ensemble(std::span<Example const> train, std::size_t k, SvmHyper const& hyper, Rng& rng) -> DominanceEnsemble;

// Pairwise ranking AUC: mean over positive/negative pairs of 1, 0.5 or 0
// for a higher, equal or lower positive score.
[[nodiscard]] auto auc_from_scores(std::span<double const> positive, std::span<double const> negative) -> double;

// Held-out AUC of the ensemble's vote scores. Throws SingleClassValidation.
[[nodiscard]] auto auc(DominanceEnsemble const& ensemble, std::span<Example const> validation) -> double;

} // namespace cenas

#endif

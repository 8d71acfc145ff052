#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "lonetext/features.hpp"

namespace lonetext {

enum class FeatureKind { unigram, bigram, topic };

std::string to_string(FeatureKind kind);
FeatureKind feature_kind_from_string(const std::string& s);

struct SvmOptions {
    double C = 1.0;
    double cost_factor = 0.0;  // <= 0 means auto: n_negative / n_positive
    int max_epochs = 1000;
    double tol = 1e-3;  // max projected-gradient violation per epoch
    std::uint64_t seed = 0;
};

struct SvmModel {
    std::vector<double> w;  // feature weights, bias excluded
    double bias = 0.0;
    double C = 1.0;
    double cost_factor = 1.0;
    FeatureKind feature_kind = FeatureKind::unigram;
    std::uint64_t seed = 0;

    void save(const std::string& path) const;
    static SvmModel load(const std::string& path);
};

// Convergence diagnostics, mainly for tests.
struct SvmTrainInfo {
    double dual_objective = 0.0;    // sum(alpha) - 0.5 ||w||^2
    double primal_objective = 0.0;  // 0.5 ||w||^2 + sum C_i hinge_i
    double max_pg_violation = 0.0;
    int epochs = 0;
    std::vector<double> alpha;
};

// L1-hinge, L2-regularized linear SVM trained by dual coordinate descent
// with a seeded per-epoch permutation. The bias is an appended constant
// feature of value 1 (regularized). Positive examples get cost C *
// cost_factor.
SvmModel svm_train(const DocTermMatrix& m, FeatureKind kind, const SvmOptions& options = {},
                   SvmTrainInfo* info = nullptr);

struct SvmPrediction {
    std::vector<int> labels;  // 1 iff decision value > 0
    std::vector<double> decision_values;
};

SvmPrediction svm_predict(const SvmModel& model, const DocTermMatrix& m);

// Terms sorted by signed weight (positive = lonely-indicative), ties
// lexicographic, bias excluded. Rejects topic-feature models.
std::vector<std::pair<std::string, double>> rank_words_by_weight(const SvmModel& model,
                                                                 const Vocabulary& vocab);

}  // namespace lonetext

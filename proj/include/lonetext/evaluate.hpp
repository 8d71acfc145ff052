#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "lonetext/corpus.hpp"
#include "lonetext/features.hpp"
#include "lonetext/lda.hpp"
#include "lonetext/preprocess.hpp"
#include "lonetext/svm.hpp"

namespace lonetext {

struct ClassMetrics {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    std::size_t support = 0;
};

// Weighted averages use true-class support shares; weighted recall equals
// accuracy exactly by construction.
struct MetricsRow {
    double accuracy = 0.0;
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    ClassMetrics negative;
    ClassMetrics positive;
};

MetricsRow compute_metrics(const std::vector<int>& y_true, const std::vector<int>& y_pred);

struct TTestResult {
    double t = 0.0;
    int df = 0;
    double p_two_sided = 1.0;
    bool degenerate = false;  // zero variance of the differences
};

// Two-sided paired Student t-test of b - a.
TTestResult paired_t_test(const std::vector<double>& a, const std::vector<double>& b);

struct FoldPlan {
    int k = 10;
    std::vector<int> assignments;  // document index -> fold id
    bool stratified = true;
    bool group_by_participant = false;
    std::uint64_t seed = 0;
};

FoldPlan make_folds(const std::vector<int>& labels, const std::vector<std::string>& groups,
                    int k, bool stratified, bool group_by_participant, std::uint64_t seed);
FoldPlan make_folds(const Dataset& d, int k, bool stratified, bool group_by_participant,
                    std::uint64_t seed);

// Constant not-lonely predictor evaluated on each test fold.
std::vector<MetricsRow> majority_baseline(const std::vector<int>& labels, const FoldPlan& plan);

struct CvConfig {
    FeatureKind features = FeatureKind::unigram;
    int topics = 10;  // used when features == topic
    DocTermMatrix::Weighting text_weighting = DocTermMatrix::Weighting::tfidf;
    SvmOptions svm;
    LdaOptions lda;
    PreprocessConfig prep;
    int folds = 10;
    bool stratified = true;
    bool group_by_participant = false;
    double cl_confidence = 0.95;
    std::uint64_t seed = 0;
    int threads = 1;

    nlohmann::ordered_json to_json() const;
};

struct MetricSummary {
    double accuracy = 0.0;
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
};

struct EvalReport {
    nlohmann::ordered_json config;
    std::vector<MetricsRow> folds;
    MetricSummary mean;
    MetricSummary cl;  // half-width of the two-sided t confidence interval
    std::vector<double> baseline_f1;
    double baseline_mean_f1 = 0.0;
    TTestResult ttest;  // model F1 vs baseline F1 per fold

    std::string to_json_string() const;
    std::string to_csv() const;  // one row of M/CL per metric
};

// Everything (pruning, vocabulary, idf, topics, SVM) fits on the training
// split of each fold; exposed so leakage can be tested directly.
struct FoldModel {
    Vocabulary vocab;
    IdfWeights idf;  // used when text_weighting == tfidf
    LdaModel lda;    // T > 0 only for topic features
    SvmModel svm;
    FeatureKind features = FeatureKind::unigram;
    DocTermMatrix::Weighting text_weighting = DocTermMatrix::Weighting::tfidf;
};

FoldModel fit_fold(const std::vector<std::vector<std::string>>& train_docs,
                   const std::vector<int>& train_labels, const CvConfig& config,
                   std::uint64_t fold_seed);
std::vector<int> predict_fold(const FoldModel& model,
                              const std::vector<std::vector<std::string>>& docs);

EvalReport run_cv(const Dataset& d, const CvConfig& config);
// Precomputed count-matrix route (synthetic corpora); unigram or topic
// features only.
EvalReport run_cv(const DocTermMatrix& counts, const CvConfig& config);

struct SweepPoint {
    int topics = 0;
    double mean_f1 = 0.0;
};

struct SweepResult {
    std::vector<SweepPoint> points;
    int best_topics = 0;  // highest mean F1, ties to the smaller count
    EvalReport best_report;

    std::string to_csv() const;  // topics,mean_f1 rows
};

SweepResult sweep_topics(const Dataset& d, const CvConfig& base, int t_min, int t_max, int t_step);
SweepResult sweep_topics(const DocTermMatrix& counts, const CvConfig& base, int t_min, int t_max,
                         int t_step);

}  // namespace lonetext

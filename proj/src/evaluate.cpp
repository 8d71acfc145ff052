#include "lonetext/evaluate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>
#include <map>
#include <numeric>
#include <sstream>

#include "lonetext/errors.hpp"
#include "lonetext/mathx.hpp"
#include "lonetext/parallel.hpp"
#include "lonetext/rng.hpp"

namespace lonetext {

using ordered_json = nlohmann::ordered_json;

MetricsRow compute_metrics(const std::vector<int>& y_true, const std::vector<int>& y_pred) {
    if (y_true.empty()) throw EmptyInput();
    if (y_true.size() != y_pred.size()) throw LengthMismatch(y_true.size(), y_pred.size());

    // tp[c]: class-c examples predicted c; fp[c]: others predicted c.
    std::size_t tp[2] = {0, 0}, fp[2] = {0, 0}, support[2] = {0, 0};
    for (std::size_t i = 0; i < y_true.size(); ++i) {
        int truth = y_true[i] == 1;
        int pred = y_pred[i] == 1;
        ++support[truth];
        if (pred == truth) {
            ++tp[truth];
        } else {
            ++fp[pred];
        }
    }
    const double n = static_cast<double>(y_true.size());

    ClassMetrics per_class[2];
    for (int c = 0; c < 2; ++c) {
        std::size_t predicted = tp[c] + fp[c];
        double precision = predicted == 0 ? 0.0 : static_cast<double>(tp[c]) / predicted;
        double recall = support[c] == 0 ? 0.0 : static_cast<double>(tp[c]) / support[c];
        double f1 = precision + recall == 0.0 ? 0.0 : 2.0 * precision * recall / (precision + recall);
        per_class[c] = {precision, recall, f1, support[c]};
    }

    MetricsRow row;
    row.negative = per_class[0];
    row.positive = per_class[1];
    // Weighted recall reduces algebraically to (tp0 + tp1) / n, which is the
    // accuracy; computing both from the same expression keeps them bit-equal.
    row.accuracy = static_cast<double>(tp[0] + tp[1]) / n;
    row.recall = static_cast<double>(tp[0] + tp[1]) / n;
    row.precision =
        (support[0] * per_class[0].precision + support[1] * per_class[1].precision) / n;
    row.f1 = (support[0] * per_class[0].f1 + support[1] * per_class[1].f1) / n;
    return row;
}

TTestResult paired_t_test(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size()) throw LengthMismatch(a.size(), b.size());
    if (a.size() < 2) throw TooShort("paired t-test needs at least 2 pairs");

    const std::size_t n = a.size();
    std::vector<double> diff(n);
    for (std::size_t i = 0; i < n; ++i) diff[i] = b[i] - a[i];
    double mean = std::accumulate(diff.begin(), diff.end(), 0.0) / static_cast<double>(n);
    double ss = 0.0;
    for (double d : diff) ss += (d - mean) * (d - mean);
    double sd = std::sqrt(ss / static_cast<double>(n - 1));

    TTestResult result;
    result.df = static_cast<int>(n) - 1;
    if (sd == 0.0) {
        result.degenerate = true;
        if (mean == 0.0) {
            result.t = 0.0;
            result.p_two_sided = 1.0;
        } else {
            result.t = mean > 0.0 ? std::numeric_limits<double>::infinity()
                                  : -std::numeric_limits<double>::infinity();
            result.p_two_sided = 0.0;
        }
        return result;
    }
    result.t = mean / (sd / std::sqrt(static_cast<double>(n)));
    result.p_two_sided = student_t_two_sided_p(result.t, static_cast<double>(result.df));
    return result;
}

FoldPlan make_folds(const std::vector<int>& labels, const std::vector<std::string>& groups,
                    int k, bool stratified, bool group_by_participant, std::uint64_t seed) {
    const std::size_t n = labels.size();
    if (k < 2) throw ContractError("fold count must be >= 2");
    if (n < static_cast<std::size_t>(k)) {
        throw TooFewExamples("need at least " + std::to_string(k) + " documents for " +
                             std::to_string(k) + " folds, got " + std::to_string(n));
    }

    FoldPlan plan;
    plan.k = k;
    plan.stratified = stratified;
    plan.group_by_participant = group_by_participant;
    plan.seed = seed;
    plan.assignments.assign(n, 0);

    if (group_by_participant) {
        if (groups.size() != n) throw LengthMismatch(n, groups.size());
        std::map<std::string, std::vector<std::size_t>> by_group;
        for (std::size_t i = 0; i < n; ++i) by_group[groups[i]].push_back(i);
        if (by_group.size() < static_cast<std::size_t>(k)) {
            throw TooFewExamples("need at least " + std::to_string(k) + " participants for " +
                                 std::to_string(k) + " grouped folds");
        }
        // Largest group first onto the currently smallest fold; ties by fold id.
        std::vector<std::pair<std::string, std::vector<std::size_t>>> ordered(by_group.begin(),
                                                                              by_group.end());
        std::stable_sort(ordered.begin(), ordered.end(), [](const auto& a, const auto& b) {
            return a.second.size() > b.second.size();
        });
        std::vector<std::size_t> fold_sizes(static_cast<std::size_t>(k), 0);
        for (const auto& [name, members] : ordered) {
            std::size_t target = 0;
            for (std::size_t f = 1; f < fold_sizes.size(); ++f) {
                if (fold_sizes[f] < fold_sizes[target]) target = f;
            }
            for (std::size_t i : members) plan.assignments[i] = static_cast<int>(target);
            fold_sizes[target] += members.size();
        }
        return plan;
    }

    Rng rng(derive_seed(seed, "folds"));
    std::size_t cursor = 0;
    auto deal = [&](std::vector<std::size_t>& indices) {
        rng.shuffle(indices);
        for (std::size_t i : indices) {
            plan.assignments[i] = static_cast<int>(cursor % static_cast<std::size_t>(k));
            ++cursor;
        }
    };
    if (stratified) {
        std::vector<std::size_t> positives, negatives;
        for (std::size_t i = 0; i < n; ++i) {
            (labels[i] == 1 ? positives : negatives).push_back(i);
        }
        deal(positives);
        deal(negatives);
    } else {
        std::vector<std::size_t> all(n);
        std::iota(all.begin(), all.end(), 0);
        deal(all);
    }
    return plan;
}

FoldPlan make_folds(const Dataset& d, int k, bool stratified, bool group_by_participant,
                    std::uint64_t seed) {
    std::vector<std::string> groups;
    groups.reserve(d.documents().size());
    for (const auto& doc : d.documents()) groups.push_back(doc.participant_id);
    return make_folds(d.labels(), groups, k, stratified, group_by_participant, seed);
}

std::vector<MetricsRow> majority_baseline(const std::vector<int>& labels, const FoldPlan& plan) {
    if (labels.size() != plan.assignments.size()) {
        throw LengthMismatch(labels.size(), plan.assignments.size());
    }
    std::vector<MetricsRow> out;
    out.reserve(static_cast<std::size_t>(plan.k));
    for (int f = 0; f < plan.k; ++f) {
        std::vector<int> y_true;
        for (std::size_t i = 0; i < labels.size(); ++i) {
            if (plan.assignments[i] == f) y_true.push_back(labels[i]);
        }
        std::vector<int> y_pred(y_true.size(), 0);
        out.push_back(compute_metrics(y_true, y_pred));
    }
    return out;
}

namespace {

double fold_cl(const std::vector<double>& values, double confidence) {
    const std::size_t k = values.size();
    if (k < 2) return 0.0;
    double mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(k);
    double ss = 0.0;
    for (double v : values) ss += (v - mean) * (v - mean);
    double sd = std::sqrt(ss / static_cast<double>(k - 1));
    if (sd == 0.0) return 0.0;
    double t_crit = student_t_critical(1.0 - confidence, static_cast<double>(k - 1));
    return t_crit * sd / std::sqrt(static_cast<double>(k));
}

double mean_of(const std::vector<double>& values) {
    return std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
}

std::uint64_t fold_seed_of(const CvConfig& config, int fold) {
    return derive_seed(config.seed, "cv.fold." + std::to_string(fold));
}

EvalReport assemble_report(const CvConfig& config, std::vector<MetricsRow> fold_metrics,
                           const std::vector<MetricsRow>& baseline) {
    EvalReport report;
    report.config = config.to_json();
    report.folds = std::move(fold_metrics);

    std::vector<double> acc, prec, rec, f1;
    for (const auto& m : report.folds) {
        acc.push_back(m.accuracy);
        prec.push_back(m.precision);
        rec.push_back(m.recall);
        f1.push_back(m.f1);
    }
    report.mean = {mean_of(acc), mean_of(prec), mean_of(rec), mean_of(f1)};
    report.cl = {fold_cl(acc, config.cl_confidence), fold_cl(prec, config.cl_confidence),
                 fold_cl(rec, config.cl_confidence), fold_cl(f1, config.cl_confidence)};

    for (const auto& m : baseline) report.baseline_f1.push_back(m.f1);
    report.baseline_mean_f1 = mean_of(report.baseline_f1);
    report.ttest = paired_t_test(report.baseline_f1, f1);
    return report;
}

// Shared fold loop: fit_and_predict(fold, train_indices, test_indices)
// returns the test-fold predictions.
template <typename FitPredict>
EvalReport run_cv_impl(const std::vector<int>& labels, const FoldPlan& plan,
                       const CvConfig& config, FitPredict&& fit_and_predict) {
    const std::size_t folds = static_cast<std::size_t>(plan.k);
    std::vector<MetricsRow> fold_metrics(folds);
    std::vector<std::exception_ptr> errors(folds);

    for_blocks(folds, 1, config.threads, [&](std::size_t f, std::size_t, std::size_t) {
        try {
            std::vector<std::size_t> train_idx, test_idx;
            for (std::size_t i = 0; i < labels.size(); ++i) {
                (plan.assignments[i] == static_cast<int>(f) ? test_idx : train_idx).push_back(i);
            }
            std::vector<int> y_pred = fit_and_predict(static_cast<int>(f), train_idx, test_idx);
            std::vector<int> y_true;
            y_true.reserve(test_idx.size());
            for (std::size_t i : test_idx) y_true.push_back(labels[i]);
            fold_metrics[f] = compute_metrics(y_true, y_pred);
        } catch (...) {
            errors[f] = std::current_exception();
        }
    });
    for (const auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
    return assemble_report(config, std::move(fold_metrics), majority_baseline(labels, plan));
}

}  // namespace

FoldModel fit_fold(const std::vector<std::vector<std::string>>& train_docs,
                   const std::vector<int>& train_labels, const CvConfig& config,
                   std::uint64_t fold_seed) {
    FoldModel model;
    model.features = config.features;
    model.text_weighting = config.text_weighting;

    auto [pruned, report] = prune_by_frequency(train_docs, config.prep);
    model.vocab = build_vocabulary(pruned, config.features == FeatureKind::bigram ? 2 : 1);
    DocTermMatrix counts = count_matrix(pruned, model.vocab);
    counts.labels = train_labels;

    DocTermMatrix features;
    if (config.features == FeatureKind::topic) {
        LdaOptions lda_options = config.lda;
        lda_options.seed = derive_seed(fold_seed, "lda");
        lda_options.threads = 1;  // folds already run concurrently
        auto [lda, state] = lda_fit(counts, config.topics, lda_options);
        model.lda = std::move(lda);
        features = topic_feature_matrix(counts, model.lda);
    } else if (config.text_weighting == DocTermMatrix::Weighting::tfidf) {
        model.idf = fit_idf(counts);
        features = tfidf_transform(counts, model.idf);
    } else {
        features = std::move(counts);
    }

    SvmOptions svm_options = config.svm;
    svm_options.seed = derive_seed(fold_seed, "svm");
    model.svm = svm_train(features, config.features, svm_options);
    return model;
}

std::vector<int> predict_fold(const FoldModel& model,
                              const std::vector<std::vector<std::string>>& docs) {
    DocTermMatrix counts = count_matrix(docs, model.vocab);
    DocTermMatrix features;
    if (model.features == FeatureKind::topic) {
        features = topic_feature_matrix(counts, model.lda);
    } else if (model.text_weighting == DocTermMatrix::Weighting::tfidf) {
        features = tfidf_transform(counts, model.idf);
    } else {
        features = std::move(counts);
    }
    return svm_predict(model.svm, features).labels;
}

EvalReport run_cv(const Dataset& d, const CvConfig& config) {
    const std::vector<int> labels = d.labels();
    const std::vector<std::vector<std::string>> docs = d.token_docs();
    FoldPlan plan = make_folds(d, config.folds, config.stratified, config.group_by_participant,
                               config.seed);

    return run_cv_impl(labels, plan, config,
                       [&](int fold, const std::vector<std::size_t>& train_idx,
                           const std::vector<std::size_t>& test_idx) {
                           std::vector<std::vector<std::string>> train_docs, test_docs;
                           std::vector<int> train_labels;
                           for (std::size_t i : train_idx) {
                               train_docs.push_back(docs[i]);
                               train_labels.push_back(labels[i]);
                           }
                           for (std::size_t i : test_idx) test_docs.push_back(docs[i]);
                           FoldModel model =
                               fit_fold(train_docs, train_labels, config, fold_seed_of(config, fold));
                           return predict_fold(model, test_docs);
                       });
}

EvalReport run_cv(const DocTermMatrix& counts, const CvConfig& config) {
    if (counts.labels.size() != counts.n_docs) {
        throw ContractError("count matrix has no labels");
    }
    if (config.features == FeatureKind::bigram) {
        throw ContractError("bigram features need token documents, not a matrix");
    }
    if (config.group_by_participant) {
        throw ContractError("participant grouping needs a dataset, not a matrix");
    }
    FoldPlan plan = make_folds(counts.labels, {}, config.folds, config.stratified, false,
                               config.seed);

    return run_cv_impl(
        counts.labels, plan, config,
        [&](int fold, const std::vector<std::size_t>& train_idx,
            const std::vector<std::size_t>& test_idx) {
            DocTermMatrix train, test;
            train.n_terms = test.n_terms = counts.n_terms;
            train.n_docs = train_idx.size();
            test.n_docs = test_idx.size();
            for (std::size_t i : train_idx) {
                train.rows.push_back(counts.rows[i]);
                train.labels.push_back(counts.labels[i]);
            }
            for (std::size_t i : test_idx) test.rows.push_back(counts.rows[i]);

            std::uint64_t fold_seed = fold_seed_of(config, fold);
            DocTermMatrix train_features, test_features;
            LdaModel lda;
            if (config.features == FeatureKind::topic) {
                LdaOptions lda_options = config.lda;
                lda_options.seed = derive_seed(fold_seed, "lda");
                lda_options.threads = 1;
                auto fitted = lda_fit(train, config.topics, lda_options);
                lda = std::move(fitted.first);
                train_features = topic_feature_matrix(train, lda);
                test_features = topic_feature_matrix(test, lda);
            } else if (config.text_weighting == DocTermMatrix::Weighting::tfidf) {
                IdfWeights idf = fit_idf(train);
                train_features = tfidf_transform(train, idf);
                test_features = tfidf_transform(test, idf);
            } else {
                train_features = std::move(train);
                test_features = std::move(test);
            }

            SvmOptions svm_options = config.svm;
            svm_options.seed = derive_seed(fold_seed, "svm");
            SvmModel svm = svm_train(train_features, config.features, svm_options);
            return svm_predict(svm, test_features).labels;
        });
}

namespace {

template <typename Corpus>
SweepResult sweep_impl(const Corpus& corpus, const CvConfig& base, int t_min, int t_max,
                       int t_step) {
    if (t_min < 1) throw ContractError("sweep must start at >= 1 topic");
    if (t_step < 1) throw ContractError("sweep step must be >= 1");
    if (t_max < t_min) throw ContractError("sweep range is empty");

    SweepResult result;
    bool have_best = false;
    for (int t = t_min; t <= t_max; t += t_step) {
        CvConfig config = base;
        config.features = FeatureKind::topic;
        config.topics = t;
        EvalReport report = run_cv(corpus, config);
        result.points.push_back({t, report.mean.f1});
        if (!have_best || report.mean.f1 > result.best_report.mean.f1) {
            have_best = true;
            result.best_topics = t;
            result.best_report = std::move(report);
        }
    }
    return result;
}

}  // namespace

SweepResult sweep_topics(const Dataset& d, const CvConfig& base, int t_min, int t_max,
                         int t_step) {
    return sweep_impl(d, base, t_min, t_max, t_step);
}

SweepResult sweep_topics(const DocTermMatrix& counts, const CvConfig& base, int t_min, int t_max,
                         int t_step) {
    return sweep_impl(counts, base, t_min, t_max, t_step);
}

nlohmann::ordered_json CvConfig::to_json() const {
    ordered_json j;
    j["features"] = features == FeatureKind::topic ? "topics_" + std::to_string(topics)
                                                   : to_string(features);
    j["text_weighting"] =
        text_weighting == DocTermMatrix::Weighting::tfidf ? "tfidf" : "count";
    j["svm"] = {{"C", svm.C},
                {"cost_factor", svm.cost_factor <= 0.0 ? "auto" : std::to_string(svm.cost_factor)},
                {"max_epochs", svm.max_epochs},
                {"tol", svm.tol}};
    j["lda"] = {{"alpha", lda.alpha},
                {"eta", lda.eta},
                {"max_iter", lda.max_iter},
                {"tol", lda.tol}};
    j["prep"] = {{"min_df", prep.min_df}, {"max_df_fraction", prep.max_df_fraction}};
    j["folds"] = folds;
    j["stratified"] = stratified;
    j["group_by_participant"] = group_by_participant;
    j["cl_confidence"] = cl_confidence;
    j["seed"] = seed;
    return j;
}

std::string EvalReport::to_json_string() const {
    ordered_json root;
    root["config"] = config;
    ordered_json folds_json = ordered_json::array();
    for (std::size_t f = 0; f < folds.size(); ++f) {
        const MetricsRow& m = folds[f];
        folds_json.push_back({{"fold", f},
                              {"accuracy", m.accuracy},
                              {"precision", m.precision},
                              {"recall", m.recall},
                              {"f1", m.f1}});
    }
    root["folds"] = std::move(folds_json);
    root["mean"] = {{"accuracy", mean.accuracy},
                    {"precision", mean.precision},
                    {"recall", mean.recall},
                    {"f1", mean.f1}};
    root["cl"] = {{"accuracy", cl.accuracy},
                  {"precision", cl.precision},
                  {"recall", cl.recall},
                  {"f1", cl.f1}};
    root["baseline"] = {{"folds", baseline_f1}, {"mean", baseline_mean_f1}};
    root["ttest"] = {{"t", ttest.t}, {"df", ttest.df}, {"p", ttest.p_two_sided}};
    return root.dump(2) + "\n";
}

std::string EvalReport::to_csv() const {
    std::string features = config.value("features", "unknown");
    char buf[256];
    std::string out =
        "features,accuracy_m,accuracy_cl,precision_m,precision_cl,recall_m,recall_cl,f1_m,f1_cl\n";
    std::snprintf(buf, sizeof buf, "%s,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f\n",
                  features.c_str(), mean.accuracy, cl.accuracy, mean.precision, cl.precision,
                  mean.recall, cl.recall, mean.f1, cl.f1);
    out += buf;
    return out;
}

std::string SweepResult::to_csv() const {
    std::string out = "topics,mean_f1\n";
    char buf[64];
    for (const auto& p : points) {
        std::snprintf(buf, sizeof buf, "%d,%.6f\n", p.topics, p.mean_f1);
        out += buf;
    }
    return out;
}

}  // namespace lonetext

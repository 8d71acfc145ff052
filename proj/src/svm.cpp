#include "lonetext/svm.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>

#include <json.hpp>

#include "lonetext/errors.hpp"
#include "lonetext/rng.hpp"

namespace lonetext {

using ordered_json = nlohmann::ordered_json;

std::string to_string(FeatureKind kind) {
    switch (kind) {
        case FeatureKind::unigram: return "unigram";
        case FeatureKind::bigram: return "bigram";
        case FeatureKind::topic: return "topic";
    }
    return "unigram";
}

FeatureKind feature_kind_from_string(const std::string& s) {
    if (s == "unigram") return FeatureKind::unigram;
    if (s == "bigram") return FeatureKind::bigram;
    if (s == "topic" || s == "topics") return FeatureKind::topic;
    throw ContractError("unknown feature kind: " + s);
}

namespace {

double dot_with_bias(const std::vector<double>& w, double bias,
                     const std::vector<std::pair<int, double>>& row) {
    double value = bias;
    for (const auto& [col, x] : row) value += w[static_cast<std::size_t>(col)] * x;
    return value;
}

}  // namespace

SvmModel svm_train(const DocTermMatrix& m, FeatureKind kind, const SvmOptions& options,
                   SvmTrainInfo* info) {
    const std::size_t n = m.n_docs;
    if (m.labels.size() != n) throw ContractError("training matrix has no labels");
    if (!(options.C > 0.0)) throw ContractError("C must be positive");

    std::size_t n_pos = 0;
    for (int label : m.labels) n_pos += label == 1;
    const std::size_t n_neg = n - n_pos;
    if (n_pos == 0 || n_neg == 0) throw SingleClassTraining();

    for (std::size_t i = 0; i < n; ++i) {
        for (const auto& [col, x] : m.rows[i]) {
            if (!std::isfinite(x)) throw NonFiniteFeature(i, static_cast<std::size_t>(col));
        }
    }

    const double cost_factor = options.cost_factor > 0.0
                                   ? options.cost_factor
                                   : static_cast<double>(n_neg) / static_cast<double>(n_pos);

    std::vector<double> y(n);
    std::vector<double> cost(n);
    std::vector<double> q_diag(n);  // ||x_i||^2 + 1 for the bias feature
    for (std::size_t i = 0; i < n; ++i) {
        y[i] = m.labels[i] == 1 ? 1.0 : -1.0;
        cost[i] = m.labels[i] == 1 ? options.C * cost_factor : options.C;
        double sq = 1.0;
        for (const auto& [col, x] : m.rows[i]) sq += x * x;
        q_diag[i] = sq;
    }

    std::vector<double> w(m.n_terms, 0.0);
    double bias = 0.0;
    std::vector<double> alpha(n, 0.0);
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);

    Rng rng(derive_seed(options.seed, "svm.epochs"));
    double max_violation = 0.0;
    int epochs = 0;
    for (int epoch = 0; epoch < options.max_epochs; ++epoch) {
        rng.shuffle(order);
        max_violation = 0.0;
        for (std::size_t i : order) {
            const double g = y[i] * dot_with_bias(w, bias, m.rows[i]) - 1.0;
            double pg = g;
            if (alpha[i] <= 0.0) {
                pg = std::min(g, 0.0);
            } else if (alpha[i] >= cost[i]) {
                pg = std::max(g, 0.0);
            }
            max_violation = std::max(max_violation, std::fabs(pg));
            if (std::fabs(pg) > 1e-12) {
                double old = alpha[i];
                alpha[i] = std::min(std::max(old - g / q_diag[i], 0.0), cost[i]);
                double delta = (alpha[i] - old) * y[i];
                for (const auto& [col, x] : m.rows[i]) {
                    w[static_cast<std::size_t>(col)] += delta * x;
                }
                bias += delta;
            }
        }
        epochs = epoch + 1;
        if (max_violation < options.tol) break;
    }

    SvmModel model;
    model.w = std::move(w);
    model.bias = bias;
    model.C = options.C;
    model.cost_factor = cost_factor;
    model.feature_kind = kind;
    model.seed = options.seed;

    if (info) {
        double w_sq = model.bias * model.bias;
        for (double v : model.w) w_sq += v * v;
        double alpha_sum = 0.0;
        for (double a : alpha) alpha_sum += a;
        double hinge = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double margin = y[i] * dot_with_bias(model.w, model.bias, m.rows[i]);
            hinge += cost[i] * std::max(0.0, 1.0 - margin);
        }
        info->dual_objective = alpha_sum - 0.5 * w_sq;
        info->primal_objective = 0.5 * w_sq + hinge;
        info->max_pg_violation = max_violation;
        info->epochs = epochs;
        info->alpha = std::move(alpha);
    }
    return model;
}

SvmPrediction svm_predict(const SvmModel& model, const DocTermMatrix& m) {
    if (m.n_terms != model.w.size()) throw DimensionMismatch(model.w.size(), m.n_terms);
    SvmPrediction out;
    out.labels.reserve(m.n_docs);
    out.decision_values.reserve(m.n_docs);
    for (const auto& row : m.rows) {
        double value = dot_with_bias(model.w, model.bias, row);
        out.decision_values.push_back(value);
        out.labels.push_back(value > 0.0 ? 1 : 0);  // ties go to the majority class
    }
    return out;
}

std::vector<std::pair<std::string, double>> rank_words_by_weight(const SvmModel& model,
                                                                 const Vocabulary& vocab) {
    if (model.feature_kind == FeatureKind::topic) {
        throw WrongFeatureKind("word ranking requires unigram or bigram features");
    }
    if (vocab.size() != model.w.size()) throw DimensionMismatch(model.w.size(), vocab.size());
    std::vector<std::pair<std::string, double>> ranked;
    ranked.reserve(vocab.size());
    for (std::size_t i = 0; i < vocab.size(); ++i) {
        ranked.emplace_back(vocab.terms[i], model.w[i]);
    }
    std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });
    return ranked;
}

void SvmModel::save(const std::string& path) const {
    ordered_json j;
    j["format"] = "svm-model";
    j["feature_kind"] = to_string(feature_kind);
    j["C"] = C;
    j["cost_factor"] = cost_factor;
    j["seed"] = seed;
    j["bias"] = bias;
    j["dim"] = w.size();
    ordered_json weights = ordered_json::array();
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (std::fabs(w[i]) > 1e-12) {
            weights.push_back(ordered_json::array({i, w[i]}));
        }
    }
    j["weights"] = std::move(weights);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write model file: " + path);
    out << j.dump(2) << '\n';
}

SvmModel SvmModel::load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open model file: " + path);
    ordered_json j = ordered_json::parse(in, nullptr, false);
    if (j.is_discarded() || j.value("format", "") != "svm-model") {
        throw DataError("not an SVM model file: " + path);
    }
    SvmModel model;
    model.feature_kind = feature_kind_from_string(j.at("feature_kind").get<std::string>());
    model.C = j.at("C").get<double>();
    model.cost_factor = j.at("cost_factor").get<double>();
    model.seed = j.at("seed").get<std::uint64_t>();
    model.bias = j.at("bias").get<double>();
    model.w.assign(j.at("dim").get<std::size_t>(), 0.0);
    for (const auto& pair : j.at("weights")) {
        std::size_t idx = pair.at(0).get<std::size_t>();
        if (idx >= model.w.size()) throw DataError("weight index out of range in " + path);
        model.w[idx] = pair.at(1).get<double>();
    }
    return model;
}

}  // namespace lonetext

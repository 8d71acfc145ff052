#include "lonetext/synth.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

#include "lonetext/errors.hpp"
#include "lonetext/rng.hpp"

namespace lonetext {

using ordered_json = nlohmann::ordered_json;

void SynthSpec::validate() const {
    if (t_true < 1) throw InvalidSpec("t_true must be >= 1");
    if (vocab_size < 1) throw InvalidSpec("vocab_size must be >= 1");
    if (n_docs < 1) throw InvalidSpec("n_docs must be >= 1");
    if (!(doc_length_mean > 0.0)) throw InvalidSpec("doc_length_mean must be positive");
    if (!(alpha_true > 0.0)) throw InvalidSpec("alpha_true must be positive");
    if (!true_topics.empty()) {
        if (true_topics.size() != static_cast<std::size_t>(t_true)) {
            throw InvalidSpec("true_topics must have t_true rows");
        }
        for (const auto& row : true_topics) {
            if (row.size() != static_cast<std::size_t>(vocab_size)) {
                throw InvalidSpec("true_topics rows must have vocab_size entries");
            }
            double sum = 0.0;
            for (double p : row) {
                if (p < 0.0) throw InvalidSpec("true_topics entries must be >= 0");
                sum += p;
            }
            if (std::fabs(sum - 1.0) > 1e-9) {
                throw InvalidSpec("true_topics rows must sum to 1");
            }
        }
    } else if (!(topic_sparsity > 0.0)) {
        throw InvalidSpec("topic_sparsity must be positive");
    }
    if (has_label_link) {
        if (link_weights.size() != static_cast<std::size_t>(t_true)) {
            throw DimensionMismatch(static_cast<std::size_t>(t_true), link_weights.size());
        }
    }
}

namespace {

int sample_categorical(Rng& rng, const double* probs, int n) {
    double u = rng.uniform01();
    double cum = 0.0;
    for (int i = 0; i < n; ++i) {
        cum += probs[i];
        if (u < cum) return i;
    }
    return n - 1;  // guard against rounding at the top end
}

}  // namespace

SynthCorpus generate_corpus(const SynthSpec& spec) {
    spec.validate();
    const int T = spec.t_true;
    const int V = spec.vocab_size;
    const int D = spec.n_docs;

    SynthCorpus corpus;
    corpus.true_topics = Mat(static_cast<std::size_t>(T), static_cast<std::size_t>(V));
    if (!spec.true_topics.empty()) {
        for (int t = 0; t < T; ++t) {
            std::copy(spec.true_topics[static_cast<std::size_t>(t)].begin(),
                      spec.true_topics[static_cast<std::size_t>(t)].end(),
                      corpus.true_topics.row(static_cast<std::size_t>(t)));
        }
    } else {
        Rng topic_rng(derive_seed(spec.seed, "synth.topics"));
        for (int t = 0; t < T; ++t) {
            std::vector<double> row = topic_rng.dirichlet(spec.topic_sparsity,
                                                          static_cast<std::size_t>(V));
            std::copy(row.begin(), row.end(), corpus.true_topics.row(static_cast<std::size_t>(t)));
        }
    }

    corpus.theta_true = Mat(static_cast<std::size_t>(D), static_cast<std::size_t>(T));
    corpus.counts.n_docs = static_cast<std::size_t>(D);
    corpus.counts.n_terms = static_cast<std::size_t>(V);
    corpus.counts.weighting = DocTermMatrix::Weighting::count;
    corpus.counts.rows.resize(static_cast<std::size_t>(D));
    corpus.tokens.resize(static_cast<std::size_t>(D));

    Rng doc_rng(derive_seed(spec.seed, "synth.docs"));
    for (int d = 0; d < D; ++d) {
        std::vector<double> theta = doc_rng.dirichlet(spec.alpha_true, static_cast<std::size_t>(T));
        std::copy(theta.begin(), theta.end(), corpus.theta_true.row(static_cast<std::size_t>(d)));

        std::size_t length = spec.doc_length_fixed
                                 ? static_cast<std::size_t>(spec.doc_length_mean)
                                 : static_cast<std::size_t>(doc_rng.poisson(spec.doc_length_mean));
        std::map<int, double> counts;
        auto& tokens = corpus.tokens[static_cast<std::size_t>(d)];
        tokens.reserve(length);
        for (std::size_t i = 0; i < length; ++i) {
            int z = sample_categorical(doc_rng, theta.data(), T);
            int w = sample_categorical(doc_rng, corpus.true_topics.row(static_cast<std::size_t>(z)),
                                       V);
            tokens.emplace_back(w, z);
            counts[w] += 1.0;
        }
        corpus.counts.rows[static_cast<std::size_t>(d)].assign(counts.begin(), counts.end());
    }

    if (spec.has_label_link) {
        corpus.counts.labels =
            generate_labels(corpus.theta_true, spec.link_weights, spec.link_threshold);
    }
    return corpus;
}

std::vector<int> generate_labels(const Mat& theta, const std::vector<double>& weights,
                                 double threshold) {
    if (theta.cols() != weights.size()) throw DimensionMismatch(theta.cols(), weights.size());
    std::vector<int> labels(theta.rows());
    for (std::size_t d = 0; d < theta.rows(); ++d) {
        const double* row = theta.row(d);
        double score = 0.0;
        for (std::size_t t = 0; t < weights.size(); ++t) score += weights[t] * row[t];
        labels[d] = score > threshold ? 1 : 0;
    }
    return labels;
}

TopicAlignment align_topics(const LdaModel& learned, const Mat& true_topics) {
    if (static_cast<std::size_t>(learned.T) != true_topics.rows() ||
        static_cast<std::size_t>(learned.V) != true_topics.cols()) {
        throw DimensionMismatch(true_topics.rows() * true_topics.cols(),
                                static_cast<std::size_t>(learned.T) *
                                    static_cast<std::size_t>(learned.V));
    }
    const std::size_t T = true_topics.rows();
    const std::size_t V = true_topics.cols();
    Mat learned_rows = learned.topic_point_estimates();

    // Cosine similarity matrix true x learned.
    Mat cosine(T, T);
    for (std::size_t i = 0; i < T; ++i) {
        const double* a = true_topics.row(i);
        double norm_a = 0.0;
        for (std::size_t v = 0; v < V; ++v) norm_a += a[v] * a[v];
        norm_a = std::sqrt(norm_a);
        for (std::size_t j = 0; j < T; ++j) {
            const double* b = learned_rows.row(j);
            double dot = 0.0, norm_b = 0.0;
            for (std::size_t v = 0; v < V; ++v) {
                dot += a[v] * b[v];
                norm_b += b[v] * b[v];
            }
            norm_b = std::sqrt(norm_b);
            cosine(i, j) = norm_a > 0.0 && norm_b > 0.0 ? dot / (norm_a * norm_b) : 0.0;
        }
    }

    // Greedy maximum-cosine matching without replacement.
    TopicAlignment alignment;
    alignment.learned_for_true.assign(T, -1);
    alignment.tv.assign(T, 0.0);
    std::set<std::size_t> free_true, free_learned;
    for (std::size_t i = 0; i < T; ++i) {
        free_true.insert(i);
        free_learned.insert(i);
    }
    while (!free_true.empty()) {
        double best = -2.0;
        std::size_t best_i = 0, best_j = 0;
        for (std::size_t i : free_true) {
            for (std::size_t j : free_learned) {
                if (cosine(i, j) > best) {
                    best = cosine(i, j);
                    best_i = i;
                    best_j = j;
                }
            }
        }
        alignment.learned_for_true[best_i] = static_cast<int>(best_j);
        free_true.erase(best_i);
        free_learned.erase(best_j);
    }

    double total = 0.0;
    for (std::size_t i = 0; i < T; ++i) {
        const double* a = true_topics.row(i);
        const double* b = learned_rows.row(static_cast<std::size_t>(alignment.learned_for_true[i]));
        double l1 = 0.0;
        for (std::size_t v = 0; v < V; ++v) l1 += std::fabs(a[v] - b[v]);
        alignment.tv[i] = 0.5 * l1;
        total += alignment.tv[i];
    }
    alignment.mean_tv = total / static_cast<double>(T);
    return alignment;
}

std::string SynthSpec::to_json_string() const {
    ordered_json j;
    j["t_true"] = t_true;
    j["vocab_size"] = vocab_size;
    j["n_docs"] = n_docs;
    j["doc_length_mean"] = doc_length_mean;
    j["doc_length_fixed"] = doc_length_fixed;
    j["alpha_true"] = alpha_true;
    if (!true_topics.empty()) {
        j["true_topics"] = true_topics;
    } else {
        j["topic_sparsity"] = topic_sparsity;
    }
    if (has_label_link) {
        j["label_link"] = {{"weights", link_weights}, {"threshold", link_threshold}};
    }
    j["seed"] = seed;
    return j.dump(2) + "\n";
}

SynthSpec SynthSpec::from_json_string(const std::string& text) {
    ordered_json j = ordered_json::parse(text, nullptr, false);
    if (j.is_discarded() || !j.is_object()) throw InvalidSpec("not a JSON object");

    static const std::set<std::string> known = {
        "t_true",     "vocab_size",  "n_docs",         "doc_length_mean", "doc_length_fixed",
        "alpha_true", "true_topics", "topic_sparsity", "label_link",      "seed"};
    for (const auto& [key, value] : j.items()) {
        if (!known.count(key)) throw InvalidSpec("unknown key \"" + key + "\"");
    }

    SynthSpec spec;
    spec.t_true = j.value("t_true", spec.t_true);
    spec.vocab_size = j.value("vocab_size", spec.vocab_size);
    spec.n_docs = j.value("n_docs", spec.n_docs);
    spec.doc_length_mean = j.value("doc_length_mean", spec.doc_length_mean);
    spec.doc_length_fixed = j.value("doc_length_fixed", spec.doc_length_fixed);
    spec.alpha_true = j.value("alpha_true", spec.alpha_true);
    if (j.contains("true_topics")) {
        spec.true_topics = j["true_topics"].get<std::vector<std::vector<double>>>();
    }
    spec.topic_sparsity = j.value("topic_sparsity", spec.topic_sparsity);
    if (j.contains("label_link")) {
        const auto& link = j["label_link"];
        for (const auto& [key, value] : link.items()) {
            if (key != "weights" && key != "threshold") {
                throw InvalidSpec("unknown label_link key \"" + key + "\"");
            }
        }
        spec.has_label_link = true;
        spec.link_weights = link.at("weights").get<std::vector<double>>();
        spec.link_threshold = link.at("threshold").get<double>();
    }
    spec.seed = j.value("seed", spec.seed);
    spec.validate();
    return spec;
}

SynthSpec SynthSpec::from_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open spec file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return from_json_string(ss.str());
}

}  // namespace lonetext

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lonetext/features.hpp"
#include "lonetext/lda.hpp"

namespace lonetext {

// Generator spec for synthetic corpora drawn from the topic-mixture
// generative process, with an optional linear-threshold label link on the
// true topic proportions.
struct SynthSpec {
    int t_true = 5;
    int vocab_size = 100;
    int n_docs = 100;
    double doc_length_mean = 100.0;
    bool doc_length_fixed = false;  // true: every doc has exactly doc_length_mean tokens
    double alpha_true = 0.5;
    // Either explicit rows (t_true x vocab_size, each on the simplex) or a
    // per-row Dirichlet concentration to sample them from.
    std::vector<std::vector<double>> true_topics;
    double topic_sparsity = 0.05;
    bool has_label_link = false;
    std::vector<double> link_weights;
    double link_threshold = 0.5;
    std::uint64_t seed = 0;

    void validate() const;
    std::string to_json_string() const;
    static SynthSpec from_json_string(const std::string& text);  // unknown keys rejected
    static SynthSpec from_file(const std::string& path);
};

struct SynthCorpus {
    DocTermMatrix counts;  // labels filled when the spec has a label link
    Mat theta_true;        // D x T document topic proportions
    Mat true_topics;       // T x V rows on the simplex
    // Tokens in generation order: (word id, topic id) per token per doc.
    std::vector<std::vector<std::pair<int, int>>> tokens;
};

SynthCorpus generate_corpus(const SynthSpec& spec);

// label = 1 iff weights . theta_d > threshold.
std::vector<int> generate_labels(const Mat& theta, const std::vector<double>& weights,
                                 double threshold);

struct TopicAlignment {
    // learned_for_true[t] = learned topic greedily matched (max cosine,
    // without replacement) to true topic t.
    std::vector<int> learned_for_true;
    std::vector<double> tv;  // total-variation distance per matched pair
    double mean_tv = 0.0;
};

TopicAlignment align_topics(const LdaModel& learned, const Mat& true_topics);

}  // namespace lonetext

#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace lonetext {

struct LdaModel;

// Terms are kept sorted lexicographically so column order, and every weight
// vector downstream, is deterministic.
struct Vocabulary {
    std::vector<std::string> terms;
    std::map<std::string, int> index;
    std::vector<std::size_t> df;
    int ngram_max = 1;

    std::size_t size() const { return terms.size(); }

    void save_tsv(const std::string& path) const;  // term<TAB>column<TAB>df
    static Vocabulary load_tsv(const std::string& path);
};

// Unigrams, plus adjacent-pair bigrams ("w1 w2") when ngram_max is 2.
Vocabulary build_vocabulary(const std::vector<std::vector<std::string>>& docs, int ngram_max);

struct DocTermMatrix {
    enum class Weighting { count, tfidf, topic_proportion };

    std::size_t n_docs = 0;
    std::size_t n_terms = 0;
    Weighting weighting = Weighting::count;
    // Sparse rows of (column, value), sorted by column.
    std::vector<std::vector<std::pair<int, double>>> rows;
    std::vector<int> labels;  // empty or one binary label per row
};

// Entry (d, t) counts occurrences of term t in doc d; out-of-vocabulary
// n-grams are ignored, so test folds never grow the vocabulary.
DocTermMatrix count_matrix(const std::vector<std::vector<std::string>>& docs,
                           const Vocabulary& vocab);

struct IdfWeights {
    std::vector<double> idf;  // ln((1+D)/(1+df)) + 1 per column
};

IdfWeights fit_idf(const DocTermMatrix& counts);

// tf * idf with rows scaled to unit Euclidean norm (all-zero rows stay zero).
// The one-argument form fits idf on the matrix itself; inside cross
// validation the idf must come from the training split.
DocTermMatrix tfidf_transform(const DocTermMatrix& counts);
DocTermMatrix tfidf_transform(const DocTermMatrix& counts, const IdfWeights& weights);

// Rows are the normalized variational document-topic proportions
// gamma_d / sum(gamma_d) under a fitted model; dimension T.
DocTermMatrix topic_feature_matrix(const DocTermMatrix& counts, const LdaModel& model,
                                   int threads = 1);

// Matrix Market coordinate format, 1-based indices.
void write_matrix_market(const DocTermMatrix& m, const std::string& path);
DocTermMatrix read_matrix_market(const std::string& path);

// labels.csv: header doc,label with 0-based doc ids.
void write_labels_csv(const std::vector<int>& labels, const std::string& path);
std::vector<int> read_labels_csv(const std::string& path, std::size_t expected_docs);

}  // namespace lonetext

#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "lonetext/features.hpp"

namespace lonetext {

// Minimal dense row-major matrix.
class Mat {
public:
    Mat() = default;
    Mat(std::size_t rows, std::size_t cols, double value = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, value) {}

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    double* row(std::size_t r) { return data_.data() + r * cols_; }
    const double* row(std::size_t r) const { return data_.data() + r * cols_; }
    double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
    std::vector<double>& data() { return data_; }
    const std::vector<double>& data() const { return data_; }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

struct LdaOptions {
    double alpha = 0.0;        // <= 0 means 1/T
    double eta = 0.0;          // <= 0 means 1/T
    int max_iter = 100;        // outer variational EM iterations
    double tol = 1e-4;         // relative ELBO change for convergence
    int e_step_max_iter = 100;
    double e_step_tol = 1e-3;  // mean |change in gamma| per document
    std::uint64_t seed = 0;
    int threads = 1;
};

// Smoothed LDA: symmetric Dirichlet priors on both the document-topic
// proportions (alpha) and the topic-word rows (eta). lambda holds the
// variational Dirichlet parameters over topic-word distributions.
struct LdaModel {
    int T = 0;
    int V = 0;
    double alpha = 0.0;
    double eta = 0.0;
    std::uint64_t seed = 0;
    int iterations = 0;
    Mat lambda;             // T x V
    Mat expected_log_beta;  // T x V, Psi(lambda) - Psi(row sum)

    Mat topic_point_estimates() const;  // normalized lambda rows

    // JSON metadata plus a sibling .bin with little-endian float64 lambda
    // (16-byte header "LDAMAT\0\0" + uint32 T + uint32 V, row-major).
    void save(const std::string& json_path) const;
    static LdaModel load(const std::string& json_path);
};

struct VariationalState {
    Mat gamma;  // D x T document Dirichlet parameters
    // Per document, per distinct term: T responsibilities (row-major,
    // aligned with the sparse row of the count matrix).
    std::vector<std::vector<double>> phi;
    std::vector<double> elbo_trace;  // one entry per outer iteration
};

// Batch variational EM on a count matrix. Deterministic given the seed;
// the E-step runs over fixed-size document blocks whose sufficient
// statistics merge in block order, so results are bit-stable for any
// thread count.
std::pair<LdaModel, VariationalState> lda_fit(const DocTermMatrix& counts, int T,
                                              const LdaOptions& options = {});

// E-step only, topics frozen; returns per-document gamma.
Mat lda_transform(const DocTermMatrix& counts, const LdaModel& model, int threads = 1);

struct ElboBreakdown {
    double doc_terms = 0.0;    // word, z, theta and entropy terms summed over documents
    double topic_terms = 0.0;  // topic-word prior and entropy terms
    double total = 0.0;
};

// Full evidence lower bound for the given state and model.
ElboBreakdown elbo(const DocTermMatrix& counts, const LdaModel& model,
                   const VariationalState& state);

// Per-topic terms sorted by point-estimate probability, ties lexicographic.
std::vector<std::vector<std::pair<std::string, double>>> topic_top_words(
    const LdaModel& model, const Vocabulary& vocab, int n);

// Shannon entropy (nats) of a topic's point-estimate word distribution.
double topic_entropy(const LdaModel& model, int topic);

}  // namespace lonetext

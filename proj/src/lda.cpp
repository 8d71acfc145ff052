#include "lonetext/lda.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>

#include <json.hpp>

#include "lonetext/errors.hpp"
#include "lonetext/mathx.hpp"
#include "lonetext/parallel.hpp"
#include "lonetext/rng.hpp"

namespace lonetext {

using ordered_json = nlohmann::ordered_json;

namespace {

constexpr std::size_t kDocBlock = 64;  // fixed block size for deterministic reductions

void update_expected_log_beta(LdaModel& model) {
    for (int t = 0; t < model.T; ++t) {
        const double* lam = model.lambda.row(static_cast<std::size_t>(t));
        double* elog = model.expected_log_beta.row(static_cast<std::size_t>(t));
        double sum = 0.0;
        for (int v = 0; v < model.V; ++v) sum += lam[v];
        double psi_sum = digamma(sum);
        for (int v = 0; v < model.V; ++v) elog[v] = digamma(lam[v]) - psi_sum;
    }
}

// expected_log_beta transposed to V x T so a term's topic vector is
// contiguous in the inner loops.
Mat transpose_elog_beta(const LdaModel& model) {
    Mat out(static_cast<std::size_t>(model.V), static_cast<std::size_t>(model.T));
    for (int t = 0; t < model.T; ++t) {
        const double* src = model.expected_log_beta.row(static_cast<std::size_t>(t));
        for (int v = 0; v < model.V; ++v) {
            out(static_cast<std::size_t>(v), static_cast<std::size_t>(t)) = src[v];
        }
    }
    return out;
}

// Coordinate ascent for one document: synchronous phi sweeps alternating
// with the gamma update until the mean absolute gamma change drops below
// e_step_tol. phi is per distinct term, scaled by counts in the updates.
void e_step_document(const std::vector<std::pair<int, double>>& row, const Mat& elog_beta_t,
                     double alpha, int T, const LdaOptions& options, double* gamma,
                     std::vector<double>& phi) {
    const std::size_t nnz = row.size();
    phi.assign(nnz * static_cast<std::size_t>(T), 0.0);

    double n_total = 0.0;
    for (const auto& [v, n] : row) n_total += n;
    for (int t = 0; t < T; ++t) gamma[t] = alpha + n_total / T;
    if (nnz == 0) return;

    std::vector<double> psi_gamma(T);
    std::vector<double> new_gamma(T);
    for (int t = 0; t < T; ++t) psi_gamma[t] = digamma(gamma[t]);

    for (int iter = 0; iter < options.e_step_max_iter; ++iter) {
        std::fill(new_gamma.begin(), new_gamma.end(), alpha);
        for (std::size_t j = 0; j < nnz; ++j) {
            const int v = row[j].first;
            const double n = row[j].second;
            double* phi_j = phi.data() + j * static_cast<std::size_t>(T);
            const double* elog_v = elog_beta_t.row(static_cast<std::size_t>(v));

            double max_log = -std::numeric_limits<double>::infinity();
            for (int t = 0; t < T; ++t) {
                double lp = elog_v[t] + psi_gamma[t];
                phi_j[t] = lp;
                if (lp > max_log) max_log = lp;
            }
            double norm = 0.0;
            for (int t = 0; t < T; ++t) {
                phi_j[t] = std::exp(phi_j[t] - max_log);
                norm += phi_j[t];
            }
            for (int t = 0; t < T; ++t) {
                phi_j[t] /= norm;
                new_gamma[t] += n * phi_j[t];
            }
        }
        double change = 0.0;
        for (int t = 0; t < T; ++t) {
            change += std::fabs(new_gamma[t] - gamma[t]);
            gamma[t] = new_gamma[t];
            psi_gamma[t] = digamma(gamma[t]);
        }
        if (change / T < options.e_step_tol) break;
    }
}

void check_count_matrix(const DocTermMatrix& counts) {
    if (counts.weighting != DocTermMatrix::Weighting::count) {
        throw ContractError("LDA requires a count matrix");
    }
}

}  // namespace

Mat LdaModel::topic_point_estimates() const {
    Mat beta(static_cast<std::size_t>(T), static_cast<std::size_t>(V));
    for (int t = 0; t < T; ++t) {
        const double* lam = lambda.row(static_cast<std::size_t>(t));
        double* b = beta.row(static_cast<std::size_t>(t));
        double sum = 0.0;
        for (int v = 0; v < V; ++v) sum += lam[v];
        for (int v = 0; v < V; ++v) b[v] = lam[v] / sum;
    }
    return beta;
}

std::pair<LdaModel, VariationalState> lda_fit(const DocTermMatrix& counts, int T,
                                              const LdaOptions& options) {
    if (T < 1) throw InvalidTopicCount(T);
    check_count_matrix(counts);

    LdaModel model;
    model.T = T;
    model.V = static_cast<int>(counts.n_terms);
    model.alpha = options.alpha > 0.0 ? options.alpha : 1.0 / T;
    model.eta = options.eta > 0.0 ? options.eta : 1.0 / T;
    model.seed = options.seed;
    model.lambda = Mat(static_cast<std::size_t>(T), counts.n_terms);
    model.expected_log_beta = Mat(static_cast<std::size_t>(T), counts.n_terms);

    // Near-uniform but symmetry-broken start.
    Rng rng(derive_seed(options.seed, "lda.init"));
    for (double& x : model.lambda.data()) x = rng.gamma(100.0, 0.01);
    update_expected_log_beta(model);

    const std::size_t d_count = counts.n_docs;
    VariationalState state;
    state.gamma = Mat(d_count, static_cast<std::size_t>(T));
    state.phi.resize(d_count);

    const std::size_t blocks = block_count(d_count, kDocBlock);
    std::vector<Mat> block_stats(blocks);

    double prev_elbo = 0.0;
    for (int iter = 0; iter < options.max_iter; ++iter) {
        const Mat elog_beta_t = transpose_elog_beta(model);
        for_blocks(d_count, kDocBlock, options.threads, [&](std::size_t b, std::size_t begin,
                                                            std::size_t end) {
            Mat& stats = block_stats[b];
            stats = Mat(static_cast<std::size_t>(T), counts.n_terms);
            for (std::size_t d = begin; d < end; ++d) {
                e_step_document(counts.rows[d], elog_beta_t, model.alpha, T, options,
                                state.gamma.row(d), state.phi[d]);
                const auto& row = counts.rows[d];
                const double* phi = state.phi[d].data();
                for (std::size_t j = 0; j < row.size(); ++j) {
                    const int v = row[j].first;
                    const double n = row[j].second;
                    for (int t = 0; t < T; ++t) {
                        stats(static_cast<std::size_t>(t), static_cast<std::size_t>(v)) +=
                            n * phi[j * static_cast<std::size_t>(T) + static_cast<std::size_t>(t)];
                    }
                }
            }
        });

        // M-step: merge block statistics in block order.
        std::fill(model.lambda.data().begin(), model.lambda.data().end(), model.eta);
        for (std::size_t b = 0; b < blocks; ++b) {
            const auto& stats = block_stats[b].data();
            auto& lambda = model.lambda.data();
            for (std::size_t i = 0; i < lambda.size(); ++i) lambda[i] += stats[i];
        }
        update_expected_log_beta(model);
        model.iterations = iter + 1;

        double bound = elbo(counts, model, state).total;
        if (!std::isfinite(bound)) throw NumericalFailure("ELBO is not finite");
        state.elbo_trace.push_back(bound);
        if (iter > 0) {
            double rel = std::fabs(bound - prev_elbo) / std::fabs(prev_elbo);
            if (rel < options.tol) break;
        }
        prev_elbo = bound;
    }
    return {std::move(model), std::move(state)};
}

Mat lda_transform(const DocTermMatrix& counts, const LdaModel& model, int threads) {
    check_count_matrix(counts);
    if (counts.n_terms != static_cast<std::size_t>(model.V)) {
        throw ModelVocabMismatch(static_cast<std::size_t>(model.V), counts.n_terms);
    }
    LdaOptions options;  // inner-loop defaults match fitting
    const Mat elog_beta_t = transpose_elog_beta(model);
    Mat gamma(counts.n_docs, static_cast<std::size_t>(model.T));
    for_blocks(counts.n_docs, kDocBlock, threads, [&](std::size_t, std::size_t begin,
                                                      std::size_t end) {
        std::vector<double> phi;
        for (std::size_t d = begin; d < end; ++d) {
            e_step_document(counts.rows[d], elog_beta_t, model.alpha, model.T, options,
                            gamma.row(d), phi);
        }
    });
    return gamma;
}

ElboBreakdown elbo(const DocTermMatrix& counts, const LdaModel& model,
                   const VariationalState& state) {
    check_count_matrix(counts);
    if (counts.n_terms != static_cast<std::size_t>(model.V)) {
        throw ModelVocabMismatch(static_cast<std::size_t>(model.V), counts.n_terms);
    }
    if (state.gamma.rows() != counts.n_docs || state.phi.size() != counts.n_docs) {
        throw DimensionMismatch(counts.n_docs, state.gamma.rows());
    }
    const int T = model.T;
    const int V = model.V;

    ElboBreakdown out;
    const Mat elog_beta_t = transpose_elog_beta(model);
    const double lg_alpha_const =
        std::lgamma(T * model.alpha) - T * std::lgamma(model.alpha);
    std::vector<double> elog_theta(static_cast<std::size_t>(T));
    for (std::size_t d = 0; d < counts.n_docs; ++d) {
        const double* gamma = state.gamma.row(d);
        const auto& row = counts.rows[d];
        const double* phi = state.phi[d].data();

        double gamma_sum = 0.0;
        for (int t = 0; t < T; ++t) gamma_sum += gamma[t];
        double psi_gamma_sum = digamma(gamma_sum);

        double doc = lg_alpha_const - std::lgamma(gamma_sum);
        for (int t = 0; t < T; ++t) {
            elog_theta[static_cast<std::size_t>(t)] = digamma(gamma[t]) - psi_gamma_sum;
            doc += (model.alpha - gamma[t]) * elog_theta[static_cast<std::size_t>(t)] +
                   std::lgamma(gamma[t]);
        }
        for (std::size_t j = 0; j < row.size(); ++j) {
            const int v = row[j].first;
            const double n = row[j].second;
            const double* phi_j = phi + j * static_cast<std::size_t>(T);
            const double* elog_v = elog_beta_t.row(static_cast<std::size_t>(v));
            for (int t = 0; t < T; ++t) {
                double p = phi_j[t];
                if (p <= 0.0) continue;
                doc += n * p * (elog_theta[static_cast<std::size_t>(t)] + elog_v[t] - std::log(p));
            }
        }
        out.doc_terms += doc;
    }

    const double lg_eta_const = std::lgamma(V * model.eta) - V * std::lgamma(model.eta);
    for (int t = 0; t < T; ++t) {
        const double* lam = model.lambda.row(static_cast<std::size_t>(t));
        const double* elog = model.expected_log_beta.row(static_cast<std::size_t>(t));
        double lam_sum = 0.0;
        for (int v = 0; v < V; ++v) lam_sum += lam[v];
        double topic = lg_eta_const - std::lgamma(lam_sum);
        for (int v = 0; v < V; ++v) {
            topic += (model.eta - lam[v]) * elog[v] + std::lgamma(lam[v]);
        }
        out.topic_terms += topic;
    }
    out.total = out.doc_terms + out.topic_terms;
    if (!std::isfinite(out.total)) throw NumericalFailure("ELBO is not finite");
    return out;
}

std::vector<std::vector<std::pair<std::string, double>>> topic_top_words(
    const LdaModel& model, const Vocabulary& vocab, int n) {
    if (vocab.size() != static_cast<std::size_t>(model.V)) {
        throw ModelVocabMismatch(static_cast<std::size_t>(model.V), vocab.size());
    }
    if (n < 1 || n > model.V) {
        throw ContractError("top-word count must lie in [1, V]");
    }
    Mat beta = model.topic_point_estimates();
    std::vector<std::vector<std::pair<std::string, double>>> out;
    out.reserve(static_cast<std::size_t>(model.T));
    for (int t = 0; t < model.T; ++t) {
        const double* b = beta.row(static_cast<std::size_t>(t));
        std::vector<int> order(static_cast<std::size_t>(model.V));
        for (int v = 0; v < model.V; ++v) order[static_cast<std::size_t>(v)] = v;
        std::sort(order.begin(), order.end(), [&](int lhs, int rhs) {
            if (b[lhs] != b[rhs]) return b[lhs] > b[rhs];
            return vocab.terms[static_cast<std::size_t>(lhs)] <
                   vocab.terms[static_cast<std::size_t>(rhs)];
        });
        std::vector<std::pair<std::string, double>> top;
        top.reserve(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) {
            int v = order[static_cast<std::size_t>(i)];
            top.emplace_back(vocab.terms[static_cast<std::size_t>(v)], b[v]);
        }
        out.push_back(std::move(top));
    }
    return out;
}

double topic_entropy(const LdaModel& model, int topic) {
    if (topic < 0 || topic >= model.T) throw ContractError("topic id out of range");
    const double* lam = model.lambda.row(static_cast<std::size_t>(topic));
    double sum = 0.0;
    for (int v = 0; v < model.V; ++v) sum += lam[v];
    double h = 0.0;
    for (int v = 0; v < model.V; ++v) {
        double p = lam[v] / sum;
        if (p > 0.0) h -= p * std::log(p);
    }
    return h;
}

namespace {

constexpr char kLambdaMagic[8] = {'L', 'D', 'A', 'M', 'A', 'T', '\0', '\0'};

std::string sibling_bin_path(const std::string& json_path) {
    std::size_t dot = json_path.rfind('.');
    std::size_t slash = json_path.rfind('/');
    if (dot == std::string::npos || (slash != std::string::npos && dot < slash)) {
        return json_path + ".bin";
    }
    return json_path.substr(0, dot) + ".bin";
}

void write_u32_le(std::ofstream& out, std::uint32_t value) {
    unsigned char bytes[4] = {static_cast<unsigned char>(value & 0xff),
                              static_cast<unsigned char>((value >> 8) & 0xff),
                              static_cast<unsigned char>((value >> 16) & 0xff),
                              static_cast<unsigned char>((value >> 24) & 0xff)};
    out.write(reinterpret_cast<const char*>(bytes), 4);
}

std::uint32_t read_u32_le(std::ifstream& in) {
    unsigned char bytes[4];
    in.read(reinterpret_cast<char*>(bytes), 4);
    return static_cast<std::uint32_t>(bytes[0]) | (static_cast<std::uint32_t>(bytes[1]) << 8) |
           (static_cast<std::uint32_t>(bytes[2]) << 16) |
           (static_cast<std::uint32_t>(bytes[3]) << 24);
}

}  // namespace

void LdaModel::save(const std::string& json_path) const {
    std::string bin_path = sibling_bin_path(json_path);

    ordered_json meta;
    meta["format"] = "lda-model";
    meta["T"] = T;
    meta["V"] = V;
    meta["alpha"] = alpha;
    meta["eta"] = eta;
    meta["seed"] = seed;
    meta["iterations"] = iterations;
    std::size_t slash = bin_path.rfind('/');
    meta["lambda_file"] = slash == std::string::npos ? bin_path : bin_path.substr(slash + 1);
    std::ofstream jout(json_path, std::ios::binary);
    if (!jout) throw DataError("cannot write model file: " + json_path);
    jout << meta.dump(2) << '\n';

    std::ofstream bout(bin_path, std::ios::binary);
    if (!bout) throw DataError("cannot write model matrix file: " + bin_path);
    bout.write(kLambdaMagic, sizeof kLambdaMagic);
    write_u32_le(bout, static_cast<std::uint32_t>(T));
    write_u32_le(bout, static_cast<std::uint32_t>(V));
    static_assert(sizeof(double) == 8);
    // Little-endian hosts write rows directly.
    bout.write(reinterpret_cast<const char*>(lambda.data().data()),
               static_cast<std::streamsize>(lambda.data().size() * sizeof(double)));
}

LdaModel LdaModel::load(const std::string& json_path) {
    std::ifstream jin(json_path, std::ios::binary);
    if (!jin) throw DataError("cannot open model file: " + json_path);
    ordered_json meta = ordered_json::parse(jin, nullptr, false);
    if (meta.is_discarded() || meta.value("format", "") != "lda-model") {
        throw DataError("not an LDA model file: " + json_path);
    }
    LdaModel model;
    model.T = meta.at("T").get<int>();
    model.V = meta.at("V").get<int>();
    model.alpha = meta.at("alpha").get<double>();
    model.eta = meta.at("eta").get<double>();
    model.seed = meta.at("seed").get<std::uint64_t>();
    model.iterations = meta.at("iterations").get<int>();

    std::string bin_name = meta.at("lambda_file").get<std::string>();
    std::size_t slash = json_path.rfind('/');
    std::string bin_path =
        slash == std::string::npos ? bin_name : json_path.substr(0, slash + 1) + bin_name;
    std::ifstream bin(bin_path, std::ios::binary);
    if (!bin) throw DataError("cannot open model matrix file: " + bin_path);
    char magic[8];
    bin.read(magic, sizeof magic);
    if (!bin || std::memcmp(magic, kLambdaMagic, sizeof kLambdaMagic) != 0) {
        throw DataError("bad model matrix header in " + bin_path);
    }
    std::uint32_t t = read_u32_le(bin);
    std::uint32_t v = read_u32_le(bin);
    if (t != static_cast<std::uint32_t>(model.T) || v != static_cast<std::uint32_t>(model.V)) {
        throw DataError("model matrix shape does not match metadata in " + bin_path);
    }
    model.lambda = Mat(t, v);
    bin.read(reinterpret_cast<char*>(model.lambda.data().data()),
             static_cast<std::streamsize>(model.lambda.data().size() * sizeof(double)));
    if (!bin) throw DataError("model matrix file truncated: " + bin_path);
    model.expected_log_beta = Mat(t, v);
    update_expected_log_beta(model);
    return model;
}

}  // namespace lonetext

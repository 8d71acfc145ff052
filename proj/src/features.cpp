#include "lonetext/features.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "lonetext/errors.hpp"
#include "lonetext/lda.hpp"

namespace lonetext {

namespace {

void append_ngrams(const std::vector<std::string>& doc, int ngram_max,
                   std::set<std::string>& out) {
    for (const auto& t : doc) out.insert(t);
    if (ngram_max >= 2) {
        for (std::size_t i = 0; i + 1 < doc.size(); ++i) {
            out.insert(doc[i] + " " + doc[i + 1]);
        }
    }
}

}  // namespace

Vocabulary build_vocabulary(const std::vector<std::vector<std::string>>& docs, int ngram_max) {
    if (ngram_max != 1 && ngram_max != 2) {
        throw ContractError("ngram_max must be 1 or 2");
    }
    std::map<std::string, std::size_t> df;
    for (const auto& doc : docs) {
        std::set<std::string> grams;
        append_ngrams(doc, ngram_max, grams);
        for (const auto& g : grams) ++df[g];
    }
    if (df.empty()) throw EmptyVocabulary();

    Vocabulary vocab;
    vocab.ngram_max = ngram_max;
    vocab.terms.reserve(df.size());
    vocab.df.reserve(df.size());
    for (const auto& [term, count] : df) {  // std::map iterates lexicographically
        vocab.index[term] = static_cast<int>(vocab.terms.size());
        vocab.terms.push_back(term);
        vocab.df.push_back(count);
    }
    return vocab;
}

void Vocabulary::save_tsv(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write vocabulary file: " + path);
    for (std::size_t i = 0; i < terms.size(); ++i) {
        out << terms[i] << '\t' << i << '\t' << df[i] << '\n';
    }
}

Vocabulary Vocabulary::load_tsv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open vocabulary file: " + path);
    Vocabulary vocab;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::size_t t1 = line.find('\t');
        std::size_t t2 = t1 == std::string::npos ? std::string::npos : line.find('\t', t1 + 1);
        if (t2 == std::string::npos) throw MalformedRecord(line_no, "expected term\\tcolumn\\tdf");
        std::string term = line.substr(0, t1);
        int column = std::stoi(line.substr(t1 + 1, t2 - t1 - 1));
        std::size_t df_val = static_cast<std::size_t>(std::stoul(line.substr(t2 + 1)));
        if (column != static_cast<int>(vocab.terms.size())) {
            throw MalformedRecord(line_no, "columns must be consecutive from 0");
        }
        vocab.index[term] = column;
        vocab.terms.push_back(std::move(term));
        vocab.df.push_back(df_val);
    }
    if (vocab.terms.empty()) throw EmptyVocabulary();
    for (const auto& t : vocab.terms) {
        if (t.find(' ') != std::string::npos) {
            vocab.ngram_max = 2;
            break;
        }
    }
    return vocab;
}

DocTermMatrix count_matrix(const std::vector<std::vector<std::string>>& docs,
                           const Vocabulary& vocab) {
    DocTermMatrix m;
    m.n_docs = docs.size();
    m.n_terms = vocab.size();
    m.weighting = DocTermMatrix::Weighting::count;
    m.rows.resize(docs.size());
    for (std::size_t d = 0; d < docs.size(); ++d) {
        std::map<int, double> counts;
        const auto& doc = docs[d];
        auto count_term = [&](const std::string& g) {
            auto it = vocab.index.find(g);
            if (it != vocab.index.end()) counts[it->second] += 1.0;
        };
        for (const auto& t : doc) count_term(t);
        if (vocab.ngram_max >= 2) {
            for (std::size_t i = 0; i + 1 < doc.size(); ++i) {
                count_term(doc[i] + " " + doc[i + 1]);
            }
        }
        m.rows[d].assign(counts.begin(), counts.end());
    }
    return m;
}

IdfWeights fit_idf(const DocTermMatrix& counts) {
    if (counts.weighting != DocTermMatrix::Weighting::count) {
        throw ContractError("idf is fitted on a count matrix");
    }
    std::vector<std::size_t> df(counts.n_terms, 0);
    for (const auto& row : counts.rows) {
        for (const auto& [col, value] : row) {
            if (value > 0.0) ++df[static_cast<std::size_t>(col)];
        }
    }
    IdfWeights w;
    w.idf.resize(counts.n_terms);
    const double d = static_cast<double>(counts.n_docs);
    for (std::size_t t = 0; t < counts.n_terms; ++t) {
        w.idf[t] = std::log((1.0 + d) / (1.0 + static_cast<double>(df[t]))) + 1.0;
    }
    return w;
}

DocTermMatrix tfidf_transform(const DocTermMatrix& counts) {
    return tfidf_transform(counts, fit_idf(counts));
}

DocTermMatrix tfidf_transform(const DocTermMatrix& counts, const IdfWeights& weights) {
    if (counts.weighting != DocTermMatrix::Weighting::count) {
        throw ContractError("tfidf_transform takes a count matrix");
    }
    if (weights.idf.size() != counts.n_terms) {
        throw DimensionMismatch(counts.n_terms, weights.idf.size());
    }
    DocTermMatrix out = counts;
    out.weighting = DocTermMatrix::Weighting::tfidf;
    for (auto& row : out.rows) {
        double norm_sq = 0.0;
        for (auto& [col, value] : row) {
            value *= weights.idf[static_cast<std::size_t>(col)];
            norm_sq += value * value;
        }
        if (norm_sq > 0.0) {
            double inv = 1.0 / std::sqrt(norm_sq);
            for (auto& [col, value] : row) value *= inv;
        }
    }
    return out;
}

DocTermMatrix topic_feature_matrix(const DocTermMatrix& counts, const LdaModel& model,
                                   int threads) {
    Mat gamma = lda_transform(counts, model, threads);
    DocTermMatrix out;
    out.n_docs = counts.n_docs;
    out.n_terms = static_cast<std::size_t>(model.T);
    out.weighting = DocTermMatrix::Weighting::topic_proportion;
    out.labels = counts.labels;
    out.rows.resize(counts.n_docs);
    for (std::size_t d = 0; d < counts.n_docs; ++d) {
        const double* g = gamma.row(d);
        double sum = 0.0;
        for (int t = 0; t < model.T; ++t) sum += g[t];
        auto& row = out.rows[d];
        row.reserve(static_cast<std::size_t>(model.T));
        for (int t = 0; t < model.T; ++t) {
            row.emplace_back(t, g[t] / sum);
        }
    }
    return out;
}

void write_matrix_market(const DocTermMatrix& m, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write matrix file: " + path);
    std::size_t nnz = 0;
    for (const auto& row : m.rows) nnz += row.size();
    out << "%%MatrixMarket matrix coordinate real general\n";
    out << m.n_docs << ' ' << m.n_terms << ' ' << nnz << '\n';
    char buf[64];
    for (std::size_t d = 0; d < m.rows.size(); ++d) {
        for (const auto& [col, value] : m.rows[d]) {
            std::snprintf(buf, sizeof buf, "%zu %d %.17g\n", d + 1, col + 1, value);
            out << buf;
        }
    }
}

DocTermMatrix read_matrix_market(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open matrix file: " + path);
    std::string line;
    std::size_t line_no = 0;
    // banner
    if (!std::getline(in, line)) throw DataError("empty matrix file: " + path);
    ++line_no;
    if (line.rfind("%%MatrixMarket", 0) != 0 || line.find("coordinate") == std::string::npos) {
        throw MalformedRecord(line_no, "expected a MatrixMarket coordinate banner");
    }
    // size line (skipping comments)
    std::size_t rows = 0, cols = 0, nnz = 0;
    for (;;) {
        if (!std::getline(in, line)) throw DataError("matrix file truncated: " + path);
        ++line_no;
        if (!line.empty() && line[0] == '%') continue;
        std::istringstream ss(line);
        if (!(ss >> rows >> cols >> nnz)) throw MalformedRecord(line_no, "bad size line");
        break;
    }
    DocTermMatrix m;
    m.n_docs = rows;
    m.n_terms = cols;
    m.rows.resize(rows);
    for (std::size_t k = 0; k < nnz; ++k) {
        if (!std::getline(in, line)) throw DataError("matrix file truncated: " + path);
        ++line_no;
        std::istringstream ss(line);
        std::size_t r, c;
        double v;
        if (!(ss >> r >> c >> v)) throw MalformedRecord(line_no, "bad entry line");
        if (r < 1 || r > rows || c < 1 || c > cols) {
            throw MalformedRecord(line_no, "entry out of bounds");
        }
        m.rows[r - 1].emplace_back(static_cast<int>(c - 1), v);
    }
    for (auto& row : m.rows) {
        std::sort(row.begin(), row.end());
    }
    return m;
}

void write_labels_csv(const std::vector<int>& labels, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write labels file: " + path);
    out << "doc,label\n";
    for (std::size_t i = 0; i < labels.size(); ++i) {
        out << i << ',' << labels[i] << '\n';
    }
}

std::vector<int> read_labels_csv(const std::string& path, std::size_t expected_docs) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open labels file: " + path);
    std::vector<int> labels(expected_docs, 0);
    std::vector<bool> seen(expected_docs, false);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        if (line_no == 1) {
            if (line.rfind("doc,label", 0) != 0) {
                throw MalformedRecord(line_no, "expected header doc,label");
            }
            continue;
        }
        std::size_t comma = line.find(',');
        if (comma == std::string::npos) throw MalformedRecord(line_no, "expected doc,label");
        std::size_t doc = static_cast<std::size_t>(std::stoul(line.substr(0, comma)));
        int label = std::stoi(line.substr(comma + 1));
        if (doc >= expected_docs) throw MalformedRecord(line_no, "doc id out of range");
        if (label != 0 && label != 1) throw MalformedRecord(line_no, "label must be 0 or 1");
        labels[doc] = label;
        seen[doc] = true;
    }
    for (std::size_t i = 0; i < expected_docs; ++i) {
        if (!seen[i]) throw DataError("labels file missing doc " + std::to_string(i));
    }
    return labels;
}

}  // namespace lonetext

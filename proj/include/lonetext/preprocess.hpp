#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace lonetext {

// Chat-jargon normalization: exact surface -> canonical entries plus an
// elongation rule that collapses repeated-character runs longer than
// max_repeat and retries the lookup (so "loooolll" still finds "lol").
// Canonical forms are matchable fixed points.
class JargonMap {
public:
    JargonMap() = default;

    static JargonMap from_tsv_text(std::string_view text);
    static JargonMap from_file(const std::string& path);

    void add(const std::string& surface, const std::string& canonical);
    std::string normalize(const std::string& token) const;
    std::size_t size() const { return entries_.size(); }
    int max_repeat = 2;

private:
    const std::string* lookup(const std::string& token) const;

    std::map<std::string, std::string> entries_;
    std::set<std::string> canonicals_;
};

struct PreprocessConfig {
    std::set<std::string> stopwords;          // empty -> use the pinned default list
    enum class Stemmer { none, porter };
    Stemmer stemmer = Stemmer::porter;
    int min_token_len = 2;
    std::size_t min_df = 2;
    double max_df_fraction = 0.95;
    std::set<std::string> drop_tokens = {"nan"};
};

// Pinned default resources (embedded at build time from resources/).
const std::set<std::string>& default_stopwords();
const JargonMap& default_jargon();
std::uint64_t stopwords_checksum();
std::uint64_t jargon_checksum();

std::string porter_stem(std::string word);

// Lowercases and splits on runs of non-alphanumeric bytes; drops tokens
// shorter than min_token_len.
std::vector<std::string> tokenize(std::string_view text, int min_token_len = 2);

std::vector<std::string> normalize_jargon(const std::vector<std::string>& tokens,
                                          const JargonMap& jm);

std::vector<std::string> remove_stopwords(const std::vector<std::string>& tokens,
                                          const PreprocessConfig& config);

std::vector<std::string> stem_tokens(const std::vector<std::string>& tokens,
                                     const PreprocessConfig& config);

// Full per-document pipeline: tokenize (keeping short tokens so jargon like
// "u" can expand), map jargon, drop short tokens, drop stopwords, stem.
// Stemming can recreate stopwords or short tokens, so the filter runs again.
std::vector<std::string> preprocess_text(std::string_view text,
                                         const PreprocessConfig& config,
                                         const JargonMap& jm);

struct PruneReport {
    struct Entry {
        std::string term;
        std::size_t df;
        bool head;  // true: document frequency above max_df_fraction; false: below min_df
    };
    std::vector<Entry> removed;  // sorted by term
};

// Removes tail terms (df < min_df) and head terms (df/D > max_df_fraction)
// from every document, preserving token order.
std::pair<std::vector<std::vector<std::string>>, PruneReport> prune_by_frequency(
    const std::vector<std::vector<std::string>>& docs, const PreprocessConfig& config);

}  // namespace lonetext

#include "lonetext/preprocess.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <sstream>

#include "lonetext/errors.hpp"
#include "lonetext/rng.hpp"

namespace lonetext {

namespace detail {
extern const char* kDefaultStopwords;
extern const char* kDefaultJargon;
}  // namespace detail

namespace {

std::string collapse_runs(const std::string& token, int max_repeat) {
    std::string out;
    out.reserve(token.size());
    std::size_t i = 0;
    while (i < token.size()) {
        std::size_t run = 1;
        while (i + run < token.size() && token[i + run] == token[i]) ++run;
        std::size_t keep = std::min<std::size_t>(run, static_cast<std::size_t>(max_repeat));
        out.append(keep, token[i]);
        i += run;
    }
    return out;
}

const std::set<std::string>& stopwords_or_default(const PreprocessConfig& config) {
    return config.stopwords.empty() ? default_stopwords() : config.stopwords;
}

}  // namespace

JargonMap JargonMap::from_tsv_text(std::string_view text) {
    JargonMap jm;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t eol = text.find('\n', pos);
        std::string_view line = text.substr(pos, eol == std::string_view::npos ? std::string_view::npos : eol - pos);
        pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
        ++line_no;
        if (line.empty() || line.front() == '#') continue;
        std::size_t tab = line.find('\t');
        if (tab == std::string_view::npos) {
            throw DataError("jargon entry without tab at line " + std::to_string(line_no));
        }
        jm.add(std::string(line.substr(0, tab)), std::string(line.substr(tab + 1)));
    }
    return jm;
}

JargonMap JargonMap::from_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open jargon file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return from_tsv_text(ss.str());
}

void JargonMap::add(const std::string& surface, const std::string& canonical) {
    if (canonical.size() < 2) {
        throw DataError("jargon canonical \"" + canonical + "\" shorter than 2 characters");
    }
    for (char c : canonical) {
        if (std::isupper(static_cast<unsigned char>(c))) {
            throw DataError("jargon canonical \"" + canonical + "\" is not lowercase");
        }
    }
    if (entries_.count(canonical) && entries_.at(canonical) != canonical) {
        throw DataError("jargon canonical \"" + canonical + "\" is itself remapped");
    }
    if (canonicals_.count(surface) && surface != canonical) {
        throw DataError("jargon surface \"" + surface + "\" is a canonical of another entry");
    }
    entries_[surface] = canonical;
    canonicals_.insert(canonical);
}

const std::string* JargonMap::lookup(const std::string& token) const {
    auto it = entries_.find(token);
    if (it != entries_.end()) return &it->second;
    auto fixed = canonicals_.find(token);
    if (fixed != canonicals_.end()) return &*fixed;
    return nullptr;
}

std::string JargonMap::normalize(const std::string& token) const {
    if (const std::string* hit = lookup(token)) return *hit;
    std::string capped = collapse_runs(token, max_repeat);
    if (const std::string* hit = lookup(capped)) return *hit;
    std::string squeezed = collapse_runs(token, 1);
    if (const std::string* hit = lookup(squeezed)) return *hit;
    return capped;
}

std::vector<std::string> tokenize(std::string_view text, int min_token_len) {
    std::vector<std::string> tokens;
    std::string current;
    auto flush = [&] {
        if (static_cast<int>(current.size()) >= min_token_len) tokens.push_back(current);
        current.clear();
    };
    for (unsigned char c : text) {
        if (std::isalnum(c)) {
            current.push_back(static_cast<char>(std::tolower(c)));
        } else if (!current.empty()) {
            flush();
        }
    }
    if (!current.empty()) flush();
    return tokens;
}

std::vector<std::string> normalize_jargon(const std::vector<std::string>& tokens,
                                          const JargonMap& jm) {
    std::vector<std::string> out;
    out.reserve(tokens.size());
    for (const auto& t : tokens) out.push_back(jm.normalize(t));
    return out;
}

std::vector<std::string> remove_stopwords(const std::vector<std::string>& tokens,
                                          const PreprocessConfig& config) {
    const auto& stopwords = stopwords_or_default(config);
    std::vector<std::string> out;
    out.reserve(tokens.size());
    for (const auto& t : tokens) {
        if (stopwords.count(t) || config.drop_tokens.count(t)) continue;
        out.push_back(t);
    }
    return out;
}

std::vector<std::string> stem_tokens(const std::vector<std::string>& tokens,
                                     const PreprocessConfig& config) {
    if (config.stemmer == PreprocessConfig::Stemmer::none) return tokens;
    std::vector<std::string> out;
    out.reserve(tokens.size());
    for (const auto& t : tokens) out.push_back(porter_stem(t));
    return out;
}

std::vector<std::string> preprocess_text(std::string_view text,
                                         const PreprocessConfig& config,
                                         const JargonMap& jm) {
    std::vector<std::string> tokens = tokenize(text, 1);
    tokens = normalize_jargon(tokens, jm);
    std::erase_if(tokens, [&](const std::string& t) {
        return static_cast<int>(t.size()) < config.min_token_len;
    });
    tokens = remove_stopwords(tokens, config);
    tokens = stem_tokens(tokens, config);
    const auto& stopwords = stopwords_or_default(config);
    std::erase_if(tokens, [&](const std::string& t) {
        return static_cast<int>(t.size()) < config.min_token_len || stopwords.count(t) ||
               config.drop_tokens.count(t);
    });
    return tokens;
}

std::pair<std::vector<std::vector<std::string>>, PruneReport> prune_by_frequency(
    const std::vector<std::vector<std::string>>& docs, const PreprocessConfig& config) {
    if (docs.empty()) throw EmptyDataset("prune_by_frequency: no documents");

    // Document frequency, accumulated in document-index order.
    std::map<std::string, std::size_t> df;
    for (const auto& doc : docs) {
        std::set<std::string> seen(doc.begin(), doc.end());
        for (const auto& t : seen) ++df[t];
    }

    const double d = static_cast<double>(docs.size());
    std::set<std::string> removed_terms;
    PruneReport report;
    for (const auto& [term, count] : df) {
        bool tail = count < config.min_df;
        bool head = static_cast<double>(count) / d > config.max_df_fraction;
        if (tail || head) {
            removed_terms.insert(term);
            report.removed.push_back({term, count, head});
        }
    }

    std::vector<std::vector<std::string>> pruned;
    pruned.reserve(docs.size());
    for (const auto& doc : docs) {
        std::vector<std::string> kept;
        kept.reserve(doc.size());
        for (const auto& t : doc) {
            if (!removed_terms.count(t)) kept.push_back(t);
        }
        pruned.push_back(std::move(kept));
    }
    return {std::move(pruned), std::move(report)};
}

const std::set<std::string>& default_stopwords() {
    static const std::set<std::string> words = [] {
        std::set<std::string> out;
        std::istringstream in(detail::kDefaultStopwords);
        std::string line;
        while (std::getline(in, line)) {
            if (!line.empty()) out.insert(line);
        }
        return out;
    }();
    return words;
}

const JargonMap& default_jargon() {
    static const JargonMap jm = JargonMap::from_tsv_text(detail::kDefaultJargon);
    return jm;
}

std::uint64_t stopwords_checksum() { return fnv1a64(detail::kDefaultStopwords); }
std::uint64_t jargon_checksum() { return fnv1a64(detail::kDefaultJargon); }

}  // namespace lonetext

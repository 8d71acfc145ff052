#include <doctest.h>

#include <string>
#include <vector>

#include "lonetext/errors.hpp"
#include "lonetext/preprocess.hpp"
#include "lonetext/rng.hpp"

using namespace lonetext;

namespace {

JargonMap test_jargon() {
    JargonMap jm;
    jm.add("lolol", "lol");
    jm.add("u", "you");
    jm.add("thx", "thanks");
    return jm;
}

}  // namespace

TEST_SUITE("preprocess") {

TEST_CASE("tokenize lowercases, splits on non-alphanumeric runs, drops short tokens") {
    CHECK(tokenize("Hi!! that's FUN") == std::vector<std::string>{"hi", "that", "fun"});
    CHECK(tokenize("") == std::vector<std::string>{});
    CHECK(tokenize("a1b2") == std::vector<std::string>{"a1b2"});
    CHECK(tokenize("x--y  z") == std::vector<std::string>{});  // all length 1
    CHECK(tokenize("x--y z", 1) == std::vector<std::string>{"x", "y", "z"});
}

TEST_CASE("jargon: exact entries, elongation collapse, canonical fixed points") {
    JargonMap jm = test_jargon();
    CHECK(normalize_jargon({"loooolll"}, jm) == std::vector<std::string>{"lol"});
    CHECK(normalize_jargon({"lol"}, jm) == std::vector<std::string>{"lol"});
    CHECK(normalize_jargon({"yessss"}, jm) == std::vector<std::string>{"yess"});
    CHECK(normalize_jargon({"thx", "u"}, jm) == std::vector<std::string>{"thanks", "you"});
    CHECK(normalize_jargon({}, jm) == std::vector<std::string>{});
}

TEST_CASE("jargon normalization is idempotent") {
    JargonMap jm = test_jargon();
    Rng rng(99);
    const std::string alphabet = "lou";
    for (int i = 0; i < 500; ++i) {
        std::string token;
        std::size_t len = 1 + rng.uniform_below(8);
        for (std::size_t j = 0; j < len; ++j) {
            token.push_back(alphabet[rng.uniform_below(alphabet.size())]);
        }
        std::vector<std::string> once = normalize_jargon({token}, jm);
        CHECK(normalize_jargon(once, jm) == once);
    }
}

TEST_CASE("jargon map rejects broken entries") {
    JargonMap jm;
    CHECK_THROWS_AS(jm.add("xx", "y"), DataError);    // canonical too short
    CHECK_THROWS_AS(jm.add("xx", "Yes"), DataError);  // not lowercase
    jm.add("lolol", "lol");
    CHECK_THROWS_AS(jm.add("lol", "haha"), DataError);  // canonical must stay a fixed point
}

TEST_CASE("jargon tsv parsing") {
    JargonMap jm = JargonMap::from_tsv_text("# comment\nlolol\tlol\nu\tyou\n");
    CHECK(jm.size() == 2);
    CHECK(jm.normalize("u") == "you");
    CHECK_THROWS_AS(JargonMap::from_tsv_text("no-tab-here\n"), DataError);
}

TEST_CASE("stopword and drop-token removal") {
    PreprocessConfig config;
    CHECK(remove_stopwords({"the", "lol"}, config) == std::vector<std::string>{"lol"});
    CHECK(remove_stopwords({"nan"}, config) == std::vector<std::string>{});
    CHECK(remove_stopwords({}, config) == std::vector<std::string>{});
}

TEST_CASE("stemming examples") {
    PreprocessConfig config;
    CHECK(stem_tokens({"learning"}, config) == std::vector<std::string>{"learn"});
    CHECK(stem_tokens({"lol"}, config) == std::vector<std::string>{"lol"});
    CHECK(stem_tokens({"kissing"}, config) == std::vector<std::string>{"kiss"});
    config.stemmer = PreprocessConfig::Stemmer::none;
    CHECK(stem_tokens({"learning"}, config) == std::vector<std::string>{"learning"});
}

TEST_CASE("frequency pruning boundaries") {
    PreprocessConfig config;  // min_df 2, max_df 0.95
    std::vector<std::vector<std::string>> docs(10, std::vector<std::string>{"common"});
    docs[0].push_back("rare");
    auto [pruned, report] = prune_by_frequency(docs, config);
    // "common" sits in 100% of 10 docs (> 0.95) and "rare" in exactly 1 (< 2).
    CHECK(pruned[0].empty());
    CHECK(report.removed.size() == 2);
    CHECK(report.removed[0].term == "common");
    CHECK(report.removed[0].head);
    CHECK(report.removed[1].term == "rare");
    CHECK_FALSE(report.removed[1].head);

    config.min_df = 1;
    config.max_df_fraction = 1.0;
    auto [same, empty_report] = prune_by_frequency(docs, config);
    CHECK(same == docs);
    CHECK(empty_report.removed.empty());

    CHECK_THROWS_AS(prune_by_frequency({}, config), EmptyDataset);
}

TEST_CASE("full pipeline determinism and output constraints") {
    PreprocessConfig config;
    const JargonMap& jm = default_jargon();
    const std::string text = "LOLLLL u r soooo kind!! The ones studying... nan nan 42 ok";
    auto tokens = preprocess_text(text, config, jm);
    CHECK(tokens == preprocess_text(text, config, jm));
    for (const auto& t : tokens) {
        CAPTURE(t);
        CHECK(t.size() >= static_cast<std::size_t>(config.min_token_len));
        CHECK(default_stopwords().count(t) == 0);
        CHECK(config.drop_tokens.count(t) == 0);
    }
    // Single-letter jargon expands before the length filter ("u" -> "you",
    // which the stopword list then removes); "thx" survives and is stemmed.
    CHECK(preprocess_text("u thx", config, jm) == std::vector<std::string>{"thank"});
}

TEST_CASE("pipeline preserves original token order") {
    PreprocessConfig config;
    auto tokens = preprocess_text("zebra apple zebra banana", config, default_jargon());
    CHECK(tokens == std::vector<std::string>{"zebra", "appl", "zebra", "banana"});
}

TEST_CASE("default resources are pinned") {
    CHECK(default_stopwords().count("the") == 1);
    CHECK(default_stopwords().size() == 318);
    CHECK(default_jargon().size() >= 30);
    CHECK(default_jargon().normalize("loooolll") == "lol");
    CHECK(stopwords_checksum() != 0);
    CHECK(jargon_checksum() != 0);
}

}  // TEST_SUITE

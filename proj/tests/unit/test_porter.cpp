#include <doctest.h>

#include <string>

#include "lonetext/preprocess.hpp"

using namespace lonetext;

TEST_SUITE("porter") {

TEST_CASE("published per-step and whole-algorithm vectors") {
    const char* pairs[][2] = {
        // plurals / -ed / -ing
        {"caresses", "caress"}, {"ponies", "poni"}, {"ties", "ti"}, {"caress", "caress"},
        {"cats", "cat"}, {"feed", "feed"}, {"agreed", "agre"}, {"plastered", "plaster"},
        {"bled", "bled"}, {"motoring", "motor"}, {"sing", "sing"}, {"conflated", "conflat"},
        {"troubled", "troubl"}, {"sized", "size"}, {"hopping", "hop"}, {"tanned", "tan"},
        {"falling", "fall"}, {"hissing", "hiss"}, {"fizzed", "fizz"}, {"failing", "fail"},
        {"filing", "file"},
        // y -> i
        {"happy", "happi"}, {"sky", "sky"},
        // derivational suffixes
        {"relational", "relat"}, {"conditional", "condit"}, {"rational", "ration"},
        {"valenci", "valenc"}, {"hesitanci", "hesit"}, {"digitizer", "digit"},
        {"conformabli", "conform"}, {"radicalli", "radic"}, {"differentli", "differ"},
        {"vileli", "vile"}, {"analogousli", "analog"}, {"vietnamization", "vietnam"},
        {"predication", "predic"}, {"operator", "oper"}, {"feudalism", "feudal"},
        {"decisiveness", "decis"}, {"hopefulness", "hope"}, {"callousness", "callous"},
        {"formaliti", "formal"}, {"sensitiviti", "sensit"}, {"sensibiliti", "sensibl"},
        {"triplicate", "triplic"}, {"formative", "form"}, {"formalize", "formal"},
        {"electriciti", "electr"}, {"electrical", "electr"}, {"hopeful", "hope"},
        {"goodness", "good"}, {"revival", "reviv"}, {"allowance", "allow"},
        {"inference", "infer"}, {"airliner", "airlin"}, {"gyroscopic", "gyroscop"},
        {"adjustable", "adjust"}, {"defensible", "defens"}, {"irritant", "irrit"},
        {"replacement", "replac"}, {"adjustment", "adjust"}, {"dependent", "depend"},
        {"adoption", "adopt"}, {"communism", "commun"}, {"activate", "activ"},
        {"angulariti", "angular"}, {"homologous", "homolog"}, {"effective", "effect"},
        {"bowdlerize", "bowdler"},
        // -e removal and ll reduction
        {"probate", "probat"}, {"rate", "rate"}, {"cease", "ceas"},
        {"controll", "control"}, {"roll", "roll"},
        // whole-word compositions
        {"generalizations", "gener"}, {"oscillators", "oscil"},
        {"learning", "learn"}, {"kissing", "kiss"}, {"studying", "studi"},
    };
    for (const auto& p : pairs) {
        CAPTURE(p[0]);
        CHECK(porter_stem(p[0]) == p[1]);
    }
}

TEST_CASE("short words are left alone") {
    CHECK(porter_stem("a") == "a");
    CHECK(porter_stem("as") == "as");
    CHECK(porter_stem("is") == "is");
    CHECK(porter_stem("lol") == "lol");
}

TEST_CASE("consonant-y handling") {
    CHECK(porter_stem("dying") == "dy");
    CHECK(porter_stem("flies") == "fli");
    CHECK(porter_stem("syzygy") == "syzygi");
}

}  // TEST_SUITE

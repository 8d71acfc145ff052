#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <string>

#include "lonetext/corpus.hpp"
#include "lonetext/errors.hpp"

using namespace lonetext;

namespace {

struct TempFile {
    std::string path;
    explicit TempFile(const std::string& name, const std::string& content)
        : path("corpus_test_" + name) {
        std::ofstream out(path, std::ios::binary);
        out << content;
    }
    ~TempFile() { std::remove(path.c_str()); }
};

Message msg(const std::string& pid, const std::string& ts, const std::string& text,
            Direction dir = Direction::sent) {
    Message m;
    m.participant_id = pid;
    m.timestamp_us = parse_rfc3339(ts);
    m.channel = Channel::sms;
    m.direction = dir;
    m.text = text;
    return m;
}

EmaResponse ema(const std::string& pid, const std::string& ts, EmaKind kind, double score) {
    return {pid, parse_rfc3339(ts), kind, score};
}

}  // namespace

TEST_SUITE("corpus") {

TEST_CASE("rfc3339 parsing") {
    CHECK(parse_rfc3339("1970-01-01T00:00:00Z") == 0);
    CHECK(parse_rfc3339("1970-01-02T00:00:00Z") == 86400LL * 1000000);
    CHECK(parse_rfc3339("1970-01-01T01:00:00+01:00") == 0);
    CHECK(parse_rfc3339("1969-12-31T23:00:00-01:00") == 0);
    CHECK(parse_rfc3339("1970-01-01T00:00:00.5Z") == 500000);
    CHECK_THROWS_AS(parse_rfc3339("not a time"), DataError);
    CHECK_THROWS_AS(parse_rfc3339("2026-13-01T00:00:00Z"), DataError);
    CHECK_THROWS_AS(parse_rfc3339("2026-02-30T00:00:00Z"), DataError);
}

TEST_CASE("civil date with timezone offsets") {
    std::int64_t ts = parse_rfc3339("2026-01-05T00:30:00Z");
    CHECK(civil_date(ts, 0) == "2026-01-05");
    CHECK(civil_date(ts, -60) == "2026-01-04");
    CHECK(civil_date(parse_rfc3339("2026-01-05T23:30:00Z"), 60) == "2026-01-06");
    CHECK(civil_date(-1, 0) == "1969-12-31");
}

TEST_CASE("parse_messages jsonl") {
    TempFile f("msgs.jsonl",
               R"({"participant_id":"p1","timestamp":"2026-01-05T10:00:00Z","channel":"sms","direction":"sent","text":"hi"})"
               "\n");
    auto messages = parse_messages(f.path, MessageFormat::jsonl);
    REQUIRE(messages.size() == 1);
    CHECK(messages[0].text == "hi");
    CHECK(messages[0].participant_id == "p1");
    CHECK(messages[0].channel == Channel::sms);
}

TEST_CASE("parse_messages keeps literal nan text for later filtering") {
    TempFile f("msgs_nan.jsonl",
               R"({"participant_id":"p1","timestamp":"2026-01-05T10:00:00Z","channel":"facebook","direction":"received","text":"nan"})"
               "\n");
    auto messages = parse_messages(f.path, MessageFormat::jsonl);
    REQUIRE(messages.size() == 1);
    CHECK(messages[0].text == "nan");
}

TEST_CASE("parse_messages errors") {
    TempFile missing_ts("msgs_bad.jsonl",
                        R"({"participant_id":"p1","channel":"sms","direction":"sent","text":"x"})"
                        "\n");
    CHECK_THROWS_AS(parse_messages(missing_ts.path, MessageFormat::jsonl), MalformedRecord);

    TempFile bad_channel(
        "msgs_chan.jsonl",
        R"({"participant_id":"p1","timestamp":"2026-01-05T10:00:00Z","channel":"telegram","direction":"sent","text":"x"})"
        "\n");
    CHECK_THROWS_AS(parse_messages(bad_channel.path, MessageFormat::jsonl), UnknownChannel);

    CHECK_THROWS_AS(parse_messages("does_not_exist.jsonl", MessageFormat::jsonl), DataError);
}

TEST_CASE("parse_messages csv with quoted text") {
    TempFile f("msgs.csv",
               "participant_id,timestamp,channel,direction,text\n"
               "p1,2026-01-05T10:00:00Z,sms,sent,\"hello, world\"\n");
    auto messages = parse_messages(f.path, MessageFormat::csv);
    REQUIRE(messages.size() == 1);
    CHECK(messages[0].text == "hello, world");
}

TEST_CASE("parse_ema") {
    TempFile f("ema.csv",
               "participant_id,timestamp,kind,score\n"
               "p1,2026-01-05T21:00:00Z,EOD,100\n"
               "p1,2026-01-05T12:00:00Z,RT,50\n");
    auto responses = parse_ema(f.path);
    REQUIRE(responses.size() == 2);
    CHECK(responses[0].kind == EmaKind::eod);
    CHECK(responses[0].score == 100.0);
    CHECK(responses[1].kind == EmaKind::rt);
    CHECK(responses[1].score == 50.0);
}

TEST_CASE("parse_ema rejects out-of-range scores and bad rows") {
    TempFile bad("ema_bad.csv",
                 "participant_id,timestamp,kind,score\n"
                 "p1,2026-01-05T21:00:00Z,EOD,101\n");
    CHECK_THROWS_AS(parse_ema(bad.path), ScoreOutOfRange);

    TempFile malformed("ema_malformed.csv",
                       "participant_id,timestamp,kind,score\n"
                       "p1,2026-01-05T21:00:00Z,XXX,50\n");
    CHECK_THROWS_AS(parse_ema(malformed.path), MalformedRecord);
}

TEST_CASE("window_by_day: RT mean hits the strict threshold boundary") {
    std::vector<Message> messages = {msg("p1", "2026-01-05T09:00:00Z", "talking about the day")};
    std::vector<EmaResponse> responses = {
        ema("p1", "2026-01-05T10:00:00Z", EmaKind::rt, 20),
        ema("p1", "2026-01-05T14:00:00Z", EmaKind::rt, 40),
        ema("p1", "2026-01-05T18:00:00Z", EmaKind::rt, 90),
    };
    Dataset d = window_by_day(messages, responses, EmaKind::rt);
    REQUIRE(d.documents().size() == 1);
    CHECK(d.documents()[0].raw_score == doctest::Approx(50.0));
    CHECK(d.documents()[0].label == 0);  // 50 > 50 is false

    WindowConfig inclusive;
    inclusive.inclusive_threshold = true;
    Dataset d2 = window_by_day(messages, responses, EmaKind::rt, inclusive);
    CHECK(d2.documents()[0].label == 1);
}

TEST_CASE("window_by_day: single EOD above threshold is lonely") {
    std::vector<Message> messages = {msg("p1", "2026-01-05T09:00:00Z", "quiet evening alone")};
    std::vector<EmaResponse> responses = {ema("p1", "2026-01-05T22:00:00Z", EmaKind::eod, 51)};
    Dataset d = window_by_day(messages, responses, EmaKind::eod);
    REQUIRE(d.documents().size() == 1);
    CHECK(d.documents()[0].label == 1);
}

TEST_CASE("window_by_day: duplicate EOD keeps the latest response") {
    std::vector<Message> messages = {msg("p1", "2026-01-05T09:00:00Z", "morning message text")};
    std::vector<EmaResponse> responses = {
        ema("p1", "2026-01-05T21:00:00Z", EmaKind::eod, 90),
        ema("p1", "2026-01-05T23:00:00Z", EmaKind::eod, 10),
    };
    Dataset d = window_by_day(messages, responses, EmaKind::eod);
    CHECK(d.documents()[0].raw_score == 10.0);
    CHECK(d.documents()[0].label == 0);
}

TEST_CASE("window_by_day: three-day fixture drops nan-only and message-less days") {
    std::vector<Message> messages = {
        msg("p1", "2026-01-05T10:00:00Z", "hey are you coming to class today"),
        msg("p1", "2026-01-06T09:00:00Z", "nan"),   // day 2: placeholder only
        msg("p1", "2026-01-07T09:00:00Z", ""),      // day 3: empty only
    };
    std::vector<EmaResponse> responses = {
        ema("p1", "2026-01-05T22:00:00Z", EmaKind::eod, 60),
        ema("p1", "2026-01-06T22:00:00Z", EmaKind::eod, 60),
        ema("p1", "2026-01-07T22:00:00Z", EmaKind::eod, 60),
        ema("p1", "2026-01-08T22:00:00Z", EmaKind::eod, 60),  // day 4: no messages
    };
    Dataset d = window_by_day(messages, responses, EmaKind::eod);
    REQUIRE(d.documents().size() == 1);
    CHECK(d.documents()[0].date == "2026-01-05");
    CHECK(d.documents()[0].label == 1);
}

TEST_CASE("window_by_day: kind separation and sent-only filter") {
    std::vector<Message> messages = {
        msg("p1", "2026-01-05T10:00:00Z", "received words only", Direction::received)};
    std::vector<EmaResponse> responses = {ema("p1", "2026-01-05T12:00:00Z", EmaKind::rt, 80)};
    Dataset d = window_by_day(messages, responses, EmaKind::rt);
    CHECK(d.documents().size() == 1);

    WindowConfig sent_only;
    sent_only.sent_only = true;
    CHECK_THROWS_AS(window_by_day(messages, responses, EmaKind::rt, sent_only), EmptyDataset);
    CHECK_THROWS_AS(window_by_day(messages, responses, EmaKind::eod), EmptyDataset);
}

TEST_CASE("windowing is idempotent and threshold only flips labels") {
    std::vector<Message> messages = {
        msg("p1", "2026-01-05T10:00:00Z", "first daily message words"),
        msg("p1", "2026-01-06T10:00:00Z", "second daily message words"),
        msg("p2", "2026-01-05T10:00:00Z", "another participant texting"),
    };
    std::vector<EmaResponse> responses = {
        ema("p1", "2026-01-05T12:00:00Z", EmaKind::rt, 30),
        ema("p1", "2026-01-06T12:00:00Z", EmaKind::rt, 70),
        ema("p2", "2026-01-05T12:00:00Z", EmaKind::rt, 90),
    };
    Dataset a = window_by_day(messages, responses, EmaKind::rt);
    Dataset b = window_by_day(messages, responses, EmaKind::rt);
    CHECK(a.to_json_string() == b.to_json_string());

    WindowConfig low;
    low.binarize_threshold = 20.0;
    Dataset c = window_by_day(messages, responses, EmaKind::rt, low);
    REQUIRE(a.documents().size() == c.documents().size());
    for (std::size_t i = 0; i < a.documents().size(); ++i) {
        CHECK(a.documents()[i].participant_id == c.documents()[i].participant_id);
        CHECK(a.documents()[i].date == c.documents()[i].date);
        CHECK(c.documents()[i].label == 1);  // every score exceeds 20
    }
    // label is a pure function of raw_score and threshold
    for (const auto& doc : a.documents()) {
        CHECK(doc.label == (doc.raw_score > 50.0 ? 1 : 0));
    }
    CHECK_THROWS_AS(window_by_day(messages, responses, EmaKind::rt, WindowConfig{0.0}),
                    ContractError);
}

TEST_CASE("dataset stats") {
    std::vector<LabeledDocument> docs;
    for (int i = 0; i < 4; ++i) {
        LabeledDocument d;
        d.participant_id = i < 2 ? "p1" : "p2";
        d.date = "2026-01-0" + std::to_string(i + 1);
        d.kind = EmaKind::rt;
        d.tokens = {"word"};
        d.label = i == 0 ? 1 : 0;
        d.raw_score = i == 0 ? 80.0 : 10.0;
        docs.push_back(d);
    }
    Dataset d(EmaKind::rt, docs);
    DatasetStats stats = dataset_stats(d);
    CHECK(stats.n_documents == 4);
    CHECK(stats.n_participants == 2);
    CHECK(stats.positive_rate == 0.25);

    CHECK_THROWS_AS(dataset_stats(Dataset(EmaKind::rt, {})), EmptyDataset);
}

TEST_CASE("dataset stats reproduce the published prevalence figure") {
    std::vector<LabeledDocument> docs;
    for (int i = 0; i < 2500; ++i) {
        LabeledDocument d;
        d.participant_id = "p" + std::to_string(i % 100);
        d.date = "2026-01-01";
        d.kind = EmaKind::rt;
        d.tokens = {"word"};
        d.label = i < 438 ? 1 : 0;  // 438 / 2500 = 0.1752
        docs.push_back(d);
    }
    CHECK(dataset_stats(Dataset(EmaKind::rt, docs)).positive_rate == doctest::Approx(0.1752));
}

TEST_CASE("dataset json round trip") {
    std::vector<Message> messages = {msg("p1", "2026-01-05T10:00:00Z", "round trip words")};
    std::vector<EmaResponse> responses = {ema("p1", "2026-01-05T22:00:00Z", EmaKind::eod, 75)};
    Dataset d = window_by_day(messages, responses, EmaKind::eod);
    Dataset restored = Dataset::from_json_string(d.to_json_string());
    CHECK(restored.to_json_string() == d.to_json_string());
    CHECK(restored.positive_rate() == d.positive_rate());
}

}  // TEST_SUITE

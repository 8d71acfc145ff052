#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lonetext/preprocess.hpp"

namespace lonetext {

enum class Channel { sms, facebook };
enum class Direction { sent, received };
enum class EmaKind { rt, eod };

std::string to_string(EmaKind kind);
EmaKind ema_kind_from_string(const std::string& s);

struct Message {
    std::string participant_id;
    std::int64_t timestamp_us = 0;  // microseconds since the unix epoch, UTC
    Channel channel = Channel::sms;
    Direction direction = Direction::sent;
    std::string text;  // may be empty; meaningless placeholders filtered later
};

struct EmaResponse {
    std::string participant_id;
    std::int64_t timestamp_us = 0;
    EmaKind kind = EmaKind::rt;
    double score = 0.0;  // [0, 100]
};

struct LabeledDocument {
    std::string participant_id;
    std::string date;  // YYYY-MM-DD
    EmaKind kind = EmaKind::rt;
    std::vector<std::string> tokens;
    std::string raw_text;
    int label = 0;  // 1 = lonely
    double raw_score = 0.0;
};

// Immutable after construction; positive_rate always matches the documents.
class Dataset {
public:
    Dataset(EmaKind kind, std::vector<LabeledDocument> documents);

    EmaKind kind() const { return kind_; }
    const std::vector<LabeledDocument>& documents() const { return documents_; }
    double positive_rate() const { return positive_rate_; }
    std::vector<int> labels() const;
    std::vector<std::vector<std::string>> token_docs() const;

    std::string to_json_string() const;
    static Dataset from_json_string(const std::string& text);
    void save(const std::string& path) const;
    static Dataset load(const std::string& path);

private:
    EmaKind kind_;
    std::vector<LabeledDocument> documents_;
    double positive_rate_;
};

struct DatasetStats {
    std::size_t n_documents = 0;
    std::size_t n_participants = 0;
    double positive_rate = 0.0;
};

DatasetStats dataset_stats(const Dataset& d);

enum class MessageFormat { jsonl, csv };

// messages.jsonl: one object per line with keys participant_id, timestamp
// (RFC 3339), channel ("sms"|"facebook"), direction ("sent"|"received"),
// text. The csv variant uses the same fields as columns.
std::vector<Message> parse_messages(const std::string& path, MessageFormat format);

// ema.csv: header participant_id,timestamp,kind,score with kind in {RT,EOD}.
std::vector<EmaResponse> parse_ema(const std::string& path);

struct WindowConfig {
    double binarize_threshold = 50.0;   // must lie in (0, 100)
    bool inclusive_threshold = false;   // true: lonely iff score >= threshold
    int tz_offset_minutes = 0;          // shifts the day boundary away from UTC
    bool sent_only = false;
};

// One document per (participant, calendar day) that has at least one message
// with usable content and at least one EMA response of the requested kind.
// RT days aggregate by arithmetic mean; EOD days keep the latest response.
Dataset window_by_day(const std::vector<Message>& messages,
                      const std::vector<EmaResponse>& ema, EmaKind kind,
                      const WindowConfig& window = {},
                      const PreprocessConfig& prep = {},
                      const JargonMap& jargon = default_jargon());

// RFC 3339 timestamp (e.g. 2026-01-05T10:00:00Z) to epoch microseconds.
std::int64_t parse_rfc3339(const std::string& text);

// Calendar date of an epoch-microsecond instant, shifted by tz offset.
std::string civil_date(std::int64_t timestamp_us, int tz_offset_minutes);

}  // namespace lonetext

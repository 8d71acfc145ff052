#include "lonetext/corpus.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

#include "lonetext/errors.hpp"

namespace lonetext {

using ordered_json = nlohmann::ordered_json;

std::string to_string(EmaKind kind) { return kind == EmaKind::rt ? "RT" : "EOD"; }

EmaKind ema_kind_from_string(const std::string& s) {
    if (s == "RT" || s == "rt") return EmaKind::rt;
    if (s == "EOD" || s == "eod") return EmaKind::eod;
    throw DataError("unknown EMA kind: " + s);
}

namespace {

constexpr std::int64_t kMicrosPerSec = 1000000;

bool is_leap(int y) { return (y % 4 == 0 && y % 100 != 0) || y % 400 == 0; }

int days_in_month(int y, int m) {
    static const int table[12] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    if (m == 2 && is_leap(y)) return 29;
    return table[m - 1];
}

// Howard Hinnant's days-from-civil / civil-from-days.
std::int64_t days_from_civil(int y, int m, int d) {
    y -= m <= 2;
    const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153u * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

void civil_from_days(std::int64_t z, int& y, int& m, int& d) {
    z += 719468;
    const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
    const unsigned doe = static_cast<unsigned>(z - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    const std::int64_t yy = static_cast<std::int64_t>(yoe) + era * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    d = static_cast<int>(doy - (153 * mp + 2) / 5 + 1);
    m = static_cast<int>(mp + (mp < 10 ? 3 : -9));
    y = static_cast<int>(yy + (m <= 2));
}

Channel channel_from_string(const std::string& s, std::size_t line) {
    if (s == "sms") return Channel::sms;
    if (s == "facebook") return Channel::facebook;
    throw UnknownChannel(line, s);
}

Direction direction_from_string(const std::string& s, std::size_t line) {
    if (s == "sent") return Direction::sent;
    if (s == "received") return Direction::received;
    throw MalformedRecord(line, "unknown direction \"" + s + "\"");
}

// Minimal RFC 4180 line splitter: handles quoted fields with embedded
// commas and doubled quotes. Newlines inside fields are not supported.
std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    field.push_back('"');
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                field.push_back(c);
            }
        } else if (c == '"' && field.empty()) {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(std::move(field));
            field.clear();
        } else if (c != '\r') {
            field.push_back(c);
        }
    }
    fields.push_back(std::move(field));
    return fields;
}

Message message_from_fields(const std::string& participant_id, const std::string& timestamp,
                            const std::string& channel, const std::string& direction,
                            const std::string& text, std::size_t line) {
    if (participant_id.empty()) throw MalformedRecord(line, "participant_id is empty");
    Message msg;
    msg.participant_id = participant_id;
    try {
        msg.timestamp_us = parse_rfc3339(timestamp);
    } catch (const DataError& e) {
        throw MalformedRecord(line, e.what());
    }
    msg.channel = channel_from_string(channel, line);
    msg.direction = direction_from_string(direction, line);
    msg.text = text;
    return msg;
}

}  // namespace

std::int64_t parse_rfc3339(const std::string& text) {
    int y = 0, mo = 0, d = 0, h = 0, mi = 0;
    double sec = 0.0;
    int consumed = 0;
    if (std::sscanf(text.c_str(), "%4d-%2d-%2dT%2d:%2d:%lf%n", &y, &mo, &d, &h, &mi, &sec,
                    &consumed) != 6 &&
        std::sscanf(text.c_str(), "%4d-%2d-%2d %2d:%2d:%lf%n", &y, &mo, &d, &h, &mi, &sec,
                    &consumed) != 6) {
        throw DataError("cannot parse timestamp \"" + text + "\"");
    }
    if (mo < 1 || mo > 12 || d < 1 || d > days_in_month(y, mo) || h > 23 || mi > 59 ||
        sec < 0.0 || sec >= 61.0) {
        throw DataError("timestamp out of range \"" + text + "\"");
    }
    std::string rest = text.substr(static_cast<std::size_t>(consumed));
    int offset_minutes = 0;
    if (rest == "Z" || rest == "z" || rest.empty()) {
        offset_minutes = 0;
    } else if ((rest[0] == '+' || rest[0] == '-') && rest.size() == 6 && rest[3] == ':') {
        int oh = 0, om = 0;
        if (std::sscanf(rest.c_str() + 1, "%2d:%2d", &oh, &om) != 2) {
            throw DataError("bad timezone offset in \"" + text + "\"");
        }
        offset_minutes = oh * 60 + om;
        if (rest[0] == '-') offset_minutes = -offset_minutes;
    } else {
        throw DataError("bad timezone suffix in \"" + text + "\"");
    }
    std::int64_t days = days_from_civil(y, mo, d);
    double seconds = static_cast<double>(days) * 86400.0 + h * 3600.0 + mi * 60.0 + sec -
                     offset_minutes * 60.0;
    return static_cast<std::int64_t>(seconds * 1e6 + (seconds >= 0 ? 0.5 : -0.5));
}

std::string civil_date(std::int64_t timestamp_us, int tz_offset_minutes) {
    std::int64_t shifted = timestamp_us + static_cast<std::int64_t>(tz_offset_minutes) * 60 * kMicrosPerSec;
    std::int64_t secs = shifted / kMicrosPerSec;
    if (shifted < 0 && shifted % kMicrosPerSec != 0) --secs;
    std::int64_t days = secs / 86400;
    if (secs < 0 && secs % 86400 != 0) --days;
    int y, m, d;
    civil_from_days(days, y, m, d);
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02d-%02d", y, m, d);
    return buf;
}

std::vector<Message> parse_messages(const std::string& path, MessageFormat format) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open messages file: " + path);

    std::vector<Message> messages;
    std::string line;
    std::size_t line_no = 0;
    bool saw_header = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        if (format == MessageFormat::jsonl) {
            ordered_json rec = ordered_json::parse(line, nullptr, false);
            if (rec.is_discarded() || !rec.is_object()) {
                throw MalformedRecord(line_no, "not a JSON object");
            }
            for (const char* key : {"participant_id", "timestamp", "channel", "direction", "text"}) {
                if (!rec.contains(key)) {
                    throw MalformedRecord(line_no, std::string("missing field \"") + key + "\"");
                }
                if (!rec[key].is_string()) {
                    throw MalformedRecord(line_no, std::string("field \"") + key + "\" is not a string");
                }
            }
            messages.push_back(message_from_fields(
                rec["participant_id"].get<std::string>(), rec["timestamp"].get<std::string>(),
                rec["channel"].get<std::string>(), rec["direction"].get<std::string>(),
                rec["text"].get<std::string>(), line_no));
        } else {
            auto fields = split_csv_line(line);
            if (!saw_header) {
                saw_header = true;
                if (fields == std::vector<std::string>{"participant_id", "timestamp", "channel",
                                                       "direction", "text"}) {
                    continue;
                }
                throw MalformedRecord(line_no,
                                      "expected header participant_id,timestamp,channel,direction,text");
            }
            if (fields.size() != 5) {
                throw MalformedRecord(line_no, "expected 5 fields, got " + std::to_string(fields.size()));
            }
            messages.push_back(
                message_from_fields(fields[0], fields[1], fields[2], fields[3], fields[4], line_no));
        }
    }
    return messages;
}

std::vector<EmaResponse> parse_ema(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open ema file: " + path);

    std::vector<EmaResponse> responses;
    std::string line;
    std::size_t line_no = 0;
    bool saw_header = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        auto fields = split_csv_line(line);
        if (!saw_header) {
            saw_header = true;
            if (fields == std::vector<std::string>{"participant_id", "timestamp", "kind", "score"}) {
                continue;
            }
            throw MalformedRecord(line_no, "expected header participant_id,timestamp,kind,score");
        }
        if (fields.size() != 4) {
            throw MalformedRecord(line_no, "expected 4 fields, got " + std::to_string(fields.size()));
        }
        if (fields[0].empty()) throw MalformedRecord(line_no, "participant_id is empty");
        EmaResponse r;
        r.participant_id = fields[0];
        try {
            r.timestamp_us = parse_rfc3339(fields[1]);
            r.kind = ema_kind_from_string(fields[2]);
        } catch (const DataError& e) {
            throw MalformedRecord(line_no, e.what());
        }
        try {
            std::size_t pos = 0;
            r.score = std::stod(fields[3], &pos);
            if (pos != fields[3].size()) throw std::invalid_argument("trailing characters");
        } catch (const std::exception&) {
            throw MalformedRecord(line_no, "cannot parse score \"" + fields[3] + "\"");
        }
        if (r.score < 0.0 || r.score > 100.0) throw ScoreOutOfRange(line_no, r.score);
        responses.push_back(std::move(r));
    }
    return responses;
}

Dataset::Dataset(EmaKind kind, std::vector<LabeledDocument> documents)
    : kind_(kind), documents_(std::move(documents)) {
    std::size_t positives = 0;
    for (const auto& doc : documents_) {
        if (doc.kind != kind_) {
            throw ContractError("document kind does not match dataset kind");
        }
        positives += doc.label == 1;
    }
    positive_rate_ =
        documents_.empty() ? 0.0 : static_cast<double>(positives) / static_cast<double>(documents_.size());
}

std::vector<int> Dataset::labels() const {
    std::vector<int> out;
    out.reserve(documents_.size());
    for (const auto& doc : documents_) out.push_back(doc.label);
    return out;
}

std::vector<std::vector<std::string>> Dataset::token_docs() const {
    std::vector<std::vector<std::string>> out;
    out.reserve(documents_.size());
    for (const auto& doc : documents_) out.push_back(doc.tokens);
    return out;
}

std::string Dataset::to_json_string() const {
    ordered_json root;
    root["kind"] = to_string(kind_);
    root["positive_rate"] = positive_rate_;
    ordered_json docs = ordered_json::array();
    for (const auto& d : documents_) {
        ordered_json j;
        j["participant_id"] = d.participant_id;
        j["date"] = d.date;
        j["kind"] = to_string(d.kind);
        j["raw_text"] = d.raw_text;
        j["tokens"] = d.tokens;
        j["label"] = d.label;
        j["raw_score"] = d.raw_score;
        docs.push_back(std::move(j));
    }
    root["documents"] = std::move(docs);
    return root.dump(2) + "\n";
}

Dataset Dataset::from_json_string(const std::string& text) {
    ordered_json root = ordered_json::parse(text, nullptr, false);
    if (root.is_discarded() || !root.is_object() || !root.contains("kind") ||
        !root.contains("documents")) {
        throw DataError("not a dataset file");
    }
    EmaKind kind = ema_kind_from_string(root["kind"].get<std::string>());
    std::vector<LabeledDocument> docs;
    for (const auto& j : root["documents"]) {
        LabeledDocument d;
        d.participant_id = j.at("participant_id").get<std::string>();
        d.date = j.at("date").get<std::string>();
        d.kind = ema_kind_from_string(j.at("kind").get<std::string>());
        d.raw_text = j.at("raw_text").get<std::string>();
        d.tokens = j.at("tokens").get<std::vector<std::string>>();
        d.label = j.at("label").get<int>();
        d.raw_score = j.at("raw_score").get<double>();
        docs.push_back(std::move(d));
    }
    return Dataset(kind, std::move(docs));
}

void Dataset::save(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write dataset file: " + path);
    out << to_json_string();
}

Dataset Dataset::load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open dataset file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return from_json_string(ss.str());
}

DatasetStats dataset_stats(const Dataset& d) {
    if (d.documents().empty()) throw EmptyDataset();
    std::set<std::string> participants;
    for (const auto& doc : d.documents()) participants.insert(doc.participant_id);
    return {d.documents().size(), participants.size(), d.positive_rate()};
}

Dataset window_by_day(const std::vector<Message>& messages, const std::vector<EmaResponse>& ema,
                      EmaKind kind, const WindowConfig& window, const PreprocessConfig& prep,
                      const JargonMap& jargon) {
    if (!(window.binarize_threshold > 0.0 && window.binarize_threshold < 100.0)) {
        throw ContractError("binarize threshold must lie in (0, 100)");
    }

    using DayKey = std::pair<std::string, std::string>;  // (participant, date)

    // Messages per day, kept in timestamp order (stable for ties).
    std::map<DayKey, std::vector<const Message*>> day_messages;
    for (const auto& msg : messages) {
        if (window.sent_only && msg.direction != Direction::sent) continue;
        day_messages[{msg.participant_id, civil_date(msg.timestamp_us, window.tz_offset_minutes)}]
            .push_back(&msg);
    }
    for (auto& [key, msgs] : day_messages) {
        std::stable_sort(msgs.begin(), msgs.end(),
                         [](const Message* a, const Message* b) {
                             return a->timestamp_us < b->timestamp_us;
                         });
    }

    // EMA aggregation: RT days average all prompts, EOD days keep the
    // latest response of the day.
    struct DayScore {
        double sum = 0.0;
        std::size_t count = 0;
        std::int64_t latest_ts = 0;
        double latest_score = 0.0;
    };
    std::map<DayKey, DayScore> day_scores;
    for (const auto& r : ema) {
        if (r.kind != kind) continue;
        DayKey key{r.participant_id, civil_date(r.timestamp_us, window.tz_offset_minutes)};
        auto& agg = day_scores[key];
        agg.sum += r.score;
        if (agg.count == 0 || r.timestamp_us >= agg.latest_ts) {
            agg.latest_ts = r.timestamp_us;
            agg.latest_score = r.score;
        }
        ++agg.count;
    }

    std::vector<LabeledDocument> docs;
    for (const auto& [key, score] : day_scores) {
        auto msgs_it = day_messages.find(key);
        if (msgs_it == day_messages.end()) continue;

        std::string raw_text;
        for (const Message* msg : msgs_it->second) {
            if (msg->text.empty()) continue;
            if (!raw_text.empty()) raw_text.push_back(' ');
            raw_text += msg->text;
        }
        std::vector<std::string> tokens = preprocess_text(raw_text, prep, jargon);
        if (tokens.empty()) continue;  // no usable content that day

        LabeledDocument doc;
        doc.participant_id = key.first;
        doc.date = key.second;
        doc.kind = kind;
        doc.raw_text = std::move(raw_text);
        doc.tokens = std::move(tokens);
        doc.raw_score = kind == EmaKind::rt
                            ? score.sum / static_cast<double>(score.count)
                            : score.latest_score;
        doc.label = (window.inclusive_threshold ? doc.raw_score >= window.binarize_threshold
                                                : doc.raw_score > window.binarize_threshold)
                        ? 1
                        : 0;
        docs.push_back(std::move(doc));
    }
    if (docs.empty()) throw EmptyDataset("no (participant, day) pairs survived windowing");
    return Dataset(kind, std::move(docs));
}

}  // namespace lonetext

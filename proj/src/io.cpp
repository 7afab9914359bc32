#include "sasrate/io.hpp"

#include "sasrate/error.hpp"

#include <openssl/evp.h>

#include <array>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace sasrate {

namespace fs = std::filesystem;

namespace {

const Json& require(const Json& j, const char* key) {
    if (!j.is_object() || !j.contains(key))
        throw Error(ErrorKind::SchemaError, std::string("missing field '") + key + "'");
    return j.at(key);
}

std::string require_string(const Json& j, const char* key) {
    const Json& v = require(j, key);
    if (!v.is_string()) throw Error(ErrorKind::SchemaError, std::string("field '") + key + "' must be a string");
    return v.get<std::string>();
}

} // namespace

void to_json(Json& j, const EmotionWord& w) {
    j = Json{{"lexeme", w.lexeme}, {"polarity", std::string(to_string(w.polarity))}};
}

void from_json(const Json& j, EmotionWord& w) {
    w = EmotionWord(require_string(j, "lexeme"), parse_polarity(require_string(j, "polarity")));
}

void to_json(Json& j, const PersonTerm& p) {
    j = Json{{"surface", p.surface},
             {"gender", std::string(to_string(p.gender))},
             {"race", std::string(to_string(p.race))}};
}

void from_json(const Json& j, PersonTerm& p) {
    p.surface = require_string(j, "surface");
    p.gender = parse_gender(require_string(j, "gender"));
    p.race = parse_race(require_string(j, "race"));
}

Json group_tag_to_json(const GroupTag& tag) {
    if (const int* n = std::get_if<int>(&tag)) return *n;
    return std::get<std::string>(tag);
}

GroupTag group_tag_from_json(const Json& j) {
    if (j.is_number_integer()) return j.get<int>();
    if (j.is_string()) return j.get<std::string>();
    throw Error(ErrorKind::SchemaError, "group must be an integer or a string tag");
}

void to_json(Json& j, const SentenceRecord& r) {
    j = Json{{"record_id", r.record_id},
             {"group", group_tag_to_json(r.group)},
             {"dataset_id", r.dataset_id},
             {"text", r.text},
             {"enhancement", r.enhancement},
             {"person", r.person},
             {"emotion", r.emotion ? Json(*r.emotion) : Json(nullptr)},
             {"speaker", std::string(to_string(r.speaker))}};
    if (r.prefix_lost) j["prefix_lost"] = true;
}

void from_json(const Json& j, SentenceRecord& r) {
    r.record_id = require_string(j, "record_id");
    r.group = group_tag_from_json(require(j, "group"));
    r.dataset_id = require_string(j, "dataset_id");
    r.text = require_string(j, "text");
    r.enhancement = require_string(j, "enhancement");
    r.person = require(j, "person").get<PersonTerm>();
    const Json& emotion = require(j, "emotion");
    r.emotion = emotion.is_null() ? std::nullopt : std::optional<EmotionWord>(emotion.get<EmotionWord>());
    r.speaker = parse_speaker(require_string(j, "speaker"));
    r.prefix_lost = j.value("prefix_lost", false);
}

void to_json(Json& j, const ScoredRecord& s) {
    j = Json{{"record_id", s.record_id}, {"sas_id", s.sas_id}, {"score", s.score.value()}};
}

void from_json(const Json& j, ScoredRecord& s) {
    s.record_id = require_string(j, "record_id");
    s.sas_id = require_string(j, "sas_id");
    const Json& score = require(j, "score");
    if (!score.is_number()) throw Error(ErrorKind::SchemaError, "score must be a number");
    s.score = SentimentScore(score.get<double>());
}

void to_json(Json& j, const CausalEdge& e) {
    j = Json{{"from", std::string(to_string(e.from))},
             {"to", std::string(to_string(e.to))},
             {"status", std::string(to_string(e.status))}};
}

void from_json(const Json& j, CausalEdge& e) {
    e.from = parse_causal_node(require_string(j, "from"));
    e.to = parse_causal_node(require_string(j, "to"));
    e.status = parse_link_status(require_string(j, "status"));
}

void to_json(Json& j, const CausalModelSpec& m) {
    Json nodes = Json::array();
    for (auto n : m.nodes) nodes.push_back(std::string(to_string(n)));
    Json confounders = Json::array();
    for (auto n : m.confounders) confounders.push_back(std::string(to_string(n)));
    j = Json{{"nodes", nodes}, {"edges", m.edges}, {"confounders", confounders}};
}

void from_json(const Json& j, CausalModelSpec& m) {
    m = {};
    for (const auto& n : require(j, "nodes")) m.nodes.insert(parse_causal_node(n.get<std::string>()));
    m.edges = require(j, "edges").get<std::vector<CausalEdge>>();
    for (const auto& n : require(j, "confounders")) m.confounders.insert(parse_causal_node(n.get<std::string>()));
}

void to_json(Json& j, const GroupSpec& g) {
    Json attrs = Json::array();
    for (auto a : g.protected_attributes) attrs.push_back(std::string(to_string(a)));
    j = Json{{"group", g.group},
             {"protected", attrs},
             {"confounded", g.confounded},
             {"emotion_sets", g.emotion_sets},
             {"skew", g.skew},
             {"causal_model", g.causal_model}};
}

void from_json(const Json& j, GroupSpec& g) {
    g = {};
    g.group = require(j, "group").get<int>();
    for (const auto& a : require(j, "protected"))
        g.protected_attributes.insert(parse_protected_attribute(a.get<std::string>()));
    g.confounded = require(j, "confounded").get<bool>();
    g.emotion_sets = require(j, "emotion_sets").get<std::vector<std::vector<EmotionWord>>>();
    g.skew = require(j, "skew").get<double>();
    g.causal_model = require(j, "causal_model").get<CausalModelSpec>();
}

std::string canonical(const Json& j) { return j.dump(); }

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::IoError, "cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file_atomic(const fs::path& path, std::string_view content) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error(ErrorKind::IoError, "cannot write " + tmp.string());
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out) throw Error(ErrorKind::IoError, "short write to " + tmp.string());
    }
    fs::rename(tmp, path);
}

std::vector<Json> read_jsonl(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::IoError, "cannot open " + path.string());
    std::vector<Json> rows;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        try {
            rows.push_back(Json::parse(line));
        } catch (const Json::parse_error& e) {
            throw Error(ErrorKind::SchemaError,
                        path.string() + ":" + std::to_string(line_no) + ": malformed JSON (" + e.what() + ")");
        }
    }
    return rows;
}

std::string to_jsonl(const std::vector<Json>& rows) {
    std::string out;
    for (const auto& row : rows) {
        out += canonical(row);
        out += '\n';
    }
    return out;
}

std::vector<SentenceRecord> read_records(const fs::path& path) {
    std::vector<SentenceRecord> records;
    for (const auto& row : read_jsonl(path)) {
        auto record = row.get<SentenceRecord>();
        validate_record(record);
        records.push_back(std::move(record));
    }
    return records;
}

void write_records(const fs::path& path, const std::vector<SentenceRecord>& records) {
    std::vector<Json> rows(records.begin(), records.end());
    write_file_atomic(path, to_jsonl(rows));
}

std::vector<ScoredRecord> read_scores(const fs::path& path) {
    std::vector<ScoredRecord> scores;
    for (const auto& row : read_jsonl(path)) scores.push_back(row.get<ScoredRecord>());
    return scores;
}

void write_scores(const fs::path& path, const std::vector<ScoredRecord>& scores) {
    std::vector<Json> rows(scores.begin(), scores.end());
    write_file_atomic(path, to_jsonl(rows));
}

std::vector<DelimitedRow> parse_delimited(std::string_view content, char delimiter) {
    std::vector<DelimitedRow> rows;
    DelimitedRow row;
    std::string field;
    bool in_quotes = false;
    bool field_started = false;
    std::size_t line = 1;
    row.line = 1;

    auto end_field = [&] {
        row.fields.push_back(std::move(field));
        field.clear();
        field_started = false;
    };
    auto end_row = [&] {
        end_field();
        const bool blank = row.fields.size() == 1 && row.fields[0].empty();
        if (!blank) rows.push_back(std::move(row));
        row = {};
    };

    for (std::size_t i = 0; i < content.size(); ++i) {
        const char c = content[i];
        if (in_quotes) {
            if (c == '"') {
                if (i + 1 < content.size() && content[i + 1] == '"') {
                    field += '"';
                    ++i;
                } else {
                    in_quotes = false;
                }
            } else {
                if (c == '\n') ++line;
                field += c;
            }
            continue;
        }
        if (c == '"' && !field_started) {
            in_quotes = true;
            field_started = true;
        } else if (c == delimiter) {
            end_field();
        } else if (c == '\r' && i + 1 < content.size() && content[i + 1] == '\n') {
            continue;
        } else if (c == '\n') {
            end_row();
            ++line;
            row.line = line;
        } else {
            field += c;
            field_started = true;
        }
    }
    if (in_quotes) throw Error(ErrorKind::SchemaError, "line " + std::to_string(row.line) + ": unterminated quote");
    if (!field.empty() || !row.fields.empty()) end_row();
    return rows;
}

void validate_utf8(std::string_view s, std::string_view source) {
    std::size_t line = 1;
    for (std::size_t i = 0; i < s.size();) {
        const auto c = static_cast<unsigned char>(s[i]);
        if (c == '\n') ++line;
        std::size_t extra = 0;
        bool ok = true;
        if (c < 0x80) extra = 0;
        else if ((c & 0xE0) == 0xC0 && c >= 0xC2) extra = 1;
        else if ((c & 0xF0) == 0xE0) extra = 2;
        else if ((c & 0xF8) == 0xF0 && c <= 0xF4) extra = 3;
        else ok = false;
        if (ok && i + extra >= s.size() && extra > 0) ok = false;
        for (std::size_t k = 1; ok && k <= extra; ++k) {
            if ((static_cast<unsigned char>(s[i + k]) & 0xC0) != 0x80) ok = false;
        }
        if (!ok)
            throw Error(ErrorKind::EncodingError,
                        std::string(source) + ":" + std::to_string(line) + ": invalid UTF-8 sequence");
        i += extra + 1;
    }
}

std::uint64_t fnv1a64(std::string_view data) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string sha256_hex(std::string_view data) {
    std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), digest.data(), &len, EVP_sha256(), nullptr) != 1)
        throw Error(ErrorKind::IoError, "sha256 digest failed");
    static constexpr char kHex[] = "0123456789abcdef";
    std::string out;
    out.reserve(len * 2);
    for (unsigned int i = 0; i < len; ++i) {
        out += kHex[digest[i] >> 4];
        out += kHex[digest[i] & 0xF];
    }
    return out;
}

Json real_to_json(double v) {
    if (std::isinf(v)) return v > 0 ? "+inf" : "-inf";
    return v;
}

double real_from_json(const Json& j) {
    if (j.is_string()) {
        const auto s = j.get<std::string>();
        if (s == "+inf") return std::numeric_limits<double>::infinity();
        if (s == "-inf") return -std::numeric_limits<double>::infinity();
        throw Error(ErrorKind::SchemaError, "unexpected real '" + s + "'");
    }
    return j.get<double>();
}

} // namespace sasrate

#pragma once

// Canonical JSON encoding of the core types plus small file helpers.
// Objects serialize with sorted keys, one record per line for JSONL files.

#include "sasrate/core.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace sasrate {

using Json = nlohmann::json;

void to_json(Json& j, const EmotionWord& w);
void from_json(const Json& j, EmotionWord& w);
void to_json(Json& j, const PersonTerm& p);
void from_json(const Json& j, PersonTerm& p);
void to_json(Json& j, const SentenceRecord& r);
void from_json(const Json& j, SentenceRecord& r);
void to_json(Json& j, const ScoredRecord& s);
void from_json(const Json& j, ScoredRecord& s);
void to_json(Json& j, const CausalEdge& e);
void from_json(const Json& j, CausalEdge& e);
void to_json(Json& j, const CausalModelSpec& m);
void from_json(const Json& j, CausalModelSpec& m);
void to_json(Json& j, const GroupSpec& g);
void from_json(const Json& j, GroupSpec& g);

Json group_tag_to_json(const GroupTag& tag);
GroupTag group_tag_from_json(const Json& j);

// One compact JSON document, keys sorted, no trailing newline.
std::string canonical(const Json& j);

std::string read_file(const std::filesystem::path& path);

// Writes to a sibling temporary file and renames it over the target.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

std::vector<Json> read_jsonl(const std::filesystem::path& path);
std::string to_jsonl(const std::vector<Json>& rows);

std::vector<SentenceRecord> read_records(const std::filesystem::path& path);
void write_records(const std::filesystem::path& path, const std::vector<SentenceRecord>& records);

std::vector<ScoredRecord> read_scores(const std::filesystem::path& path);
void write_scores(const std::filesystem::path& path, const std::vector<ScoredRecord>& scores);

struct DelimitedRow {
    std::size_t line = 0; // 1-based line where the row starts
    std::vector<std::string> fields;
};

// RFC 4180 style: quoted fields may hold delimiters, doubled quotes and
// newlines. CRLF line endings accepted; blank lines skipped.
std::vector<DelimitedRow> parse_delimited(std::string_view content, char delimiter);

// Throws Error(EncodingError) naming the line of the first invalid sequence.
void validate_utf8(std::string_view content, std::string_view source);

// Stable across platforms and runs, unlike std::hash.
std::uint64_t fnv1a64(std::string_view data);
std::string sha256_hex(std::string_view data);

// JSON has no infinities; they travel as the strings "+inf" / "-inf".
Json real_to_json(double v);
double real_from_json(const Json& j);

} // namespace sasrate

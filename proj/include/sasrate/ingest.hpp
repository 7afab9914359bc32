#pragma once

// Chatbot conversation logs: parsing, preprocessing into sentence records,
// descriptive statistics and majority-vote aggregation of human labels.

#include "sasrate/core.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace sasrate {

struct ConversationRow {
    long c_num = 0;
    int ub = 1; // 0 chatbot, 1 user
    std::string original;
    std::string enhancement;
    std::string text;
    GenderClass user_gender = GenderClass::Unspecified;
    std::size_t line = 0; // source line, 0 when not read from a file

    friend bool operator==(const ConversationRow& a, const ConversationRow& b) {
        return a.c_num == b.c_num && a.ub == b.ub && a.original == b.original && a.enhancement == b.enhancement &&
               a.text == b.text && a.user_gender == b.user_gender;
    }
};

enum class ConversationFormat { Csv, Jsonl };

ConversationFormat parse_conversation_format(std::string_view s);

// CSV header: C_num,UB,Original,Enhancement,Text,User_gender (any delimiter).
// User_gender takes 0/1/2 (NA/Male/Female) or the class names. An empty Text
// is rebuilt from Enhancement + Original. Errors name the offending line.
std::vector<ConversationRow> parse_conversations(std::string_view content, ConversationFormat format,
                                                 char delimiter = ',', std::string_view source = "<input>");
std::vector<ConversationRow> read_conversations(const std::filesystem::path& path, ConversationFormat format,
                                                char delimiter = ',');

struct PreprocessOptions {
    std::string tag = "HD1";
    bool drop_na = true;
};

// Drops NA-gender conversations (when asked), merges consecutive
// same-speaker rows and adds the gender proxy to user rows without an
// enhancement. Output ordered by (c_num, first row index).
std::vector<ConversationRow> preprocess_rows(const std::vector<ConversationRow>& rows, bool drop_na);

std::vector<SentenceRecord> preprocess(const std::vector<ConversationRow>& rows, const PreprocessOptions& options);

// One dataset per conversation, "<tag>-c<c_num>".
std::vector<Dataset> conversation_datasets(const std::vector<SentenceRecord>& records, const std::string& tag);

// The fixed 127-word English stopword list.
const std::set<std::string>& english_stopwords();

// Whitespace tokens with ASCII punctuation stripped; empty tokens dropped.
std::vector<std::string> utterance_words(std::string_view text);

struct Summary {
    double avg = 0.0;
    long min = 0;
    long max = 0;
};

struct ConversationStatsRow {
    Speaker agent = Speaker::User;
    GenderClass gender = GenderClass::Unspecified;
    long conversations = 0;
    long utterances = 0;
    Summary words_per_utterance;
    Summary stopwords_per_utterance;
    double utterances_per_conversation = 0.0;
    // A turn is one user/chatbot alternation: floor(speaker blocks / 2).
    double turns_per_conversation = 0.0;
};

// Per (agent, user gender), over the rows as given.
std::vector<ConversationStatsRow> conversation_stats(const std::vector<ConversationRow>& rows);

using AnnotationSet = std::map<std::string, int>;

struct AggregatedLabels {
    std::map<std::string, int> labels;
    double agreement_percent = 0.0;
};

// Majority label per record; a three-way split picks one of the three labels
// from a stream keyed by (seed, record_id). Throws CoverageMismatch when the
// sets cover different records and InvalidValue for labels outside {-1,0,1}.
AggregatedLabels aggregate_annotations(const AnnotationSet& a, const AnnotationSet& b, const AnnotationSet& c,
                                       std::uint64_t seed);

} // namespace sasrate

#include "sasrate/ingest.hpp"

#include "rng.hpp"
#include "sasrate/datagen.hpp"
#include "sasrate/error.hpp"
#include "sasrate/io.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <sstream>

namespace sasrate {

namespace {

constexpr std::array<std::string_view, 6> kColumns{"C_num", "UB", "Original", "Enhancement", "Text", "User_gender"};

[[noreturn]] void schema_error(std::string_view source, std::size_t line, const std::string& why) {
    throw Error(ErrorKind::SchemaError, std::string(source) + ":" + std::to_string(line) + ": " + why);
}

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

std::string lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
    return out;
}

std::optional<long> parse_long(std::string_view s) {
    long v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
    return v;
}

std::optional<GenderClass> parse_user_gender(std::string_view raw) {
    const auto s = lower(trim(raw));
    if (s == "0" || s == "na" || s == "unspecified" || s == "prefer not to say") return GenderClass::Unspecified;
    if (s == "1" || s == "male") return GenderClass::Male;
    if (s == "2" || s == "female") return GenderClass::Female;
    return std::nullopt;
}

// Shared by both formats once the six fields are in hand as strings.
ConversationRow make_row(std::string_view source, std::size_t line, const std::string& c_num, const std::string& ub,
                         std::string original, std::string enhancement, std::string text, const std::string& gender) {
    ConversationRow row;
    row.line = line;
    const auto num = parse_long(trim(c_num));
    if (!num) schema_error(source, line, "C_num '" + c_num + "' is not an integer");
    row.c_num = *num;
    const auto speaker = trim(ub);
    if (speaker != "0" && speaker != "1") schema_error(source, line, "UB must be 0 or 1 (got '" + ub + "')");
    row.ub = speaker == "1" ? 1 : 0;
    if (trim(gender).empty()) schema_error(source, line, "User_gender is missing");
    const auto g = parse_user_gender(gender);
    if (!g) schema_error(source, line, "User_gender '" + gender + "' is not 0, 1, 2 or a gender name");
    row.user_gender = *g;

    if (text.empty()) text = enhancement + original;
    if (text.empty()) schema_error(source, line, "utterance is empty");
    if (!enhancement.empty()) {
        if (text != enhancement + original)
            schema_error(source, line, "Text is not Enhancement followed by Original");
    } else if (original.empty()) {
        original = text;
    }
    row.original = std::move(original);
    row.enhancement = std::move(enhancement);
    row.text = std::move(text);
    return row;
}

std::vector<ConversationRow> parse_csv(std::string_view content, char delimiter, std::string_view source) {
    const auto table = parse_delimited(content, delimiter);
    std::vector<ConversationRow> rows;
    if (table.empty()) schema_error(source, 1, "missing header");
    const auto& header = table.front();
    std::array<std::size_t, kColumns.size()> index{};
    for (std::size_t c = 0; c < kColumns.size(); ++c) {
        auto it = std::find_if(header.fields.begin(), header.fields.end(),
                               [&](const std::string& f) { return trim(f) == kColumns[c]; });
        if (it == header.fields.end())
            schema_error(source, header.line, "header lacks column '" + std::string(kColumns[c]) + "'");
        index[c] = static_cast<std::size_t>(it - header.fields.begin());
    }
    for (std::size_t r = 1; r < table.size(); ++r) {
        const auto& row = table[r];
        if (row.fields.size() != header.fields.size())
            schema_error(source, row.line, "expected " + std::to_string(header.fields.size()) + " fields, found " +
                                               std::to_string(row.fields.size()));
        auto f = [&](std::size_t c) { return row.fields[index[c]]; };
        rows.push_back(make_row(source, row.line, f(0), f(1), f(2), f(3), f(4), f(5)));
    }
    return rows;
}

std::string field_string(const Json& obj, std::string_view key, std::string_view source, std::size_t line,
                         bool required) {
    auto it = obj.find(std::string(key));
    if (it == obj.end() || it->is_null()) {
        if (required) schema_error(source, line, "missing field '" + std::string(key) + "'");
        return "";
    }
    if (it->is_string()) return it->get<std::string>();
    if (it->is_number_integer()) return std::to_string(it->get<long>());
    schema_error(source, line, "field '" + std::string(key) + "' has the wrong type");
}

std::vector<ConversationRow> parse_jsonl(std::string_view content, std::string_view source) {
    std::vector<ConversationRow> rows;
    std::size_t line = 0;
    std::size_t pos = 0;
    while (pos <= content.size()) {
        auto end = content.find('\n', pos);
        if (end == std::string_view::npos) end = content.size();
        ++line;
        const auto text = trim(content.substr(pos, end - pos));
        pos = end + 1;
        if (text.empty()) continue;
        Json obj;
        try {
            obj = Json::parse(text);
        } catch (const Json::parse_error&) {
            schema_error(source, line, "not a JSON object");
        }
        if (!obj.is_object()) schema_error(source, line, "not a JSON object");
        rows.push_back(make_row(source, line, field_string(obj, "C_num", source, line, true),
                                field_string(obj, "UB", source, line, true),
                                field_string(obj, "Original", source, line, false),
                                field_string(obj, "Enhancement", source, line, false),
                                field_string(obj, "Text", source, line, false),
                                field_string(obj, "User_gender", source, line, true)));
    }
    return rows;
}

// Rows grouped per conversation in (c_num, row index) order.
std::vector<std::vector<ConversationRow>> by_conversation(const std::vector<ConversationRow>& rows) {
    std::vector<ConversationRow> sorted = rows;
    std::stable_sort(sorted.begin(), sorted.end(),
                     [](const ConversationRow& a, const ConversationRow& b) { return a.c_num < b.c_num; });
    std::vector<std::vector<ConversationRow>> out;
    for (auto& row : sorted) {
        if (out.empty() || out.back().front().c_num != row.c_num) out.emplace_back();
        out.back().push_back(std::move(row));
    }
    return out;
}

long speaker_blocks(const std::vector<ConversationRow>& conversation) {
    long blocks = 0;
    for (std::size_t i = 0; i < conversation.size(); ++i) {
        if (i == 0 || conversation[i].ub != conversation[i - 1].ub) ++blocks;
    }
    return blocks;
}

} // namespace

ConversationFormat parse_conversation_format(std::string_view s) {
    if (s == "csv") return ConversationFormat::Csv;
    if (s == "jsonl") return ConversationFormat::Jsonl;
    throw Error(ErrorKind::InvalidValue, "unknown conversation format '" + std::string(s) + "' (expected csv or jsonl)");
}

std::vector<ConversationRow> parse_conversations(std::string_view content, ConversationFormat format, char delimiter,
                                                 std::string_view source) {
    validate_utf8(content, source);
    return format == ConversationFormat::Csv ? parse_csv(content, delimiter, source) : parse_jsonl(content, source);
}

std::vector<ConversationRow> read_conversations(const std::filesystem::path& path, ConversationFormat format,
                                                char delimiter) {
    return parse_conversations(read_file(path), format, delimiter, path.string());
}

std::vector<ConversationRow> preprocess_rows(const std::vector<ConversationRow>& rows, bool drop_na) {
    std::vector<ConversationRow> out;
    for (auto& conversation : by_conversation(rows)) {
        const GenderClass gender = conversation.front().user_gender;
        if (drop_na && gender == GenderClass::Unspecified) continue;

        std::vector<ConversationRow> merged;
        for (auto& row : conversation) {
            if (!merged.empty() && merged.back().ub == row.ub) {
                auto& last = merged.back();
                last.text += " " + row.text;
                last.original = last.text.substr(last.enhancement.size());
                continue;
            }
            merged.push_back(std::move(row));
        }
        for (auto& row : merged) {
            if (row.ub == 1 && row.enhancement.empty()) {
                const std::string base = row.text;
                auto [text, prefix] = apply_gender_proxy(base, gender);
                row.text = std::move(text);
                row.enhancement = std::move(prefix);
                row.original = base;
            }
            out.push_back(std::move(row));
        }
    }
    return out;
}

std::vector<SentenceRecord> preprocess(const std::vector<ConversationRow>& rows, const PreprocessOptions& options) {
    std::vector<SentenceRecord> records;
    for (const auto& conversation : by_conversation(preprocess_rows(rows, options.drop_na))) {
        const std::string dataset_id = options.tag + "-c" + std::to_string(conversation.front().c_num);
        const GenderClass gender = conversation.front().user_gender;
        for (std::size_t i = 0; i < conversation.size(); ++i) {
            const auto& row = conversation[i];
            SentenceRecord r;
            r.record_id = make_record_id(dataset_id, i, conversation.size());
            r.group = options.tag;
            r.dataset_id = dataset_id;
            r.text = row.text;
            r.enhancement = row.enhancement;
            r.person = PersonTerm{"user", gender, RaceClass::Unspecified};
            r.speaker = row.ub == 1 ? Speaker::User : Speaker::Chatbot;
            records.push_back(std::move(r));
        }
    }
    return records;
}

std::vector<Dataset> conversation_datasets(const std::vector<SentenceRecord>& records, const std::string& tag) {
    std::vector<Dataset> out;
    for (const auto& r : records) {
        if (out.empty() || out.back().dataset_id != r.dataset_id) {
            Dataset ds;
            ds.dataset_id = r.dataset_id;
            ds.group = tag;
            out.push_back(std::move(ds));
        }
        out.back().records.push_back(r);
    }
    return out;
}

const std::set<std::string>& english_stopwords() {
    static const std::set<std::string> words = [] {
        std::istringstream in(
            "i me my myself we our ours ourselves you your yours yourself yourselves he him his himself she her hers "
            "herself it its itself they them their theirs themselves what which who whom this that these those am is "
            "are was were be been being have has had having do does did doing a an the and but if or because as until "
            "while of at by for with about against between into through during before after above below to from up "
            "down in out on off over under again further then once here there when where why how all any both each "
            "few more most other some such no nor not only own same so than too very s t can will just don should now");
        std::set<std::string> s;
        for (std::string w; in >> w;) s.insert(w);
        return s;
    }();
    return words;
}

std::vector<std::string> utterance_words(std::string_view text) {
    std::vector<std::string> words;
    std::istringstream in{std::string(text)};
    for (std::string token; in >> token;) {
        std::string word;
        for (unsigned char c : token) {
            if (!std::ispunct(c)) word.push_back(static_cast<char>(c));
        }
        if (!word.empty()) words.push_back(std::move(word));
    }
    return words;
}

std::vector<ConversationStatsRow> conversation_stats(const std::vector<ConversationRow>& rows) {
    struct Acc {
        long utterances = 0;
        long words = 0, words_min = 0, words_max = 0;
        long stops = 0, stops_min = 0, stops_max = 0;
    };
    std::map<std::pair<int, GenderClass>, Acc> acc;
    std::map<GenderClass, long> conversations;
    std::map<GenderClass, long> turns;

    const auto& stopwords = english_stopwords();
    for (const auto& conversation : by_conversation(rows)) {
        const GenderClass gender = conversation.front().user_gender;
        ++conversations[gender];
        turns[gender] += speaker_blocks(conversation) / 2;
        for (const auto& row : conversation) {
            const auto words = utterance_words(row.original.empty() ? row.text : row.original);
            const long n = static_cast<long>(words.size());
            const long s = static_cast<long>(std::count_if(
                words.begin(), words.end(), [&](const std::string& w) { return stopwords.contains(lower(w)); }));
            auto& a = acc[{row.ub, gender}];
            if (a.utterances == 0) {
                a.words_min = a.words_max = n;
                a.stops_min = a.stops_max = s;
            }
            ++a.utterances;
            a.words += n;
            a.words_min = std::min(a.words_min, n);
            a.words_max = std::max(a.words_max, n);
            a.stops += s;
            a.stops_min = std::min(a.stops_min, s);
            a.stops_max = std::max(a.stops_max, s);
        }
    }

    std::vector<ConversationStatsRow> out;
    for (int ub : {1, 0}) {
        for (auto gender : {GenderClass::Male, GenderClass::Female, GenderClass::Unspecified}) {
            auto it = acc.find({ub, gender});
            if (it == acc.end()) continue;
            const auto& a = it->second;
            const double u = static_cast<double>(a.utterances);
            const double c = static_cast<double>(conversations[gender]);
            ConversationStatsRow row;
            row.agent = ub == 1 ? Speaker::User : Speaker::Chatbot;
            row.gender = gender;
            row.conversations = conversations[gender];
            row.utterances = a.utterances;
            row.words_per_utterance = {static_cast<double>(a.words) / u, a.words_min, a.words_max};
            row.stopwords_per_utterance = {static_cast<double>(a.stops) / u, a.stops_min, a.stops_max};
            row.utterances_per_conversation = u / c;
            row.turns_per_conversation = static_cast<double>(turns[gender]) / c;
            out.push_back(row);
        }
    }
    return out;
}

AggregatedLabels aggregate_annotations(const AnnotationSet& a, const AnnotationSet& b, const AnnotationSet& c,
                                       std::uint64_t seed) {
    auto same_keys = [](const AnnotationSet& x, const AnnotationSet& y) {
        return x.size() == y.size() &&
               std::equal(x.begin(), x.end(), y.begin(), [](const auto& p, const auto& q) { return p.first == q.first; });
    };
    if (!same_keys(a, b) || !same_keys(a, c))
        throw Error(ErrorKind::CoverageMismatch, "annotation sets cover different record ids");

    AggregatedLabels out;
    long unanimous = 0;
    for (const auto& [id, la] : a) {
        const std::array<int, 3> votes{la, b.at(id), c.at(id)};
        for (int v : votes) {
            if (v < -1 || v > 1)
                throw Error(ErrorKind::InvalidValue, "label " + std::to_string(v) + " for '" + id + "' is not -1, 0 or 1");
        }
        int label = 0;
        if (votes[0] == votes[1] || votes[0] == votes[2]) {
            label = votes[0];
        } else if (votes[1] == votes[2]) {
            label = votes[1];
        } else {
            // All three differ, so the votes are exactly {-1, 0, 1}.
            auto rng = detail::keyed_rng(seed, fnv1a64(id));
            label = static_cast<int>(rng() % 3) - 1;
        }
        if (votes[0] == votes[1] && votes[1] == votes[2]) ++unanimous;
        out.labels[id] = label;
    }
    out.agreement_percent = a.empty() ? 100.0 : 100.0 * static_cast<double>(unanimous) / static_cast<double>(a.size());
    return out;
}

} // namespace sasrate

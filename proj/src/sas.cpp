#include "sasrate/sas.hpp"

#include "rng.hpp"
#include "sasrate/datagen.hpp"
#include "sasrate/error.hpp"
#include "sasrate/io.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <random>

namespace sasrate {

namespace {

bool is_token_byte(unsigned char c) { return std::isalnum(c) || c >= 0x80; }

std::vector<ScoredRecord> sorted(std::vector<ScoredRecord> out) {
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.record_id < b.record_id; });
    return out;
}

class InProcessScorer final : public Scorer {
public:
    InProcessScorer(SasDescriptor d, const ScoringContext& ctx) : Scorer(std::move(d)), ctx_(ctx) {}

    std::vector<ScoredRecord> score_batch(std::span<const ScoreRequest> requests) override {
        std::vector<ScoredRecord> out;
        out.reserve(requests.size());
        for (const auto& r : requests) out.push_back({r.id, descriptor().sas_id, score(descriptor(), r.text, ctx_)});
        return sorted(std::move(out));
    }

private:
    ScoringContext ctx_;
};

class WorkerScorer final : public Scorer {
public:
    WorkerScorer(SasDescriptor d, WorkerOptions options) : Scorer(std::move(d)), options_(options) {}

    std::vector<ScoredRecord> score_batch(std::span<const ScoreRequest> requests) override {
        return score_worker(descriptor().config.at("command"), requests, descriptor().sas_id, options_);
    }

private:
    WorkerOptions options_;
};

class HttpScorer final : public Scorer {
public:
    HttpScorer(SasDescriptor d, HttpOptions options) : Scorer(std::move(d)), options_(options) {}

    std::vector<ScoredRecord> score_batch(std::span<const ScoreRequest> requests) override {
        return score_http(descriptor().config.at("endpoint"), requests, descriptor().sas_id, options_);
    }

private:
    HttpOptions options_;
};

// Human labels are looked up by record id; the text is not consulted.
class LabelScorer final : public Scorer {
public:
    explicit LabelScorer(SasDescriptor d) : Scorer(std::move(d)), labels_(read_label_file(descriptor().config.at("file"))) {}

    std::vector<ScoredRecord> score_batch(std::span<const ScoreRequest> requests) override {
        std::vector<ScoredRecord> out;
        out.reserve(requests.size());
        for (const auto& r : requests) {
            auto it = labels_.find(r.id);
            if (it == labels_.end())
                throw Error(ErrorKind::CoverageMismatch, "no label for record '" + r.id + "'");
            out.push_back({r.id, descriptor().sas_id, SentimentScore(it->second)});
        }
        return sorted(std::move(out));
    }

private:
    std::map<std::string, double> labels_;
};

} // namespace

std::string_view to_string(SasKind kind) {
    switch (kind) {
        case SasKind::BiasedFemale: return "BiasedFemale";
        case SasKind::Random: return "Random";
        case SasKind::Lexicon: return "Lexicon";
        case SasKind::ExternalWorker: return "ExternalWorker";
        case SasKind::ExternalHttp: return "ExternalHttp";
        case SasKind::Labels: return "Labels";
    }
    return "?";
}

SasDescriptor parse_sas_spec(std::string_view spec) {
    SasDescriptor d;
    std::string_view body = spec;
    const auto eq = spec.find('=');
    const auto colon = spec.find(':');
    if (eq != std::string_view::npos && (colon == std::string_view::npos || eq < colon)) {
        d.sas_id = std::string(spec.substr(0, eq));
        body = spec.substr(eq + 1);
        if (d.sas_id.empty()) throw Error(ErrorKind::InvalidValue, "empty SAS name in '" + std::string(spec) + "'");
    } else {
        d.sas_id = std::string(spec);
    }

    auto rest_after = [&](std::string_view prefix) -> std::optional<std::string> {
        if (body.starts_with(prefix)) return std::string(body.substr(prefix.size()));
        return std::nullopt;
    };

    if (body == "builtin:biased") {
        d.kind = SasKind::BiasedFemale;
    } else if (auto seed = rest_after("builtin:random:")) {
        d.kind = SasKind::Random;
        d.config["seed"] = *seed;
    } else if (body == "builtin:lexicon") {
        d.kind = SasKind::Lexicon;
    } else if (auto path = rest_after("builtin:lexicon:")) {
        d.kind = SasKind::Lexicon;
        d.config["lexicon"] = *path;
    } else if (auto cmd = rest_after("worker:")) {
        d.kind = SasKind::ExternalWorker;
        d.config["command"] = *cmd;
    } else if (auto url = rest_after("http:")) {
        d.kind = SasKind::ExternalHttp;
        // "http:http://host:port" and "http://host:port" both work.
        d.config["endpoint"] = url->starts_with("//") ? "http:" + *url : *url;
    } else if (auto file = rest_after("labels:")) {
        d.kind = SasKind::Labels;
        d.config["file"] = *file;
    } else {
        throw Error(ErrorKind::InvalidValue, "unrecognized SAS spec '" + std::string(spec) + "'");
    }
    validate_descriptor(d);
    return d;
}

void validate_descriptor(const SasDescriptor& sas) {
    auto need = [&](const char* key) {
        auto it = sas.config.find(key);
        if (it == sas.config.end() || it->second.empty())
            throw Error(ErrorKind::InvalidValue, "SAS '" + sas.sas_id + "' requires '" + key + "'");
    };
    if (sas.sas_id.empty()) throw Error(ErrorKind::InvalidValue, "SAS id is empty");
    switch (sas.kind) {
        case SasKind::Random: {
            need("seed");
            const auto& s = sas.config.at("seed");
            if (!std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c); }))
                throw Error(ErrorKind::InvalidValue, "random SAS seed must be a non-negative integer");
            break;
        }
        case SasKind::ExternalWorker: need("command"); break;
        case SasKind::ExternalHttp: need("endpoint"); break;
        case SasKind::Labels: need("file"); break;
        case SasKind::BiasedFemale:
        case SasKind::Lexicon: break;
    }
}

void validate_lexicon(const SentimentLexicon& lexicon) {
    for (const auto& [lexeme, value] : lexicon.entries) {
        if (lexeme.empty() || !std::isfinite(value) || value < -1.0 || value > 1.0)
            throw Error(ErrorKind::InvalidValue, "lexicon entry '" + lexeme + "' must map to a value in [-1, 1]");
    }
    for (const auto& m : lexicon.female_markers) {
        if (m.empty() || std::any_of(m.begin(), m.end(), [](unsigned char c) { return std::isupper(c); }))
            throw Error(ErrorKind::InvalidValue, "female marker '" + m + "' must be a lowercase token");
    }
}

SentimentLexicon default_lexicon() {
    SentimentLexicon lex;
    lex.entries = {
        {"grim", -0.5},       {"depressing", -0.6}, {"happy", 0.8},      {"glad", 0.5},
        {"angry", -0.5},      {"furious", -0.7},    {"irritated", -0.4}, {"annoyed", -0.4},
        {"sad", -0.5},        {"depressed", -0.6},  {"miserable", -0.7}, {"devastated", -0.8},
        {"scared", -0.5},     {"terrified", -0.8},  {"anxious", -0.3},   {"ecstatic", 0.9},
        {"excited", 0.6},     {"relieved", 0.4},    {"good", 0.7},       {"great", 0.8},
        {"nice", 0.6},        {"awesome", 1.0},     {"wonderful", 1.0},  {"love", 0.5},
        {"thanks", 0.2},      {"thank", 0.2},       {"helpful", 0.5},    {"useful", 0.3},
        {"cool", 0.35},       {"easy", 0.43},       {"fine", 0.4},       {"bad", -0.7},
        {"terrible", -1.0},   {"awful", -1.0},      {"hate", -0.8},      {"wrong", -0.5},
        {"sorry", -0.5},      {"confused", -0.4},   {"hard", -0.29},     {"stuck", -0.3},
    };
    const auto markers = female_markers(default_generator_config());
    lex.female_markers = {markers.begin(), markers.end()};
    return lex;
}

SentimentLexicon lexicon_from_json(const std::string& json_text) {
    SentimentLexicon lex;
    try {
        const Json j = Json::parse(json_text);
        lex.entries = j.at("entries").get<std::map<std::string, double>>();
        if (j.contains("female_markers")) {
            const auto markers = j.at("female_markers").get<std::vector<std::string>>();
            lex.female_markers = {markers.begin(), markers.end()};
        }
    } catch (const Json::exception& e) {
        throw Error(ErrorKind::SchemaError, std::string("lexicon: ") + e.what());
    }
    validate_lexicon(lex);
    return lex;
}

std::string lexicon_to_json(const SentimentLexicon& lexicon) {
    Json j{{"entries", lexicon.entries}, {"female_markers", lexicon.female_markers}};
    return j.dump(2) + "\n";
}

std::vector<std::string> tokenize(std::string_view text) {
    std::vector<std::string> tokens;
    std::string current;
    for (unsigned char c : text) {
        if (is_token_byte(c)) {
            current += static_cast<char>(c < 0x80 ? std::tolower(c) : c);
        } else if (!current.empty()) {
            tokens.push_back(std::move(current));
            current.clear();
        }
    }
    if (!current.empty()) tokens.push_back(std::move(current));
    return tokens;
}

double biased_female_score(std::string_view text, const std::set<std::string>& female_markers) {
    for (const auto& token : tokenize(text)) {
        if (female_markers.contains(token)) return 1.0;
    }
    return -1.0;
}

double random_score(std::uint64_t seed, std::string_view text) {
    auto engine = detail::keyed_rng(seed, fnv1a64(text));
    return 2.0 * detail::unit_draw(engine) - 1.0;
}

double lexicon_score(std::string_view text, const std::map<std::string, double>& entries) {
    double sum = 0.0;
    std::size_t matched = 0;
    for (const auto& token : tokenize(text)) {
        auto it = entries.find(token);
        if (it == entries.end()) continue;
        sum += it->second;
        ++matched;
    }
    return matched == 0 ? 0.0 : sum / static_cast<double>(matched);
}

SentimentScore score(const SasDescriptor& sas, std::string_view text, const ScoringContext& ctx) {
    if (text.empty()) throw Error(ErrorKind::InvalidValue, "cannot score empty text");
    switch (sas.kind) {
        case SasKind::BiasedFemale:
            return SentimentScore(biased_female_score(text, ctx.lexicon.female_markers));
        case SasKind::Random:
            return SentimentScore(random_score(std::stoull(sas.config.at("seed")), text));
        case SasKind::Lexicon: {
            auto it = sas.config.find("lexicon");
            if (it == sas.config.end()) return SentimentScore(lexicon_score(text, ctx.lexicon.entries));
            const auto lex = lexicon_from_json(read_file(it->second));
            return SentimentScore(lexicon_score(text, lex.entries));
        }
        case SasKind::ExternalWorker:
        case SasKind::ExternalHttp: {
            const ScoreRequest req{"single", std::string(text)};
            const auto out = make_scorer(sas, ctx)->score_batch(std::span(&req, 1));
            return out.front().score;
        }
        case SasKind::Labels:
            throw Error(ErrorKind::InvalidValue, "label SAS '" + sas.sas_id + "' scores by record id, not text");
    }
    throw Error(ErrorKind::InvalidValue, "unknown SAS kind");
}

std::unique_ptr<Scorer> make_scorer(const SasDescriptor& sas, const ScoringContext& ctx) {
    validate_descriptor(sas);
    switch (sas.kind) {
        case SasKind::BiasedFemale:
        case SasKind::Random:
            return std::make_unique<InProcessScorer>(sas, ctx);
        case SasKind::Lexicon: {
            ScoringContext local = ctx;
            if (auto it = sas.config.find("lexicon"); it != sas.config.end()) {
                local.lexicon = lexicon_from_json(read_file(it->second));
            }
            SasDescriptor resolved = sas;
            resolved.config.erase("lexicon");
            auto scorer = std::make_unique<InProcessScorer>(std::move(resolved), local);
            return scorer;
        }
        case SasKind::ExternalWorker: return std::make_unique<WorkerScorer>(sas, ctx.worker);
        case SasKind::ExternalHttp: return std::make_unique<HttpScorer>(sas, ctx.http);
        case SasKind::Labels: return std::make_unique<LabelScorer>(sas);
    }
    throw Error(ErrorKind::InvalidValue, "unknown SAS kind");
}

std::map<std::string, double> read_label_file(const std::string& path) {
    const auto rows = parse_delimited(read_file(path), ',');
    if (rows.empty() || rows.front().fields.size() < 2 || rows.front().fields[0] != "record_id" ||
        rows.front().fields[1] != "label")
        throw Error(ErrorKind::SchemaError, path + ": expected header 'record_id,label'");
    std::map<std::string, double> labels;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const auto& row = rows[i];
        const auto where = path + ":" + std::to_string(row.line);
        if (row.fields.size() != 2) throw Error(ErrorKind::SchemaError, where + ": expected 2 fields");
        const auto& label = row.fields[1];
        double value;
        if (label == "-1") value = -1.0;
        else if (label == "0") value = 0.0;
        else if (label == "1" || label == "+1") value = 1.0;
        else throw Error(ErrorKind::SchemaError, where + ": label must be -1, 0 or +1");
        if (!labels.emplace(row.fields[0], value).second)
            throw Error(ErrorKind::SchemaError, where + ": duplicate record_id '" + row.fields[0] + "'");
    }
    return labels;
}

} // namespace sasrate

#pragma once

// Sentiment analysis systems behind one scoring interface. Built-in systems
// score in-process; external systems are reached through a line-delimited
// JSON worker process or an HTTP endpoint.

#include "sasrate/core.hpp"

#include <chrono>
#include <cstdint>
#include <map>
#include <memory>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace sasrate {

enum class SasKind { BiasedFemale, Random, Lexicon, ExternalWorker, ExternalHttp, Labels };

std::string_view to_string(SasKind kind);

struct SasDescriptor {
    std::string sas_id;
    SasKind kind = SasKind::Lexicon;
    // seed (Random), lexicon (Lexicon, optional path), command (ExternalWorker),
    // endpoint (ExternalHttp), file (Labels).
    std::map<std::string, std::string> config;

    friend bool operator==(const SasDescriptor&, const SasDescriptor&) = default;
};

// Parses "[name=]builtin:biased", "builtin:random:SEED", "builtin:lexicon[:PATH]",
// "worker:CMD", "http:URL" or "labels:FILE". Without a name the sas_id is the
// spec string itself.
SasDescriptor parse_sas_spec(std::string_view spec);

// Throws Error(InvalidValue) when a kind lacks its required config entry.
void validate_descriptor(const SasDescriptor& sas);

struct SentimentLexicon {
    std::map<std::string, double> entries;
    std::set<std::string> female_markers;
};

void validate_lexicon(const SentimentLexicon& lexicon);

// Emotion words of the template corpus plus common chat vocabulary; female
// markers come from the default generator config.
SentimentLexicon default_lexicon();
SentimentLexicon lexicon_from_json(const std::string& json_text);
std::string lexicon_to_json(const SentimentLexicon& lexicon);

// Lowercase, split on anything that is not an ASCII letter or digit.
// Bytes >= 0x80 stay inside tokens so UTF-8 words are not split.
std::vector<std::string> tokenize(std::string_view text);

struct ScoreRequest {
    std::string id;
    std::string text;
};

struct WorkerOptions {
    std::size_t max_in_flight = 8;
    std::chrono::milliseconds timeout{30000};
};

struct HttpOptions {
    std::size_t max_in_flight = 8;
    std::chrono::milliseconds timeout{30000};
    int attempts = 3;
    std::chrono::milliseconds backoff{200};
};

// Shared state the scorers draw on.
struct ScoringContext {
    SentimentLexicon lexicon = default_lexicon();
    WorkerOptions worker;
    HttpOptions http;
};

double biased_female_score(std::string_view text, const std::set<std::string>& female_markers);
double random_score(std::uint64_t seed, std::string_view text);
double lexicon_score(std::string_view text, const std::map<std::string, double>& entries);

// Scores one text. External kinds run a single-request exchange; Labels has
// no text form and throws Error(InvalidValue).
SentimentScore score(const SasDescriptor& sas, std::string_view text, const ScoringContext& ctx);

class Scorer {
public:
    virtual ~Scorer() = default;

    // One result per request, ordered by record_id.
    virtual std::vector<ScoredRecord> score_batch(std::span<const ScoreRequest> requests) = 0;

    const SasDescriptor& descriptor() const noexcept { return descriptor_; }

protected:
    explicit Scorer(SasDescriptor descriptor) : descriptor_(std::move(descriptor)) {}

private:
    SasDescriptor descriptor_;
};

std::unique_ptr<Scorer> make_scorer(const SasDescriptor& sas, const ScoringContext& ctx);

// Runs `command` through /bin/sh and exchanges {"id","text"} / {"id","score"}
// lines with it over stdin/stdout.
std::vector<ScoredRecord> score_worker(const std::string& command, std::span<const ScoreRequest> requests,
                                       const std::string& sas_id, const WorkerOptions& options = {});

// POSTs each request to <endpoint>/score.
std::vector<ScoredRecord> score_http(const std::string& endpoint, std::span<const ScoreRequest> requests,
                                     const std::string& sas_id, const HttpOptions& options = {});

// Annotation CSV (record_id,label) as a score table.
std::map<std::string, double> read_label_file(const std::string& path);

} // namespace sasrate

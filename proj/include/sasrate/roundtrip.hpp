#pragma once

// Round-trip translation (English -> pivot -> English) of whole datasets
// through a pluggable translator with a persistent cache.

#include "sasrate/core.hpp"
#include "sasrate/io.hpp"
#include "sasrate/rating.hpp"

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace sasrate {

inline constexpr std::string_view kSourceLanguage = "en";

// Implementations must be safe to call from several threads at once.
class TranslatorClient {
public:
    virtual ~TranslatorClient() = default;
    // Cache namespace; two clients with equal ids must translate identically.
    virtual std::string engine_id() const = 0;
    virtual std::string translate(const std::string& text, const std::string& src, const std::string& dst) const = 0;
};

class IdentityTranslator final : public TranslatorClient {
public:
    std::string engine_id() const override { return "identity"; }
    std::string translate(const std::string& text, const std::string&, const std::string&) const override {
        return text;
    }
};

struct MockTranslatorOptions {
    // Applied on the leg leaving English; the return leg is the identity.
    std::map<std::string, std::string> synonyms;
    double stopword_drop_rate = 0.0;
    std::uint64_t seed = 0;
};

// Word-wise synonym substitution (capitalisation of the first letter kept)
// and seeded stopword dropping. Drop decisions come from a stream keyed by
// the seed and the text, so output does not depend on call order.
class MockTranslator final : public TranslatorClient {
public:
    explicit MockTranslator(MockTranslatorOptions options);
    std::string engine_id() const override;
    std::string translate(const std::string& text, const std::string& src, const std::string& dst) const override;

private:
    MockTranslatorOptions options_;
};

// {"synonyms": {...}, "stopword_drop_rate": r, "seed": s}; every key optional.
MockTranslatorOptions mock_options_from_json(const std::string& json_text);

struct HttpTranslatorOptions {
    std::string endpoint;
    // Name of the environment variable holding the API key; sent as a bearer
    // token when set.
    std::string key_env = "SASRATE_TRANSLATOR_KEY";
    int attempts = 3;
    std::chrono::milliseconds backoff{200};
    std::chrono::milliseconds timeout{30000};
};

// POST <endpoint>/translate {"text","src","dst"} -> {"text"}. Throws
// TranslatorUnavailable once the retry budget is spent.
class HttpTranslator final : public TranslatorClient {
public:
    explicit HttpTranslator(HttpTranslatorOptions options);
    std::string engine_id() const override;
    std::string translate(const std::string& text, const std::string& src, const std::string& dst) const override;

private:
    HttpTranslatorOptions options_;
};

// Append-only JSON Lines map (engine, src, dst, sha256(text)) -> text. The
// first value stored under a key wins. Without a path the cache lives in
// memory only.
class TranslationCache {
public:
    TranslationCache() = default;
    explicit TranslationCache(std::filesystem::path path);

    std::optional<std::string> lookup(const std::string& engine, const std::string& src, const std::string& dst,
                                      const std::string& text) const;
    // Returns the cached value, which is `translated` unless the key was
    // already present.
    std::string store(const std::string& engine, const std::string& src, const std::string& dst,
                      const std::string& text, const std::string& translated);
    std::size_t size() const;

private:
    static std::string key(const std::string& engine, const std::string& src, const std::string& dst,
                           const std::string& text);

    std::optional<std::filesystem::path> path_;
    std::map<std::string, std::string> entries_;
    mutable std::mutex mutex_;
};

// Throws UnsupportedLanguage when the pivot is empty, malformed or English.
void check_pivot(const std::string& pivot);

std::string round_trip(const std::string& text, const std::string& pivot, const TranslatorClient& client,
                       TranslationCache& cache);

// "HD1" + "da" -> "HD1-RD", "es" -> "-RS"; other pivots use the upper-cased
// tag, e.g. "-RFR".
std::string roundtrip_dataset_id(const std::string& dataset_id, const std::string& pivot);

// Same records and metadata with translated text. Records whose proxy prefix
// did not survive translation get prefix_lost set. Translation runs on up to
// `parallelism` threads; output keeps the input record order.
Dataset round_trip_dataset(const Dataset& ds, const std::string& pivot, const TranslatorClient& client,
                           TranslationCache& cache, std::size_t parallelism = 4);

struct BiasDelta {
    std::string row;
    std::string sas_id;
    RawScore before = RawScore::undefined();
    RawScore after = RawScore::undefined();
    // Both nullopt when either side is Undefined; percent also when before is 0.
    std::optional<double> delta;
    std::optional<double> percent_change;
    std::string direction; // "increase", "decrease", "unchanged" or "undefined"
};

// Pairs rows by key and systems by id. Throws MismatchedReports when the two
// reports disagree on rows or systems.
std::vector<BiasDelta> compare_bias(const Json& original_report, const Json& roundtrip_report);
Json deltas_to_json(const std::vector<BiasDelta>& deltas);
std::string deltas_to_markdown(const std::vector<BiasDelta>& deltas);

} // namespace sasrate

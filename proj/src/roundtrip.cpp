#include "sasrate/roundtrip.hpp"

#include "http_util.hpp"
#include "rng.hpp"
#include "sasrate/error.hpp"
#include "sasrate/ingest.hpp"
#include "sasrate/report.hpp"

#include <httplib.h>

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cstdlib>
#include <cstdio>
#include <fstream>
#include <thread>

namespace sasrate {

namespace {

std::string fixed(double v, int decimals) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
    return buf;
}

bool is_word_byte(unsigned char c) { return std::isalnum(c) || c >= 0x80; }

std::string lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
    return out;
}

std::string cached_translate(const TranslatorClient& client, TranslationCache& cache, const std::string& text,
                             const std::string& src, const std::string& dst) {
    const auto engine = client.engine_id();
    if (auto hit = cache.lookup(engine, src, dst, text)) return *hit;
    return cache.store(engine, src, dst, text, client.translate(text, src, dst));
}

} // namespace

MockTranslator::MockTranslator(MockTranslatorOptions options) : options_(std::move(options)) {
    if (!(options_.stopword_drop_rate >= 0.0 && options_.stopword_drop_rate <= 1.0))
        throw Error(ErrorKind::InvalidValue, "stopword drop rate must lie in [0, 1]");
    for (const auto& [from, to] : options_.synonyms) {
        if (from.empty() || to.empty() || lower(from) != from)
            throw Error(ErrorKind::InvalidValue, "synonym entries must be nonempty lowercase words");
    }
}

std::string MockTranslator::engine_id() const {
    const Json config{{"seed", options_.seed},
                      {"stopword_drop_rate", options_.stopword_drop_rate},
                      {"synonyms", options_.synonyms}};
    return "mock:" + sha256_hex(canonical(config)).substr(0, 16);
}

std::string MockTranslator::translate(const std::string& text, const std::string& src, const std::string& dst) const {
    if (src != kSourceLanguage || dst == kSourceLanguage) return text;

    const auto& stopwords = english_stopwords();
    auto rng = detail::keyed_rng(options_.seed, fnv1a64(text));
    std::string out;
    std::size_t i = 0;
    while (i < text.size()) {
        if (!is_word_byte(static_cast<unsigned char>(text[i]))) {
            out.push_back(text[i++]);
            continue;
        }
        std::size_t j = i;
        while (j < text.size() && is_word_byte(static_cast<unsigned char>(text[j]))) ++j;
        const std::string word = text.substr(i, j - i);
        const std::string key = lower(word);
        i = j;

        if (options_.stopword_drop_rate > 0.0 && stopwords.contains(key) &&
            detail::unit_draw(rng) < options_.stopword_drop_rate) {
            if (i < text.size() && text[i] == ' ') ++i;
            else if (!out.empty() && out.back() == ' ') out.pop_back();
            continue;
        }
        auto it = options_.synonyms.find(key);
        if (it == options_.synonyms.end()) {
            out += word;
            continue;
        }
        std::string replacement = it->second;
        if (std::isupper(static_cast<unsigned char>(word.front())))
            replacement.front() = static_cast<char>(std::toupper(static_cast<unsigned char>(replacement.front())));
        out += replacement;
    }
    return out;
}

MockTranslatorOptions mock_options_from_json(const std::string& json_text) {
    MockTranslatorOptions options;
    try {
        const auto j = Json::parse(json_text);
        if (!j.is_object()) throw Error(ErrorKind::SchemaError, "mock translator config must be a JSON object");
        if (j.contains("synonyms")) options.synonyms = j.at("synonyms").get<std::map<std::string, std::string>>();
        if (j.contains("stopword_drop_rate")) options.stopword_drop_rate = j.at("stopword_drop_rate").get<double>();
        if (j.contains("seed")) options.seed = j.at("seed").get<std::uint64_t>();
    } catch (const Json::exception& e) {
        throw Error(ErrorKind::SchemaError, std::string("mock translator config: ") + e.what());
    }
    return options;
}

HttpTranslator::HttpTranslator(HttpTranslatorOptions options) : options_(std::move(options)) {
    detail::split_url(options_.endpoint, "/translate");
}

std::string HttpTranslator::engine_id() const { return "http:" + options_.endpoint; }

std::string HttpTranslator::translate(const std::string& text, const std::string& src, const std::string& dst) const {
    const auto url = detail::split_url(options_.endpoint, "/translate");
    httplib::Client client(url.base);
    const auto secs = std::chrono::duration_cast<std::chrono::seconds>(options_.timeout);
    const auto usecs = std::chrono::duration_cast<std::chrono::microseconds>(options_.timeout - secs);
    client.set_connection_timeout(secs.count(), usecs.count());
    client.set_read_timeout(secs.count(), usecs.count());
    httplib::Headers headers;
    if (const char* key = std::getenv(options_.key_env.c_str()); key && *key)
        headers.emplace("Authorization", std::string("Bearer ") + key);

    const std::string body = Json{{"dst", dst}, {"src", src}, {"text", text}}.dump();
    const int attempts = std::max(1, options_.attempts);
    std::string last_failure;
    for (int attempt = 1; attempt <= attempts; ++attempt) {
        auto res = client.Post(url.path, headers, body, "application/json");
        if (!res) {
            last_failure = "request failed (" + httplib::to_string(res.error()) + ")";
        } else if (res->status == 200) {
            try {
                const auto reply = Json::parse(res->body);
                return reply.at("text").get<std::string>();
            } catch (const Json::exception&) {
                throw Error(ErrorKind::TranslatorUnavailable, options_.endpoint + " returned a malformed reply");
            }
        } else if (res->status >= 500) {
            last_failure = "HTTP " + std::to_string(res->status);
        } else {
            throw Error(ErrorKind::TranslatorUnavailable,
                        options_.endpoint + " answered HTTP " + std::to_string(res->status));
        }
        if (attempt < attempts) detail::backoff_sleep(options_.backoff, attempt);
    }
    throw Error(ErrorKind::TranslatorUnavailable,
                options_.endpoint + ": " + last_failure + " after " + std::to_string(attempts) + " attempt(s)");
}

TranslationCache::TranslationCache(std::filesystem::path path) : path_(std::move(path)) {
    if (!std::filesystem::exists(*path_)) return;
    const auto content = read_file(*path_);
    std::size_t line = 0;
    std::size_t pos = 0;
    while (pos < content.size()) {
        auto end = content.find('\n', pos);
        if (end == std::string::npos) end = content.size();
        ++line;
        const auto text = content.substr(pos, end - pos);
        pos = end + 1;
        if (text.empty()) continue;
        try {
            const auto j = Json::parse(text);
            const auto k = j.at("engine").get<std::string>() + '\x1f' + j.at("src").get<std::string>() + '\x1f' +
                           j.at("dst").get<std::string>() + '\x1f' + j.at("sha256").get<std::string>();
            entries_.emplace(k, j.at("text").get<std::string>());
        } catch (const Json::exception&) {
            throw Error(ErrorKind::SchemaError, path_->string() + ":" + std::to_string(line) + ": bad cache entry");
        }
    }
}

std::string TranslationCache::key(const std::string& engine, const std::string& src, const std::string& dst,
                                  const std::string& text) {
    return engine + '\x1f' + src + '\x1f' + dst + '\x1f' + sha256_hex(text);
}

std::optional<std::string> TranslationCache::lookup(const std::string& engine, const std::string& src,
                                                    const std::string& dst, const std::string& text) const {
    const auto k = key(engine, src, dst, text);
    std::lock_guard lock(mutex_);
    auto it = entries_.find(k);
    if (it == entries_.end()) return std::nullopt;
    return it->second;
}

std::string TranslationCache::store(const std::string& engine, const std::string& src, const std::string& dst,
                                    const std::string& text, const std::string& translated) {
    const auto hash = sha256_hex(text);
    const auto k = engine + '\x1f' + src + '\x1f' + dst + '\x1f' + hash;
    std::lock_guard lock(mutex_);
    auto [it, inserted] = entries_.emplace(k, translated);
    if (!inserted || !path_) return it->second;

    if (path_->has_parent_path()) std::filesystem::create_directories(path_->parent_path());
    std::ofstream out(*path_, std::ios::app | std::ios::binary);
    out << Json{{"dst", dst}, {"engine", engine}, {"sha256", hash}, {"src", src}, {"text", translated}}.dump() << '\n';
    out.flush();
    if (!out) throw Error(ErrorKind::IoError, "cannot append to translation cache " + path_->string());
    return it->second;
}

std::size_t TranslationCache::size() const {
    std::lock_guard lock(mutex_);
    return entries_.size();
}

void check_pivot(const std::string& pivot) {
    const bool well_formed =
        !pivot.empty() && std::all_of(pivot.begin(), pivot.end(), [](unsigned char c) { return std::isalpha(c) || c == '-'; });
    if (!well_formed) throw Error(ErrorKind::UnsupportedLanguage, "pivot language '" + pivot + "' is not a language tag");
    const auto tag = lower(pivot);
    if (tag == kSourceLanguage || tag.starts_with("en-"))
        throw Error(ErrorKind::UnsupportedLanguage, "pivot language '" + pivot + "' equals the source language");
}

std::string round_trip(const std::string& text, const std::string& pivot, const TranslatorClient& client,
                       TranslationCache& cache) {
    check_pivot(pivot);
    const std::string src(kSourceLanguage);
    const auto there = cached_translate(client, cache, text, src, pivot);
    return cached_translate(client, cache, there, pivot, src);
}

std::string roundtrip_dataset_id(const std::string& dataset_id, const std::string& pivot) {
    check_pivot(pivot);
    const auto tag = lower(pivot);
    std::string suffix = "R";
    if (tag == "da") suffix += "D";
    else if (tag == "es") suffix += "S";
    else
        for (unsigned char c : tag) suffix.push_back(static_cast<char>(std::toupper(c)));
    return dataset_id + "-" + suffix;
}

Dataset round_trip_dataset(const Dataset& ds, const std::string& pivot, const TranslatorClient& client,
                           TranslationCache& cache, std::size_t parallelism) {
    Dataset out = ds;
    out.dataset_id = roundtrip_dataset_id(ds.dataset_id, pivot);
    out.provenance = Provenance{ds.dataset_id, pivot, client.engine_id()};

    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::mutex error_mutex;
    std::exception_ptr error;
    auto run = [&] {
        try {
            for (std::size_t i = next++; i < out.records.size() && !failed; i = next++) {
                auto& r = out.records[i];
                r.text = round_trip(r.text, pivot, client, cache);
                r.dataset_id = out.dataset_id;
                if (!r.enhancement.empty() && !r.text.starts_with(r.enhancement)) r.prefix_lost = true;
            }
        } catch (...) {
            std::lock_guard lock(error_mutex);
            if (!error) error = std::current_exception();
            failed = true;
        }
    };
    const std::size_t threads = std::min(std::max<std::size_t>(1, parallelism), std::max<std::size_t>(1, out.records.size()));
    std::vector<std::thread> pool;
    for (std::size_t t = 1; t < threads; ++t) pool.emplace_back(run);
    run();
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
    return out;
}

std::vector<BiasDelta> compare_bias(const Json& original_report, const Json& roundtrip_report) {
    const auto before = raw_rows_from_report(original_report);
    const auto after = raw_rows_from_report(roundtrip_report);
    if (before.size() != after.size())
        throw Error(ErrorKind::MismatchedReports, "reports have " + std::to_string(before.size()) + " and " +
                                                      std::to_string(after.size()) + " rows");

    std::vector<BiasDelta> deltas;
    for (const auto& row : before) {
        auto match = std::find_if(after.begin(), after.end(), [&](const RawRow& r) { return r.key == row.key; });
        if (match == after.end())
            throw Error(ErrorKind::MismatchedReports, "row '" + row.key + "' missing from the round-trip report");
        if (match->raw.size() != row.raw.size())
            throw Error(ErrorKind::MismatchedReports, "row '" + row.key + "' rates different systems");
        for (const auto& sys : row.raw) {
            auto other = std::find_if(match->raw.begin(), match->raw.end(),
                                      [&](const RatedSystem& s) { return s.sas_id == sys.sas_id; });
            if (other == match->raw.end())
                throw Error(ErrorKind::MismatchedReports,
                            "system '" + sys.sas_id + "' missing from round-trip row '" + row.key + "'");
            if (!sys.raw.is_undefined() && !other->raw.is_undefined() && sys.raw.kind() != other->raw.kind())
                throw Error(ErrorKind::MismatchedReports, "row '" + row.key + "' uses different metrics");

            BiasDelta d{row.key, sys.sas_id, sys.raw, other->raw, std::nullopt, std::nullopt, "undefined"};
            if (!sys.raw.is_undefined() && !other->raw.is_undefined()) {
                const double diff = other->raw.value() - sys.raw.value();
                d.delta = diff;
                if (sys.raw.value() != 0.0) d.percent_change = diff / sys.raw.value() * 100.0;
                else if (diff == 0.0) d.percent_change = 0.0;
                d.direction = diff > 0 ? "increase" : diff < 0 ? "decrease" : "unchanged";
            }
            deltas.push_back(std::move(d));
        }
    }
    return deltas;
}

Json deltas_to_json(const std::vector<BiasDelta>& deltas) {
    auto raw = [](const RawScore& r) { return r.is_undefined() ? Json(nullptr) : Json(r.value()); };
    auto opt = [](const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); };
    Json out = Json::array();
    for (const auto& d : deltas) {
        out.push_back({{"row", d.row},
                       {"sas_id", d.sas_id},
                       {"before", raw(d.before)},
                       {"after", raw(d.after)},
                       {"delta", opt(d.delta)},
                       {"percent_change", opt(d.percent_change)},
                       {"direction", d.direction}});
    }
    return out;
}

std::string deltas_to_markdown(const std::vector<BiasDelta>& deltas) {
    std::string out = "| Row | SAS | Before | After | Delta | % change | Direction |\n"
                      "|---|---|---|---|---|---|---|\n";
    for (const auto& d : deltas) {
        const auto delta = d.delta ? fixed(*d.delta, 2) : std::string("Undefined");
        const auto pct = d.percent_change ? fixed(*d.percent_change, 1) + "%" : std::string("Undefined");
        out += "| " + d.row + " | " + d.sas_id + " | " + format_raw(d.before) + " | " + format_raw(d.after) + " | " +
               delta + " | " + pct + " | " + d.direction + " |\n";
    }
    return out;
}

} // namespace sasrate

#include "helpers.hpp"

#include "sasrate/datagen.hpp"
#include "sasrate/ingest.hpp"
#include "sasrate/roundtrip.hpp"

#include <httplib.h>

#include <atomic>
#include <cstdlib>
#include <thread>

using namespace sasrate;

namespace {

// Forwards to another client and counts calls.
class CountingClient final : public TranslatorClient {
public:
    explicit CountingClient(const TranslatorClient& inner) : inner_(inner) {}
    std::string engine_id() const override { return inner_.engine_id(); }
    std::string translate(const std::string& text, const std::string& src, const std::string& dst) const override {
        ++calls;
        return inner_.translate(text, src, dst);
    }
    mutable std::atomic<int> calls{0};

private:
    const TranslatorClient& inner_;
};

MockTranslator grim_to_bleak(double drop = 0.0, std::uint64_t seed = 0) {
    MockTranslatorOptions o;
    o.synonyms = {{"grim", "bleak"}, {"hey", "hi"}};
    o.stopword_drop_rate = drop;
    o.seed = seed;
    return MockTranslator(o);
}

Dataset group_dataset(int group, std::size_t index) {
    const auto config = default_generator_config();
    return generate_group(default_group_spec(group), config.templates, config.names, config.noun_phrases, 3).at(index);
}

Json report_with(const std::string& key, std::initializer_list<std::pair<const char*, Json>> raw,
                 const std::string& kind = "WRS") {
    Json partial = Json::array();
    for (const auto& [id, v] : raw) partial.push_back({{"sas_id", id}, {"raw", v}, {"kind", v.is_null() ? "Undefined" : kind}});
    return Json{{"rows", Json::array({Json{{"key", key}, {"partial_order", partial}}})}};
}

} // namespace

TEST_CASE("mock translator") {
    const auto mock = grim_to_bleak();
    CHECK(mock.translate("I feel grim", "en", "da") == "I feel bleak");
    CHECK(mock.translate("Grim, GRIM.", "en", "da") == "Bleak, Bleak.");
    CHECK(mock.translate("I feel grim", "da", "en") == "I feel grim");
    CHECK(mock.translate("grimace", "en", "da") == "grimace");
    CHECK(mock.translate("caf\xc3\xa9 grim", "en", "es") == "caf\xc3\xa9 bleak");

    const auto dropper = grim_to_bleak(1.0);
    CHECK(dropper.translate("I made the man feel grim.", "en", "da") == "made man feel bleak.");
    const auto a = grim_to_bleak(0.5, 9);
    const auto b = grim_to_bleak(0.5, 9);
    for (const char* s : {"it is what it is", "we are the ones who will be there", "a an the of"})
        CHECK(a.translate(s, "en", "da") == b.translate(s, "en", "da"));

    CHECK(grim_to_bleak().engine_id() == grim_to_bleak().engine_id());
    CHECK(grim_to_bleak().engine_id() != grim_to_bleak(0.5).engine_id());
    CHECK(grim_to_bleak().engine_id().starts_with("mock:"));

    CHECK_KIND(MockTranslator(MockTranslatorOptions{{}, 1.5, 0}), ErrorKind::InvalidValue);
    CHECK_KIND(MockTranslator(MockTranslatorOptions{{{"Grim", "x"}}, 0, 0}), ErrorKind::InvalidValue);

    const auto opts = mock_options_from_json(R"({"synonyms": {"grim": "bleak"}, "stopword_drop_rate": 0.25, "seed": 4})");
    CHECK(opts.synonyms.at("grim") == "bleak");
    CHECK(opts.stopword_drop_rate == 0.25);
    CHECK(opts.seed == 4);
    CHECK_KIND(mock_options_from_json("[1]"), ErrorKind::SchemaError);
}

TEST_CASE("pivot languages") {
    CHECK_NOTHROW(check_pivot("da"));
    CHECK_NOTHROW(check_pivot("pt-BR"));
    CHECK_KIND(check_pivot("en"), ErrorKind::UnsupportedLanguage);
    CHECK_KIND(check_pivot("EN"), ErrorKind::UnsupportedLanguage);
    CHECK_KIND(check_pivot("en-GB"), ErrorKind::UnsupportedLanguage);
    CHECK_KIND(check_pivot(""), ErrorKind::UnsupportedLanguage);
    CHECK_KIND(check_pivot("d a"), ErrorKind::UnsupportedLanguage);

    CHECK(roundtrip_dataset_id("HD1", "da") == "HD1-RD");
    CHECK(roundtrip_dataset_id("G1-S1", "es") == "G1-S1-RS");
    CHECK(roundtrip_dataset_id("G1-S1", "fr") == "G1-S1-RFR");
}

TEST_CASE("identity round trip changes only ids and provenance") {
    const auto ds = group_dataset(2, 1);
    TranslationCache cache;
    const auto out = round_trip_dataset(ds, "da", IdentityTranslator{}, cache);
    CHECK(out.dataset_id == "G2-S2-RD");
    REQUIRE(out.provenance.has_value());
    CHECK(out.provenance->source_dataset_id == "G2-S2");
    CHECK(out.provenance->engine == "identity");

    auto normalized = out;
    normalized.dataset_id = ds.dataset_id;
    normalized.provenance.reset();
    for (auto& r : normalized.records) r.dataset_id = ds.dataset_id;
    CHECK(normalized == ds);
}

TEST_CASE("cache makes a warm run free and transparent") {
    TempDir dir;
    const auto ds = group_dataset(1, 3);
    const auto mock = grim_to_bleak(0.3, 5);

    CountingClient cold_client(mock);
    Dataset cold;
    {
        TranslationCache cache(dir / "cache.jsonl");
        cold = round_trip_dataset(ds, "es", cold_client, cache);
        CHECK(cache.size() > 0);
    }
    CHECK(cold_client.calls > 0);

    CountingClient warm_client(mock);
    TranslationCache warm_cache(dir / "cache.jsonl");
    const auto warm = round_trip_dataset(ds, "es", warm_client, warm_cache);
    CHECK(warm_client.calls == 0);
    CHECK(warm == cold);

    TranslationCache none;
    CHECK(round_trip_dataset(ds, "es", mock, none) == cold);
    CHECK(round_trip_dataset(ds, "es", mock, none, 1) == cold);

    bool any_bleak = false;
    for (const auto& r : cold.records) any_bleak = any_bleak || r.text.find("bleak") != std::string::npos;
    CHECK(any_bleak);
}

TEST_CASE("cache entries are write-once") {
    TempDir dir;
    {
        TranslationCache cache(dir / "c.jsonl");
        CHECK(cache.store("e", "en", "da", "hello", "hej") == "hej");
        CHECK(cache.store("e", "en", "da", "hello", "goddag") == "hej");
        CHECK(cache.store("e", "en", "es", "hello", "hola") == "hola");
        CHECK(cache.size() == 2);
    }
    TranslationCache reloaded(dir / "c.jsonl");
    CHECK(reloaded.size() == 2);
    CHECK(reloaded.lookup("e", "en", "da", "hello") == std::optional<std::string>("hej"));
    CHECK_FALSE(reloaded.lookup("other", "en", "da", "hello").has_value());

    write_file_atomic(dir / "bad.jsonl", "{\"not\": \"an entry\"}\n");
    CHECK_KIND(TranslationCache(dir / "bad.jsonl"), ErrorKind::SchemaError);
}

TEST_CASE("lost proxy prefixes are flagged") {
    const std::vector<ConversationRow> rows{{1, 1, "solve cross", "", "solve cross", GenderClass::Male, 0},
                                            {1, 0, "sure", "", "sure", GenderClass::Male, 0}};
    const auto datasets = conversation_datasets(preprocess(rows, {}), "HD1");
    REQUIRE(datasets.size() == 1);
    TranslationCache cache;
    const auto out = round_trip_dataset(datasets[0], "da", grim_to_bleak(), cache);
    CHECK(out.records[0].text == "Hi boy, solve cross");
    CHECK(out.records[0].prefix_lost);
    CHECK_FALSE(out.records[1].prefix_lost);
    CHECK_NOTHROW(validate_dataset(out));
    const auto kept = round_trip_dataset(datasets[0], "da", IdentityTranslator{}, cache);
    CHECK_FALSE(kept.records[0].prefix_lost);
}

namespace {

class TranslateServer {
public:
    explicit TranslateServer(httplib::Server::Handler handler) {
        server_.Post("/translate", std::move(handler));
        port_ = server_.bind_to_any_port("127.0.0.1");
        thread_ = std::thread([this] { server_.listen_after_bind(); });
        server_.wait_until_ready();
    }
    ~TranslateServer() {
        server_.stop();
        thread_.join();
    }
    std::string endpoint() const { return "http://127.0.0.1:" + std::to_string(port_); }

private:
    httplib::Server server_;
    int port_ = 0;
    std::thread thread_;
};

HttpTranslatorOptions http_options(const std::string& endpoint) {
    HttpTranslatorOptions o;
    o.endpoint = endpoint;
    o.key_env = "SASRATE_TEST_TRANSLATOR_KEY";
    o.backoff = std::chrono::milliseconds(1);
    o.timeout = std::chrono::milliseconds(2000);
    return o;
}

} // namespace

TEST_CASE("HTTP translator") {
    std::atomic<int> calls{0};
    std::string auth;
    std::mutex auth_mutex;
    TranslateServer server([&](const httplib::Request& req, httplib::Response& res) {
        if (calls++ == 0) {
            res.status = 502;
            return;
        }
        {
            std::lock_guard lock(auth_mutex);
            auth = req.get_header_value("Authorization");
        }
        const auto j = Json::parse(req.body);
        std::string text = j.at("text");
        if (j.at("dst") == "da") text += " [da]";
        res.set_content(Json{{"text", text}}.dump(), "application/json");
    });
    ::setenv("SASRATE_TEST_TRANSLATOR_KEY", "k123", 1);
    const HttpTranslator client(http_options(server.endpoint()));
    CHECK(client.translate("hello", "en", "da") == "hello [da]");
    CHECK(calls == 2);
    CHECK(auth == "Bearer k123");
    ::unsetenv("SASRATE_TEST_TRANSLATOR_KEY");
    TranslationCache cache;
    CHECK(round_trip("hello", "da", client, cache) == "hello [da]");
    CHECK(client.engine_id() == "http:" + server.endpoint());
}

TEST_CASE("HTTP translator failures") {
    SUBCASE("persistent 5xx") {
        std::atomic<int> calls{0};
        TranslateServer server([&](const httplib::Request&, httplib::Response& res) {
            ++calls;
            res.status = 500;
        });
        CHECK_KIND(HttpTranslator(http_options(server.endpoint())).translate("x", "en", "da"),
                   ErrorKind::TranslatorUnavailable);
        CHECK(calls == 3);
    }
    SUBCASE("4xx fails at once") {
        std::atomic<int> calls{0};
        TranslateServer server([&](const httplib::Request&, httplib::Response& res) {
            ++calls;
            res.status = 401;
        });
        CHECK_KIND(HttpTranslator(http_options(server.endpoint())).translate("x", "en", "da"),
                   ErrorKind::TranslatorUnavailable);
        CHECK(calls == 1);
    }
    SUBCASE("malformed reply") {
        TranslateServer server([&](const httplib::Request&, httplib::Response& res) {
            res.set_content("{\"txt\": 1}", "application/json");
        });
        CHECK_KIND(HttpTranslator(http_options(server.endpoint())).translate("x", "en", "da"),
                   ErrorKind::TranslatorUnavailable);
    }
    SUBCASE("unreachable") {
        CHECK_KIND(HttpTranslator(http_options("http://127.0.0.1:1")).translate("x", "en", "da"),
                   ErrorKind::TranslatorUnavailable);
    }
}

TEST_CASE("bias comparison") {
    const auto before = report_with("HD2 User", {{"S_g", 5.9}, {"S_t", 4.6}, {"S_h", 0}, {"S_r", 0}});
    const auto after = report_with("HD2 User", {{"S_g", 1.9}, {"S_t", 4.6}, {"S_h", 1.3}, {"S_r", 0}});
    const auto deltas = compare_bias(before, after);
    REQUIRE(deltas.size() == 4);
    CHECK(deltas[0].sas_id == "S_g");
    CHECK(*deltas[0].percent_change == doctest::Approx(-67.8).epsilon(0.001));
    CHECK(deltas[0].direction == "decrease");
    CHECK(*deltas[1].delta == 0.0);
    CHECK(deltas[1].direction == "unchanged");
    CHECK(*deltas[2].delta == doctest::Approx(1.3));
    CHECK_FALSE(deltas[2].percent_change.has_value());
    CHECK(deltas[2].direction == "increase");
    CHECK(*deltas[3].percent_change == 0.0);

    const auto md = deltas_to_markdown(deltas);
    CHECK(md.find("-67.8%") != std::string::npos);
    const auto j = deltas_to_json(deltas);
    CHECK(j.size() == 4);
    CHECK(j[2].at("percent_change").is_null());

    const auto undef = compare_bias(report_with("Group-4", {{"S_g", 36.36}}, "DIE"),
                                    report_with("Group-4", {{"S_g", nullptr}}, "DIE"));
    CHECK(undef[0].direction == "undefined");
    CHECK_FALSE(undef[0].delta.has_value());
}

TEST_CASE("mismatched reports") {
    const auto base = report_with("Group-1", {{"S_b", 2.4}});
    CHECK_KIND(compare_bias(base, report_with("Group-3_R", {{"S_b", 2.4}})), ErrorKind::MismatchedReports);
    CHECK_KIND(compare_bias(base, report_with("Group-1", {{"S_x", 2.4}})), ErrorKind::MismatchedReports);
    CHECK_KIND(compare_bias(base, report_with("Group-1", {{"S_b", 2.4}, {"S_x", 1}})), ErrorKind::MismatchedReports);
    CHECK_KIND(compare_bias(base, report_with("Group-1", {{"S_b", 2.4}}, "DIE")), ErrorKind::MismatchedReports);
    CHECK_KIND(compare_bias(base, Json{{"rows", Json::array()}}), ErrorKind::MismatchedReports);
    CHECK_KIND(compare_bias(base, Json::object()), ErrorKind::SchemaError);
}

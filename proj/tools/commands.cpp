#include "commands.hpp"

#include "sasrate/bundle.hpp"
#include "sasrate/datagen.hpp"
#include "sasrate/ingest.hpp"
#include "sasrate/io.hpp"
#include "sasrate/report.hpp"
#include "sasrate/roundtrip.hpp"
#include "sasrate/sas.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <optional>

namespace sasrate::cli {

namespace fs = std::filesystem;

namespace {

std::string fixed(double v, int decimals) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
    return buf;
}

// Option defaults from a JSON file: top-level keys apply to every command,
// a section named after the command overrides them. Flags and environment
// variables both take precedence because CLI11 only writes a bound variable
// when one of them supplies a value.
class Defaults {
public:
    Defaults() = default;
    explicit Defaults(Json doc) : doc_(std::move(doc)) {}

    const Json* find(const std::string& command, const std::string& name) const {
        if (doc_.contains(command) && doc_.at(command).is_object() && doc_.at(command).contains(name))
            return &doc_.at(command).at(name);
        if (doc_.contains(name) && !doc_.at(name).is_object()) return &doc_.at(name);
        return nullptr;
    }

private:
    Json doc_ = Json::object();
};

std::optional<std::string> config_path(const std::vector<std::string>& args) {
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size()) return args[i + 1];
        if (args[i].starts_with("--config=")) return args[i].substr(9);
    }
    if (const char* env = std::getenv("SASRATE_CONFIG"); env && *env) return std::string(env);
    return std::nullopt;
}

Defaults load_defaults(const std::vector<std::string>& args) {
    const auto path = config_path(args);
    if (!path) return {};
    Json doc;
    try {
        doc = Json::parse(read_file(*path));
    } catch (const Json::parse_error& e) {
        throw Error(ErrorKind::SchemaError, *path + ": " + e.what());
    }
    if (!doc.is_object()) throw Error(ErrorKind::SchemaError, *path + ": config must be a JSON object");
    return Defaults(std::move(doc));
}

std::string env_name(const std::string& option) {
    std::string out = "SASRATE_";
    for (char c : option) out.push_back(c == '-' ? '_' : static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
    return out;
}

// Binds --name to `var`, seeding it from the config file and the
// SASRATE_<NAME> environment variable.
template <typename T>
CLI::Option* bind_option(CLI::App* app, const Defaults& defaults, const std::string& name, T& var, const std::string& help,
                  bool required = false) {
    bool configured = false;
    if (const Json* v = defaults.find(app->get_name(), name)) {
        try {
            if constexpr (std::is_same_v<T, std::optional<double>>) var = v->get<double>();
            else var = v->get<T>();
        } catch (const Json::exception&) {
            throw Error(ErrorKind::SchemaError, "config value for '" + name + "' has the wrong type");
        }
        configured = true;
    }
    auto* opt = app->add_option("--" + name, var, help)->envname(env_name(name));
    if (required && !configured) opt->required();
    return opt;
}

struct GenerateArgs {
    int group = 0;
    std::string out;
    std::uint64_t seed = 0;
    std::optional<double> skew;
    std::string generator_config;
};

struct EvaluateArgs {
    std::string data;
    std::vector<std::string> sas;
    std::string scores;
    std::string lexicon;
    std::size_t max_in_flight = 8;
    long timeout_ms = 30000;
};

struct RateArgs {
    std::string data;
    std::string scores;
    int levels = 3;
    std::string out;
    std::string label;
    double zero_tol = kDefaultZeroTol;
};

struct RoundtripArgs {
    std::string data;
    std::string via;
    std::string translator = "mock";
    std::string cache;
    std::string out;
    std::string mock_config;
    std::optional<double> drop_rate;
    std::uint64_t seed = 0;
    std::string endpoint;
    std::string key_env = "SASRATE_TRANSLATOR_KEY";
    std::size_t parallelism = 4;
};

struct CompareArgs {
    std::string before;
    std::string after;
    std::string out;
};

struct IngestArgs {
    std::string input;
    std::string format;
    std::string delimiter = ",";
    std::string tag = "HD1";
    std::string out;
    bool keep_na = false;
};

struct AnnotateArgs {
    std::vector<std::string> files;
    std::uint64_t seed = 0;
    std::string out;
};

struct StatsArgs {
    std::string input;
    std::string format;
    std::string delimiter = ",";
    bool preprocess = false;
    bool json = false;
};

ConversationFormat format_for(const std::string& format, const std::string& input) {
    if (!format.empty()) return parse_conversation_format(format);
    return fs::path(input).extension() == ".jsonl" ? ConversationFormat::Jsonl : ConversationFormat::Csv;
}

char delimiter_of(const std::string& d) {
    if (d == "\\t" || d == "tab") return '\t';
    if (d.size() != 1) throw Error(ErrorKind::InvalidValue, "delimiter must be a single character");
    return d.front();
}

int cmd_generate(const GenerateArgs& a, std::ostream& out) {
    GeneratorConfig config =
        a.generator_config.empty() ? default_generator_config() : generator_config_from_json(read_file(a.generator_config));
    if (a.skew) config.skew = *a.skew;
    const auto spec = group_spec_from_config(a.group, config);
    validate_group_spec(spec);
    DatasetBundle bundle;
    bundle.datasets = generate_group(spec, config.templates, config.names, config.noun_phrases, a.seed);
    bundle.sources["generate:group-" + std::to_string(a.group)] = {
        {"group", a.group},
        {"seed", a.seed},
        {"skew", config.skew},
        {"config_sha256", sha256_hex(generator_config_to_json(config))}};
    write_bundle(a.out, bundle);
    std::size_t records = 0;
    for (const auto& ds : bundle.datasets) records += ds.records.size();
    out << "wrote " << bundle.datasets.size() << " datasets (" << records << " records) for Group-" << a.group
        << " to " << a.out << "\n";
    return kOk;
}

int cmd_evaluate(const EvaluateArgs& a, std::ostream& out, std::ostream& err) {
    const auto bundle = read_bundle(a.data);
    const fs::path scores_dir = a.scores.empty() ? fs::path(a.data) / "scores" : fs::path(a.scores);

    ScoringContext ctx;
    if (!a.lexicon.empty()) ctx.lexicon = lexicon_from_json(read_file(a.lexicon));
    ctx.worker.max_in_flight = a.max_in_flight;
    ctx.worker.timeout = std::chrono::milliseconds(a.timeout_ms);
    ctx.http.max_in_flight = a.max_in_flight;
    ctx.http.timeout = std::chrono::milliseconds(a.timeout_ms);

    std::vector<ScoreRequest> requests;
    for (const auto& ds : bundle.datasets) {
        for (const auto& r : ds.records) requests.push_back({r.record_id, r.text});
    }

    std::vector<SasDescriptor> systems;
    for (const auto& spec : a.sas) {
        auto d = parse_sas_spec(spec);
        if (d.kind == SasKind::Lexicon && !a.lexicon.empty() && !d.config.contains("lexicon"))
            d.config["lexicon"] = a.lexicon;
        if (std::any_of(systems.begin(), systems.end(), [&](const SasDescriptor& s) { return s.sas_id == d.sas_id; }))
            throw Error(ErrorKind::InvalidValue, "SAS id '" + d.sas_id + "' given twice");
        systems.push_back(std::move(d));
    }

    int status = kOk;
    for (const auto& sas : systems) {
        try {
            const auto scored = make_scorer(sas, ctx)->score_batch(requests);
            write_system_scores(scores_dir, sas, scored);
            out << "scored " << scored.size() << " records with " << sas.sas_id << "\n";
        } catch (const Error& e) {
            write_system_scores(scores_dir, sas, {}, e.what());
            err << "error: " << sas.sas_id << ": " << e.what() << " (results flagged as failed)\n";
            status = std::max(status, exit_code_for(e.kind()) == kExternal ? int{kExternal} : exit_code_for(e.kind()));
        }
    }
    return status;
}

std::string data_label_for(const std::vector<Dataset>& datasets) {
    const bool synthetic =
        std::all_of(datasets.begin(), datasets.end(), [](const Dataset& ds) { return is_synthetic(ds.group); });
    std::string label = "SD";
    if (!synthetic) {
        std::set<std::string> tags;
        for (const auto& ds : datasets) tags.insert(group_label(ds.group));
        label = std::all_of(tags.begin(), tags.end(), [](const std::string& t) { return t.starts_with("HD"); })
                    ? std::string("HD")
                    : std::string();
        if (label.empty()) {
            for (const auto& t : tags) label += (label.empty() ? "" : "+") + t;
        }
    }
    const auto& first = datasets.front().provenance;
    const bool same_pivot = first && std::all_of(datasets.begin(), datasets.end(), [&](const Dataset& ds) {
                                return ds.provenance && ds.provenance->pivot == first->pivot;
                            });
    return same_pivot ? roundtrip_dataset_id(label, first->pivot) : label;
}

int cmd_rate(const RateArgs& a, std::ostream& out, std::ostream& err) {
    if (a.levels < 2) throw Error(ErrorKind::InvalidLevels, "--levels must be >= 2");
    const auto bundle = read_bundle(a.data);
    const fs::path scores_dir = a.scores.empty() ? fs::path(a.data) / "scores" : fs::path(a.scores);

    RunManifest manifest;
    std::vector<SystemScores> systems;
    for (const auto& entry : read_score_index(scores_dir)) {
        if (!entry.complete) {
            err << "warning: skipping " << entry.sas.sas_id << " (scoring failed: " << entry.error << ")\n";
            manifest.excluded_sas.push_back(entry.sas.sas_id);
            continue;
        }
        systems.push_back(load_system_scores(scores_dir, entry));
    }
    for (const auto& [key, source] : bundle.sources.items()) {
        if (source.is_object() && source.contains("seed")) manifest.seeds[key] = source.at("seed").get<std::uint64_t>();
    }
    manifest.data_label = a.label.empty() ? data_label_for(bundle.datasets) : a.label;

    auto report = rate(bundle.datasets, systems, RateOptions{a.levels, a.zero_tol}, manifest);
    report.manifest.config_hash = manifest_hash(report.manifest);
    const auto markdown = report_to_markdown(report);
    if (a.out.empty()) {
        out << markdown;
        return kOk;
    }
    const fs::path prefix(a.out);
    if (prefix.has_parent_path()) fs::create_directories(prefix.parent_path());
    write_file_atomic(prefix.string() + ".json", report_to_json(report).dump(2) + "\n");
    write_file_atomic(prefix.string() + ".md", markdown);
    out << "wrote " << prefix.string() << ".json and " << prefix.string() << ".md (" << report.rows.size()
        << " rows)\n";
    return kOk;
}

std::unique_ptr<TranslatorClient> make_translator(const RoundtripArgs& a) {
    if (a.translator == "identity") return std::make_unique<IdentityTranslator>();
    if (a.translator == "mock") {
        MockTranslatorOptions options;
        if (!a.mock_config.empty()) options = mock_options_from_json(read_file(a.mock_config));
        if (a.drop_rate) options.stopword_drop_rate = *a.drop_rate;
        if (a.seed != 0) options.seed = a.seed;
        return std::make_unique<MockTranslator>(options);
    }
    if (a.translator == "http") {
        if (a.endpoint.empty()) throw Error(ErrorKind::InvalidValue, "--translator http needs --endpoint");
        HttpTranslatorOptions options;
        options.endpoint = a.endpoint;
        options.key_env = a.key_env;
        return std::make_unique<HttpTranslator>(options);
    }
    throw Error(ErrorKind::InvalidValue, "unknown translator '" + a.translator + "' (mock, http or identity)");
}

int cmd_roundtrip(const RoundtripArgs& a, std::ostream& out) {
    if (a.data.empty() || a.out.empty() || a.via.empty())
        throw Error(ErrorKind::InvalidValue, "roundtrip needs --data, --via and --out");
    check_pivot(a.via);
    const auto translator = make_translator(a);
    const auto bundle = read_bundle(a.data);
    TranslationCache cache = a.cache.empty() ? TranslationCache() : TranslationCache(a.cache);

    DatasetBundle result;
    result.sources = bundle.sources;
    for (const auto& ds : bundle.datasets)
        result.datasets.push_back(round_trip_dataset(ds, a.via, *translator, cache, a.parallelism));
    result.sources["roundtrip:" + a.via] = {{"pivot", a.via}, {"engine", translator->engine_id()}};
    write_bundle(a.out, result);

    std::size_t lost = 0;
    for (const auto& ds : result.datasets)
        lost += static_cast<std::size_t>(std::count_if(ds.records.begin(), ds.records.end(),
                                                       [](const SentenceRecord& r) { return r.prefix_lost; }));
    out << "round-tripped " << result.datasets.size() << " datasets via " << a.via << " with "
        << translator->engine_id() << " to " << a.out;
    if (lost > 0) out << " (" << lost << " records lost their prefix)";
    out << "\n";
    return kOk;
}

Json read_json_file(const std::string& path) {
    try {
        return Json::parse(read_file(path));
    } catch (const Json::parse_error& e) {
        throw Error(ErrorKind::SchemaError, path + ": " + e.what());
    }
}

int cmd_compare(const CompareArgs& a, std::ostream& out) {
    const auto deltas = compare_bias(read_json_file(a.before), read_json_file(a.after));
    if (!a.out.empty()) write_file_atomic(a.out, deltas_to_json(deltas).dump(2) + "\n");
    out << deltas_to_markdown(deltas);
    return kOk;
}

int cmd_ingest(const IngestArgs& a, std::ostream& out) {
    if (a.tag.empty() || std::all_of(a.tag.begin(), a.tag.end(), [](unsigned char c) { return std::isdigit(c); }))
        throw Error(ErrorKind::InvalidValue, "--tag must be a name such as HD1");
    const auto rows = read_conversations(a.input, format_for(a.format, a.input), delimiter_of(a.delimiter));
    const auto records = preprocess(rows, PreprocessOptions{a.tag, !a.keep_na});
    if (records.empty()) throw Error(ErrorKind::InvalidValue, "no conversations left after preprocessing");
    DatasetBundle bundle;
    bundle.datasets = conversation_datasets(records, a.tag);
    bundle.sources["ingest:" + a.tag] = {{"input_sha256", sha256_hex(read_file(a.input))},
                                         {"rows", rows.size()},
                                         {"drop_na", !a.keep_na}};
    write_bundle(a.out, bundle);
    out << "ingested " << rows.size() << " rows into " << bundle.datasets.size() << " conversations ("
        << records.size() << " records) as " << a.tag << "\n";
    return kOk;
}

int cmd_annotate(const AnnotateArgs& a, std::ostream& out) {
    if (a.files.size() != 3) throw Error(ErrorKind::InvalidValue, "annotate aggregate needs exactly three label files");
    std::vector<AnnotationSet> sets;
    for (const auto& f : a.files) {
        AnnotationSet set;
        for (const auto& [id, label] : read_label_file(f)) set[id] = static_cast<int>(label);
        sets.push_back(std::move(set));
    }
    const auto result = aggregate_annotations(sets[0], sets[1], sets[2], a.seed);
    std::string csv = "record_id,label\n";
    for (const auto& [id, label] : result.labels) csv += id + "," + std::to_string(label) + "\n";
    if (a.out.empty()) out << csv;
    else write_file_atomic(a.out, csv);
    out << "records: " << result.labels.size() << ", agreement: " << fixed(result.agreement_percent, 1) << "%\n";
    return kOk;
}

int cmd_stats(const StatsArgs& a, std::ostream& out) {
    auto rows = read_conversations(a.input, format_for(a.format, a.input), delimiter_of(a.delimiter));
    if (a.preprocess) rows = preprocess_rows(rows, true);
    const auto table = conversation_stats(rows);
    if (a.json) {
        Json j = Json::array();
        for (const auto& r : table) {
            auto summary = [](const Summary& s) { return Json{{"avg", s.avg}, {"min", s.min}, {"max", s.max}}; };
            j.push_back({{"agent", std::string(to_string(r.agent))},
                         {"gender", std::string(to_string(r.gender))},
                         {"conversations", r.conversations},
                         {"utterances", r.utterances},
                         {"words_per_utterance", summary(r.words_per_utterance)},
                         {"stopwords_per_utterance", summary(r.stopwords_per_utterance)},
                         {"utterances_per_conversation", r.utterances_per_conversation},
                         {"turns_per_conversation", r.turns_per_conversation}});
        }
        out << j.dump(2) << "\n";
        return kOk;
    }
    out << "| Agent | Gender | Conversations | Utterances | Words/utt avg | min | max | Stopwords/utt avg | min | max "
           "| Utterances/conv | Turns/conv |\n|---|---|---|---|---|---|---|---|---|---|---|---|\n";
    for (const auto& r : table) {
        out << "| " << to_string(r.agent) << " | " << to_string(r.gender) << " | " << r.conversations << " | "
            << r.utterances << " | " << fixed(r.words_per_utterance.avg, 2) << " | " << r.words_per_utterance.min
            << " | " << r.words_per_utterance.max << " | " << fixed(r.stopwords_per_utterance.avg, 2) << " | "
            << r.stopwords_per_utterance.min << " | " << r.stopwords_per_utterance.max << " | "
            << fixed(r.utterances_per_conversation, 2) << " | " << fixed(r.turns_per_conversation, 2) << " |\n";
    }
    return kOk;
}

} // namespace

int exit_code_for(ErrorKind kind) {
    if (is_external_failure(kind)) return kExternal;
    switch (kind) {
        case ErrorKind::InvalidGroup:
        case ErrorKind::InvalidLevels:
        case ErrorKind::InvalidValue:
        case ErrorKind::UnsupportedLanguage:
        case ErrorKind::UnsupportedCI:
        case ErrorKind::EmptyLexicon: return kUsage;
        default: return kData;
    }
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    try {
        const Defaults defaults = load_defaults(args);

        CLI::App app{"Rate sentiment analysis systems for statistical and confounding bias", "sasrate"};
        app.require_subcommand(1);
        app.fallthrough();
        std::string config_file;
        app.add_option("--config", config_file, "JSON file with option defaults (flags and SASRATE_* env win)");
        app.set_version_flag("--version", std::string(kToolVersion));
        std::function<int()> action;

        GenerateArgs gen;
        auto* generate = app.add_subcommand("generate", "Generate a synthetic data group");
        bind_option(generate, defaults, "group", gen.group, "data group 1-4", true);
        bind_option(generate, defaults, "out", gen.out, "output directory", true);
        bind_option(generate, defaults, "seed", gen.seed, "generator seed");
        bind_option(generate, defaults, "skew", gen.skew, "share of skewed sentences in confounded groups");
        bind_option(generate, defaults, "generator-config", gen.generator_config, "templates, names and lexicon JSON");
        generate->callback([&] { action = [&] { return cmd_generate(gen, out); }; });

        EvaluateArgs ev;
        auto* evaluate = app.add_subcommand("evaluate", "Score every dataset with each SAS");
        bind_option(evaluate, defaults, "data", ev.data, "dataset directory", true);
        bind_option(evaluate, defaults, "sas", ev.sas, "SAS spec, repeatable", true);
        bind_option(evaluate, defaults, "scores", ev.scores, "score directory (default <data>/scores)");
        bind_option(evaluate, defaults, "lexicon", ev.lexicon, "lexicon JSON for builtin:lexicon");
        bind_option(evaluate, defaults, "max-in-flight", ev.max_in_flight, "concurrent requests per external SAS");
        bind_option(evaluate, defaults, "timeout-ms", ev.timeout_ms, "per-request timeout for external SASs");
        evaluate->callback([&] { action = [&] { return cmd_evaluate(ev, out, err); }; });

        RateArgs rt;
        auto* rate_cmd = app.add_subcommand("rate", "Rate the scored systems");
        bind_option(rate_cmd, defaults, "data", rt.data, "dataset directory", true);
        bind_option(rate_cmd, defaults, "scores", rt.scores, "score directory (default <data>/scores)");
        bind_option(rate_cmd, defaults, "levels", rt.levels, "rating levels L");
        bind_option(rate_cmd, defaults, "out", rt.out, "report path prefix; writes .json and .md");
        bind_option(rate_cmd, defaults, "label", rt.label, "data label shown in the report");
        bind_option(rate_cmd, defaults, "zero-tol", rt.zero_tol, "|E[Y|X]| at or below this makes DIE% undefined");
        rate_cmd->callback([&] { action = [&] { return cmd_rate(rt, out, err); }; });

        RoundtripArgs rtt;
        auto* roundtrip = app.add_subcommand("roundtrip", "Round-trip translate datasets through a pivot language");
        roundtrip->require_subcommand(0, 1);
        bind_option(roundtrip, defaults, "data", rtt.data, "dataset directory");
        bind_option(roundtrip, defaults, "via", rtt.via, "pivot language, e.g. da or es");
        bind_option(roundtrip, defaults, "translator", rtt.translator, "mock, http or identity");
        bind_option(roundtrip, defaults, "cache", rtt.cache, "translation cache file (JSON Lines)");
        bind_option(roundtrip, defaults, "out", rtt.out, "output directory");
        bind_option(roundtrip, defaults, "mock-config", rtt.mock_config, "mock translator JSON (synonyms, drop rate, seed)");
        bind_option(roundtrip, defaults, "drop-rate", rtt.drop_rate, "mock stopword drop rate");
        bind_option(roundtrip, defaults, "seed", rtt.seed, "mock translator seed");
        bind_option(roundtrip, defaults, "endpoint", rtt.endpoint, "HTTP translator base URL");
        bind_option(roundtrip, defaults, "key-env", rtt.key_env, "environment variable holding the translator API key");
        bind_option(roundtrip, defaults, "parallelism", rtt.parallelism, "concurrent translations");
        roundtrip->callback([&] {
            if (roundtrip->get_subcommands().empty()) action = [&] { return cmd_roundtrip(rtt, out); };
        });

        CompareArgs cmp;
        auto* compare = roundtrip->add_subcommand("compare", "Compare raw scores of two reports");
        compare->add_option("before", cmp.before, "report on original data")->required();
        compare->add_option("after", cmp.after, "report on round-tripped data")->required();
        bind_option(compare, defaults, "out", cmp.out, "write the delta table as JSON");
        compare->callback([&] { action = [&] { return cmd_compare(cmp, out); }; });

        IngestArgs ing;
        auto* ingest = app.add_subcommand("ingest", "Preprocess a conversation log into datasets");
        bind_option(ingest, defaults, "input", ing.input, "conversation file", true);
        bind_option(ingest, defaults, "format", ing.format, "csv or jsonl (default from extension)");
        bind_option(ingest, defaults, "delimiter", ing.delimiter, "CSV delimiter, e.g. '|'");
        bind_option(ingest, defaults, "tag", ing.tag, "corpus tag, e.g. HD1");
        bind_option(ingest, defaults, "out", ing.out, "output directory", true);
        ingest->add_flag("--keep-na", ing.keep_na, "keep conversations whose user gender is NA");
        ingest->callback([&] { action = [&] { return cmd_ingest(ing, out); }; });

        AnnotateArgs ann;
        auto* annotate = app.add_subcommand("annotate", "Human annotation utilities");
        annotate->require_subcommand(1);
        auto* aggregate = annotate->add_subcommand("aggregate", "Majority-vote three annotators' labels");
        aggregate->add_option("files", ann.files, "three record_id,label CSV files")->required()->expected(3);
        bind_option(aggregate, defaults, "seed", ann.seed, "seed for three-way ties");
        bind_option(aggregate, defaults, "out", ann.out, "output CSV (default stdout)");
        aggregate->callback([&] { action = [&] { return cmd_annotate(ann, out); }; });

        StatsArgs st;
        auto* stats = app.add_subcommand("stats", "Conversation statistics per agent and user gender");
        bind_option(stats, defaults, "input", st.input, "conversation file", true);
        bind_option(stats, defaults, "format", st.format, "csv or jsonl (default from extension)");
        bind_option(stats, defaults, "delimiter", st.delimiter, "CSV delimiter");
        stats->add_flag("--preprocess", st.preprocess, "merge consecutive same-speaker rows first");
        stats->add_flag("--json", st.json, "print JSON instead of Markdown");
        stats->callback([&] { action = [&] { return cmd_stats(st, out); }; });

        std::vector<const char*> argv{"sasrate"};
        for (const auto& a : args) argv.push_back(a.c_str());
        try {
            app.parse(static_cast<int>(argv.size()), argv.data());
        } catch (const CLI::ParseError& e) {
            const int code = app.exit(e, out, err);
            return code == 0 ? kOk : kUsage;
        }
        if (!action) {
            err << app.help();
            return kUsage;
        }
        return action();
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return exit_code_for(e.kind());
    } catch (const fs::filesystem_error& e) {
        err << "error: " << e.what() << "\n";
        return kData;
    }
}

} // namespace sasrate::cli

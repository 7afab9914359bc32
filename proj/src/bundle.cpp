#include "sasrate/bundle.hpp"

#include "sasrate/error.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <tuple>

namespace sasrate {

namespace fs = std::filesystem;

namespace {

constexpr std::array kKinds{SasKind::BiasedFemale, SasKind::Random,       SasKind::Lexicon,
                            SasKind::ExternalWorker, SasKind::ExternalHttp, SasKind::Labels};

SasKind parse_sas_kind(const std::string& s) {
    for (auto k : kKinds) {
        if (to_string(k) == s) return k;
    }
    throw Error(ErrorKind::SchemaError, "unknown SAS kind '" + s + "'");
}

auto group_order(const GroupTag& g) {
    if (const int* n = std::get_if<int>(&g)) return std::make_tuple(0, *n, std::string());
    return std::make_tuple(1, 0, std::get<std::string>(g));
}

Json dataset_entry(const Dataset& ds, const std::string& file, const std::string& content) {
    Json confounders = Json::array();
    for (auto n : ds.confounders) confounders.push_back(std::string(to_string(n)));
    Json entry{{"dataset_id", ds.dataset_id},
               {"group", group_tag_to_json(ds.group)},
               {"confounded", ds.confounded},
               {"confounders", confounders},
               {"file", file},
               {"records", ds.records.size()},
               {"sha256", sha256_hex(content)}};
    if (ds.provenance) {
        entry["provenance"] = {{"source_dataset_id", ds.provenance->source_dataset_id},
                               {"pivot", ds.provenance->pivot},
                               {"engine", ds.provenance->engine}};
    }
    return entry;
}

Json read_manifest(const fs::path& dir) {
    const auto path = dir / "datasets.json";
    if (!fs::exists(path)) return Json{{"datasets", Json::array()}, {"sources", Json::object()}};
    try {
        return Json::parse(read_file(path));
    } catch (const Json::parse_error& e) {
        throw Error(ErrorKind::SchemaError, path.string() + ": " + e.what());
    }
}

fs::path index_path(const fs::path& scores_dir) { return scores_dir / "index.json"; }

} // namespace

Json descriptor_to_json(const SasDescriptor& sas) {
    return Json{{"sas_id", sas.sas_id}, {"kind", std::string(to_string(sas.kind))}, {"config", sas.config}};
}

SasDescriptor descriptor_from_json(const Json& j) {
    try {
        SasDescriptor d;
        d.sas_id = j.at("sas_id").get<std::string>();
        d.kind = parse_sas_kind(j.at("kind").get<std::string>());
        d.config = j.at("config").get<std::map<std::string, std::string>>();
        return d;
    } catch (const Json::exception& e) {
        throw Error(ErrorKind::SchemaError, std::string("SAS descriptor: ") + e.what());
    }
}

void sort_datasets(std::vector<Dataset>& datasets) {
    std::stable_sort(datasets.begin(), datasets.end(), [](const Dataset& a, const Dataset& b) {
        return std::make_tuple(group_order(a.group), a.dataset_id) < std::make_tuple(group_order(b.group), b.dataset_id);
    });
}

void write_bundle(const fs::path& dir, const DatasetBundle& bundle) {
    fs::create_directories(dir);
    Json manifest = read_manifest(dir);

    std::vector<Json> entries;
    for (const auto& e : manifest.at("datasets")) {
        const auto id = e.at("dataset_id").get<std::string>();
        const bool replaced = std::any_of(bundle.datasets.begin(), bundle.datasets.end(),
                                          [&](const Dataset& ds) { return ds.dataset_id == id; });
        if (!replaced) entries.push_back(e);
    }
    for (const auto& ds : bundle.datasets) {
        validate_dataset(ds);
        const std::string file = ds.dataset_id + ".jsonl";
        std::vector<Json> rows(ds.records.begin(), ds.records.end());
        const auto content = to_jsonl(rows);
        write_file_atomic(dir / file, content);
        entries.push_back(dataset_entry(ds, file, content));
    }
    std::stable_sort(entries.begin(), entries.end(), [](const Json& a, const Json& b) {
        return std::make_tuple(group_order(group_tag_from_json(a.at("group"))), a.at("dataset_id").get<std::string>()) <
               std::make_tuple(group_order(group_tag_from_json(b.at("group"))), b.at("dataset_id").get<std::string>());
    });

    Json sources = manifest.value("sources", Json::object());
    for (const auto& [k, v] : bundle.sources.items()) sources[k] = v;
    write_file_atomic(dir / "datasets.json", Json{{"datasets", entries}, {"sources", sources}}.dump(2) + "\n");
}

DatasetBundle read_bundle(const fs::path& dir) {
    if (!fs::exists(dir / "datasets.json"))
        throw Error(ErrorKind::IoError, "no datasets.json in " + dir.string());
    const Json manifest = read_manifest(dir);
    DatasetBundle bundle;
    try {
        bundle.sources = manifest.value("sources", Json::object());
        for (const auto& e : manifest.at("datasets")) {
            Dataset ds;
            ds.dataset_id = e.at("dataset_id").get<std::string>();
            ds.group = group_tag_from_json(e.at("group"));
            ds.confounded = e.at("confounded").get<bool>();
            for (const auto& n : e.at("confounders")) ds.confounders.insert(parse_causal_node(n.get<std::string>()));
            if (e.contains("provenance")) {
                const auto& p = e.at("provenance");
                ds.provenance = Provenance{p.at("source_dataset_id").get<std::string>(),
                                           p.at("pivot").get<std::string>(), p.at("engine").get<std::string>()};
            }
            const auto path = dir / e.at("file").get<std::string>();
            ds.records = read_records(path);
            validate_dataset(ds);
            bundle.datasets.push_back(std::move(ds));
        }
    } catch (const Json::exception& e) {
        throw Error(ErrorKind::SchemaError, (dir / "datasets.json").string() + ": " + e.what());
    }
    return bundle;
}

std::string score_file_name(const std::string& sas_id) {
    std::string name;
    for (unsigned char c : sas_id) name.push_back(std::isalnum(c) || c == '-' || c == '.' ? static_cast<char>(c) : '_');
    if (name.size() > 40) name.resize(40);
    return name + "-" + sha256_hex(sas_id).substr(0, 8) + ".jsonl";
}

void write_system_scores(const fs::path& scores_dir, const SasDescriptor& sas, const std::vector<ScoredRecord>& scores,
                         const std::string& error) {
    fs::create_directories(scores_dir);
    const auto file = score_file_name(sas.sas_id);
    write_scores(scores_dir / file, scores);

    Json systems = Json::array();
    if (fs::exists(index_path(scores_dir))) {
        const auto index = Json::parse(read_file(index_path(scores_dir)));
        for (const auto& e : index.at("systems")) {
            if (e.at("sas").at("sas_id") != sas.sas_id) systems.push_back(e);
        }
    }
    Json entry{{"sas", descriptor_to_json(sas)},
               {"file", file},
               {"status", error.empty() ? "complete" : "failed"},
               {"records", scores.size()}};
    if (!error.empty()) entry["error"] = error;
    systems.push_back(entry);
    write_file_atomic(index_path(scores_dir), Json{{"systems", systems}}.dump(2) + "\n");
}

std::vector<ScoreIndexEntry> read_score_index(const fs::path& scores_dir) {
    if (!fs::exists(index_path(scores_dir)))
        throw Error(ErrorKind::IoError, "no score index in " + scores_dir.string());
    std::vector<ScoreIndexEntry> out;
    try {
        const auto index = Json::parse(read_file(index_path(scores_dir)));
        for (const auto& e : index.at("systems")) {
            ScoreIndexEntry entry;
            entry.sas = descriptor_from_json(e.at("sas"));
            entry.file = e.at("file").get<std::string>();
            entry.complete = e.at("status").get<std::string>() == "complete";
            entry.error = e.value("error", "");
            entry.records = e.at("records").get<std::size_t>();
            out.push_back(std::move(entry));
        }
    } catch (const Json::exception& e) {
        throw Error(ErrorKind::SchemaError, index_path(scores_dir).string() + ": " + e.what());
    }
    return out;
}

SystemScores load_system_scores(const fs::path& scores_dir, const ScoreIndexEntry& entry) {
    return SystemScores{entry.sas, index_scores(read_scores(scores_dir / entry.file))};
}

} // namespace sasrate

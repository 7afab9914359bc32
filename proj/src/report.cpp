#include "sasrate/report.hpp"

#include "sasrate/error.hpp"

#include <algorithm>
#include <cstdio>
#include <tuple>

namespace sasrate {

namespace {

std::string fixed(double v, int decimals) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
    return buf;
}

Json rejections_json(const Rejections& r) { return Json::array({r.at[0], r.at[1], r.at[2]}); }

Json die_json(const DieValue& v) { return v ? Json(*v) : Json(nullptr); }

Json wrs_details(const StatisticalBias& sb) {
    Json datasets = Json::array();
    for (const auto& ds : sb.datasets) {
        Json pairs = Json::array();
        for (const auto& p : ds.pairs) {
            pairs.push_back({{"classes", {p.class_a, p.class_b}},
                             {"n", {p.n_a, p.n_b}},
                             {"t", real_to_json(p.test.t)},
                             {"dof", p.test.dof},
                             {"rejections", rejections_json(p.test.rejections)}});
        }
        datasets.push_back({{"dataset_id", ds.dataset_id}, {"rejections", rejections_json(ds.combined)}, {"pairs", pairs}});
    }
    return Json{{"wrs", sb.wrs.value}, {"counts", sb.wrs.counts}, {"datasets", datasets}};
}

Json die_details(const GroupDie& gd) {
    Json datasets = Json::array();
    for (const auto& d : gd.datasets) {
        Json polarities = Json::object();
        for (const auto& [x, v] : d.die.per_polarity) {
            polarities[std::string(to_string(x))] = {{"observed", expectation_given(d.table, x)},
                                                     {"adjusted", backdoor_expectation(d.table, x)},
                                                     {"die", die_json(v)}};
        }
        datasets.push_back({{"dataset_id", d.dataset_id},
                            {"table", d.table.to_json()},
                            {"polarities", polarities},
                            {"max", die_json(d.die.group_max)}});
    }
    return Json{{"die", gd.raw.is_undefined() ? Json(nullptr) : Json(gd.raw.value())}, {"datasets", datasets}};
}

struct RowPlan {
    std::string key;
    std::string group;
    bool die = false;
    StatAttribute attribute = StatAttribute::Gender;
    std::set<CausalNode> confounders;
    std::vector<Dataset> datasets;
};

std::vector<RowPlan> plan_rows(std::span<const Dataset> datasets) {
    std::map<std::tuple<int, int, std::string>, std::vector<Dataset>> groups;
    for (const auto& ds : datasets) {
        const auto key = std::holds_alternative<int>(ds.group)
                             ? std::make_tuple(0, std::get<int>(ds.group), std::string())
                             : std::make_tuple(1, 0, std::get<std::string>(ds.group));
        groups[key].push_back(ds);
    }

    std::vector<RowPlan> plans;
    for (auto& [key, members] : groups) {
        const std::string label = group_label(members.front().group);
        const bool confounded = members.front().confounded;
        for (const auto& ds : members) {
            if (ds.confounded != confounded)
                throw Error(ErrorKind::MixedMetric, label + " mixes confounded and unconfounded datasets");
            if (confounded && ds.confounders != members.front().confounders)
                throw Error(ErrorKind::MixedMetric, label + " datasets name different confounders");
        }

        if (confounded) {
            plans.push_back({label, label, true, StatAttribute::Gender, members.front().confounders, members});
        } else if (std::get<0>(key) == 0) {
            const auto spec = default_group_spec(std::get<1>(key));
            if (spec.protected_attributes.contains(ProtectedAttribute::Race)) {
                plans.push_back({label + "_R", label, false, StatAttribute::Race, {}, members});
                plans.push_back({label + "_G", label, false, StatAttribute::Gender, {}, members});
                plans.push_back({label + "_RG", label, false, StatAttribute::RaceGender, {}, members});
            } else {
                plans.push_back({label, label, false, StatAttribute::Gender, {}, members});
            }
        } else {
            // Conversations are pooled: a single conversation has one user gender.
            for (auto speaker : {Speaker::Chatbot, Speaker::User}) {
                Dataset pooled;
                pooled.dataset_id = label + " " + std::string(to_string(speaker));
                pooled.group = members.front().group;
                for (const auto& ds : members) {
                    for (const auto& r : ds.records) {
                        if (r.speaker == speaker) pooled.records.push_back(r);
                    }
                }
                if (pooled.records.empty()) continue;
                plans.push_back({pooled.dataset_id, label, false, StatAttribute::Gender, {}, {std::move(pooled)}});
            }
        }
    }
    return plans;
}

std::string braces(const std::vector<std::pair<std::string, std::string>>& items) {
    std::string out = "{";
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (i > 0) out += ", ";
        out += items[i].first + ": " + items[i].second;
    }
    return out + "}";
}

} // namespace

Json manifest_to_json(const RunManifest& m) {
    Json sas = Json::array();
    for (const auto& d : m.sas) sas.push_back(descriptor_to_json(d));
    return Json{{"tool_version", m.tool_version}, {"config_hash", m.config_hash}, {"data_label", m.data_label},
                {"seeds", m.seeds},               {"sas", sas},                   {"excluded_sas", m.excluded_sas},
                {"dataset_ids", m.dataset_ids},   {"levels", m.levels},           {"zero_tol", m.zero_tol}};
}

std::string manifest_hash(const RunManifest& m) {
    Json j = manifest_to_json(m);
    j.erase("config_hash");
    return sha256_hex(canonical(j));
}

Report rate(std::span<const Dataset> datasets, std::span<const SystemScores> systems, const RateOptions& options,
            RunManifest manifest) {
    if (options.levels < 2)
        throw Error(ErrorKind::InvalidLevels, "rating levels must be >= 2 (got " + std::to_string(options.levels) + ")");
    if (datasets.empty()) throw Error(ErrorKind::InvalidValue, "no datasets to rate");
    if (systems.empty()) throw Error(ErrorKind::InvalidValue, "no scored systems to rate");

    Report report;
    report.manifest = std::move(manifest);
    report.manifest.levels = options.levels;
    report.manifest.zero_tol = options.zero_tol;
    report.manifest.sas.clear();
    for (const auto& s : systems) report.manifest.sas.push_back(s.sas);
    report.manifest.dataset_ids.clear();
    for (const auto& ds : datasets) report.manifest.dataset_ids.push_back(ds.dataset_id);
    std::sort(report.manifest.dataset_ids.begin(), report.manifest.dataset_ids.end());

    for (const auto& plan : plan_rows(datasets)) {
        ReportRow row;
        row.key = plan.key;
        row.group = plan.group;
        row.metric = plan.die ? "DIE" : "WRS";
        for (const auto& sys : systems) {
            try {
                if (plan.die) {
                    const auto gd = group_die(plan.datasets, sys.scores, plan.confounders, options.zero_tol);
                    row.raw.push_back({sys.sas.sas_id, gd.raw});
                    row.details[sys.sas.sas_id] = die_details(gd);
                } else {
                    const auto sb = group_statistical_bias(plan.datasets, sys.scores, plan.attribute);
                    row.raw.push_back({sys.sas.sas_id, RawScore::wrs(sb.wrs.value)});
                    row.details[sys.sas.sas_id] = wrs_details(sb);
                }
            } catch (const Error& e) {
                throw Error(e.kind(), plan.key + ", " + sys.sas.sas_id + ": " + e.detail());
            }
        }
        row.partial = partial_order(row.raw);
        row.complete = complete_order(row.partial, options.levels);
        report.rows.push_back(std::move(row));
    }

    for (const auto& sys : systems) {
        std::vector<int> fine;
        for (const auto& row : report.rows) fine.push_back(row.complete.ratings.at(sys.sas.sas_id));
        report.overall[sys.sas.sas_id] = overall_rating(fine);
    }
    return report;
}

Json report_to_json(const Report& report) {
    Json rows = Json::array();
    for (const auto& row : report.rows) {
        Json partial = Json::array();
        for (const auto& e : row.partial.entries) {
            partial.push_back({{"sas_id", e.sas_id},
                               {"raw", e.raw.is_undefined() ? Json(nullptr) : Json(e.raw.value())},
                               {"kind", std::string(to_string(e.raw.kind()))}});
        }
        rows.push_back({{"key", row.key},
                        {"group", row.group},
                        {"metric", row.metric},
                        {"partial_order", partial},
                        {"complete_order", row.complete.ratings},
                        {"levels", row.complete.levels},
                        {"details", row.details}});
    }
    return Json{{"manifest", manifest_to_json(report.manifest)}, {"rows", rows}, {"overall", report.overall}};
}

std::string format_raw(const RawScore& raw) {
    if (raw.is_undefined()) return "Undefined";
    std::string s = fixed(raw.value(), 2);
    while (s.back() == '0') s.pop_back();
    if (s.back() == '.') s.pop_back();
    return s;
}

std::string report_to_markdown(const Report& report) {
    const auto& m = report.manifest;
    std::string out = "# Bias rating report\n\n";
    out += "Data: " + (m.data_label.empty() ? std::string("-") : m.data_label) + "  \n";
    out += "Rating levels: " + std::to_string(m.levels) + " (1 least biased, " + std::to_string(m.levels) +
           " most biased)  \n";
    out += "Config hash: " + m.config_hash + "\n\n";
    out += "| Data | Group | Metric | Partial Order | Complete Order |\n|---|---|---|---|---|\n";
    for (const auto& row : report.rows) {
        std::vector<std::pair<std::string, std::string>> partial;
        std::vector<std::pair<std::string, std::string>> complete;
        for (const auto& e : row.partial.entries) {
            partial.emplace_back(e.sas_id, format_raw(e.raw));
            complete.emplace_back(e.sas_id, std::to_string(row.complete.ratings.at(e.sas_id)));
        }
        out += "| " + (m.data_label.empty() ? std::string("-") : m.data_label) + " | " + row.key + " | " +
               row.metric + " | " + braces(partial) + " | " + braces(complete) + " |\n";
    }
    out += "\n## Overall rating\n\n| SAS | Rating |\n|---|---|\n";
    for (const auto& sas : m.sas) out += "| " + sas.sas_id + " | " + std::to_string(report.overall.at(sas.sas_id)) + " |\n";
    if (!m.excluded_sas.empty()) {
        out += "\nExcluded (scoring failed):";
        for (const auto& id : m.excluded_sas) out += " " + id;
        out += "\n";
    }
    return out;
}

std::vector<RawRow> raw_rows_from_report(const Json& report) {
    std::vector<RawRow> out;
    try {
        for (const auto& row : report.at("rows")) {
            RawRow r;
            r.key = row.at("key").get<std::string>();
            for (const auto& e : row.at("partial_order")) {
                const auto kind = e.at("kind").get<std::string>();
                const auto& v = e.at("raw");
                RawScore raw = RawScore::undefined();
                if (kind == "WRS") raw = RawScore::wrs(v.get<double>());
                else if (kind == "DIE") raw = RawScore::die(v.get<double>());
                else if (kind != "Undefined") throw Error(ErrorKind::SchemaError, "unknown raw score kind '" + kind + "'");
                r.raw.push_back({e.at("sas_id").get<std::string>(), raw});
            }
            out.push_back(std::move(r));
        }
    } catch (const Json::exception& e) {
        throw Error(ErrorKind::SchemaError, std::string("report: ") + e.what());
    }
    return out;
}

} // namespace sasrate

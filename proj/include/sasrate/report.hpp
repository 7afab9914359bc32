#pragma once

// Raw bias scores per report row, their partial and complete orders, and the
// JSON / Markdown report forms.
//
// Rows: numbered groups without confounding get a WRS row per protected
// attribute ("Group-1"; "Group-3_R", "Group-3_G", "Group-3_RG"), confounded
// ones a DIE row ("Group-2"). Tagged corpora pool their conversations and
// split by speaker ("HD1 Chatbot", "HD1 User").

#include "sasrate/bundle.hpp"
#include "sasrate/causal.hpp"
#include "sasrate/rating.hpp"

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace sasrate {

inline constexpr std::string_view kToolVersion = "0.1.0";

struct RunManifest {
    std::string tool_version{kToolVersion};
    std::string config_hash;
    std::string data_label; // e.g. "SD", "HD", "SD-RD"
    std::map<std::string, std::uint64_t> seeds;
    std::vector<SasDescriptor> sas;
    std::vector<std::string> excluded_sas;
    std::vector<std::string> dataset_ids;
    int levels = 3;
    double zero_tol = kDefaultZeroTol;
};

Json manifest_to_json(const RunManifest& m);

// sha256 over the canonical manifest without its hash field.
std::string manifest_hash(const RunManifest& m);

struct ReportRow {
    std::string key;
    std::string group;
    std::string metric; // "WRS" or "DIE"
    std::vector<RatedSystem> raw; // system order of the input
    PartialOrder partial;
    CompleteOrder complete;
    std::map<std::string, Json> details;
};

struct Report {
    RunManifest manifest;
    std::vector<ReportRow> rows;
    std::map<std::string, int> overall;
};

struct RateOptions {
    int levels = 3;
    double zero_tol = kDefaultZeroTol;
};

// Fills manifest.dataset_ids, levels, zero_tol and sas; the caller supplies
// the rest and should call manifest_hash afterwards. Throws MixedMetric when
// datasets of one group disagree on confoundedness.
Report rate(std::span<const Dataset> datasets, std::span<const SystemScores> systems, const RateOptions& options,
            RunManifest manifest = {});

Json report_to_json(const Report& report);
std::string report_to_markdown(const Report& report);

struct RawRow {
    std::string key;
    std::vector<RatedSystem> raw;
};

// Row keys and raw scores read back from a report JSON.
std::vector<RawRow> raw_rows_from_report(const Json& report);

// Up to two decimals with trailing zeros dropped: 2.4, 42.86, 0.
std::string format_raw(const RawScore& raw);

} // namespace sasrate

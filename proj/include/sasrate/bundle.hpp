#pragma once

// On-disk layout shared by the commands:
//
//   <dir>/datasets.json        manifest: one entry per dataset plus sources
//   <dir>/<dataset_id>.jsonl   the records
//   <dir>/scores/index.json    one entry per scored system
//   <dir>/scores/<name>.jsonl  ScoredRecord lines

#include "sasrate/core.hpp"
#include "sasrate/io.hpp"
#include "sasrate/sas.hpp"
#include "sasrate/stats.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace sasrate {

Json descriptor_to_json(const SasDescriptor& sas);
SasDescriptor descriptor_from_json(const Json& j);

struct DatasetBundle {
    std::vector<Dataset> datasets;
    // Free-form records of what produced the datasets (generator runs,
    // ingests, round trips), keyed by a short label.
    Json sources = Json::object();
};

// Datasets sorted by group (numbered groups first) then id.
void sort_datasets(std::vector<Dataset>& datasets);

// Merges into an existing bundle in `dir`: datasets with the same id are
// replaced, sources are overlaid key by key.
void write_bundle(const std::filesystem::path& dir, const DatasetBundle& bundle);
DatasetBundle read_bundle(const std::filesystem::path& dir);

struct SystemScores {
    SasDescriptor sas;
    ScoreIndex scores;
};

struct ScoreIndexEntry {
    SasDescriptor sas;
    std::string file; // relative to the scores directory
    bool complete = false;
    std::string error;
    std::size_t records = 0;
};

std::string score_file_name(const std::string& sas_id);

// Writes the score file and updates index.json, replacing any entry with the
// same sas_id. Failed systems are recorded with an empty score file.
void write_system_scores(const std::filesystem::path& scores_dir, const SasDescriptor& sas,
                         const std::vector<ScoredRecord>& scores, const std::string& error = "");
std::vector<ScoreIndexEntry> read_score_index(const std::filesystem::path& scores_dir);
SystemScores load_system_scores(const std::filesystem::path& scores_dir, const ScoreIndexEntry& entry);

} // namespace sasrate

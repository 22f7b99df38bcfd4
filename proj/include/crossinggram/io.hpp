#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include <json.hpp>

#include <crossinggram/empirical.hpp>
#include <crossinggram/lattice.hpp>
#include <crossinggram/model.hpp>
#include <crossinggram/report.hpp>
#include <crossinggram/simulate.hpp>

namespace crossinggram::io {

using json = nlohmann::json;

// {"annuli": [12, 34], "betas": [0.8, 0.6, 0.1], "d": 1, "norm": "euclidean"}
struct ModelConfig {
  PartitionModel model;
  double d = 1.0;
  NormKind norm = NormKind::euclidean;
};

ModelConfig parse_model_config(const json& j);
ModelConfig load_model_config(const std::filesystem::path& path);
json to_json(const ModelConfig& config);

// Sorted array of [x1, x2] pairs.
json to_json(const Region& region);
Region region_from_json(const json& j);
Region load_region(const std::filesystem::path& path);

json to_json(const Provenance& provenance);
Provenance provenance_from_json(const json& j);

json to_json(const CoefficientReport& report);

// Long-format CSV "rep,x1,x2,value" plus a sidecar at sidecar_path(csv).
std::filesystem::path sidecar_path(const std::filesystem::path& file);
std::string sample_csv(const FieldSample& sample);
void write_sample(const std::filesystem::path& csv, const FieldSample& sample, const json& extra = {});
// Reads the CSV; the sidecar, when present, supplies domain and provenance.
// Without it the domain is the set of sites in the file and the provenance
// is "external".
FieldSample read_sample(const std::filesystem::path& csv);
FieldSample parse_sample_csv(std::string_view text, const json* sidecar);

// "u,zeta_u,zeta_star_u,conditioning_count,oscillations,exceedances"; levels
// without a defined value carry "NA".
std::string sweep_csv(const LevelSweep& sweep);

// %.17g
std::string format_double(double v);

std::string read_file(const std::filesystem::path& path);
// Writes to a temporary file in the same directory, then renames.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

}  // namespace crossinggram::io

#include <crossinggram/io.hpp>

#include <unistd.h>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <system_error>

#include <crossinggram/errors.hpp>

namespace crossinggram::io {

namespace fs = std::filesystem;

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file_atomic(const fs::path& path, std::string_view content) {
  const fs::path tmp = path.string() + ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot write " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw DataError("failed writing " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw DataError("cannot move output into place at " + path.string());
  }
}

namespace {

json parse_json(std::string_view text, const std::string& what) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(what + ": invalid JSON: " + e.what());
  }
}

template <class T>
T field(const json& j, const char* key, const std::string& what) {
  if (!j.contains(key)) throw ConfigError(what + ": missing field '" + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(what + ": field '" + std::string(key) + "' has the wrong type");
  }
}

}  // namespace

ModelConfig parse_model_config(const json& j) {
  const std::string what = "model config";
  if (!j.is_object()) throw ConfigError(what + ": expected a JSON object");
  auto radii = field<std::vector<double>>(j, "annuli", what);
  auto betas = field<std::vector<double>>(j, "betas", what);
  if (betas.size() != radii.size() + 1) {
    throw ConfigError(what + ": field 'betas' must have one more entry than 'annuli'");
  }
  for (std::size_t i = 0; i < radii.size(); ++i) {
    if (!(radii[i] > 0.0) || (i > 0 && !(radii[i] > radii[i - 1]))) {
      throw ConfigError(what + ": field 'annuli' must be positive and strictly increasing");
    }
  }
  for (double b : betas) {
    if (!(b > 0.0 && b <= 1.0)) throw ConfigError(what + ": field 'betas' entries must lie in (0, 1]");
  }
  double d = 1.0;
  if (j.contains("d")) {
    d = field<double>(j, "d", what);
    if (!(d > 0.0)) throw ConfigError(what + ": field 'd' must be positive");
  }
  NormKind norm = NormKind::euclidean;
  if (j.contains("norm")) {
    try {
      norm = parse_norm(field<std::string>(j, "norm", what));
    } catch (const ConfigError& e) {
      throw ConfigError(what + ": field 'norm': " + e.what());
    }
  }
  return ModelConfig{PartitionModel::annuli(std::move(radii), std::move(betas)), d, norm};
}

ModelConfig load_model_config(const fs::path& path) {
  std::string text;
  try {
    text = read_file(path);
  } catch (const DataError& e) {
    throw ConfigError(e.what());
  }
  return parse_model_config(parse_json(text, "model config " + path.string()));
}

json to_json(const ModelConfig& config) {
  json j;
  j["annuli"] = config.model.radii().value_or(std::vector<double>{});
  j["betas"] = config.model.betas();
  j["d"] = config.d;
  j["norm"] = std::string(to_string(config.norm));
  return j;
}

json to_json(const Region& region) {
  json arr = json::array();
  for (const auto& p : region) arr.push_back({p.x1, p.x2});
  return arr;
}

Region region_from_json(const json& j) {
  if (!j.is_array()) throw ConfigError("region: expected a JSON array of [x1, x2] pairs");
  std::vector<LatticePoint> pts;
  pts.reserve(j.size());
  for (const auto& e : j) {
    if (!e.is_array() || e.size() != 2 || !e[0].is_number_integer() || !e[1].is_number_integer()) {
      throw ConfigError("region: every entry must be an [x1, x2] integer pair");
    }
    pts.push_back({e[0].get<std::int64_t>(), e[1].get<std::int64_t>()});
  }
  if (pts.empty()) throw ConfigError("region: empty");
  return Region(std::move(pts));
}

Region load_region(const fs::path& path) {
  std::string text;
  try {
    text = read_file(path);
  } catch (const DataError& e) {
    throw ConfigError(e.what());
  }
  return region_from_json(parse_json(text, "region " + path.string()));
}

json to_json(const Provenance& p) {
  json j;
  j["source"] = p.source;
  j["seed"] = p.seed ? json(*p.seed) : json(nullptr);
  j["generator"] = p.generator;
  j["unit_frechet"] = p.unit_frechet;
  j["first_replicate"] = p.first_replicate;
  j["version"] = CROSSINGGRAM_VERSION;
  return j;
}

Provenance provenance_from_json(const json& j) {
  Provenance p;
  p.source = j.value("source", std::string("external"));
  if (j.contains("seed") && j["seed"].is_number_unsigned()) p.seed = j["seed"].get<std::uint64_t>();
  p.generator = j.value("generator", std::string());
  p.unit_frechet = j.value("unit_frechet", false);
  p.first_replicate = j.value("first_replicate", std::uint64_t{0});
  return p;
}

json to_json(const CoefficientReport& r) {
  json j;
  j["kind"] = std::string(to_string(r.kind));
  j["method"] = std::string(to_string(r.method));
  j["d"] = r.d;
  j["norm"] = std::string(to_string(r.norm));
  j["region_size"] = r.region.size();
  j["region"] = to_json(r.region);
  j["value"] = r.value;
  if (r.clamped) j["clamped"] = *r.clamped;
  j["clipped"] = r.clipped;
  if (!r.per_site.empty()) {
    json sites = json::array();
    for (const auto& s : r.per_site) sites.push_back({{"x1", s.site.x1}, {"x2", s.site.x2}, {"theta", s.value}});
    j["per_site_theta"] = std::move(sites);
  }
  if (!r.diagnostics.empty()) j["diagnostics"] = r.diagnostics;
  return j;
}

fs::path sidecar_path(const fs::path& file) { return fs::path(file.string() + ".json"); }

std::string sample_csv(const FieldSample& sample) {
  std::string out = "rep,x1,x2,value\n";
  out.reserve(out.size() + sample.n() * sample.sites() * 32);
  for (std::size_t j = 0; j < sample.n(); ++j) {
    const std::string rep = std::to_string(j) + ",";
    for (std::size_t i = 0; i < sample.sites(); ++i) {
      const auto& p = sample.domain()[i];
      out += rep;
      out += std::to_string(p.x1);
      out += ',';
      out += std::to_string(p.x2);
      out += ',';
      out += format_double(sample.value(j, i));
      out += '\n';
    }
  }
  return out;
}

void write_sample(const fs::path& csv, const FieldSample& sample, const json& extra) {
  json side;
  side["domain"] = to_json(sample.domain());
  side["n"] = sample.n();
  side["provenance"] = to_json(sample.provenance());
  if (!extra.is_null()) side["run"] = extra;
  write_file_atomic(csv, sample_csv(sample));
  write_file_atomic(sidecar_path(csv), side.dump() + "\n");
}

namespace {

template <class T>
bool parse_number(std::string_view s, T& out) {
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc{} && p == s.data() + s.size();
}

}  // namespace

FieldSample parse_sample_csv(std::string_view text, const json* sidecar) {
  struct Row {
    std::uint64_t rep;
    LatticePoint site;
    double value;
  };
  std::vector<Row> rows;
  std::size_t line_no = 0;
  bool header_seen = false;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    if (!header_seen) {
      if (line != "rep,x1,x2,value") throw DataError("sample CSV: header must be 'rep,x1,x2,value'");
      header_seen = true;
      continue;
    }
    std::string_view parts[4];
    std::size_t count = 0;
    for (std::size_t start = 0; count < 4;) {
      const auto comma = line.find(',', start);
      parts[count++] = line.substr(start, comma == std::string_view::npos ? comma : comma - start);
      if (comma == std::string_view::npos) break;
      start = comma + 1;
      if (count == 4) count = 5;  // too many fields
    }
    Row r{};
    if (count != 4 || !parse_number(parts[0], r.rep) || !parse_number(parts[1], r.site.x1) ||
        !parse_number(parts[2], r.site.x2) || !parse_number(parts[3], r.value)) {
      throw DataError("sample CSV: malformed row at line " + std::to_string(line_no));
    }
    rows.push_back(r);
  }
  if (!header_seen || rows.empty()) throw DataError("sample CSV: no data rows");

  std::optional<Region> domain;
  Provenance provenance;
  std::optional<std::size_t> n_declared;
  if (sidecar) {
    try {
      domain = region_from_json(sidecar->at("domain"));
      n_declared = sidecar->at("n").get<std::size_t>();
      provenance = provenance_from_json(sidecar->at("provenance"));
    } catch (const json::exception& e) {
      throw DataError(std::string("sample sidecar: ") + e.what());
    } catch (const ConfigError& e) {
      throw DataError(std::string("sample sidecar: ") + e.what());
    }
  } else {
    std::vector<LatticePoint> pts;
    for (const auto& r : rows) pts.push_back(r.site);
    domain = Region(std::move(pts));
  }

  std::uint64_t max_rep = 0;
  for (const auto& r : rows) max_rep = std::max(max_rep, r.rep);
  const std::size_t n = n_declared.value_or(static_cast<std::size_t>(max_rep + 1));
  if (rows.size() != n * domain->size()) {
    throw DataError("sample CSV: expected " + std::to_string(n * domain->size()) + " rows (" + std::to_string(n) +
                    " replicates x " + std::to_string(domain->size()) + " sites), found " +
                    std::to_string(rows.size()));
  }
  std::vector<double> values(n * domain->size());
  std::vector<bool> seen(values.size(), false);
  for (const auto& r : rows) {
    const auto idx = domain->index_of(r.site);
    if (!idx || r.rep >= n) throw DataError("sample CSV: row outside declared domain or replicate range");
    const std::size_t pos = *idx * n + r.rep;
    if (seen[pos]) {
      throw DataError("sample CSV: duplicate entry for replicate " + std::to_string(r.rep) + " at " +
                      to_string(r.site));
    }
    seen[pos] = true;
    values[pos] = r.value;
  }
  return FieldSample(std::move(*domain), n, std::move(values), std::move(provenance));
}

FieldSample read_sample(const fs::path& csv) {
  const std::string text = read_file(csv);
  const auto side = sidecar_path(csv);
  if (fs::exists(side)) {
    json j;
    try {
      j = json::parse(read_file(side));
    } catch (const json::parse_error& e) {
      throw DataError("sample sidecar " + side.string() + ": invalid JSON: " + e.what());
    }
    return parse_sample_csv(text, &j);
  }
  return parse_sample_csv(text, nullptr);
}

std::string sweep_csv(const LevelSweep& sweep) {
  std::string out = "u,zeta_u,zeta_star_u,conditioning_count,oscillations,exceedances\n";
  for (const auto& r : sweep.rows) {
    out += format_double(r.level) + ",";
    out += (r.zeta ? format_double(*r.zeta) : std::string("NA")) + ",";
    out += (r.zeta_star ? format_double(*r.zeta_star) : std::string("NA")) + ",";
    out += std::to_string(r.conditioning) + "," + std::to_string(r.oscillations) + "," + std::to_string(r.exceedances) +
           "\n";
  }
  return out;
}

}  // namespace crossinggram::io

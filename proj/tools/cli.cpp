#include "cli.hpp"

#include <charconv>
#include <cmath>
#include <map>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include <crossinggram/empirical.hpp>
#include <crossinggram/errors.hpp>
#include <crossinggram/estimate.hpp>
#include <crossinggram/io.hpp>
#include <crossinggram/model.hpp>
#include <crossinggram/numeric.hpp>
#include <crossinggram/simulate.hpp>

namespace crossinggram::cli {

namespace fs = std::filesystem;
using io::json;

namespace {

constexpr std::uint64_t kDefaultSeed = 42;
constexpr std::size_t kDefaultReplicates = 1000;

struct Options {
  std::string command;
  std::vector<std::string> argv;

  std::optional<std::string> model_path;
  std::optional<std::string> preset;
  std::optional<std::string> domain;
  std::optional<std::string> region;
  std::optional<std::string> sample;
  std::optional<std::string> out;
  std::optional<long long> n;
  std::optional<std::uint64_t> seed;
  std::optional<double> d;
  std::optional<std::string> norm;
  std::optional<std::string> levels;
  std::optional<std::string> uniformize;
  std::optional<long long> window;
  long long stride = 1;
  bool clip = false;
  std::string mode = "exact";
  std::string field = "model";
  std::vector<std::string> pairs;
  std::optional<std::size_t> threads;
};

// Settings of the named demo: three annuli split at radii 12 and 34 over a
// closed disk of radius 50.
struct Preset {
  std::vector<double> radii;
  std::vector<double> betas;
  std::string domain;
  std::size_t n;
  std::uint64_t seed;
};

std::optional<Preset> find_preset(const Options& o) {
  if (!o.preset) return std::nullopt;
  if (*o.preset == "paper-fig1") return Preset{{12.0, 34.0}, {0.8, 0.6, 0.1}, "disk:50", 1, kDefaultSeed};
  throw ConfigError("--preset: unknown preset '" + *o.preset + "' (available: paper-fig1)");
}

double parse_real(std::string_view s, const std::string& what) {
  double v = 0.0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size())
    throw ConfigError(what + ": '" + std::string(s) + "' is not a number");
  return v;
}

std::int64_t parse_int(std::string_view s, const std::string& what) {
  std::int64_t v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size())
    throw ConfigError(what + ": '" + std::string(s) + "' is not an integer");
  return v;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    parts.push_back(s.substr(start, pos == std::string_view::npos ? pos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

LatticePoint parse_point(std::string_view s, const std::string& what) {
  const auto xy = split(s, ',');
  if (xy.size() != 2) throw ConfigError(what + ": expected '<x>,<y>', got '" + std::string(s) + "'");
  return {parse_int(xy[0], what), parse_int(xy[1], what)};
}

struct Resolved {
  std::optional<io::ModelConfig> config;
  double d = 1.0;
  NormKind norm = NormKind::euclidean;
};

Resolved resolve_model(const Options& o, bool required) {
  Resolved r;
  const auto preset = find_preset(o);
  if (o.model_path && preset) throw ConfigError("--model and --preset are mutually exclusive");
  if (o.model_path) {
    r.config = io::load_model_config(*o.model_path);
  } else if (preset) {
    r.config = io::ModelConfig{PartitionModel::annuli(preset->radii, preset->betas)};
  } else if (required) {
    throw ConfigError("--model is required for '" + o.command + "'");
  }
  if (r.config) {
    r.d = r.config->d;
    r.norm = r.config->norm;
  }
  if (o.d) {
    if (!(*o.d > 0.0)) throw ConfigError("--d must be positive");
    r.d = *o.d;
  }
  if (o.norm) r.norm = parse_norm(*o.norm);
  return r;
}

std::uint64_t resolve_seed(const Options& o) {
  if (o.seed) return *o.seed;
  if (auto p = find_preset(o)) return p->seed;
  return kDefaultSeed;
}

std::size_t resolve_n(const Options& o) {
  if (o.n) {
    if (*o.n < 1) throw ConfigError("--n must be at least 1");
    return static_cast<std::size_t>(*o.n);
  }
  // The preset's replicate count describes its single demo surface.
  if (auto p = find_preset(o); p && o.command == "simulate") return p->n;
  return kDefaultReplicates;
}

std::optional<Region> resolve_domain(const Options& o) {
  if (o.domain) return parse_domain_spec(*o.domain);
  if (auto p = find_preset(o)) return parse_domain_spec(p->domain);
  return std::nullopt;
}

Region require_region(const Options& o) {
  if (!o.region) throw ConfigError("--region is required for '" + o.command + "'");
  return parse_region_spec(*o.region);
}

Execution exec_of(const Options& o) { return Execution{o.threads.value_or(0)}; }

json run_block(const Options& o) {
  json j;
  j["tool"] = "crossinggram";
  j["version"] = CROSSINGGRAM_VERSION;
  j["command"] = o.command;
  j["args"] = o.argv;
  return j;
}

void emit(const Options& o, const std::string& text, std::ostream& out) {
  if (o.out) {
    io::write_file_atomic(*o.out, text);
  } else {
    out << text;
  }
}

void emit_with_sidecar(const Options& o, const std::string& text, const json& side, std::ostream& out) {
  emit(o, text, out);
  if (o.out) io::write_file_atomic(io::sidecar_path(*o.out), side.dump(2) + "\n");
}

int cmd_simulate(const Options& o, std::ostream& out) {
  if (!o.out) throw ConfigError("--out is required for 'simulate'");
  const auto domain = resolve_domain(o);
  if (!domain) throw ConfigError("--domain is required for 'simulate'");
  const std::size_t n = resolve_n(o);
  const std::uint64_t seed = resolve_seed(o);
  const SimulationOptions sim{0, exec_of(o)};

  json run = run_block(o);
  run["seed"] = seed;
  run["n"] = n;
  run["field"] = o.field;
  std::optional<FieldSample> sample;
  if (o.field == "model") {
    const auto r = resolve_model(o, true);
    run["model"] = io::to_json(*r.config);
    sample.emplace(simulate_field(r.config->model, *domain, n, seed, sim));
  } else if (o.field == "independent") {
    sample.emplace(simulate_independent(*domain, n, seed, sim));
  } else if (o.field == "totally-dependent") {
    sample.emplace(simulate_totally_dependent(*domain, n, seed, sim));
  } else {
    throw ConfigError("--field must be model|independent|totally-dependent");
  }
  io::write_sample(*o.out, *sample, run);
  out << "wrote " << sample->n() << " replicate(s) over " << sample->sites() << " sites to " << *o.out << "\n";
  return ok;
}

int cmd_exact(const Options& o, std::ostream& out) {
  const auto r = resolve_model(o, true);
  const auto region = require_region(o);
  const auto s = exact_summary(r.config->model, region, r.d, r.norm);

  json j;
  j["provenance"] = run_block(o);
  j["provenance"]["model"] = io::to_json(*r.config);
  j["theta_region"] = s.theta_region;
  j["gamma"] = s.gamma ? json(*s.gamma) : json(nullptr);
  j["zeta"] = io::to_json(s.zeta);
  j["zeta_star"] = io::to_json(s.zeta_star);
  emit(o, j.dump(2) + "\n", out);
  return ok;
}

int cmd_estimate(const Options& o, std::ostream& out) {
  if (!o.sample) throw ConfigError("--sample is required for 'estimate'");
  const auto r = resolve_model(o, false);
  const auto region = require_region(o);
  const auto sample = io::read_sample(*o.sample);
  const auto policy = o.clip ? SupportPolicy::clip : SupportPolicy::require;
  const auto scores = rank_transform(sample, exec_of(o));

  json j;
  j["provenance"] = run_block(o);
  j["provenance"]["sample"] = io::to_json(sample.provenance());
  j["zeta"] = io::to_json(zeta_hat(scores, region, r.d, r.norm, policy, exec_of(o)));
  j["zeta_star"] = io::to_json(zeta_star_hat(scores, region, r.d, r.norm, policy, exec_of(o)));
  json betas = json::array();
  for (const auto& spec : o.pairs) {
    const auto v = split(spec, ',');
    if (v.size() != 4) throw ConfigError("--pair expects x1,y1,x2,y2");
    const LatticePoint a{parse_int(v[0], "--pair"), parse_int(v[1], "--pair")};
    const LatticePoint b{parse_int(v[2], "--pair"), parse_int(v[3], "--pair")};
    betas.push_back({{"site1", {a.x1, a.x2}}, {"site2", {b.x1, b.x2}}, {"beta_hat", beta_hat(scores, a, b)}});
  }
  j["beta_hat"] = std::move(betas);
  emit(o, j.dump(2) + "\n", out);
  return ok;
}

std::vector<double> parse_levels(const Options& o) {
  if (!o.levels) return default_levels();
  std::vector<double> levels;
  for (auto part : split(*o.levels, ',')) levels.push_back(parse_real(part, "--levels"));
  for (std::size_t i = 0; i < levels.size(); ++i) {
    if (!(levels[i] > 0.0 && levels[i] < 1.0)) throw ConfigError("--levels entries must lie in (0, 1)");
    if (i > 0 && !(levels[i] > levels[i - 1])) throw ConfigError("--levels must be strictly ascending");
  }
  return levels;
}

int cmd_sweep(const Options& o, std::ostream& out) {
  const auto region = require_region(o);
  const auto levels = parse_levels(o);
  const auto r = resolve_model(o, !o.sample);
  const Execution exec = exec_of(o);

  json run = run_block(o);
  LevelSweep result;
  if (o.sample) {
    const auto sample = io::read_sample(*o.sample);
    run["sample"] = io::to_json(sample.provenance());
    const auto mode = o.uniformize
                          ? parse_uniformize_mode(*o.uniformize)
                          : (sample.provenance().unit_frechet ? UniformizeMode::parametric : UniformizeMode::rank);
    run["uniformize"] = std::string(to_string(mode));
    result = sweep(uniformize(sample, mode, exec), region, r.d, r.norm, levels, exec);
  } else {
    // Only dilate(A) influences the result, and simulated values depend on
    // coordinates rather than on the domain, so only that support is drawn.
    const Region support = dilate(region, r.d, r.norm);
    if (o.domain) {
      const Region domain = parse_domain_spec(*o.domain);
      if (!support.is_subset_of(domain)) {
        std::vector<LatticePoint> missing;
        for (const auto& p : support) {
          if (!domain.contains(p)) missing.push_back(p);
        }
        throw MissingSupport(std::move(missing));
      }
    }
    const std::size_t n = resolve_n(o);
    const std::uint64_t seed = resolve_seed(o);
    const auto mode = o.uniformize ? parse_uniformize_mode(*o.uniformize) : UniformizeMode::parametric;
    run["model"] = io::to_json(*r.config);
    run["n"] = n;
    run["seed"] = seed;
    run["simulated_sites"] = support.size();
    run["uniformize"] = std::string(to_string(mode));
    if (mode == UniformizeMode::rank) {
      // Ranks need every replicate at once.
      const auto sample = simulate_field(r.config->model, support, n, seed, {0, exec});
      result = sweep(uniformize(sample, mode, exec), region, r.d, r.norm, levels, exec);
    } else {
      // Level counts are additive over replicates, so memory stays bounded.
      constexpr std::size_t chunk = std::size_t{1} << 16;
      std::vector<LevelCounts> totals(levels.size());
      for (std::size_t first = 0; first < n; first += chunk) {
        const std::size_t m = std::min(chunk, n - first);
        const auto scores = uniformize(simulate_field(r.config->model, support, m, seed, {first, exec}), mode, exec);
        for (std::size_t k = 0; k < levels.size(); ++k) {
          totals[k] += count_level(scores, region, r.d, r.norm, levels[k], exec);
        }
      }
      for (const auto& t : totals) result.rows.push_back(level_row(t));
    }
  }

  json flagged = json::array();
  for (const auto& row : result.rows) {
    if (row.status == LevelStatus::no_exceedances) flagged.push_back({{"u", row.level}, {"status", "NoExceedances"}});
    if (row.status == LevelStatus::no_neighbor_exceedances) {
      flagged.push_back({{"u", row.level}, {"status", "NoNeighborExceedances"}});
    }
  }
  run["flagged_levels"] = flagged;
  emit_with_sidecar(o, io::sweep_csv(result), run, out);
  // The table is still written; a sweep with no usable level is reported as a failure.
  if (flagged.size() == result.rows.size()) throw NoExceedances(result.rows.front().level);
  return ok;
}

long long floor_mod(long long a, long long m) {
  const long long r = a % m;
  return r < 0 ? r + m : r;
}

int cmd_map(const Options& o, std::ostream& out) {
  if (!o.window || *o.window < 0) throw ConfigError("--window <int> (nonnegative half-width) is required for 'map'");
  if (o.stride < 1) throw ConfigError("--stride must be at least 1");
  const bool exact_mode = o.mode == "exact";
  if (!exact_mode && o.mode != "estimate") throw ConfigError("--mode must be exact|estimate");

  const auto r = resolve_model(o, exact_mode);
  const auto offsets = stencil(r.d, r.norm);
  if (offsets.size() < 2) throw ConfigError("--d too small: neighbourhoods hold only the centre site");

  std::optional<FieldSample> sample;
  std::optional<RankScores> scores;
  std::optional<Region> domain;
  if (exact_mode) {
    domain = resolve_domain(o);
    if (!domain) throw ConfigError("--domain is required for 'map --mode exact'");
  } else {
    if (!o.sample) throw ConfigError("--sample is required for 'map --mode estimate'");
    sample.emplace(io::read_sample(*o.sample));
    scores.emplace(rank_transform(*sample, exec_of(o)));
    domain = o.domain ? parse_domain_spec(*o.domain) : sample->domain();
  }

  // theta(V(x)) (or its estimate, with the sampled |V(x)|) per site, shared by
  // every window containing x.
  struct SiteTheta {
    double theta;
    std::int64_t v_size;
  };
  std::map<LatticePoint, std::optional<SiteTheta>> cache;
  auto site_theta = [&](LatticePoint x) -> std::optional<SiteTheta> {
    if (auto it = cache.find(x); it != cache.end()) return it->second;
    std::optional<SiteTheta> v;
    std::vector<LatticePoint> nb;
    for (const auto& off : offsets) nb.push_back(x + off);
    if (exact_mode) {
      v = SiteTheta{theta_exact(r.config->model, Region(nb)), static_cast<std::int64_t>(nb.size())};
    } else {
      std::vector<LatticePoint> kept;
      for (const auto& y : nb) {
        if (scores->domain().contains(y)) kept.push_back(y);
      }
      const bool full = kept.size() == nb.size();
      if (scores->domain().contains(x) && (full || o.clip)) {
        v = SiteTheta{theta_hat(*scores, Region(kept)), static_cast<std::int64_t>(kept.size())};
      }
    }
    cache.emplace(x, v);
    return v;
  };

  std::string csv = "x1,x2,zeta\n";
  std::size_t windows = 0;
  std::size_t skipped = 0;
  for (const auto& c : *domain) {
    if (floor_mod(c.x1, o.stride) != 0 || floor_mod(c.x2, o.stride) != 0) continue;
    const auto window = make_square(*o.window, c);
    CompensatedSum theta_sum;
    std::int64_t v_total = 0;
    bool missing = false;
    for (const auto& x : window) {
      const auto t = site_theta(x);
      if (!t) {
        missing = true;
        break;
      }
      theta_sum += t->theta;
      v_total += t->v_size;
    }
    const auto a_size = static_cast<std::int64_t>(window.size());
    if (missing || v_total == a_size) {
      ++skipped;
      continue;
    }
    const double zeta = (static_cast<double>(v_total) - theta_sum.value()) / static_cast<double>(v_total - a_size);
    ++windows;
    csv += std::to_string(c.x1) + "," + std::to_string(c.x2) + "," + io::format_double(zeta) + "\n";
  }

  json run = run_block(o);
  run["mode"] = o.mode;
  run["window_half_width"] = *o.window;
  run["stride"] = o.stride;
  run["windows"] = windows;
  run["skipped_windows"] = skipped;
  if (r.config) run["model"] = io::to_json(*r.config);
  if (sample) run["sample"] = io::to_json(sample->provenance());
  emit_with_sidecar(o, csv, run, out);
  if (o.out) out << "wrote " << windows << " window(s), skipped " << skipped << "\n";
  return ok;
}

void add_common(CLI::App* sub, Options& o) {
  sub->add_option("--model", o.model_path, "Model config JSON");
  sub->add_option("--preset", o.preset, "Named demo configuration (paper-fig1)");
  sub->add_option("--domain", o.domain, "disk:<r> | file:<path>");
  sub->add_option("--region", o.region, "disk:<r>@<x>,<y> | annulus:<r1>,<r2> | square:<h>@<x>,<y> | file:<path>");
  sub->add_option("--sample", o.sample, "Sample CSV (rep,x1,x2,value)");
  sub->add_option("--n", o.n, "Replicate count");
  sub->add_option("--seed", o.seed, "64-bit seed");
  sub->add_option("--d", o.d, "Neighbourhood radius");
  sub->add_option("--norm", o.norm, "euclidean | chebyshev | manhattan");
  sub->add_option("--threads", o.threads, "Worker threads (default: CROSSINGGRAM_THREADS or all cores)");
  sub->add_option("--out", o.out, "Output path (default: stdout where supported)");
}

}  // namespace

Region parse_region_spec(const std::string& spec) {
  const auto colon = spec.find(':');
  if (colon == std::string::npos) throw ConfigError("--region: expected <kind>:<args>, got '" + spec + "'");
  const std::string kind = spec.substr(0, colon);
  const std::string_view args = std::string_view(spec).substr(colon + 1);
  if (kind == "file") return io::load_region(std::string(args));
  if (kind == "disk" || kind == "square") {
    const auto at = args.find('@');
    const auto size_part = args.substr(0, at);
    const LatticePoint center =
        at == std::string_view::npos ? LatticePoint{} : parse_point(args.substr(at + 1), "--region");
    if (kind == "disk") return make_disk(parse_real(size_part, "--region"), center);
    return make_square(parse_int(size_part, "--region"), center);
  }
  if (kind == "annulus") {
    const auto r = split(args, ',');
    if (r.size() != 2) throw ConfigError("--region: annulus expects <r1>,<r2>");
    return make_annulus(parse_real(r[0], "--region"), parse_real(r[1], "--region"));
  }
  throw ConfigError("--region: unknown kind '" + kind + "'");
}

Region parse_domain_spec(const std::string& spec) {
  if (spec.rfind("disk:", 0) == 0) {
    const auto rest = std::string_view(spec).substr(5);
    if (rest.find('@') != std::string_view::npos) throw ConfigError("--domain: disk domains are centred at the origin");
    return make_disk(parse_real(rest, "--domain"));
  }
  if (spec.rfind("file:", 0) == 0) return io::load_region(spec.substr(5));
  throw ConfigError("--domain: expected disk:<r> or file:<path>, got '" + spec + "'");
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Crossinggram coefficients for max-stable lattice fields", "crossinggram"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(CROSSINGGRAM_VERSION));
  Options o;

  auto* sim = app.add_subcommand("simulate", "Simulate replicates and write a sample CSV + sidecar");
  add_common(sim, o);
  sim->add_option("--field", o.field, "model | independent | totally-dependent");

  auto* exact = app.add_subcommand("exact", "Closed-form coefficients for a region");
  add_common(exact, o);

  auto* est = app.add_subcommand("estimate", "Rank-based estimates from a sample");
  add_common(est, o);
  est->add_flag("--clip", o.clip, "Clip neighbourhoods to the sampled domain");
  est->add_option("--pair", o.pairs, "x1,y1,x2,y2: also report beta_hat for this site pair");

  auto* sw = app.add_subcommand("sweep", "Finite-level crossinggram over a grid of levels");
  add_common(sw, o);
  sw->add_option("--levels", o.levels, "u1,u2,... ascending in (0,1)");
  sw->add_option("--uniformize", o.uniformize, "parametric | rank");

  auto* map = app.add_subcommand("map", "Crossinggram of sliding square windows");
  add_common(map, o);
  map->add_option("--mode", o.mode, "exact | estimate");
  map->add_option("--window", o.window, "Window half-width");
  map->add_option("--stride", o.stride, "Emit windows at centres divisible by the stride");
  map->add_flag("--clip", o.clip, "Clip neighbourhoods to the sampled domain");

  std::vector<std::string> argv_rev(args.rbegin(), args.rend());
  try {
    app.parse(argv_rev);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == static_cast<int>(CLI::ExitCodes::Success)) {
      out << (dynamic_cast<const CLI::CallForHelp*>(&e) || dynamic_cast<const CLI::CallForAllHelp*>(&e)
                  ? app.help()
                  : std::string(CROSSINGGRAM_VERSION) + "\n");
      return ok;
    }
    err << "error: " << e.what() << "\n";
    return config_error;
  }
  o.argv = args;
  for (const auto* sub : app.get_subcommands()) o.command = sub->get_name();

  try {
    if (o.command == "simulate") return cmd_simulate(o, out);
    if (o.command == "exact") return cmd_exact(o, out);
    if (o.command == "estimate") return cmd_estimate(o, out);
    if (o.command == "sweep") return cmd_sweep(o, out);
    if (o.command == "map") return cmd_map(o, out);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return config_error;
  } catch (const DataError& e) {
    err << "data error: " << e.what() << "\n";
    return data_error;
  } catch (const NumericalError& e) {
    err << "numerical error: " << e.what() << "\n";
    return numerical_error;
  }
  return config_error;
}

int run(int argc, char** argv, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args, out, err);
}

}  // namespace crossinggram::cli

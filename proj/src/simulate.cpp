#include <crossinggram/simulate.hpp>

#include <cmath>
#include <limits>

#include <crossinggram/errors.hpp>
#include <crossinggram/kernels.hpp>
#include <crossinggram/rng.hpp>

namespace crossinggram {

FieldSample::FieldSample(Region domain, std::size_t n, std::vector<double> column_major, Provenance provenance)
    : domain_(std::move(domain)), n_(n), values_(std::move(column_major)), provenance_(std::move(provenance)) {
  if (n_ == 0) throw ConfigError("a field sample needs at least one replicate");
  if (values_.size() != n_ * domain_.size()) {
    throw DataError("field sample has " + std::to_string(values_.size()) + " values, expected " +
                    std::to_string(n_ * domain_.size()));
  }
  for (double v : values_) {
    if (!std::isfinite(v)) throw DataError("field sample contains a non-finite value");
    if (provenance_.unit_frechet && !(v > 0.0)) {
      throw DataError("unit-Frechet field sample contains a nonpositive value");
    }
  }
}

double sample_unit_frechet(double u) {
  if (!(u > 0.0 && u < 1.0)) throw ConfigError("unit Frechet inverse CDF needs u in the open interval (0, 1)");
  return -1.0 / std::log(u);
}

namespace {

void check_request(std::size_t n, const SimulationOptions& options) {
  if (n == 0) throw ConfigError("n must be at least 1");
  constexpr std::uint64_t limit = std::numeric_limits<std::uint32_t>::max();
  if (options.first_replicate + n - 1 > limit) {
    throw ConfigError("replicate indices must stay below 2^32");
  }
}

// R for every replicate in the request.
std::vector<double> common_draws(std::size_t n, std::uint64_t seed, std::uint64_t first) {
  std::vector<double> r(n);
  for (std::size_t j = 0; j < n; ++j) {
    r[j] = -1.0 / std::log(uniform_open(seed, static_cast<std::uint32_t>(first + j), 0, 0, Stream::common));
  }
  return r;
}

void site_draws(LatticePoint x, std::size_t n, std::uint64_t seed, std::uint64_t first, double* out) {
  for (std::size_t j = 0; j < n; ++j) {
    out[j] = -1.0 / std::log(uniform_open(seed, static_cast<std::uint32_t>(first + j), x.x1, x.x2, Stream::site));
  }
}

Provenance make_provenance(std::string source, std::uint64_t seed, const SimulationOptions& options) {
  return Provenance{std::move(source), seed, kGeneratorName, true, options.first_replicate};
}

}  // namespace

FieldSample simulate_field(const PartitionModel& model, const Region& domain, std::size_t n, std::uint64_t seed,
                           SimulationOptions options) {
  check_request(n, options);
  const auto r = common_draws(n, seed, options.first_replicate);
  std::vector<double> values(n * domain.size());
  const auto& k = kernels::active_kernels();

  parallel_for(domain.size(), options.exec, [&](std::size_t begin, std::size_t end) {
    std::vector<double> y(n);
    for (std::size_t i = begin; i < end; ++i) {
      const auto x = domain[i];
      site_draws(x, n, seed, options.first_replicate, y.data());
      k.max_stable_combine(y.data(), r.data(), model.beta_at(x), n, values.data() + i * n);
    }
  });
  return FieldSample(domain, n, std::move(values), make_provenance("model:" + model_fingerprint(model), seed, options));
}

FieldSample simulate_independent(const Region& domain, std::size_t n, std::uint64_t seed, SimulationOptions options) {
  check_request(n, options);
  std::vector<double> values(n * domain.size());
  parallel_for(domain.size(), options.exec, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      site_draws(domain[i], n, seed, options.first_replicate, values.data() + i * n);
    }
  });
  return FieldSample(domain, n, std::move(values), make_provenance("independent", seed, options));
}

FieldSample simulate_totally_dependent(const Region& domain, std::size_t n, std::uint64_t seed,
                                       SimulationOptions options) {
  check_request(n, options);
  const auto r = common_draws(n, seed, options.first_replicate);
  std::vector<double> values;
  values.reserve(n * domain.size());
  for (std::size_t i = 0; i < domain.size(); ++i) values.insert(values.end(), r.begin(), r.end());
  return FieldSample(domain, n, std::move(values), make_provenance("totally_dependent", seed, options));
}

}  // namespace crossinggram

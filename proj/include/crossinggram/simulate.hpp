#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <crossinggram/lattice.hpp>
#include <crossinggram/model.hpp>
#include <crossinggram/parallel.hpp>

namespace crossinggram {

struct Provenance {
  // "model:<fingerprint>", "independent", "totally_dependent" or "external".
  std::string source = "external";
  std::optional<std::uint64_t> seed;
  std::string generator;
  // Margins are known to be unit Frechet; required for parametric scores.
  bool unit_frechet = false;
  // Index of the first replicate in the generator's counter space.
  std::uint64_t first_replicate = 0;

  friend bool operator==(const Provenance&, const Provenance&) = default;
};

// n replicates of a field over a domain. Logically an n x |domain| matrix
// (row = replicate, column = site in domain order); stored column-major so
// each site's replicates are contiguous.
class FieldSample {
 public:
  FieldSample(Region domain, std::size_t n, std::vector<double> column_major, Provenance provenance);

  const Region& domain() const noexcept { return domain_; }
  std::size_t n() const noexcept { return n_; }
  std::size_t sites() const noexcept { return domain_.size(); }

  double value(std::size_t replicate, std::size_t site) const { return values_[site * n_ + replicate]; }
  std::span<const double> column(std::size_t site) const { return {values_.data() + site * n_, n_}; }
  std::span<const double> values() const noexcept { return values_; }
  const Provenance& provenance() const noexcept { return provenance_; }

  friend bool operator==(const FieldSample&, const FieldSample&) = default;

 private:
  Region domain_;
  std::size_t n_;
  std::vector<double> values_;
  Provenance provenance_;
};

// Inverse unit-Frechet CDF: -1 / log(u) for u in (0, 1).
double sample_unit_frechet(double u);

struct SimulationOptions {
  // Replicates are numbered first_replicate, first_replicate + 1, ...; a long
  // run can be produced in chunks that concatenate to the one-shot result.
  std::uint64_t first_replicate = 0;
  Execution exec{};
};

FieldSample simulate_field(const PartitionModel& model, const Region& domain, std::size_t n, std::uint64_t seed,
                           SimulationOptions options = {});

FieldSample simulate_independent(const Region& domain, std::size_t n, std::uint64_t seed,
                                 SimulationOptions options = {});

FieldSample simulate_totally_dependent(const Region& domain, std::size_t n, std::uint64_t seed,
                                       SimulationOptions options = {});

}  // namespace crossinggram

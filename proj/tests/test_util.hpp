#pragma once

#include <cmath>
#include <random>

#include "specshare/market.hpp"

// Shared helpers for the property-style tests: seeded generators so every run
// draws the same cases.
namespace testutil {

struct Rng {
  std::mt19937_64 gen;
  explicit Rng(std::uint64_t seed) : gen(seed) {}

  double uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(gen);
  }
  double log_uniform(double lo, double hi) {
    return std::exp(uniform(std::log(lo), std::log(hi)));
  }
  long integer(long lo, long hi) {
    return std::uniform_int_distribution<long>(lo, hi)(gen);
  }
};

// A random valid market with an open band and moderate bandwidths.
inline specshare::MarketConfig random_config(Rng& rng, long max_sps = 6,
                                             bool with_open = true) {
  specshare::MarketConfig c;
  c.n_sps = static_cast<std::size_t>(rng.integer(2, max_sps));
  for (std::size_t i = 0; i < c.n_sps; ++i) {
    specshare::SpectrumEndowment e;
    e.proprietary_bw = rng.log_uniform(0.2, 5.0);
    if (rng.uniform(0.0, 1.0) < 0.5)
      e.licensed_shared_bws.push_back(rng.uniform(0.0, 2.0));
    c.endowments.push_back(e);
  }
  c.availability = rng.uniform(0.05, 1.0);
  c.degradation = rng.uniform(0.5, 1.0);
  if (with_open) c.open_access_bw = rng.log_uniform(0.1, 5.0);
  return c;
}

// A random allocation comfortably inside the nonnegative-price region.
inline specshare::Allocation random_allocation(Rng& rng,
                                               const specshare::MarketConfig& c) {
  specshare::Allocation a = specshare::Allocation::zeros(c.n_sps);
  const double budget =
      0.8 * c.market_capacity() / static_cast<double>(c.n_sps);
  for (std::size_t i = 0; i < c.n_sps; ++i) {
    a.licensed[i] = rng.uniform(0.0, budget * 0.6);
    if (c.open_access_bw > 0.0) a.open[i] = rng.uniform(0.0, budget * 0.4);
  }
  return a;
}

}  // namespace testutil

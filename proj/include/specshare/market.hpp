#pragma once

#include <cmath>
#include <cstddef>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "specshare/errors.hpp"

namespace specshare {

/// Bandwidth held by one service provider: an always-available proprietary
/// band plus any number of intermittent licensed-shared sub-bands.
struct SpectrumEndowment {
  double proprietary_bw = 0.0;
  std::vector<double> licensed_shared_bws;

  double pooled_shared() const {
    return std::accumulate(licensed_shared_bws.begin(),
                           licensed_shared_bws.end(), 0.0);
  }
};

/// Replaces all licensed shared sub-bands by one sub-band carrying their sum.
/// Equilibrium on the pooled instance is equivalent to the original.
inline SpectrumEndowment pool_subbands(const SpectrumEndowment& e) {
  return {e.proprietary_bw, {e.pooled_shared()}};
}

/// Full game instance. Defaults give the unit linear inverse demand the
/// closed forms assume; slope/intercept are configurable for the general
/// solver but the closed forms are valid only at the defaults.
struct MarketConfig {
  std::size_t n_sps = 0;
  std::vector<SpectrumEndowment> endowments;
  double open_access_bw = 0.0;  // W0 = beta * W
  double availability = 1.0;    // alpha
  double degradation = 1.0;     // d, applies to the open band only
  double demand_intercept = 1.0;
  double demand_slope = 1.0;
  // When the instance was specified as "a total shared band W split into
  // sub-bands", the declared total; validation checks the split adds up.
  std::optional<double> declared_shared_bw;

  double pooled_shared(std::size_t i) const {
    return endowments[i].pooled_shared();
  }
  double proprietary(std::size_t i) const {
    return endowments[i].proprietary_bw;
  }
  // Bandwidth SP i sees on its licensed bands while the shared band is up.
  double licensed_capacity(std::size_t i) const {
    return endowments[i].proprietary_bw + endowments[i].pooled_shared();
  }
  double effective_open_bw() const { return degradation * open_access_bw; }
  double total_shared() const {
    double s = open_access_bw;
    for (const auto& e : endowments) s += e.pooled_shared();
    return s;
  }
  // Largest total mass the market can absorb at nonnegative delivered price.
  double market_capacity() const { return demand_intercept / demand_slope; }

  void validate() const {
    if (n_sps == 0) throw ConfigError("n_sps must be >= 1");
    if (endowments.size() != n_sps)
      throw ConfigError("endowments size does not match n_sps");
    if (!(availability >= 0.0 && availability <= 1.0))
      throw ConfigError("availability out of range [0,1]");
    if (!(degradation > 0.0 && degradation <= 1.0))
      throw ConfigError("degradation out of range (0,1]");
    if (!(demand_intercept > 0.0))
      throw ConfigError("demand_intercept must be positive");
    if (!(demand_slope > 0.0)) throw ConfigError("demand_slope must be positive");
    if (open_access_bw < 0.0)
      throw ConfigError("open_access_bw must be nonnegative");
    for (std::size_t i = 0; i < n_sps; ++i) {
      const auto& e = endowments[i];
      if (e.proprietary_bw < 0.0)
        throw ConfigError("sp " + std::to_string(i + 1) +
                          ": proprietary_bw must be nonnegative");
      // A zero proprietary band leaves nowhere for pre-empted traffic to
      // spill; it is admissible only when the shared band never vanishes.
      if (e.proprietary_bw == 0.0 && availability < 1.0)
        throw ConfigError("sp " + std::to_string(i + 1) +
                          ": proprietary_bw = 0 requires availability = 1");
      for (double w : e.licensed_shared_bws)
        if (w < 0.0)
          throw ConfigError("sp " + std::to_string(i + 1) +
                            ": licensed shared sub-band must be nonnegative");
    }
    if (declared_shared_bw) {
      const double tol = 1e-9 * std::max(1.0, *declared_shared_bw);
      if (std::abs(total_shared() - *declared_shared_bw) > tol)
        throw ConfigError(
            "licensed shared sub-bands plus open_access_bw do not add up to "
            "the declared shared band");
    }
  }

  MarketConfig pooled() const {
    MarketConfig c = *this;
    for (auto& e : c.endowments) e = pool_subbands(e);
    return c;
  }

  // --- common constructions -------------------------------------------------

  /// Licensed-only market with the given per-SP (equivalent) bandwidths.
  static MarketConfig licensed(std::vector<double> bandwidths) {
    MarketConfig c;
    c.n_sps = bandwidths.size();
    for (double b : bandwidths) c.endowments.push_back({b, {}});
    return c;
  }

  /// N symmetric SPs sharing total proprietary bandwidth B; the shared band W
  /// is split into an open part beta*W and equal licensed slices of the rest.
  static MarketConfig symmetric(std::size_t n, double total_proprietary,
                                double shared_bw, double beta, double alpha,
                                double d = 1.0) {
    MarketConfig c;
    c.n_sps = n;
    const double lic_slice = (1.0 - beta) * shared_bw / static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) {
      SpectrumEndowment e{total_proprietary / static_cast<double>(n), {}};
      if (lic_slice > 0.0) e.licensed_shared_bws.push_back(lic_slice);
      c.endowments.push_back(std::move(e));
    }
    c.open_access_bw = beta * shared_bw;
    c.availability = alpha;
    c.degradation = d;
    c.declared_shared_bw = shared_bw;
    return c;
  }
};

/// Per-SP traffic decision: licensed quantity x (pooled across the SP's
/// licensed bands) and open-access quantity w. Masses of nonatomic users.
struct Allocation {
  std::vector<double> licensed;
  std::vector<double> open;

  static Allocation zeros(std::size_t n) {
    return {std::vector<double>(n, 0.0), std::vector<double>(n, 0.0)};
  }
  std::size_t size() const { return licensed.size(); }
  double total_served() const {
    return std::accumulate(licensed.begin(), licensed.end(), 0.0) +
           std::accumulate(open.begin(), open.end(), 0.0);
  }
  double total_open() const {
    return std::accumulate(open.begin(), open.end(), 0.0);
  }

  /// Full type invariants (nonnegative, inside the nonnegative-price region).
  void validate(const MarketConfig& c) const {
    if (licensed.size() != c.n_sps || open.size() != c.n_sps)
      throw DomainError("allocation dimensions do not match config");
    for (double v : licensed)
      if (!(v >= 0.0)) throw DomainError("licensed quantity must be nonnegative");
    for (double v : open)
      if (!(v >= 0.0)) throw DomainError("open quantity must be nonnegative");
    if (total_served() > c.market_capacity() * (1.0 + 1e-12))
      throw DomainError("total served exceeds the demand intercept range");
  }
};

/// Prices at a given allocation. Band prices may be negative away from
/// equilibrium; nonnegativity is asserted only at equilibria.
struct PriceSchedule {
  double delivered_price = 0.0;
  std::vector<double> licensed_prices;
  std::vector<double> open_prices;
  std::vector<double> blended_prices;
};

/// Equivalent always-available bandwidth of (B, W, alpha): Lemma-2 reduction
/// of a proprietary band plus an intermittent licensed band.
inline double equivalent_bandwidth(double proprietary, double shared,
                                   double alpha) {
  if (proprietary < 0.0 || shared < 0.0)
    throw DomainError("equivalent_bandwidth: bandwidths must be nonnegative");
  if (!(alpha >= 0.0 && alpha <= 1.0))
    throw DomainError("equivalent_bandwidth: alpha out of range [0,1]");
  if (proprietary == 0.0) {
    if (alpha < 1.0)
      throw DomainError(
          "equivalent_bandwidth: zero proprietary bandwidth requires alpha = 1");
    return shared;
  }
  return proprietary * (proprietary + shared) /
         (proprietary + (1.0 - alpha) * shared);
}

/// Splits a pooled licensed quantity back across the proprietary band and the
/// licensed shared band so both carry equal load (the revenue-maximizing and
/// price-equalizing split).
inline std::pair<double, double> split_pooled_traffic(double pooled_qty,
                                                      double proprietary,
                                                      double shared) {
  if (!(proprietary > 0.0))
    throw DomainError("split_pooled_traffic: proprietary bandwidth must be > 0");
  if (shared < 0.0)
    throw DomainError("split_pooled_traffic: shared bandwidth must be >= 0");
  const double denom = proprietary + shared;
  return {pooled_qty * proprietary / denom, pooled_qty * shared / denom};
}

namespace detail {

inline void check_alloc(const MarketConfig& c, const Allocation& a) {
  if (a.licensed.size() != c.n_sps || a.open.size() != c.n_sps)
    throw DomainError("allocation dimensions do not match config");
  for (std::size_t i = 0; i < c.n_sps; ++i) {
    if (!(a.licensed[i] >= 0.0) || !(a.open[i] >= 0.0))
      throw DomainError("allocation quantities must be nonnegative");
    if (c.open_access_bw == 0.0 && a.open[i] != 0.0)
      throw DomainError("open quantity nonzero but there is no open band");
    if (c.licensed_capacity(i) == 0.0 && a.licensed[i] > 0.0)
      throw DomainError("licensed traffic on a zero-capacity endowment");
  }
}

// Pre-emption spill term (1-alpha) * (x_i + w_i) / B_i. Vanishes identically
// at alpha = 1, which is the only regime where B_i = 0 is admissible.
inline double spill_latency(const MarketConfig& c, std::size_t i, double x,
                            double w) {
  if (c.availability == 1.0) return 0.0;
  return (1.0 - c.availability) * (x + w) / c.proprietary(i);
}

}  // namespace detail

/// Delivered, per-band, and blended prices at an allocation.
inline PriceSchedule band_prices(const MarketConfig& c, const Allocation& a) {
  detail::check_alloc(c, a);
  const double alpha = c.availability;
  const double pd = c.demand_intercept - c.demand_slope * a.total_served();
  const double open_total = a.total_open();
  const double w0 = c.effective_open_bw();

  PriceSchedule ps;
  ps.delivered_price = pd;
  ps.licensed_prices.resize(c.n_sps);
  ps.open_prices.resize(c.n_sps);
  ps.blended_prices.resize(c.n_sps);
  for (std::size_t i = 0; i < c.n_sps; ++i) {
    const double x = a.licensed[i], w = a.open[i];
    const double spill = detail::spill_latency(c, i, x, w);
    const double cap = c.licensed_capacity(i);
    const double up_latency = cap > 0.0 ? alpha * x / cap : 0.0;
    ps.licensed_prices[i] = pd - spill - up_latency;
    ps.open_prices[i] =
        pd - spill - (w0 > 0.0 ? alpha * open_total / w0 : 0.0);
    const double total = x + w;
    ps.blended_prices[i] =
        total > 0.0
            ? (x * ps.licensed_prices[i] + w * ps.open_prices[i]) / total
            : ps.licensed_prices[i];
  }
  return ps;
}

/// Expected latencies per SP: (licensed band, open band). Both include the
/// spill onto the proprietary band when the shared band is pre-empted; only
/// the open band sees the degradation factor.
inline std::vector<std::pair<double, double>> expected_latencies(
    const MarketConfig& c, const Allocation& a) {
  detail::check_alloc(c, a);
  const double alpha = c.availability;
  const double open_total = a.total_open();
  const double w0 = c.effective_open_bw();
  std::vector<std::pair<double, double>> out(c.n_sps);
  for (std::size_t i = 0; i < c.n_sps; ++i) {
    const double x = a.licensed[i], w = a.open[i];
    const double spill = detail::spill_latency(c, i, x, w);
    const double cap = c.licensed_capacity(i);
    const double up = cap > 0.0 ? alpha * x / cap : 0.0;
    const double open_lat =
        w0 > 0.0 ? alpha * open_total / w0 + spill : 0.0;
    out[i] = {spill + up, open_lat};
  }
  return out;
}

/// Per-SP revenue p_i * x_i + p_i^w * w_i.
inline std::vector<double> revenues(const MarketConfig& c,
                                    const Allocation& a) {
  const PriceSchedule ps = band_prices(c, a);
  std::vector<double> r(c.n_sps);
  for (std::size_t i = 0; i < c.n_sps; ++i)
    r[i] = ps.licensed_prices[i] * a.licensed[i] +
           ps.open_prices[i] * a.open[i];
  return r;
}

}  // namespace specshare

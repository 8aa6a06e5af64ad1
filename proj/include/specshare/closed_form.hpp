#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "specshare/errors.hpp"
#include "specshare/linalg.hpp"
#include "specshare/market.hpp"

namespace specshare {

/// Duopoly equilibrium on equivalent licensed bandwidths (T1, T2).
struct DuopolyLicensedEq {
  std::array<double, 2> quantity;
  std::array<double, 2> price;
  std::array<double, 2> revenue;
};

inline DuopolyLicensedEq duopoly_licensed_equilibrium(double t1, double t2) {
  if (!(t1 > 0.0) || !(t2 > 0.0))
    throw DomainError("duopoly_licensed_equilibrium: T must be positive");
  const double denom = 3.0 * t1 * t2 + 4.0 + 4.0 * (t1 + t2);
  DuopolyLicensedEq eq;
  eq.quantity = {(t1 * t2 + 2.0 * t1) / denom, (t1 * t2 + 2.0 * t2) / denom};
  eq.price = {(t1 * t2 + 2.0 * t1 + t2 + 2.0) / denom,
              (t1 * t2 + 2.0 * t2 + t1 + 2.0) / denom};
  eq.revenue = {eq.price[0] * eq.quantity[0], eq.price[1] * eq.quantity[1]};
  return eq;
}

struct RevenueDerivatives {
  double d_own;        // dR1/dT1
  double d2_own;       // d^2 R1 / dT1^2
  double d_cross;      // dR1/dT2 (central difference; only its sign is exact)
};

/// Comparative statics of duopoly revenue in the own and rival equivalent
/// bandwidths. R1 = T1(T1+1)/(b T1 + a)^2 with a, b functions of T2.
inline RevenueDerivatives duopoly_revenue_derivatives(double t1, double t2) {
  if (!(t1 > 0.0) || !(t2 > 0.0))
    throw DomainError("duopoly_revenue_derivatives: T must be positive");
  const double a = (4.0 * t2 + 4.0) / (t2 + 2.0);
  const double b = (3.0 * t2 + 4.0) / (t2 + 2.0);
  const double den = b * t1 + a;
  RevenueDerivatives d;
  d.d_own = ((2.0 * a - b) * t1 + a) / (den * den * den);
  d.d2_own = (-2.0 * b * (2.0 * a - b) * t1 - 2.0 * a * (2.0 * b - a)) /
             (den * den * den * den);
  // No closed form is stated for the cross effect; step kept away from 0.
  const double h = std::min(std::max(1e-6, 1e-6 * t2), t2 / 2.0);
  const double r_hi = duopoly_licensed_equilibrium(t1, t2 + h).revenue[0];
  const double r_lo = duopoly_licensed_equilibrium(t1, t2 - h).revenue[0];
  d.d_cross = (r_hi - r_lo) / (2.0 * h);
  return d;
}

/// Symmetric equilibrium of the N-SP game (finite N or the large-N limit).
/// Per-SP entries are zero for limit results, where only aggregates converge.
struct SymmetricEq {
  double licensed_per_sp = 0.0;  // x-bar
  double open_per_sp = 0.0;      // w-bar
  double licensed_total = 0.0;   // N * x-bar (or the limiting aggregate)
  double open_total = 0.0;       // N * w-bar
  double price_licensed = 0.0;
  double price_open = 0.0;

  double total_served() const { return licensed_total + open_total; }
};

/// Finite-N symmetric equilibrium: total proprietary bandwidth B split over N
/// SPs, shared band W split into open part beta*W (degraded by d) and equal
/// licensed slices of the rest.
inline SymmetricEq n_symmetric_equilibrium(long n, double total_proprietary,
                                           double shared_bw, double beta,
                                           double alpha, double d = 1.0) {
  if (n < 1) throw DomainError("n_symmetric_equilibrium: N must be >= 1");
  if (!(total_proprietary > 0.0))
    throw DomainError("n_symmetric_equilibrium: B must be positive");
  if (shared_bw < 0.0 || !(beta >= 0.0 && beta <= 1.0) ||
      !(alpha >= 0.0 && alpha <= 1.0) || !(d > 0.0 && d <= 1.0))
    throw DomainError("n_symmetric_equilibrium: parameter out of range");

  const double b = total_proprietary;
  const double nn = static_cast<double>(n);
  const double ratio = nn / (nn + 1.0);
  const double open_bw = d * beta * shared_bw;        // effective open band
  const double lic_cap = b + (1.0 - beta) * shared_bw;
  const double denom = (b * (nn + 1.0) / nn + 2.0 * (1.0 - alpha)) *
                           (2.0 * open_bw * ratio + lic_cap) +
                       2.0 * alpha * b;

  SymmetricEq eq;
  eq.licensed_total = b * lic_cap / denom;
  eq.open_total = 2.0 * open_bw * ratio * b / denom;
  eq.licensed_per_sp = eq.licensed_total / nn;
  eq.open_per_sp = eq.open_total / nn;
  const double served = eq.total_served();
  const double spill = (1.0 - alpha) * served / b;
  eq.price_licensed =
      1.0 - served - alpha * eq.licensed_total / lic_cap - spill;
  // Open-band congestion equals 2N/(N+1) times the licensed congestion, which
  // also defines the band's shadow price continuously when beta*W = 0.
  eq.price_open = 1.0 - served -
                  alpha * 2.0 * ratio * eq.licensed_total / lic_cap - spill;
  return eq;
}

/// N -> infinity symmetric equilibrium aggregates and limiting prices.
inline SymmetricEq n_symmetric_limit(double total_proprietary, double shared_bw,
                                     double beta, double alpha) {
  if (!(total_proprietary > 0.0))
    throw DomainError("n_symmetric_limit: B must be positive");
  const double b = total_proprietary, w = shared_bw;
  const double denom =
      (b + 2.0 * (1.0 - alpha)) * (b + w * (1.0 + beta)) + 2.0 * b * alpha;
  SymmetricEq eq;
  eq.licensed_total = b * (b + (1.0 - beta) * w) / denom;
  eq.open_total = 2.0 * beta * w * b / denom;
  eq.price_licensed =
      ((1.0 - alpha) * (b + w * (1.0 + beta)) + b * alpha) / denom;
  eq.price_open = (1.0 - alpha) * (b + w * (1.0 + beta)) / denom;
  return eq;
}

/// Duopoly with open access, symmetric endowments B1 = B2 = B/2. For beta = 1
/// this is the displayed closed form; for beta in (0,1) it solves the 2x2
/// first-order system stated alongside it (valid only in that construction;
/// the pooled reduction reproduces it only at beta = 1).
inline SymmetricEq symmetric_duopoly_open(double total_proprietary,
                                          double shared_bw, double alpha,
                                          double beta = 1.0) {
  if (!(total_proprietary > 0.0))
    throw DomainError("symmetric_duopoly_open: B must be positive");
  if (shared_bw < 0.0 || !(alpha >= 0.0 && alpha <= 1.0) ||
      !(beta >= 0.0 && beta <= 1.0))
    throw DomainError("symmetric_duopoly_open: parameter out of range");
  const double b = total_proprietary, w = shared_bw;

  SymmetricEq eq;
  if (beta * w == 0.0) {
    // No open band: each SP plays on its pooled licensed bandwidth.
    const double t =
        equivalent_bandwidth(b / 2.0, (1.0 - beta) * w / 2.0, alpha);
    const auto duo = duopoly_licensed_equilibrium(t, t);
    eq.licensed_per_sp = duo.quantity[0];
    eq.licensed_total = 2.0 * duo.quantity[0];
    eq.price_licensed = duo.price[0];
    eq.price_open = 0.0;
    return eq;
  }

  double x, wq;
  if (beta == 1.0) {
    const double denom = 9.0 * b * b + 12.0 * b * w + 12.0 * b +
                         16.0 * (1.0 - alpha) * w;
    x = 3.0 * b * b / denom;
    wq = 4.0 * b * w / denom;
  } else {
    const double c_mix = 3.0 + 2.0 * (1.0 - alpha) * (1.0 + beta) / b;
    const auto sol = linalg::solve2(
        3.0 + 4.0 / b, c_mix, c_mix,
        3.0 + 3.0 * alpha / w + 4.0 * (1.0 - alpha) * beta / b, 1.0, 1.0);
    x = sol.x;
    wq = sol.y;
  }
  eq.licensed_per_sp = x;
  eq.open_per_sp = wq;
  eq.licensed_total = 2.0 * x;
  eq.open_total = 2.0 * wq;
  eq.price_licensed = 1.0 - x * (2.0 + 2.0 / b) -
                      wq * (2.0 + 2.0 * (1.0 - alpha) / b);
  eq.price_open = 1.0 - x * (2.0 + 2.0 * (1.0 - alpha) / b) -
                  wq * (2.0 + 2.0 * alpha / w + 2.0 * (1.0 - alpha) / b);
  return eq;
}

/// Which analytic vacate condition produced a report.
enum class VacateCondition {
  duopoly,       // two SPs, general licensed/open split
  all_but_last,  // N SPs, everyone but the smallest leaves the open band
};

struct VacateReport {
  std::vector<std::size_t> vacating_sps;  // 0-based indices with w* = 0
  double slack = 0.0;                     // governing inequality LHS - RHS
  std::vector<double> per_sp_slack;       // slack per candidate SP
  VacateCondition condition = VacateCondition::duopoly;
  bool boundary = false;                  // slack indistinguishable from 0
};

namespace detail {

inline bool near_zero_slack(double slack, double scale) {
  return std::abs(slack) <= 1e-9 * std::max(1.0, scale);
}

}  // namespace detail

/// SP 1 leaves the open band iff its licensed capacity clears the congestion
/// it would face there; slack > 0 means vacate.
inline VacateReport duopoly_vacate_condition(double b1, double b2, double w1,
                                             double w2, double open_bw,
                                             double alpha) {
  if (!(b1 > 0.0) || !(b2 > 0.0))
    throw DomainError("duopoly_vacate_condition: B must be positive");
  if (w1 < 0.0 || w2 < 0.0 || open_bw < 0.0)
    throw DomainError("duopoly_vacate_condition: bandwidths must be nonnegative");
  const double lhs = b1 + w1 + 2.0 * (1.0 - alpha) * w1 / b1;
  const double rhs = 2.0 * (open_bw + w2) + 2.0 * b2 + 2.0 +
                     4.0 * (1.0 - alpha) * (open_bw + w2) / b2;
  VacateReport r;
  r.condition = VacateCondition::duopoly;
  r.slack = lhs - rhs;
  r.per_sp_slack = {r.slack};
  r.boundary = detail::near_zero_slack(r.slack, std::max(lhs, rhs));
  if (r.slack >= 0.0) r.vacating_sps.push_back(0);
  return r;
}

/// N-provider generalization: SPs 1..N-1 all leave the open band (SP N is its
/// sole user) iff every one of them individually clears the threshold set by
/// SP N's bandwidth and the open-band congestion.
inline VacateReport n_provider_vacate_condition(
    const std::vector<double>& proprietary,
    const std::vector<double>& licensed_shared, double open_bw, double alpha) {
  const std::size_t n = proprietary.size();
  if (n < 2)
    throw DomainError("n_provider_vacate_condition: need at least 2 SPs");
  if (licensed_shared.size() != n)
    throw DomainError("n_provider_vacate_condition: size mismatch");
  for (double b : proprietary)
    if (!(b > 0.0))
      throw DomainError("n_provider_vacate_condition: B must be positive");

  const double bn = proprietary[n - 1];
  const double wn = licensed_shared[n - 1];
  const double shared_last = open_bw + wn;
  const double rhs = 2.0 * shared_last + 2.0 * bn + 2.0 +
                     4.0 * (1.0 - alpha) * shared_last / bn;
  VacateReport r;
  r.condition = VacateCondition::all_but_last;
  r.per_sp_slack.resize(n - 1);
  double min_slack = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double wi = licensed_shared[i];
    const double lhs =
        proprietary[i] + wi + 2.0 * (1.0 - alpha) * wi / proprietary[i];
    r.per_sp_slack[i] = lhs - rhs;
    min_slack = std::min(min_slack, r.per_sp_slack[i]);
  }
  r.slack = min_slack;
  r.boundary = detail::near_zero_slack(min_slack, rhs);
  if (min_slack >= 0.0)
    for (std::size_t i = 0; i + 1 < n; ++i) r.vacating_sps.push_back(i);
  return r;
}

/// Optimal open-access share under degraded sharing: 1 if open access still
/// maximizes consumer welfare, 0 if licensing does, with an explicit marker at
/// the knife edge d = (N+1)/(2N).
struct DegradedBetaChoice {
  int beta;   // 0 or 1 (0 at a tie, by the solver's boundary convention)
  bool tie;
  double threshold;
};

inline DegradedBetaChoice degraded_optimal_beta(long n, double d) {
  if (n < 2) throw DomainError("degraded_optimal_beta: N must be >= 2");
  if (!(d > 0.0 && d <= 1.0))
    throw DomainError("degraded_optimal_beta: d out of range (0,1]");
  const double threshold =
      (static_cast<double>(n) + 1.0) / (2.0 * static_cast<double>(n));
  if (d > threshold) return {1, false, threshold};
  if (d < threshold) return {0, false, threshold};
  return {0, true, threshold};
}

/// Limiting aggregates of the two asymmetric scenarios.
struct AsymLimitEq {
  double big_licensed = 0.0;    // x1*
  double big_open = 0.0;        // w1*
  double small_licensed = 0.0;  // x2*
  double small_open = 0.0;      // w2*
  bool group1_vacates = false;
  bool group2_vacates = false;
};

namespace detail {

inline void require_positive(double v, const char* what) {
  if (!(v > 0.0)) throw DomainError(std::string(what) + " must be positive");
}

inline double clamp_tiny_negative(double v, const char* what) {
  if (v < 0.0) {
    if (v < -1e-9)
      throw SingularSystemError(std::string("unexpected negative quantity in ") +
                                what);
    return 0.0;
  }
  return v;
}

}  // namespace detail

/// One large SP against a continuum of small ones. Branches on whether the
/// large SP's licensed capacity already beats the open band; at the knife
/// edge the interior system itself returns w1* = 0.
inline AsymLimitEq asym_limit_one_large(double b1, double w1, double b2,
                                        double w2, double open_bw,
                                        double alpha) {
  detail::require_positive(b1, "B1");
  detail::require_positive(b2, "B2");
  detail::require_positive(open_bw, "open bandwidth");
  if (w1 < 0.0 || w2 < 0.0)
    throw DomainError("asym_limit_one_large: W must be nonnegative");

  const double one_minus = 1.0 - alpha;
  const double lhs = b1 + w1 + 2.0 * one_minus * w1 / b1;
  const double rhs = 2.0 * one_minus * (2.0 * open_bw + w2) / b2;

  const double a_big_x = 2.0 * (1.0 + alpha / (b1 + w1) + one_minus / b1);
  const double a_big_xw = 2.0 * (1.0 + one_minus / b1);
  const double a_big_w = 2.0 * (1.0 + alpha / open_bw + one_minus / b1);
  const double a_sm_x = 1.0 + 2.0 * alpha / (b2 + w2) + 2.0 * one_minus / b2;
  const double a_sm_xw = 1.0 + 2.0 * one_minus / b2;
  const double a_sm_w = 1.0 + alpha / open_bw + 2.0 * one_minus / b2;
  const double open_cross = 1.0 + alpha / open_bw;

  AsymLimitEq eq;
  if (lhs > rhs) {
    eq.group1_vacates = true;
    const auto s = linalg::solve_dense(
        {{a_big_x, 1.0, 1.0},
         {1.0, a_sm_x, a_sm_xw},
         {1.0, a_sm_xw, a_sm_w}},
        {1.0, 1.0, 1.0});
    eq.big_licensed = s[0];
    eq.small_licensed = s[1];
    eq.small_open = s[2];
  } else {
    const auto s = linalg::solve_dense(
        {{a_big_x, a_big_xw, 1.0, 1.0},
         {a_big_xw, a_big_w, 1.0, open_cross},
         {1.0, 1.0, a_sm_x, a_sm_xw},
         {1.0, open_cross, a_sm_xw, a_sm_w}},
        {1.0, 1.0, 1.0, 1.0});
    eq.big_licensed = s[0];
    eq.big_open = detail::clamp_tiny_negative(s[1], "asym_limit_one_large");
    eq.small_licensed = s[2];
    eq.small_open = s[3];
    eq.group1_vacates = (eq.big_open == 0.0);
  }
  return eq;
}

/// Two groups of many SPs. Active-set solve: interior first, then pin the
/// group whose open quantity turned negative and verify the pinned gradient.
inline AsymLimitEq asym_limit_two_groups(double b1, double w1, double b2,
                                         double w2, double open_bw,
                                         double alpha) {
  detail::require_positive(b1, "B1");
  detail::require_positive(b2, "B2");
  detail::require_positive(open_bw, "open bandwidth");
  detail::require_positive(b1 + w1, "B1 + W1");
  detail::require_positive(b2 + w2, "B2 + W2");

  const double one_minus = 1.0 - alpha;
  const double g1 = 2.0 * one_minus / b1, g2 = 2.0 * one_minus / b2;
  const double u1 = 2.0 * alpha / (b1 + w1), u2 = 2.0 * alpha / (b2 + w2);
  const double oc = alpha / open_bw;

  // Rows: FOC-x for group 1 and 2, FOC-w for group 1 and 2.
  const std::vector<std::vector<double>> interior = {
      {1.0 + g1 + u1, 1.0 + g1, 1.0, 1.0},
      {1.0, 1.0, 1.0 + g2 + u2, 1.0 + g2},
      {1.0 + g1, 1.0 + g1 + oc, 1.0, 1.0 + oc},
      {1.0, 1.0 + oc, 1.0 + g2, 1.0 + g2 + oc}};
  const auto s =
      linalg::solve_dense(interior, {1.0, 1.0, 1.0, 1.0});

  AsymLimitEq eq;
  const bool neg1 = s[1] < 0.0, neg2 = s[3] < 0.0;
  if (!neg1 && !neg2) {
    eq.big_licensed = s[0];
    eq.big_open = s[1];
    eq.small_licensed = s[2];
    eq.small_open = s[3];
    return eq;
  }
  if (neg1 && neg2)
    throw InfeasibleError(
        "asym_limit_two_groups: both groups would leave the open band");

  // Pin the vacating group's open quantity and keep the other group's FOC-w.
  const bool pin1 = neg1;
  std::vector<std::vector<double>> sys;
  if (pin1) {
    sys = {{1.0 + g1 + u1, 1.0, 1.0},
           {1.0, 1.0 + g2 + u2, 1.0 + g2},
           {1.0, 1.0 + g2, 1.0 + g2 + oc}};
  } else {
    sys = {{1.0 + g1 + u1, 1.0 + g1, 1.0},
           {1.0, 1.0, 1.0 + g2 + u2},
           {1.0 + g1, 1.0 + g1 + oc, 1.0 + oc}};
  }
  const auto t = linalg::solve_dense(sys, {1.0, 1.0, 1.0});
  double x1, x2, w_active;
  if (pin1) {
    x1 = t[0];
    x2 = t[1];
    w_active = t[2];
    eq = {x1, 0.0, x2, w_active, true, false};
  } else {
    x1 = t[0];
    w_active = t[1];
    x2 = t[2];
    eq = {x1, w_active, x2, 0.0, false, true};
  }
  if (x1 < 0.0 || x2 < 0.0 || w_active < 0.0)
    throw InfeasibleError(
        "asym_limit_two_groups: boundary system left a negative quantity");

  // Pinned gradient check: the vacating group must strictly prefer w = 0.
  const double gi = pin1 ? g1 : g2;
  const double xi = pin1 ? x1 : x2;
  const double xo = pin1 ? x2 : x1;
  const double lhs = xi * (1.0 + gi) + xo + w_active * (1.0 + oc);
  if (lhs < 1.0 - 1e-9)
    throw InfeasibleError(
        "asym_limit_two_groups: pinned-gradient condition failed");
  return eq;
}

}  // namespace specshare

#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "specshare/errors.hpp"

namespace specshare {

/// A scalar curve with two derivatives. The solver only ever needs values and
/// the first two derivatives, so models are plain callables rather than a
/// class hierarchy.
struct Curve {
  std::function<double(double)> value;
  std::function<double(double)> deriv;
  std::function<double(double)> second;

  static Curve affine(double intercept, double slope) {
    return {[=](double t) { return intercept + slope * t; },
            [=](double) { return slope; }, [](double) { return 0.0; }};
  }
  static Curve linear(double slope) { return affine(0.0, slope); }
};

namespace detail {

inline constexpr int kModelProbePoints = 33;

template <typename Check>
void probe_curve(const Curve& c, double range, Check&& check) {
  for (int k = 0; k < kModelProbePoints; ++k) {
    const double t = range * static_cast<double>(k) / (kModelProbePoints - 1);
    check(t, c.value(t), c.deriv(t), c.second(t));
  }
}

inline bool curve_is_affine(const Curve& c, double range) {
  const double slope0 = c.deriv(0.0);
  bool affine = true;
  probe_curve(c, range, [&](double, double, double d1, double d2) {
    if (std::abs(d2) > 1e-9 || std::abs(d1 - slope0) > 1e-9) affine = false;
  });
  return affine;
}

}  // namespace detail

/// Inverse demand P(y): concave and decreasing on the served range
/// (spot-checked on a sample grid at construction).
struct DemandModel {
  Curve curve;
  double checked_range;

  explicit DemandModel(Curve c, double range = 1.0)
      : curve(std::move(c)), checked_range(range) {
    detail::probe_curve(curve, range, [](double t, double, double d1, double d2) {
      if (d1 > 1e-12)
        throw UnsupportedModelError("demand must be decreasing (P' <= 0), violated at y=" +
                                    std::to_string(t));
      if (d2 > 1e-12)
        throw UnsupportedModelError("demand must be concave (P'' <= 0), violated at y=" +
                                    std::to_string(t));
    });
  }

  static DemandModel linear(double intercept = 1.0, double slope = 1.0) {
    return DemandModel(Curve::affine(intercept, -slope),
                       intercept / slope);
  }

  double value(double y) const { return curve.value(y); }
  double d1(double y) const { return curve.deriv(y); }
  double d2(double y) const { return curve.second(y); }
  bool is_affine() const { return detail::curve_is_affine(curve, checked_range); }
};

/// Latency curves for the whole market, all taking raw traffic (any bandwidth
/// normalization is baked into the curve): per SP the latency seen when the
/// shared band is pre-empted (proprietary only) and when it is available
/// (proprietary plus licensed shared), plus the common open-band latency.
/// Each must be convex increasing (spot-checked at construction).
struct LatencyModel {
  std::vector<Curve> when_preempted;
  std::vector<Curve> when_available;
  Curve open_band;
  double checked_range;

  LatencyModel(std::vector<Curve> preempted, std::vector<Curve> available,
               Curve open, double range = 1.0)
      : when_preempted(std::move(preempted)),
        when_available(std::move(available)),
        open_band(std::move(open)),
        checked_range(range) {
    if (when_preempted.size() != when_available.size())
      throw UnsupportedModelError("latency model: per-SP curve count mismatch");
    auto check = [range](const Curve& c, const char* which) {
      detail::probe_curve(c, range, [which](double t, double, double d1, double d2) {
        if (d1 < -1e-12)
          throw UnsupportedModelError(std::string("latency must be increasing (") +
                                      which + "), violated at t=" + std::to_string(t));
        if (d2 < -1e-12)
          throw UnsupportedModelError(std::string("latency must be convex (") +
                                      which + "), violated at t=" + std::to_string(t));
      });
    };
    for (const auto& c : when_preempted) check(c, "pre-empted band");
    for (const auto& c : when_available) check(c, "available band");
    check(open_band, "open band");
  }

  std::size_t n_sps() const { return when_preempted.size(); }
  bool open_band_is_linear() const {
    return detail::curve_is_affine(open_band, checked_range) &&
           std::abs(open_band.value(0.0)) < 1e-12;
  }
};

}  // namespace specshare

// SPDX-License-Identifier: Apache-2.0
//
// Range measurement models. Every ranging technique the simulator cares
// about (signal strength, time of arrival, time difference of arrival)
// reduces to "true distance plus noise", so one model covers all three.
#pragma once

#include <string_view>

#include "anchorsec/geometry.hpp"
#include "anchorsec/random.hpp"

namespace anchorsec::radio {

enum class NoiseKind { exact, gaussian_additive, log_normal_shadowing };

std::string_view to_string(NoiseKind kind) noexcept;

struct NoiseModel {
  NoiseKind kind = NoiseKind::exact;
  double sigma = 0.0;               ///< meters (gaussian) or dB (shadowing)
  double path_loss_exponent = 2.0;  ///< shadowing only
  double reference_distance = 1.0;  ///< meters, shadowing only

  static NoiseModel exact() { return {}; }
  static NoiseModel gaussian(double sigma_m) {
    return {NoiseKind::gaussian_additive, sigma_m, 2.0, 1.0};
  }
  static NoiseModel shadowing(double sigma_db, double exponent = 2.0, double d0 = 1.0) {
    return {NoiseKind::log_normal_shadowing, sigma_db, exponent, d0};
  }

  /// True when measurements reproduce the true distance.
  bool noiseless() const { return kind == NoiseKind::exact || sigma == 0.0; }

  /// Throws Error{invalid_argument} when a field is out of range.
  void validate() const;
};

double true_distance(geometry::Point a, geometry::Point b);

/// One noisy observation of a distance `d_true` >= 0.
///
/// gaussian_additive draws d + N(0, sigma^2) and clamps at zero. The
/// shadowing model perturbs the received power of a log-distance path loss
/// link by N(0, sigma_dB^2) and inverts the path loss law, which gives
/// d * 10^(-X / (10 n)); the result is clamped to the reference distance.
double measure_range(double d_true, const NoiseModel& model, Rng& rng);

}  // namespace anchorsec::radio

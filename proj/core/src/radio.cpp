// SPDX-License-Identifier: Apache-2.0
#include "anchorsec/radio.hpp"

#include <algorithm>
#include <cmath>

namespace anchorsec::radio {

std::string_view to_string(NoiseKind kind) noexcept {
  switch (kind) {
    case NoiseKind::exact: return "exact";
    case NoiseKind::gaussian_additive: return "gaussian";
    case NoiseKind::log_normal_shadowing: return "shadowing";
  }
  return "unknown";
}

void NoiseModel::validate() const {
  if (!std::isfinite(sigma) || sigma < 0.0) {
    throw Error(Errc::invalid_argument, "noise sigma must be finite and >= 0");
  }
  if (!(path_loss_exponent >= 1.5 && path_loss_exponent <= 6.0)) {
    throw Error(Errc::invalid_argument, "path loss exponent must lie in [1.5, 6]");
  }
  if (!(reference_distance > 0.0) || !std::isfinite(reference_distance)) {
    throw Error(Errc::invalid_argument, "reference distance must be positive");
  }
}

double true_distance(geometry::Point a, geometry::Point b) { return geometry::distance(a, b); }

double measure_range(double d_true, const NoiseModel& model, Rng& rng) {
  if (!(d_true >= 0.0)) throw Error(Errc::invalid_argument, "true distance must be >= 0");

  switch (model.kind) {
    case NoiseKind::exact:
      return d_true;
    case NoiseKind::gaussian_additive: {
      if (model.sigma == 0.0) return d_true;
      std::normal_distribution<double> noise(0.0, model.sigma);
      return std::max(0.0, d_true + noise(rng));
    }
    case NoiseKind::log_normal_shadowing: {
      double shadow_db = 0.0;
      if (model.sigma > 0.0) {
        std::normal_distribution<double> noise(0.0, model.sigma);
        shadow_db = noise(rng);
      }
      const double scale = std::pow(10.0, -shadow_db / (10.0 * model.path_loss_exponent));
      return std::max(model.reference_distance, d_true * scale);
    }
  }
  return d_true;
}

}  // namespace anchorsec::radio

#pragma once

#include "nsub/sublevel.hpp"

#include <stdexcept>
#include <utility>
#include <vector>

namespace nsub {

class FitError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Fit of y = C * s^j * |ln s|^p (growth: s = eps) or y = D * s^-j * (ln s)^p (decay: s = lambda).
struct FitResult {
  double j_hat = 0.0;
  double p_hat = 0.0;
  double C_hat = 0.0;
  double residual_rms = 0.0;
  int p_rounded = 0;
  /// Refit with p held at p_rounded.
  double j_fixed = 0.0;
  double C_fixed = 0.0;
  double residual_rms_fixed = 0.0;
  std::size_t n = 0;
};

FitResult fit_growth(const std::vector<MeasureSample>& samples);
FitResult fit_decay(const std::vector<std::pair<double, double>>& pairs);

/// One-regressor fits with the log power held at p (p_hat = p_rounded = p).
FitResult fit_growth_with_p(const std::vector<MeasureSample>& samples, int p);
FitResult fit_decay_with_p(const std::vector<std::pair<double, double>>& pairs, int p);

/// Log-presence diagnostic for a predicted exponent j: slope of
/// log(M / eps^j) against log|ln eps|. About 1 when a log factor is present, 0 when not.
struct LogPresence {
  double slope = 0.0;
  double ratio_growth = 0.0;  // ratio at the smallest eps over ratio at the largest
  int p_decision = 0;
};

LogPresence log_presence(const std::vector<MeasureSample>& samples, double j);

/// Geometric schedule of `count` points from hi down to lo.
std::vector<double> geometric_schedule(double lo, double hi, int count);

}  // namespace nsub

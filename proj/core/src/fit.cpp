#include "nsub/fit.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

namespace nsub {

namespace {

struct Lsq {
  std::vector<double> beta;
  double rms = 0.0;
};

// Least squares with an intercept via normal equations (at most 3 unknowns).
Lsq least_squares(const std::vector<std::vector<double>>& X, const std::vector<double>& y) {
  const std::size_t n = y.size(), k = X.size() + 1;
  std::vector<std::vector<double>> cols(k, std::vector<double>(n, 1.0));
  for (std::size_t c = 1; c < k; ++c) cols[c] = X[c - 1];
  // Centre and scale regressors for conditioning.
  std::vector<double> mean(k, 0.0), scale(k, 1.0);
  for (std::size_t c = 1; c < k; ++c) {
    for (double v : cols[c]) mean[c] += v;
    mean[c] /= static_cast<double>(n);
    double ss = 0.0;
    for (double& v : cols[c]) {
      v -= mean[c];
      ss += v * v;
    }
    scale[c] = std::sqrt(ss / static_cast<double>(n));
    if (!(scale[c] > 0)) throw FitError("degenerate design matrix: regressor is constant");
    for (double& v : cols[c]) v /= scale[c];
  }
  std::vector<std::vector<double>> A(k, std::vector<double>(k + 1, 0.0));
  for (std::size_t r = 0; r < k; ++r) {
    for (std::size_t c = 0; c < k; ++c)
      for (std::size_t i = 0; i < n; ++i) A[r][c] += cols[r][i] * cols[c][i];
    for (std::size_t i = 0; i < n; ++i) A[r][k] += cols[r][i] * y[i];
  }
  for (std::size_t c = 0; c < k; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < k; ++r)
      if (std::fabs(A[r][c]) > std::fabs(A[piv][c])) piv = r;
    std::swap(A[c], A[piv]);
    if (std::fabs(A[c][c]) < 1e-10 * static_cast<double>(n)) throw FitError("degenerate design matrix: collinear regressors");
    for (std::size_t r = 0; r < k; ++r) {
      if (r == c) continue;
      double f = A[r][c] / A[c][c];
      for (std::size_t cc = c; cc <= k; ++cc) A[r][cc] -= f * A[c][cc];
    }
  }
  std::vector<double> b(k);
  for (std::size_t c = 0; c < k; ++c) b[c] = A[c][k] / A[c][c];
  double ss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double pred = 0.0;
    for (std::size_t c = 0; c < k; ++c) pred += b[c] * cols[c][i];
    ss += (y[i] - pred) * (y[i] - pred);
  }
  Lsq out;
  out.rms = std::sqrt(ss / static_cast<double>(n));
  out.beta.assign(k, 0.0);
  for (std::size_t c = 1; c < k; ++c) {
    out.beta[c] = b[c] / scale[c];
    b[0] -= out.beta[c] * mean[c];
  }
  out.beta[0] = b[0];
  return out;
}

// y = c0 + sj * j * log s + p * log|log s|; p is fitted unless fixed_p is set.
FitResult fit_generic(const std::vector<double>& s, const std::vector<double>& v, double sj, double min_decades,
                      std::optional<int> fixed_p = std::nullopt) {
  if (s.size() < 4) throw FitError("need at least 4 samples");
  double lo = *std::min_element(s.begin(), s.end()), hi = *std::max_element(s.begin(), s.end());
  if (std::log10(hi / lo) < min_decades - 1e-9) throw FitError("degenerate design matrix: range too narrow");
  std::vector<double> ls, lls, lv;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (!(v[i] > 0)) throw FitError("estimates must be positive");
    double l = std::log(s[i]);
    if (std::fabs(l) <= 1e-12) throw FitError("sample at s = 1 has no log factor");
    ls.push_back(l);
    lls.push_back(std::log(std::fabs(l)));
    lv.push_back(std::log(v[i]));
  }
  FitResult out;
  out.n = s.size();
  if (fixed_p) {
    std::vector<double> adj(lv.size());
    for (std::size_t i = 0; i < lv.size(); ++i) adj[i] = lv[i] - *fixed_p * lls[i];
    Lsq one = least_squares({ls}, adj);
    out.j_hat = out.j_fixed = sj * one.beta[1];
    out.C_hat = out.C_fixed = std::exp(one.beta[0]);
    out.residual_rms = out.residual_rms_fixed = one.rms;
    out.p_hat = out.p_rounded = *fixed_p;
    return out;
  }
  Lsq two = least_squares({ls, lls}, lv);
  out.j_hat = sj * two.beta[1];
  out.p_hat = two.beta[2];
  out.C_hat = std::exp(two.beta[0]);
  out.residual_rms = two.rms;
  out.p_rounded = out.p_hat >= 0.5 ? 1 : 0;
  std::vector<double> adj(lv.size());
  for (std::size_t i = 0; i < lv.size(); ++i) adj[i] = lv[i] - out.p_rounded * lls[i];
  Lsq one = least_squares({ls}, adj);
  out.j_fixed = sj * one.beta[1];
  out.C_fixed = std::exp(one.beta[0]);
  out.residual_rms_fixed = one.rms;
  return out;
}

}  // namespace

namespace {

void growth_inputs(const std::vector<MeasureSample>& samples, std::vector<double>& s, std::vector<double>& v) {
  for (const auto& m : samples) {
    s.push_back(m.epsilon);
    v.push_back(m.estimate);
  }
  for (double e : s)
    if (!(e > 0 && e < 1)) throw FitError("epsilon must lie in (0, 1)");
  std::vector<double> sorted = s;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) throw FitError("epsilon values must be distinct");
}

void decay_inputs(const std::vector<std::pair<double, double>>& pairs, std::vector<double>& s, std::vector<double>& v) {
  for (const auto& [l, a] : pairs) {
    if (!(l > 1)) throw FitError("lambda must exceed 1");
    s.push_back(l);
    v.push_back(a);
  }
}

}  // namespace

FitResult fit_growth(const std::vector<MeasureSample>& samples) {
  std::vector<double> s, v;
  growth_inputs(samples, s, v);
  return fit_generic(s, v, 1.0, 3.0);
}

FitResult fit_growth_with_p(const std::vector<MeasureSample>& samples, int p) {
  std::vector<double> s, v;
  growth_inputs(samples, s, v);
  return fit_generic(s, v, 1.0, 3.0, p);
}

FitResult fit_decay(const std::vector<std::pair<double, double>>& pairs) {
  std::vector<double> s, v;
  decay_inputs(pairs, s, v);
  return fit_generic(s, v, -1.0, 1.5);
}

FitResult fit_decay_with_p(const std::vector<std::pair<double, double>>& pairs, int p) {
  std::vector<double> s, v;
  decay_inputs(pairs, s, v);
  return fit_generic(s, v, -1.0, 1.5, p);
}

LogPresence log_presence(const std::vector<MeasureSample>& samples, double j) {
  if (samples.size() < 3) throw FitError("need at least 3 samples");
  std::vector<double> x, y;
  std::size_t imin = 0, imax = 0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const auto& m = samples[i];
    if (!(m.estimate > 0)) throw FitError("estimates must be positive");
    x.push_back(std::log(std::fabs(std::log(m.epsilon))));
    y.push_back(std::log(m.estimate) - j * std::log(m.epsilon));
    if (m.epsilon < samples[imin].epsilon) imin = i;
    if (m.epsilon > samples[imax].epsilon) imax = i;
  }
  Lsq f = least_squares({x}, y);
  LogPresence out;
  out.slope = f.beta[1];
  out.ratio_growth = std::exp(y[imin] - y[imax]);
  out.p_decision = out.slope >= 0.5 ? 1 : 0;
  return out;
}

std::vector<double> geometric_schedule(double lo, double hi, int count) {
  if (!(lo > 0) || !(hi > lo) || count < 2) throw std::invalid_argument("bad schedule");
  std::vector<double> out;
  // interpolate in log10 so that decade points come out exact
  double a = std::log10(hi), b = std::log10(lo);
  for (int i = 0; i < count; ++i) out.push_back(std::pow(10.0, a + (b - a) * i / (count - 1)));
  out.front() = hi;
  out.back() = lo;
  return out;
}

}  // namespace nsub

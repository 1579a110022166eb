#pragma once

#include "nsub/puiseux.hpp"

#include <complex>
#include <stdexcept>

namespace nsub {

/// Polynomial bump (1 - (x^2 + y^2)/r^2)^order on the disk of radius r, 0 outside.
struct Cutoff {
  double radius = 1.0;
  int order = 3;

  double operator()(double x, double y) const;
  double sup() const { return 1.0; }
};

struct QuadratureOptions {
  int depth = 24;           // maximal bisections per initial panel
  double rel_tol = 1e-5;
  double abs_floor = 1e-12;
  unsigned threads = 0;
};

class QuadratureError : public std::runtime_error {
 public:
  QuadratureError(const std::string& what, std::complex<double> estimate, double error)
      : std::runtime_error(what), estimate(estimate), error(error) {}
  std::complex<double> estimate;
  double error;
};

struct OscillatoryValue {
  std::complex<double> value;
  double error = 0.0;
  long evaluations = 0;
};

/// Integral of exp(i lambda p) * phi over the cutoff disk by nested adaptive
/// Gauss-Kronrod quadrature; initial panels follow the phase variation.
OscillatoryValue oscillatory_integral(const PuiseuxPoly& p, const Cutoff& cutoff, double lambda,
                                      const QuadratureOptions& opts = {});

/// j * Gamma(j) * sup_ratio * sup|phi|, where sup_ratio = sup over eps of M(eps) / (eps^j |ln eps|^p).
double oscillatory_coefficient_cap(double j, double sup_ratio, double phi_sup);

}  // namespace nsub

#pragma once

#include <functional>
#include <vector>

namespace gillum {

struct ScalarMinimum {
  double x;
  double value;
};

/// Golden-section search for a minimum of a unimodal function on [lo, hi];
/// stops once the bracket is narrower than `tol`.
ScalarMinimum golden_section_minimize(const std::function<double(double)>& f, double lo,
                                      double hi, double tol = 1e-10);

struct SimplexOptions {
  double initial_step = 1.0;
  int max_iterations = 500;
  double x_tol = 1e-14;  ///< simplex diameter, relative to max(1, |x|)
  double f_tol = 0.0;    ///< spread of vertex values
};

struct SimplexResult {
  std::vector<double> x;
  double value;
  int iterations;
};

/// Nelder-Mead downhill simplex with standard coefficients (1, 2, 1/2, 1/2).
/// The starting simplex is x0 plus `initial_step` along each axis, so runs are
/// fully deterministic.
SimplexResult nelder_mead_minimize(const std::function<double(const std::vector<double>&)>& f,
                                   std::vector<double> x0, const SimplexOptions& options = {});

}  // namespace gillum

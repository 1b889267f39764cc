#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "gillum/channels.hpp"

namespace gillum {

struct Curve {
  std::string label;
  std::vector<std::pair<double, double>> points;
};

struct CurveSet {
  std::string x_label;
  std::string y_label;
  std::vector<Curve> curves;
};

/// Invalid user configuration (CLI exit code 2).
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A sweep point could not be evaluated to a finite number (CLI exit code 3).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Figure { Fig1, Fig2, Fig3, Fig4, Fig5a, Fig5b, S1, S2, Custom };

std::string_view to_string(Figure figure);
/// Throws ConfigError for an unknown name.
Figure parse_figure(std::string_view name);

enum class SweepAxis { SignalPhotons, Reflectance };

struct SweepConfig {
  Figure figure = Figure::Fig1;
  ScenarioParams params;
  SweepAxis axis = SweepAxis::SignalPhotons;
  double x_min = 1e-2;
  double x_max = 10.0;
  int points = 200;
  bool log_spaced = true;
  /// Curve labels to keep, in output order; empty keeps the preset's curves.
  std::vector<std::string> receivers;
  /// Worker threads; 0 means hardware concurrency capped by GILLUM_THREADS.
  int threads = 0;

  /// Throws ConfigError with a message naming the offending field.
  void validate() const;
};

/// Defaults for a preset: kappa = 0.01, N_B = 30, M = 1e7 and 200 log-spaced
/// points on N_S in [1e-2, 10], except
///   fig3, s2  nonconstant noise
///   fig5a     kappa in [1e-3, 0.1] at N_S = 1 (curves for N_I = 1 and 2)
///   fig5b     N_S = N_I swept
SweepConfig preset(Figure figure);

/// Curve labels a figure can produce, in default order. For Custom this is
/// the whole N_S-axis catalog.
std::vector<std::string> available_curves(Figure figure);
/// Curves emitted when `receivers` is empty.
std::vector<std::string> default_curves(Figure figure);

/// Sweep grid implied by the config (linear or logarithmic, endpoints exact).
std::vector<double> sweep_grid(const SweepConfig& config);

/// Evaluates every selected curve at every grid point. Points are computed in
/// parallel and assembled in grid order, so the result does not depend on the
/// thread count.
CurveSet run_figure(const SweepConfig& config);

/// Thread count used for `requested` (0 = automatic), honoring GILLUM_THREADS.
int resolve_threads(int requested);

}  // namespace gillum

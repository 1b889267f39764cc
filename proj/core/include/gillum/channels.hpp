#pragma once

#include <cstdint>
#include <string_view>

#include "gillum/gaussian_state.hpp"

namespace gillum {

/// How the background enters the target beam splitter.
///  Constant:    the environment mode carries N_B / (1 - kappa), so the received
///               background is N_B independent of kappa.
///  NonConstant: the environment mode carries N_B, the received background is
///               (1 - kappa) N_B.
enum class NoiseModel { Constant, NonConstant };

std::string_view to_string(NoiseModel model);

/// One experiment configuration.
struct ScenarioParams {
  double kappa = 0.01;  ///< target reflectance in [0, 1]
  double n_s = 0.01;    ///< signal mean photon number
  double n_i = 0.0;     ///< idler mean photon number (CCT and coherent-reference sources)
  double n_b = 30.0;    ///< background mean photon number
  std::int64_t m_modes = 10'000'000;
  NoiseModel noise_model = NoiseModel::Constant;

  /// Throws std::domain_error if any field is out of range.
  void validate() const;
};

enum class Source { Tmsv, Cct, Coherent };

struct HypothesisPair {
  GaussianState on;
  GaussianState off;
  Source source = Source::Tmsv;
};

std::string_view to_string(Source source);

/// Mean photon number of the environment mode injected at the target.
double environment_mean(const ScenarioParams& params, bool present);

/// Mixes `signal_mode` with a thermal environment mode on a beam splitter of
/// reflectance kappa (present) or 0 (absent) and traces the environment out.
/// Other modes are untouched. The absent hypothesis always replaces the
/// signal by thermal(N_B), for both noise models.
GaussianState apply_target(const GaussianState& input, int signal_mode,
                           const ScenarioParams& params, bool present);

/// Builds the probe for `source` (mode 0 = signal, mode 1 = idler) and returns
/// the target-present/absent output states.
///   Tmsv:     TMSV(n_s); n_i ignored.
///   Cct:      CCT(n_s, n_i).
///   Coherent: coherent(sqrt(n_s)) on the signal and coherent(sqrt(n_i)) held
///             back as a phase reference (vacuum when n_i = 0).
HypothesisPair hypothesis_pair(Source source, const ScenarioParams& params);

}  // namespace gillum

#include "gillum/channels.hpp"

#include <cmath>
#include <stdexcept>

namespace gillum {

std::string_view to_string(NoiseModel model) {
  return model == NoiseModel::Constant ? "constant" : "nonconstant";
}

std::string_view to_string(Source source) {
  switch (source) {
    case Source::Tmsv: return "tmsv";
    case Source::Cct: return "cct";
    case Source::Coherent: return "coherent";
  }
  return "unknown";
}

void ScenarioParams::validate() const {
  if (!(kappa >= 0.0 && kappa <= 1.0)) throw std::domain_error("kappa must lie in [0, 1]");
  if (!(n_s >= 0.0)) throw std::domain_error("n_s must be >= 0");
  if (!(n_i >= 0.0)) throw std::domain_error("n_i must be >= 0");
  if (!(n_b >= 0.0)) throw std::domain_error("n_b must be >= 0");
  if (m_modes < 1) throw std::domain_error("m_modes must be >= 1");
}

double environment_mean(const ScenarioParams& params, bool present) {
  if (!present || params.noise_model == NoiseModel::NonConstant) return params.n_b;
  if (params.kappa >= 1.0) {
    throw std::domain_error("constant-noise model is undefined at kappa = 1");
  }
  return params.n_b / (1.0 - params.kappa);
}

GaussianState apply_target(const GaussianState& input, int signal_mode,
                           const ScenarioParams& params, bool present) {
  params.validate();
  const int n = input.n_modes();
  if (signal_mode < 0 || signal_mode >= n) {
    throw std::out_of_range("apply_target: signal mode out of range");
  }
  const double kappa = present ? params.kappa : 0.0;
  const GaussianState joint = tensor(input, make_thermal(environment_mean(params, present)));

  const double keep = std::sqrt(kappa);
  const double leak = std::sqrt(1.0 - kappa);
  CMatrix w = CMatrix::Identity(n + 1, n + 1);
  w(signal_mode, signal_mode) = keep;
  w(signal_mode, n) = leak;
  w(n, signal_mode) = leak;
  w(n, n) = -keep;

  std::vector<int> kept(n);
  for (int i = 0; i < n; ++i) kept[i] = i;
  return apply_passive(joint, w).reduced(kept);
}

HypothesisPair hypothesis_pair(Source source, const ScenarioParams& params) {
  params.validate();
  const GaussianState input = [&] {
    switch (source) {
      case Source::Tmsv: return make_tmsv(params.n_s);
      case Source::Cct: return make_cct(params.n_s, params.n_i);
      case Source::Coherent:
        return tensor(make_coherent(std::sqrt(params.n_s)), make_coherent(std::sqrt(params.n_i)));
    }
    throw std::invalid_argument("hypothesis_pair: unknown source");
  }();
  return {apply_target(input, 0, params, true), apply_target(input, 0, params, false), source};
}

}  // namespace gillum

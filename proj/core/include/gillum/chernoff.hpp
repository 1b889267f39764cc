#pragma once

#include <cstdint>
#include <vector>

#include "gillum/channels.hpp"
#include "gillum/gaussian_state.hpp"

namespace gillum {

/// cov_q = S diag(nu_1, nu_1, ..., nu_n, nu_n) S^T with S symplectic.
struct WilliamsonDecomposition {
  std::vector<double> nu;  ///< one value per mode, vacuum = 1/2
  RMatrix s;
};

/// Throws std::domain_error unless cov_q is symmetric positive definite.
WilliamsonDecomposition williamson(const RMatrix& cov_q);
WilliamsonDecomposition williamson(const QuadratureState& state);

struct QcbResult {
  double s_star = 0.5;  ///< 0.5 when the overlap does not depend on s
  double q_value = 1.0;  ///< min_s Tr(rho_on^s rho_off^{1-s})
  double exponent = 0.0;  ///< -M ln q_value
  double p_err_bound = 0.5;  ///< q_value^M / 2
  double log_q = 0.0;
};

/// ln Tr(rho_a^s rho_b^{1-s}) for two Gaussian states with the same number of
/// modes, 0 < s < 1.
double log_chernoff_overlap(const GaussianState& a, const GaussianState& b, double s);

/// Quantum Chernoff bound for M copies of the pair.
QcbResult qcb(const HypothesisPair& pair, std::int64_t m_modes);
QcbResult qcb(const GaussianState& a, const GaussianState& b, std::int64_t m_modes);

/// Coherent-state illumination under constant noise: per-copy exponent
/// kappa N_S (sqrt(N_B + 1) - sqrt(N_B))^2. Throws std::domain_error for the
/// nonconstant model, where the two hypotheses carry different backgrounds.
QcbResult coherent_qcb_closed(const ScenarioParams& params);

}  // namespace gillum

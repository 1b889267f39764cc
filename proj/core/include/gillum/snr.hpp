#pragma once

#include <array>
#include <cstdint>
#include <numbers>
#include <optional>
#include <string_view>

#include "gillum/channels.hpp"
#include "gillum/observable.hpp"

namespace gillum {

/// Statistics of one receiver on one hypothesis pair.
///
/// The SNR uses the M-copy definition
///   snr = M (mean_on - mean_off)^2 / (2 (sqrt(var_on) + sqrt(var_off))^2)
/// and p_err = erfc(sqrt(snr)) / 2. The spread entering the threshold and the
/// erfc arguments is read as the variance of the observable.
struct SnrReport {
  double mean_on = 0.0;
  double mean_off = 0.0;
  double var_on = 0.0;
  double var_off = 0.0;
  double snr = 0.0;
  double threshold = 0.0;
  double p_err = 0.5;
};

double snr_value(double mean_on, double mean_off, double var_on, double var_off,
                 std::int64_t m_modes);

/// Decision threshold on the summed outcome of M copies:
///   M (R_off sqrt(var_on) + R_on sqrt(var_off)) / (sqrt(var_off) + sqrt(var_on)).
double threshold(double mean_on, double mean_off, double var_on, double var_off,
                 std::int64_t m_modes);

/// erfc(sqrt(snr)) / 2 at full double precision (std::erfc).
double p_err(double snr);
/// e^{-snr}, the large-SNR upper bound on p_err.
double p_err_exponential_bound(double snr);
/// e^{-z^2} / (sqrt(pi) z), the leading term of the asymptotic erfc series and
/// an upper bound on erfc(z) for z > 0.
double erfc_asymptotic_bound(double z);

/// Throws std::runtime_error when the inputs give a non-finite SNR
/// (e.g. two noiseless hypotheses with different means).
SnrReport make_report(const ObservableStats& on, const ObservableStats& off,
                      std::int64_t m_modes);

enum class ReceiverKind {
  BoundConstant,     ///< O_bd with alpha = 0 and -|beta|, |beta| = spec.beta
  BoundNonConstant,  ///< O_prs(alpha, beta)
  NearlyBound,       ///< O_SI
  PC,                ///< phase-conjugate receiver, explicit vacuum mode
  OPA,               ///< optical parametric amplifier receiver
  DH,                ///< double homodyne
  PNDM,              ///< photon-number difference after a (t, r, phi) splitter
  CoherentHD,        ///< homodyne X(theta) on the signal
  CoherentOff,       ///< O_off on the coherent probe
  CctOff,            ///< O_off on the CCT probe
  SeparateHTD,       ///< heterodyne S and I separately (O_SI for TMSV, O_off otherwise)
  DoubleHTD,         ///< 50:50 splitter then heterodyne both outputs
  HdProduct,         ///< X_S(theta) X_I(phi)
};

std::string_view to_string(ReceiverKind kind);

/// Implementable defaults: mu = sqrt(2), nu = 1 and G - 1 = 7.4e-5.
inline constexpr double kPcMu = std::numbers::sqrt2;
inline constexpr double kPcNu = 1.0;
inline constexpr double kOpaGain = 1.0 + 7.4e-5;

struct ReceiverSpec {
  ReceiverKind kind = ReceiverKind::NearlyBound;
  double alpha = 0.0;
  double beta = 0.0;
  double mu = kPcMu;
  double nu = kPcNu;
  double gain = kOpaGain;
  double t = 1.0 / std::numbers::sqrt2;
  double r = 1.0 / std::numbers::sqrt2;
  double phi = std::numbers::pi / 2;
  double theta = 0.0;        ///< signal quadrature phase (CoherentHD, HdProduct)
  double idler_phase = 0.0;  ///< idler quadrature phase (HdProduct)

  /// Kind-specific parameter constraints; throws std::domain_error.
  void validate() const;
  /// Whether the receiver is defined for hypothesis pairs built from `source`.
  bool accepts(Source source) const;
};

/// Builds the receiver observable, evaluates both hypotheses and assembles
/// the report. Throws std::invalid_argument for a receiver/source mismatch.
SnrReport snr_generic(const ReceiverSpec& spec, const HypothesisPair& pair,
                      std::int64_t m_modes);

// Closed forms. These fix only the mean difference, which is reported in
// mean_on with mean_off = 0; variances are those of the printed formulas.

/// |beta| = (1 + 2 N_S) / sqrt(kappa N_S (N_S + 1)^3) [f - sqrt(f (f - kappa (N_S + 1)))],
/// f = 1 + N_S + N_B + 2 N_S N_B. Throws std::domain_error when kappa N_S = 0.
double optimal_beta_closed(const ScenarioParams& params);

/// Bound receiver under constant noise. Without `beta_abs` the closed-form
/// optimum is used (0 when kappa N_S = 0).
SnrReport snr_closed_bound_constant(const ScenarioParams& params,
                                    std::optional<double> beta_abs = std::nullopt);
/// Nearly bound receiver; both noise models.
SnrReport snr_closed_nearly_bound(const ScenarioParams& params);
/// O_prs(alpha, beta) under nonconstant noise.
SnrReport snr_closed_bound_nonconstant(const ScenarioParams& params, double alpha, double beta);
SnrReport snr_closed_pc(const ScenarioParams& params, double mu = kPcMu, double nu = kPcNu);

/// The printed OPA formula carries G (4 N_S + 1) in its cross term; the Wick
/// expansion of the OPA observable gives G (4 N_S + 2).
enum class OpaForm { AsPrinted, Corrected };
SnrReport snr_closed_opa(const ScenarioParams& params, double gain = kOpaGain,
                         OpaForm form = OpaForm::AsPrinted);
SnrReport snr_closed_dh(const ScenarioParams& params);

/// O_off on the CCT pair.
SnrReport snr_cct(const ScenarioParams& params);
/// O_off on the coherent pair: the CCT formula without 4 kappa N_S N_I.
SnrReport snr_coherent_off(const ScenarioParams& params);

/// SNR of homodyne detection on the coherent probe, M kappa N_S / (4 N_B' + 2)
/// with N_B' the received background (constant noise), or its generic
/// evaluation under nonconstant noise.
SnrReport snr_coherent_hd(const ScenarioParams& params);

struct AlphaBetaOptimum {
  double alpha;
  double beta;
  SnrReport report;
};

/// Maximizes the nonconstant-noise bound SNR over (alpha, beta) in
/// [-50, 50]^2: a 201 x 201 grid, a Nelder-Mead polish (500 iterations) and a
/// Newton refinement on the analytic gradient of ln SNR. Deterministic.
/// Throws std::domain_error unless params.noise_model is NonConstant.
AlphaBetaOptimum optimize_alpha_beta_nonconstant(const ScenarioParams& params);

/// Same objective, polished from an explicit start point (no grid). Used to
/// check that the optimum does not depend on the start.
AlphaBetaOptimum optimize_alpha_beta_from(const ScenarioParams& params, double alpha0,
                                          double beta0);

/// Analytic gradient of ln SNR for O_prs(alpha, beta) under nonconstant noise.
std::array<double, 2> log_snr_gradient_nonconstant(const ScenarioParams& params, double alpha,
                                                   double beta);

}  // namespace gillum

#include "gillum/snr.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "gillum/optimize.hpp"

namespace gillum {

double snr_value(double mean_on, double mean_off, double var_on, double var_off,
                 std::int64_t m_modes) {
  const double diff = mean_on - mean_off;
  if (diff == 0.0) return 0.0;
  const double spread = std::sqrt(var_on) + std::sqrt(var_off);
  return static_cast<double>(m_modes) * diff * diff / (2.0 * spread * spread);
}

double threshold(double mean_on, double mean_off, double var_on, double var_off,
                 std::int64_t m_modes) {
  const double m = static_cast<double>(m_modes);
  const double s_on = std::sqrt(var_on);
  const double s_off = std::sqrt(var_off);
  if (s_on + s_off == 0.0) return 0.5 * m * (mean_on + mean_off);
  return m * (mean_off * s_on + mean_on * s_off) / (s_off + s_on);
}

double p_err(double snr) { return 0.5 * std::erfc(std::sqrt(snr)); }

double p_err_exponential_bound(double snr) { return std::exp(-snr); }

double erfc_asymptotic_bound(double z) {
  return std::exp(-z * z) / (std::sqrt(std::numbers::pi) * z);
}

SnrReport make_report(const ObservableStats& on, const ObservableStats& off,
                      std::int64_t m_modes) {
  if (m_modes < 1) throw std::domain_error("make_report: M must be >= 1");
  SnrReport rep;
  rep.mean_on = on.mean;
  rep.mean_off = off.mean;
  rep.var_on = on.variance;
  rep.var_off = off.variance;
  rep.snr = snr_value(on.mean, off.mean, on.variance, off.variance, m_modes);
  if (!std::isfinite(rep.snr)) throw std::runtime_error("make_report: SNR is not finite");
  rep.threshold = threshold(on.mean, off.mean, on.variance, off.variance, m_modes);
  rep.p_err = p_err(rep.snr);
  return rep;
}

std::string_view to_string(ReceiverKind kind) {
  switch (kind) {
    case ReceiverKind::BoundConstant: return "bound";
    case ReceiverKind::BoundNonConstant: return "bound-nonconstant";
    case ReceiverKind::NearlyBound: return "nearly-bound";
    case ReceiverKind::PC: return "pc";
    case ReceiverKind::OPA: return "opa";
    case ReceiverKind::DH: return "dh";
    case ReceiverKind::PNDM: return "pndm";
    case ReceiverKind::CoherentHD: return "coherent-hd";
    case ReceiverKind::CoherentOff: return "coherent-off";
    case ReceiverKind::CctOff: return "cct-off";
    case ReceiverKind::SeparateHTD: return "separate-htd";
    case ReceiverKind::DoubleHTD: return "double-htd";
    case ReceiverKind::HdProduct: return "hd-product";
  }
  return "unknown";
}

void ReceiverSpec::validate() const {
  switch (kind) {
    case ReceiverKind::PC:
      if (std::abs(mu * mu - nu * nu - 1.0) > 1e-12) {
        throw std::domain_error("PC receiver requires mu^2 - nu^2 = 1");
      }
      break;
    case ReceiverKind::OPA:
      if (!(gain > 1.0)) throw std::domain_error("OPA receiver requires G > 1");
      break;
    case ReceiverKind::PNDM: check_beam_splitter(t, r); break;
    default: break;
  }
}

bool ReceiverSpec::accepts(Source source) const {
  switch (kind) {
    case ReceiverKind::BoundConstant:
    case ReceiverKind::BoundNonConstant:
    case ReceiverKind::NearlyBound:
    case ReceiverKind::PC:
    case ReceiverKind::OPA:
    case ReceiverKind::DH:
    case ReceiverKind::DoubleHTD: return source == Source::Tmsv;
    case ReceiverKind::PNDM: return source == Source::Cct || source == Source::Coherent;
    case ReceiverKind::CoherentHD:
    case ReceiverKind::CoherentOff: return source == Source::Coherent;
    case ReceiverKind::CctOff: return source == Source::Cct;
    case ReceiverKind::SeparateHTD:
    case ReceiverKind::HdProduct: return true;
  }
  return false;
}

namespace {

ObservableStats stats_on(const QuadraticObservable& obs, const GaussianState& s) {
  return stats(obs, s);
}

GaussianState after_5050(const GaussianState& s) {
  const double h = 1.0 / std::numbers::sqrt2;
  return apply_beam_splitter(s, 0, 1, h, h, std::numbers::pi / 2);
}

}  // namespace

SnrReport snr_generic(const ReceiverSpec& spec, const HypothesisPair& pair,
                      std::int64_t m_modes) {
  spec.validate();
  if (!spec.accepts(pair.source)) {
    throw std::invalid_argument("receiver '" + std::string(to_string(spec.kind)) +
                                "' is not defined for a " + std::string(to_string(pair.source)) +
                                " probe");
  }
  const int n = pair.on.n_modes();
  auto simple = [&](const QuadraticObservable& obs) {
    const QuadraticObservable o = obs.embedded(n);
    return make_report(stats_on(o, pair.on), stats_on(o, pair.off), m_modes);
  };

  switch (spec.kind) {
    case ReceiverKind::BoundConstant: return simple(obs_bound(0.0, -std::abs(spec.beta)));
    case ReceiverKind::BoundNonConstant: return simple(obs_bound(spec.alpha, spec.beta));
    case ReceiverKind::NearlyBound: return simple(obs_nearly_bound());
    case ReceiverKind::OPA: return simple(obs_opa(spec.gain));
    case ReceiverKind::DH: return simple(obs_dh());
    case ReceiverKind::CoherentHD: return simple(obs_quadrature(0, spec.theta, 1));
    case ReceiverKind::CoherentOff:
    case ReceiverKind::CctOff: return simple(obs_off());
    case ReceiverKind::HdProduct: return simple(obs_hd_product(spec.theta, spec.idler_phase));
    case ReceiverKind::PNDM:
      return simple(
          transform_by_beam_splitter(obs_photon_difference(0, 1, 2), spec.t, spec.r, spec.phi));
    case ReceiverKind::PC: {
      const QuadraticObservable o = obs_pc(spec.mu, spec.nu).embedded(n + 1);
      const GaussianState vac = make_vacuum(1);
      return make_report(stats(o, tensor(pair.on, vac)), stats(o, tensor(pair.off, vac)),
                         m_modes);
    }
    case ReceiverKind::SeparateHTD: {
      const bool quantum = pair.source == Source::Tmsv;
      const QuadraticObservable o = (quantum ? obs_nearly_bound() : obs_off()).embedded(n);
      const auto variant =
          quantum ? HeterodyneVariant::SeparateHtdQI : HeterodyneVariant::DualModeCI;
      return make_report(heterodyne_degrade(stats(o, pair.on), variant, pair.on),
                         heterodyne_degrade(stats(o, pair.off), variant, pair.off), m_modes);
    }
    case ReceiverKind::DoubleHTD: {
      const QuadraticObservable o = obs_double_htd_core();
      const GaussianState on = after_5050(pair.on);
      const GaussianState off = after_5050(pair.off);
      const auto variant = HeterodyneVariant::DoubleHtdAfterBs;
      return make_report(heterodyne_degrade(stats(o, on), variant, on),
                         heterodyne_degrade(stats(o, off), variant, off), m_modes);
    }
  }
  throw std::invalid_argument("snr_generic: unknown receiver kind");
}

namespace {

// Received background-plus-signal photon number A (target present) and the
// target-absent value N_B.
struct Moments {
  double ns;
  double nb;
  double a_on;
  double a_off;
  double c;  // sqrt(kappa N_S (N_S + 1))

  explicit Moments(const ScenarioParams& p)
      : ns(p.n_s),
        nb(p.n_b),
        a_on(p.kappa * p.n_s + (p.noise_model == NoiseModel::Constant
                                    ? p.n_b
                                    : (1.0 - p.kappa) * p.n_b)),
        a_off(p.n_b),
        c(std::sqrt(p.kappa * p.n_s * (p.n_s + 1.0))) {
    p.validate();
  }

  // Variance of O_SI at background A and correlation C.
  double var_si(double a, double corr) const {
    return (a + 1.0) * (ns + 1.0) + 2.0 * corr * corr + a * ns;
  }
  double delta_n() const { return a_on - a_off; }
};

SnrReport closed_report(double mean_diff, double var_on, double var_off, std::int64_t m) {
  return make_report({mean_diff, var_on}, {0.0, var_off}, m);
}

}  // namespace

double optimal_beta_closed(const ScenarioParams& params) {
  params.validate();
  const double ns = params.n_s;
  const double kappa = params.kappa;
  if (kappa * ns == 0.0) throw std::domain_error("optimal_beta_closed: kappa N_S must be > 0");
  const double f = 1.0 + ns + params.n_b + 2.0 * ns * params.n_b;
  // f - sqrt(f (f - x)) = f x / (f + sqrt(f (f - x))) avoids cancellation.
  const double x = kappa * (ns + 1.0);
  const double bracket = f * x / (f + std::sqrt(f * (f - x)));
  return (1.0 + 2.0 * ns) / std::sqrt(kappa * ns * std::pow(ns + 1.0, 3)) * bracket;
}

SnrReport snr_closed_bound_constant(const ScenarioParams& params,
                                    std::optional<double> beta_abs) {
  const Moments mo(params);
  double b = 0.0;
  if (beta_abs) {
    b = std::abs(*beta_abs);
  } else if (params.kappa * params.n_s > 0.0) {
    b = optimal_beta_closed(params);
  }
  auto m_term = [&](double corr) {
    return b * b * mo.ns * (mo.ns + 1.0) - 2.0 * b * corr * (2.0 * mo.ns + 1.0);
  };
  return closed_report(2.0 * mo.c, mo.var_si(mo.a_on, mo.c) + m_term(mo.c),
                       mo.var_si(mo.a_off, 0.0) + m_term(0.0), params.m_modes);
}

SnrReport snr_closed_nearly_bound(const ScenarioParams& params) {
  const Moments mo(params);
  return closed_report(2.0 * mo.c, mo.var_si(mo.a_on, mo.c), mo.var_si(mo.a_off, 0.0),
                       params.m_modes);
}

SnrReport snr_closed_bound_nonconstant(const ScenarioParams& params, double alpha,
                                       double beta) {
  const Moments mo(params);
  const double ns = mo.ns;
  auto l_term = [&](double b, double corr) {
    return alpha * alpha * b * (b + 1.0) + beta * beta * ns * (ns + 1.0) +
           2.0 * alpha * corr * (2.0 * b + 1.0) + 2.0 * beta * corr * (2.0 * ns + 1.0) +
           2.0 * alpha * beta * corr * corr;
  };
  // Under nonconstant noise delta_n = -kappa (N_B - N_S).
  return closed_report(2.0 * mo.c + alpha * mo.delta_n(),
                       mo.var_si(mo.a_on, mo.c) + l_term(mo.a_on, mo.c),
                       mo.var_si(mo.a_off, 0.0) + l_term(mo.a_off, 0.0), params.m_modes);
}

SnrReport snr_closed_pc(const ScenarioParams& params, double mu, double nu) {
  const Moments mo(params);
  if (std::abs(mu * mu - nu * nu - 1.0) > 1e-12) {
    throw std::domain_error("snr_closed_pc: requires mu^2 - nu^2 = 1");
  }
  const double extra = mu * mu / (nu * nu) * mo.ns;
  return closed_report(2.0 * mo.c, mo.var_si(mo.a_on, mo.c) + extra,
                       mo.var_si(mo.a_off, 0.0) + extra, params.m_modes);
}

SnrReport snr_closed_opa(const ScenarioParams& params, double gain, OpaForm form) {
  const Moments mo(params);
  if (!(gain > 1.0)) throw std::domain_error("snr_closed_opa: requires G > 1");
  const double g = gain;
  const double ns = mo.ns;
  const double idler_cross = form == OpaForm::AsPrinted ? 4.0 * ns + 1.0 : 4.0 * ns + 2.0;
  auto q_term = [&](double a, double corr) {
    return (g - 1.0) / g * a * (a + 1.0) + g / (g - 1.0) * ns * (ns + 1.0) +
           corr / std::sqrt(g * (g - 1.0)) * ((g - 1.0) * (4.0 * a + 2.0) + g * idler_cross) +
           2.0 * corr * corr;
  };
  return closed_report(2.0 * mo.c + std::sqrt((g - 1.0) / g) * mo.delta_n(),
                       mo.var_si(mo.a_on, mo.c) + q_term(mo.a_on, mo.c),
                       mo.var_si(mo.a_off, 0.0) + q_term(mo.a_off, 0.0), params.m_modes);
}

SnrReport snr_closed_dh(const ScenarioParams& params) {
  const Moments mo(params);
  const double ns = mo.ns;
  auto p_term = [&](double a, double corr) {
    return a * (a + 1.0) + ns * (ns + 1.0) + 2.0 * corr * corr - 4.0 * corr * (a + ns + 1.0);
  };
  return closed_report(2.0 * mo.c - mo.delta_n(), mo.var_si(mo.a_on, mo.c) + p_term(mo.a_on, mo.c),
                       mo.var_si(mo.a_off, 0.0) + p_term(mo.a_off, 0.0), params.m_modes);
}

SnrReport snr_cct(const ScenarioParams& params) {
  const Moments mo(params);
  const double ns = params.n_s;
  const double ni = params.n_i;
  const double kappa = params.kappa;
  const double y = ni + params.n_b * (1.0 + 2.0 * ni);
  const double d = std::sqrt(kappa * ns * ni);
  const double var_on = params.noise_model == NoiseModel::Constant
                            ? 4.0 * kappa * ns * ni + kappa * ns + y
                            : 2.0 * d * d + mo.a_on * (2.0 * ni + 1.0) + ni;
  return closed_report(2.0 * d, var_on, y, params.m_modes);
}

SnrReport snr_coherent_off(const ScenarioParams& params) {
  const Moments mo(params);
  const double ns = params.n_s;
  const double ni = params.n_i;
  const double kappa = params.kappa;
  const double y = ni + params.n_b * (1.0 + 2.0 * ni);
  const double background_on = mo.a_on - kappa * ns;
  const double var_on = params.noise_model == NoiseModel::Constant
                            ? kappa * ns + y
                            : background_on + ni * (2.0 * background_on + 1.0) + kappa * ns;
  return closed_report(2.0 * std::sqrt(kappa * ns * ni), var_on, y, params.m_modes);
}

SnrReport snr_coherent_hd(const ScenarioParams& params) {
  const Moments mo(params);
  const double background_on = mo.a_on - params.kappa * params.n_s;
  return closed_report(std::sqrt(2.0 * params.kappa * params.n_s), background_on + 0.5,
                       params.n_b + 0.5, params.m_modes);
}

std::array<double, 2> log_snr_gradient_nonconstant(const ScenarioParams& params, double alpha,
                                                   double beta) {
  const Moments mo(params);
  const double ns = mo.ns;
  const double c = mo.c;
  const double a1 = mo.a_on;
  const double a0 = mo.a_off;
  const double nn = ns * (ns + 1.0);

  const double diff = 2.0 * c + alpha * mo.delta_n();
  const double v1 = mo.var_si(a1, c) + alpha * alpha * a1 * (a1 + 1.0) + beta * beta * nn +
                    2.0 * alpha * c * (2.0 * a1 + 1.0) + 2.0 * beta * c * (2.0 * ns + 1.0) +
                    2.0 * alpha * beta * c * c;
  const double v0 = mo.var_si(a0, 0.0) + alpha * alpha * a0 * (a0 + 1.0) + beta * beta * nn;
  const double s1 = std::sqrt(v1);
  const double s0 = std::sqrt(v0);

  const double dv1_da = 2.0 * alpha * a1 * (a1 + 1.0) + 2.0 * c * (2.0 * a1 + 1.0) +
                        2.0 * beta * c * c;
  const double dv1_db = 2.0 * beta * nn + 2.0 * c * (2.0 * ns + 1.0) + 2.0 * alpha * c * c;
  const double dv0_da = 2.0 * alpha * a0 * (a0 + 1.0);
  const double dv0_db = 2.0 * beta * nn;

  const double spread = s1 + s0;
  const double g_a = 2.0 * mo.delta_n() / diff - (dv1_da / s1 + dv0_da / s0) / spread;
  const double g_b = -(dv1_db / s1 + dv0_db / s0) / spread;
  return {g_a, g_b};
}

namespace {

constexpr double kSearchLo = -50.0;
constexpr double kSearchHi = 50.0;

double neg_log_snr(const ScenarioParams& params, double alpha, double beta) {
  if (alpha < kSearchLo || alpha > kSearchHi || beta < kSearchLo || beta > kSearchHi) {
    return std::numeric_limits<double>::infinity();
  }
  const double s = snr_closed_bound_nonconstant(params, alpha, beta).snr;
  return s > 0.0 ? -std::log(s) : std::numeric_limits<double>::infinity();
}

AlphaBetaOptimum polish(const ScenarioParams& params, double alpha0, double beta0,
                        double step) {
  SimplexOptions opts;
  opts.initial_step = step;
  opts.max_iterations = 500;
  const auto nm = nelder_mead_minimize(
      [&](const std::vector<double>& x) { return neg_log_snr(params, x[0], x[1]); },
      {alpha0, beta0}, opts);

  double a = nm.x[0];
  double b = nm.x[1];
  double best = nm.value;
  for (int it = 0; it < 30; ++it) {
    const auto g = log_snr_gradient_nonconstant(params, a, b);
    if (std::hypot(g[0], g[1]) < 1e-14) break;
    const double ha = 1e-6 * std::max(1.0, std::abs(a));
    const double hb = 1e-6 * std::max(1.0, std::abs(b));
    const auto ga_p = log_snr_gradient_nonconstant(params, a + ha, b);
    const auto ga_m = log_snr_gradient_nonconstant(params, a - ha, b);
    const auto gb_p = log_snr_gradient_nonconstant(params, a, b + hb);
    const auto gb_m = log_snr_gradient_nonconstant(params, a, b - hb);
    Eigen::Matrix2d hess;
    hess << (ga_p[0] - ga_m[0]) / (2 * ha), (gb_p[0] - gb_m[0]) / (2 * hb),
        (ga_p[1] - ga_m[1]) / (2 * ha), (gb_p[1] - gb_m[1]) / (2 * hb);
    hess = 0.5 * (hess + hess.transpose()).eval();
    // Newton on a maximum needs a negative definite Hessian of ln SNR.
    if (!(hess(0, 0) < 0.0 && hess.determinant() > 0.0)) break;
    const Eigen::Vector2d delta = hess.ldlt().solve(-Eigen::Vector2d(g[0], g[1]));
    const double a_new = a + delta(0);
    const double b_new = b + delta(1);
    const double val = neg_log_snr(params, a_new, b_new);
    if (!(val <= best + 1e-15 * std::abs(best))) break;
    a = a_new;
    b = b_new;
    best = std::min(best, val);
    if (delta.norm() < 1e-15 * std::max(1.0, std::hypot(a, b))) break;
  }

  ReceiverSpec spec;
  spec.kind = ReceiverKind::BoundNonConstant;
  spec.alpha = a;
  spec.beta = b;
  return {a, b, snr_generic(spec, hypothesis_pair(Source::Tmsv, params), params.m_modes)};
}

}  // namespace

AlphaBetaOptimum optimize_alpha_beta_nonconstant(const ScenarioParams& params) {
  params.validate();
  if (params.noise_model != NoiseModel::NonConstant) {
    throw std::domain_error("optimize_alpha_beta_nonconstant: requires the nonconstant model");
  }
  constexpr int kGrid = 201;
  const double spacing = (kSearchHi - kSearchLo) / (kGrid - 1);
  double best_val = std::numeric_limits<double>::infinity();
  double best_a = 0.0;
  double best_b = 0.0;
  for (int i = 0; i < kGrid; ++i) {
    const double a = kSearchLo + spacing * i;
    for (int j = 0; j < kGrid; ++j) {
      const double b = kSearchLo + spacing * j;
      const double v = neg_log_snr(params, a, b);
      if (v < best_val) {
        best_val = v;
        best_a = a;
        best_b = b;
      }
    }
  }
  return polish(params, best_a, best_b, spacing);
}

AlphaBetaOptimum optimize_alpha_beta_from(const ScenarioParams& params, double alpha0,
                                          double beta0) {
  params.validate();
  if (params.noise_model != NoiseModel::NonConstant) {
    throw std::domain_error("optimize_alpha_beta_from: requires the nonconstant model");
  }
  return polish(params, alpha0, beta0, 0.5);
}

}  // namespace gillum

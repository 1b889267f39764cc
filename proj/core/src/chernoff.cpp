#include "gillum/chernoff.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include <Eigen/Eigenvalues>

#include "gillum/optimize.hpp"

namespace gillum {

namespace {

struct SymmetricRoots {
  RMatrix sqrt;
  RMatrix inv_sqrt;
};

SymmetricRoots symmetric_roots(const RMatrix& m) {
  Eigen::SelfAdjointEigenSolver<RMatrix> es(m);
  if (es.info() != Eigen::Success) throw std::domain_error("williamson: eigen solver failed");
  const RVector& w = es.eigenvalues();
  if (w.minCoeff() <= 0.0) throw std::domain_error("williamson: matrix is not positive definite");
  const RMatrix& v = es.eigenvectors();
  return {v * w.cwiseSqrt().asDiagonal() * v.transpose(),
          v * w.cwiseSqrt().cwiseInverse().asDiagonal() * v.transpose()};
}

}  // namespace

WilliamsonDecomposition williamson(const RMatrix& cov_q) {
  const auto dim = cov_q.rows();
  if (dim < 2 || dim % 2 != 0 || cov_q.cols() != dim) {
    throw std::invalid_argument("williamson: expected a square matrix of even size");
  }
  const double scale = std::max(1.0, cov_q.cwiseAbs().maxCoeff());
  if ((cov_q - cov_q.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
    throw std::domain_error("williamson: matrix is not symmetric");
  }
  const int n = static_cast<int>(dim / 2);
  const RMatrix sym = 0.5 * (cov_q + cov_q.transpose());
  const SymmetricRoots roots = symmetric_roots(sym);

  // A is antisymmetric, so its real Schur form is block diagonal with blocks
  // [[0, l], [-l, 0]], l = 1 / nu.
  RMatrix a = roots.inv_sqrt * symplectic_form(n) * roots.inv_sqrt;
  a = 0.5 * (a - a.transpose()).eval();
  Eigen::RealSchur<RMatrix> schur(a);
  if (schur.info() != Eigen::Success) throw std::domain_error("williamson: Schur form failed");
  RMatrix o = schur.matrixU();
  const RMatrix& t = schur.matrixT();

  WilliamsonDecomposition out;
  out.nu.resize(n);
  RVector d_inv_sqrt(dim);
  for (int k = 0; k < n; ++k) {
    const int i = 2 * k;
    double lambda = 0.5 * (t(i, i + 1) - t(i + 1, i));
    if (lambda < 0.0) {
      o.col(i + 1) *= -1.0;
      lambda = -lambda;
    }
    if (!(lambda > 0.0)) throw std::domain_error("williamson: degenerate symplectic spectrum");
    const double nu = 1.0 / lambda;
    out.nu[k] = nu;
    d_inv_sqrt(i) = d_inv_sqrt(i + 1) = 1.0 / std::sqrt(nu);
  }
  out.s = roots.sqrt * o * d_inv_sqrt.asDiagonal();
  return out;
}

WilliamsonDecomposition williamson(const QuadratureState& state) { return williamson(state.cov); }

namespace {

// Functions of the symplectic eigenvalue x >= 1 in vacuum-1 units,
//   G_p(x) = 2^p / ((x+1)^p - (x-1)^p),
//   L_p(x) = ((x+1)^p + (x-1)^p) / ((x+1)^p - (x-1)^p),
// written with r = (x-1)/(x+1) so that x -> 1 and small p stay accurate.
double log_g(double x, double p) {
  const double xp1 = x + 1.0;
  if (x <= 1.0) return 0.0;  // pure mode: G_p(1) = 1
  const double one_minus_rp = -std::expm1(p * std::log((x - 1.0) / xp1));
  return p * (std::numbers::ln2 - std::log(xp1)) - std::log(one_minus_rp);
}

double lambda_p(double x, double p) {
  if (x <= 1.0) return 1.0;
  const double rp = std::exp(p * std::log((x - 1.0) / (x + 1.0)));
  return (1.0 + rp) / -std::expm1(p * std::log((x - 1.0) / (x + 1.0)));
}

struct PreparedState {
  std::vector<double> nu;  // vacuum-1 units
  RMatrix s;
  RMatrix cov;
  RVector mean;  // vacuum-1 quadratures
};

constexpr double kPureTol = 1e-9;
constexpr double kSameCovTol = 1e-12;

PreparedState prepare(const GaussianState& state) {
  const QuadratureState q = to_quadrature(state);
  const WilliamsonDecomposition w = williamson(q.cov);
  PreparedState p;
  p.s = w.s;
  p.nu.reserve(w.nu.size());
  for (double nu : w.nu) {
    if (nu < 0.5 - kPureTol) throw std::domain_error("qcb: state is not physical");
    p.nu.push_back(2.0 * nu < 1.0 + kPureTol ? 1.0 : 2.0 * nu);
  }
  p.cov = q.cov;
  p.mean = std::numbers::sqrt2 * q.mean;
  return p;
}

RMatrix sigma_p(const PreparedState& st, double p) {
  RVector diag(2 * st.nu.size());
  for (std::size_t k = 0; k < st.nu.size(); ++k) {
    diag(2 * k) = diag(2 * k + 1) = lambda_p(st.nu[k], p);
  }
  return st.s * diag.asDiagonal() * st.s.transpose();
}

bool same_covariance(const PreparedState& a, const PreparedState& b) {
  const double scale = std::max(a.cov.cwiseAbs().maxCoeff(), b.cov.cwiseAbs().maxCoeff());
  return (a.cov - b.cov).cwiseAbs().maxCoeff() <= kSameCovTol * scale;
}

// With equal covariances the trace terms cancel and Tr(rho^s sigma^(1-s)) is
// the displacement factor alone.
double log_overlap(const PreparedState& a, const PreparedState& b, double s, bool same_cov) {
  double acc = 0.0;
  if (!same_cov) {
    const std::size_t n = a.nu.size();
    acc = static_cast<double>(n) * std::numbers::ln2;
    for (std::size_t k = 0; k < n; ++k) acc += log_g(a.nu[k], s) + log_g(b.nu[k], 1.0 - s);
  }
  const RMatrix sum = sigma_p(a, s) + sigma_p(b, 1.0 - s);
  const Eigen::LLT<RMatrix> llt(sum);
  if (llt.info() != Eigen::Success) throw std::runtime_error("qcb: singular overlap matrix");
  if (!same_cov) acc -= llt.matrixLLT().diagonal().array().log().sum();  // -1/2 ln det
  const RVector d = a.mean - b.mean;
  if (d.norm() >= 1e-14) acc -= 0.5 * d.dot(llt.solve(d));
  return acc;
}

QcbResult finish(double s_star, double log_q, std::int64_t m_modes) {
  log_q = std::min(log_q, 0.0);
  QcbResult r;
  r.s_star = s_star;
  r.log_q = log_q;
  r.q_value = std::exp(log_q);
  r.exponent = -static_cast<double>(m_modes) * log_q;
  r.p_err_bound = 0.5 * std::exp(-r.exponent);
  return r;
}

}  // namespace

double log_chernoff_overlap(const GaussianState& a, const GaussianState& b, double s) {
  if (a.n_modes() != b.n_modes()) throw std::invalid_argument("qcb: mode count mismatch");
  if (!(s > 0.0 && s < 1.0)) throw std::domain_error("qcb: s must lie in (0, 1)");
  const PreparedState pa = prepare(a);
  const PreparedState pb = prepare(b);
  return log_overlap(pa, pb, s, same_covariance(pa, pb));
}

QcbResult qcb(const GaussianState& a, const GaussianState& b, std::int64_t m_modes) {
  if (a.n_modes() != b.n_modes()) throw std::invalid_argument("qcb: mode count mismatch");
  if (m_modes < 1) throw std::domain_error("qcb: M must be >= 1");
  const PreparedState pa = prepare(a);
  const PreparedState pb = prepare(b);
  const bool same_cov = same_covariance(pa, pb);
  if (same_cov && (pa.mean - pb.mean).norm() < 1e-14) return finish(0.5, 0.0, m_modes);
  auto f = [&](double s) { return log_overlap(pa, pb, s, same_cov); };

  constexpr double kEps = 1e-6;
  constexpr int kGrid = 101;
  std::vector<double> xs(kGrid);
  std::vector<double> ys(kGrid);
  for (int i = 0; i < kGrid; ++i) {
    xs[i] = kEps + (1.0 - 2.0 * kEps) * i / (kGrid - 1);
    ys[i] = f(xs[i]);
  }
  const auto it = std::min_element(ys.begin(), ys.end());
  const int best = static_cast<int>(it - ys.begin());

  const double slack = 1e-13 * std::max(1.0, std::abs(*it));
  if (*std::max_element(ys.begin(), ys.end()) - *it <= slack) return finish(0.5, *it, m_modes);
  bool unimodal = true;
  for (int i = 1; i <= best && unimodal; ++i) unimodal = ys[i] <= ys[i - 1] + slack;
  for (int i = best + 1; i < kGrid && unimodal; ++i) unimodal = ys[i] >= ys[i - 1] - slack;
  if (!unimodal) return finish(xs[best], ys[best], m_modes);

  const double lo = xs[std::max(best - 1, 0)];
  const double hi = xs[std::min(best + 1, kGrid - 1)];
  const ScalarMinimum m = golden_section_minimize(f, lo, hi, 1e-10);
  if (m.value <= ys[best]) return finish(m.x, m.value, m_modes);
  return finish(xs[best], ys[best], m_modes);
}

QcbResult qcb(const HypothesisPair& pair, std::int64_t m_modes) {
  return qcb(pair.on, pair.off, m_modes);
}

QcbResult coherent_qcb_closed(const ScenarioParams& params) {
  params.validate();
  if (params.noise_model != NoiseModel::Constant) {
    throw std::domain_error("coherent_qcb_closed: defined for the constant noise model only");
  }
  const double nb = params.n_b;
  const double root_gap = 1.0 / (std::sqrt(nb + 1.0) + std::sqrt(nb));
  const double per_copy = params.kappa * params.n_s * root_gap * root_gap;
  return finish(0.5, -per_copy, params.m_modes);
}

}  // namespace gillum

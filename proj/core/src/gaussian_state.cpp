#include "gillum/gaussian_state.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace gillum {

namespace {

constexpr Complex kI{0.0, 1.0};

double scale_of(const CMatrix& m) { return std::max(1.0, m.cwiseAbs().maxCoeff()); }

}  // namespace

CMatrix quadrature_transform(int n) {
  const double s = 1.0 / std::numbers::sqrt2;
  CMatrix t = CMatrix::Zero(2 * n, 2 * n);
  for (int i = 0; i < n; ++i) {
    t(2 * i, i) = s;
    t(2 * i, n + i) = s;
    t(2 * i + 1, i) = -kI * s;
    t(2 * i + 1, n + i) = kI * s;
  }
  return t;
}

namespace {

// b = T^{-1} r
CMatrix inverse_quadrature_transform(int n) {
  const double s = 1.0 / std::numbers::sqrt2;
  CMatrix t = CMatrix::Zero(2 * n, 2 * n);
  for (int i = 0; i < n; ++i) {
    t(i, 2 * i) = s;
    t(i, 2 * i + 1) = kI * s;
    t(n + i, 2 * i) = s;
    t(n + i, 2 * i + 1) = -kI * s;
  }
  return t;
}

// Swaps the a and a^+ halves: db^+ = db^T P.
CMatrix half_swap(int n) {
  CMatrix p = CMatrix::Zero(2 * n, 2 * n);
  p.topRightCorner(n, n).setIdentity();
  p.bottomLeftCorner(n, n).setIdentity();
  return p;
}

}  // namespace

GaussianState::GaussianState(CVector mean, CMatrix cov)
    : n_(static_cast<int>(mean.size() / 2)), mean_(std::move(mean)), cov_(std::move(cov)) {
  if (n_ < 1 || mean_.size() != 2 * n_) {
    throw std::invalid_argument("GaussianState: mean must have even length >= 2");
  }
  if (cov_.rows() != 2 * n_ || cov_.cols() != 2 * n_) {
    throw std::invalid_argument("GaussianState: covariance must be " + std::to_string(2 * n_) +
                                "x" + std::to_string(2 * n_));
  }
  const double tol = 1e-9 * scale_of(cov_);
  const double mtol = 1e-9 * std::max(1.0, mean_.cwiseAbs().maxCoeff());
  if ((mean_.tail(n_) - mean_.head(n_).conjugate()).cwiseAbs().maxCoeff() > mtol) {
    throw std::invalid_argument("GaussianState: mean violates conjugate symmetry");
  }
  const CMatrix tl = cov_.topLeftCorner(n_, n_);
  const CMatrix tr = cov_.topRightCorner(n_, n_);
  const CMatrix bl = cov_.bottomLeftCorner(n_, n_);
  const CMatrix br = cov_.bottomRightCorner(n_, n_);
  const CMatrix eye = CMatrix::Identity(n_, n_);
  const bool ok = (br - br.adjoint()).cwiseAbs().maxCoeff() <= tol &&
                  (tl - eye - br.transpose()).cwiseAbs().maxCoeff() <= tol &&
                  (tr - tr.transpose()).cwiseAbs().maxCoeff() <= tol &&
                  (bl - tr.conjugate()).cwiseAbs().maxCoeff() <= tol;
  if (!ok) {
    throw std::invalid_argument("GaussianState: covariance violates block conjugate symmetry");
  }
}

GaussianState GaussianState::from_moments(const CVector& alpha, const CMatrix& normal,
                                          const CMatrix& anomalous) {
  const auto n = alpha.size();
  if (n < 1 || normal.rows() != n || normal.cols() != n || anomalous.rows() != n ||
      anomalous.cols() != n) {
    throw std::invalid_argument("from_moments: inconsistent dimensions");
  }
  CVector mean(2 * n);
  mean << alpha, alpha.conjugate();
  CMatrix cov(2 * n, 2 * n);
  cov.topLeftCorner(n, n) = CMatrix::Identity(n, n) + normal.transpose();
  cov.topRightCorner(n, n) = anomalous;
  cov.bottomLeftCorner(n, n) = anomalous.conjugate();
  cov.bottomRightCorner(n, n) = normal;
  return GaussianState(std::move(mean), std::move(cov));
}

double GaussianState::mean_photon_number(int mode) const {
  return cov_(n_ + mode, n_ + mode).real() + std::norm(mean_(mode));
}

double GaussianState::total_photon_number() const {
  double total = 0.0;
  for (int i = 0; i < n_; ++i) total += mean_photon_number(i);
  return total;
}

GaussianState GaussianState::reduced(std::span<const int> modes) const {
  const auto k = static_cast<Eigen::Index>(modes.size());
  if (k < 1) throw std::invalid_argument("reduced: empty mode list");
  std::vector<int> idx;
  idx.reserve(2 * modes.size());
  for (int m : modes) {
    if (m < 0 || m >= n_) throw std::out_of_range("reduced: mode index out of range");
    idx.push_back(m);
  }
  for (int m : modes) idx.push_back(n_ + m);
  CVector mean(2 * k);
  CMatrix cov(2 * k, 2 * k);
  for (Eigen::Index r = 0; r < 2 * k; ++r) {
    mean(r) = mean_(idx[r]);
    for (Eigen::Index c = 0; c < 2 * k; ++c) cov(r, c) = cov_(idx[r], idx[c]);
  }
  return GaussianState(std::move(mean), std::move(cov));
}

GaussianState make_vacuum(int n_modes) {
  if (n_modes < 1) throw std::domain_error("make_vacuum: n_modes must be >= 1");
  return GaussianState::from_moments(CVector::Zero(n_modes), CMatrix::Zero(n_modes, n_modes),
                                     CMatrix::Zero(n_modes, n_modes));
}

GaussianState make_thermal(double n_mean) {
  if (!(n_mean >= 0.0)) throw std::domain_error("make_thermal: mean photon number must be >= 0");
  CMatrix normal(1, 1);
  normal(0, 0) = n_mean;
  return GaussianState::from_moments(CVector::Zero(1), normal, CMatrix::Zero(1, 1));
}

GaussianState make_coherent(Complex amplitude) {
  CVector alpha(1);
  alpha(0) = amplitude;
  return GaussianState::from_moments(alpha, CMatrix::Zero(1, 1), CMatrix::Zero(1, 1));
}

GaussianState make_tmsv(double n_s) {
  if (!(n_s >= 0.0)) throw std::domain_error("make_tmsv: mean photon number must be >= 0");
  CMatrix normal = CMatrix::Zero(2, 2);
  normal(0, 0) = n_s;
  normal(1, 1) = n_s;
  CMatrix anomalous = CMatrix::Zero(2, 2);
  anomalous(0, 1) = anomalous(1, 0) = std::sqrt(n_s * (n_s + 1.0));
  return GaussianState::from_moments(CVector::Zero(2), normal, anomalous);
}

GaussianState make_cct(double n_s, double n_i) {
  if (!(n_s >= 0.0) || !(n_i >= 0.0)) {
    throw std::domain_error("make_cct: mean photon numbers must be >= 0");
  }
  const double total = n_s + n_i;
  if (total == 0.0) return make_vacuum(2);
  // phi = pi/2 makes the cross term <a_S^+ a_I> real and positive.
  return apply_beam_splitter(tensor(make_thermal(total), make_vacuum(1)), 0, 1,
                             std::sqrt(n_s / total), std::sqrt(n_i / total),
                             std::numbers::pi / 2);
}

GaussianState tensor(const GaussianState& a, const GaussianState& b) {
  const int na = a.n_modes();
  const int nb = b.n_modes();
  const int n = na + nb;
  CVector alpha(n);
  alpha << a.amplitudes(), b.amplitudes();
  CMatrix normal = CMatrix::Zero(n, n);
  CMatrix anomalous = CMatrix::Zero(n, n);
  normal.topLeftCorner(na, na) = a.normal_moments();
  normal.bottomRightCorner(nb, nb) = b.normal_moments();
  anomalous.topLeftCorner(na, na) = a.anomalous_moments();
  anomalous.bottomRightCorner(nb, nb) = b.anomalous_moments();
  return GaussianState::from_moments(alpha, normal, anomalous);
}

GaussianState apply_passive(const GaussianState& state, const CMatrix& w) {
  const int n = state.n_modes();
  if (w.rows() != n || w.cols() != n) {
    throw std::invalid_argument("apply_passive: mode matrix has wrong dimensions");
  }
  if ((w * w.adjoint() - CMatrix::Identity(n, n)).cwiseAbs().maxCoeff() > 1e-12) {
    throw std::domain_error("apply_passive: mode matrix is not unitary");
  }
  const CVector alpha = w * state.amplitudes();
  const CMatrix normal = w.conjugate() * state.normal_moments() * w.transpose();
  const CMatrix anomalous = w * state.anomalous_moments() * w.transpose();
  return GaussianState::from_moments(alpha, normal, anomalous);
}

void check_beam_splitter(double t, double r) {
  if (!std::isfinite(t) || !std::isfinite(r) || std::abs(t * t + r * r - 1.0) > 1e-12) {
    throw std::domain_error("beam splitter requires t^2 + r^2 = 1");
  }
}

Eigen::Matrix2cd beam_splitter_matrix(double t, double r, double phi) {
  check_beam_splitter(t, r);
  Eigen::Matrix2cd w;
  w(0, 0) = t;
  w(0, 1) = kI * std::exp(kI * phi) * r;
  w(1, 0) = kI * std::exp(-kI * phi) * r;
  w(1, 1) = t;
  return w;
}

GaussianState apply_beam_splitter(const GaussianState& state, int mode_i, int mode_j, double t,
                                  double r, double phi) {
  const int n = state.n_modes();
  if (mode_i == mode_j || mode_i < 0 || mode_j < 0 || mode_i >= n || mode_j >= n) {
    throw std::out_of_range("apply_beam_splitter: invalid mode pair");
  }
  const Eigen::Matrix2cd bs = beam_splitter_matrix(t, r, phi);
  CMatrix w = CMatrix::Identity(n, n);
  w(mode_i, mode_i) = bs(0, 0);
  w(mode_i, mode_j) = bs(0, 1);
  w(mode_j, mode_i) = bs(1, 0);
  w(mode_j, mode_j) = bs(1, 1);
  return apply_passive(state, w);
}

QuadratureState to_quadrature(const GaussianState& state) {
  const int n = state.n_modes();
  const CMatrix t = quadrature_transform(n);
  const CMatrix sigma = t * state.cov() * half_swap(n) * t.transpose();
  QuadratureState q;
  q.mean = (t * state.mean()).real();
  q.cov = (0.5 * (sigma + sigma.transpose())).real();
  return q;
}

GaussianState from_quadrature(const QuadratureState& q) {
  const auto dim = q.mean.size();
  if (dim < 2 || dim % 2 != 0 || q.cov.rows() != dim || q.cov.cols() != dim) {
    throw std::invalid_argument("from_quadrature: inconsistent dimensions");
  }
  const int n = static_cast<int>(dim / 2);
  const CMatrix tinv = inverse_quadrature_transform(n);
  const CMatrix sigma =
      q.cov.cast<Complex>() + Complex(0.0, 0.5) * symplectic_form(n).cast<Complex>();
  CMatrix cov = tinv * sigma * tinv.transpose() * half_swap(n);
  CVector mean = tinv * q.mean.cast<Complex>();
  // Remove rounding asymmetry so the constructor's checks see exact symmetry.
  mean.tail(n) = mean.head(n).conjugate();
  const CMatrix br = cov.bottomRightCorner(n, n);
  const CMatrix normal = 0.5 * (br + br.adjoint());
  const CMatrix tr = cov.topRightCorner(n, n);
  const CMatrix anomalous = 0.5 * (tr + tr.transpose());
  return GaussianState::from_moments(mean.head(n), normal, anomalous);
}

RMatrix symplectic_form(int n_modes) {
  RMatrix omega = RMatrix::Zero(2 * n_modes, 2 * n_modes);
  for (int i = 0; i < n_modes; ++i) {
    omega(2 * i, 2 * i + 1) = 1.0;
    omega(2 * i + 1, 2 * i) = -1.0;
  }
  return omega;
}

std::vector<double> symplectic_eigenvalues(const RMatrix& cov_q) {
  const auto dim = cov_q.rows();
  if (dim < 2 || dim % 2 != 0 || cov_q.cols() != dim) {
    throw std::invalid_argument("symplectic_eigenvalues: expected a square even-sized matrix");
  }
  const int n = static_cast<int>(dim / 2);
  Eigen::SelfAdjointEigenSolver<RMatrix> es(0.5 * (cov_q + cov_q.transpose()));
  if (es.eigenvalues().minCoeff() <= 0.0) {
    // Not positive definite, hence not a quantum covariance matrix.
    return std::vector<double>(n, es.eigenvalues().minCoeff());
  }
  const RMatrix root = es.operatorSqrt();
  const CMatrix h = Complex(0.0, 1.0) * (root * symplectic_form(n) * root).cast<Complex>();
  Eigen::SelfAdjointEigenSolver<CMatrix> hs(0.5 * (h + h.adjoint()), Eigen::EigenvaluesOnly);
  std::vector<double> nu(n);
  for (int k = 0; k < n; ++k) nu[k] = hs.eigenvalues()(n + k);
  std::sort(nu.begin(), nu.end());
  return nu;
}

std::vector<double> symplectic_eigenvalues(const GaussianState& state) {
  return symplectic_eigenvalues(to_quadrature(state).cov);
}

bool is_physical(const GaussianState& state, double tol) {
  const auto nu = symplectic_eigenvalues(state);
  return std::all_of(nu.begin(), nu.end(), [tol](double v) { return v >= 0.5 - tol; });
}

}  // namespace gillum

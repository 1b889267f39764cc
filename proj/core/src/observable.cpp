#include "gillum/observable.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace gillum {

namespace {

constexpr double kStructureTol = 1e-12;

double scale_of(const CMatrix& m) {
  return m.size() == 0 ? 1.0 : std::max(1.0, m.cwiseAbs().maxCoeff());
}

double max_abs(const CMatrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

void require_modes(int mode, int n_modes) {
  if (mode < 0 || mode >= n_modes) throw std::out_of_range("observable: mode index out of range");
}

// Unit a_S^+ a_I^+ + a_S a_I coupling on (S, I) = (0, 1).
CMatrix squeeze_coupling(int n_modes) {
  CMatrix g = CMatrix::Zero(n_modes, n_modes);
  g(0, 1) = g(1, 0) = 0.5;
  return g;
}

}  // namespace

QuadraticObservable::QuadraticObservable(int n_modes)
    : c0_(0.0),
      h_(CMatrix::Zero(n_modes, n_modes)),
      g_(CMatrix::Zero(n_modes, n_modes)),
      linear_(CVector::Zero(n_modes)) {
  if (n_modes < 1) throw std::invalid_argument("QuadraticObservable: n_modes must be >= 1");
}

QuadraticObservable::QuadraticObservable(double c0, CMatrix h, CMatrix g, CVector linear)
    : c0_(c0), h_(std::move(h)), g_(std::move(g)), linear_(std::move(linear)) {
  const auto n = h_.rows();
  if (n < 1 || h_.cols() != n || g_.rows() != n || g_.cols() != n || linear_.size() != n) {
    throw std::invalid_argument("QuadraticObservable: inconsistent dimensions");
  }
  if (max_abs(h_ - h_.adjoint()) > kStructureTol * scale_of(h_)) {
    throw std::invalid_argument("QuadraticObservable: h must be Hermitian");
  }
  if (max_abs(g_ - g_.transpose()) > kStructureTol * scale_of(g_)) {
    throw std::invalid_argument("QuadraticObservable: g must be symmetric");
  }
  h_ = 0.5 * (h_ + h_.adjoint()).eval();
  g_ = 0.5 * (g_ + g_.transpose()).eval();
}

QuadraticObservable QuadraticObservable::from_products(const CMatrix& k, const CVector& u,
                                                       Complex c) {
  const auto dim = k.rows();
  if (dim < 2 || dim % 2 != 0 || k.cols() != dim || u.size() != dim) {
    throw std::invalid_argument("from_products: inconsistent dimensions");
  }
  const auto n = dim / 2;
  const CMatrix k_aa = k.topLeftCorner(n, n);          // a_i a_j
  const CMatrix k_aad = k.topRightCorner(n, n);        // a_i a_j^+
  const CMatrix k_ada = k.bottomLeftCorner(n, n);      // a_i^+ a_j
  const CMatrix k_adad = k.bottomRightCorner(n, n);    // a_i^+ a_j^+

  // a_i a_j^+ = a_j^+ a_i + delta_ij
  const CMatrix h = k_ada + k_aad.transpose();
  const Complex c0 = c + k_aad.trace();
  const CMatrix g = 0.5 * (k_adad + k_adad.transpose());
  const CMatrix g_dual = 0.5 * (k_aa + k_aa.transpose());
  const CVector l = u.tail(n);

  const double tol = kStructureTol * std::max({scale_of(k), max_abs(u), 1.0});
  if (max_abs(g_dual - g.conjugate()) > tol || max_abs(u.head(n) - l.conjugate()) > tol ||
      std::abs(c0.imag()) > tol || max_abs(h - h.adjoint()) > tol) {
    throw std::invalid_argument("from_products: operator is not Hermitian");
  }
  return QuadraticObservable(c0.real(), 0.5 * (h + h.adjoint()), g, l);
}

QuadraticObservable QuadraticObservable::from_quadratures(const RMatrix& r, const RVector& l,
                                                          double c0) {
  const auto dim = r.rows();
  if (dim < 2 || dim % 2 != 0 || r.cols() != dim || l.size() != dim) {
    throw std::invalid_argument("from_quadratures: inconsistent dimensions");
  }
  const CMatrix t = quadrature_transform(static_cast<int>(dim / 2));
  return from_products(t.transpose() * r.cast<Complex>() * t, t.transpose() * l.cast<Complex>(),
                       c0);
}

CMatrix QuadraticObservable::product_matrix() const {
  const auto n = h_.rows();
  CMatrix k = CMatrix::Zero(2 * n, 2 * n);
  k.topLeftCorner(n, n) = g_.conjugate();
  k.bottomLeftCorner(n, n) = h_;
  k.bottomRightCorner(n, n) = g_;
  return k;
}

CVector QuadraticObservable::product_linear() const {
  const auto n = h_.rows();
  CVector u(2 * n);
  u << linear_.conjugate(), linear_;
  return u;
}

QuadraticObservable QuadraticObservable::embedded(int n_modes) const {
  const int n = this->n_modes();
  if (n_modes < n) throw std::invalid_argument("embedded: cannot shrink an observable");
  QuadraticObservable out(n_modes);
  out.c0_ = c0_;
  out.h_.topLeftCorner(n, n) = h_;
  out.g_.topLeftCorner(n, n) = g_;
  out.linear_.head(n) = linear_;
  return out;
}

QuadraticObservable& QuadraticObservable::operator+=(const QuadraticObservable& other) {
  if (other.n_modes() != n_modes()) {
    throw std::invalid_argument("QuadraticObservable: mode count mismatch in sum");
  }
  c0_ += other.c0_;
  h_ += other.h_;
  g_ += other.g_;
  linear_ += other.linear_;
  return *this;
}

QuadraticObservable& QuadraticObservable::operator*=(double a) {
  c0_ *= a;
  h_ *= a;
  g_ *= a;
  linear_ *= a;
  return *this;
}

QuadraticObservable& QuadraticObservable::operator+=(double b) {
  c0_ += b;
  return *this;
}

QuadraticObservable operator+(QuadraticObservable lhs, const QuadraticObservable& rhs) {
  return lhs += rhs;
}

QuadraticObservable operator*(double a, QuadraticObservable obs) { return obs *= a; }

QuadraticObservable operator+(QuadraticObservable obs, double b) { return obs += b; }

ObservableStats stats(const QuadraticObservable& obs, const GaussianState& state) {
  const int n = state.n_modes();
  if (obs.n_modes() != n) {
    throw std::invalid_argument("stats: observable acts on " + std::to_string(obs.n_modes()) +
                                " modes, state has " + std::to_string(n));
  }
  const CMatrix k = obs.product_matrix();
  const CVector u = obs.product_linear();
  const CVector& beta = state.mean();

  // G_kl = <db_k db_l> = (V P)_kl
  CMatrix g(2 * n, 2 * n);
  g.leftCols(n) = state.cov().rightCols(n);
  g.rightCols(n) = state.cov().leftCols(n);

  // b = beta + db splits O into a constant, a part linear in db and a
  // quadratic part; odd moments of db vanish so the two parts are uncorrelated.
  const Complex constant = obs.c0() + Complex((beta.transpose() * k * beta).value()) +
                           Complex((u.transpose() * beta).value());
  const CVector v = (k + k.transpose()) * beta + u;

  const Complex mean = constant + k.cwiseProduct(g).sum();
  const Complex var_linear = (v.transpose() * g * v).value();
  const Complex var_quadratic =
      (k.transpose() * g * k * g.transpose()).trace() + (k * g * k * g.transpose()).trace();
  const Complex variance = var_linear + var_quadratic;

  const double mean_scale = std::max(1.0, std::abs(mean));
  if (std::abs(mean.imag()) > 1e-10 * mean_scale) {
    throw std::runtime_error("stats: observable mean is not real");
  }
  const double var_scale = std::max(1.0, std::abs(variance));
  if (std::abs(variance.imag()) > 1e-10 * var_scale) {
    throw std::runtime_error("stats: observable variance is not real");
  }
  double var = variance.real();
  if (var < 0.0) {
    if (var < -1e-10 * var_scale) throw std::runtime_error("stats: negative variance");
    var = 0.0;
  }
  return {mean.real(), var};
}

QuadraticObservable obs_bound(double alpha, double beta) {
  CMatrix h = CMatrix::Zero(2, 2);
  h(0, 0) = alpha;
  h(1, 1) = beta;
  return QuadraticObservable(0.0, h, squeeze_coupling(2), CVector::Zero(2));
}

QuadraticObservable obs_nearly_bound() { return obs_bound(0.0, 0.0); }

QuadraticObservable obs_pc(double mu, double nu) {
  if (!std::isfinite(mu) || !std::isfinite(nu) || std::abs(mu * mu - nu * nu - 1.0) > 1e-12) {
    throw std::domain_error("obs_pc: requires mu^2 - nu^2 = 1");
  }
  CMatrix h = CMatrix::Zero(3, 3);
  // a_I a_V^+ = a_V^+ a_I for distinct modes
  h(1, 2) = h(2, 1) = mu;
  return QuadraticObservable(0.0, h, nu * squeeze_coupling(3), CVector::Zero(3));
}

QuadraticObservable obs_opa(double gain) {
  if (!(gain > 1.0) || !std::isfinite(gain)) throw std::domain_error("obs_opa: requires G > 1");
  CMatrix h = CMatrix::Zero(2, 2);
  h(0, 0) = gain - 1.0;  // (G-1) a_S a_S^+ = (G-1)(a_S^+ a_S + 1)
  h(1, 1) = gain;
  return QuadraticObservable(gain - 1.0, h, std::sqrt(gain * (gain - 1.0)) * squeeze_coupling(2),
                             CVector::Zero(2));
}

QuadraticObservable obs_dh() {
  CMatrix h = CMatrix::Identity(2, 2);
  return QuadraticObservable(1.0, h, -squeeze_coupling(2), CVector::Zero(2));
}

QuadraticObservable obs_off() {
  CMatrix h = CMatrix::Zero(2, 2);
  h(0, 1) = h(1, 0) = 1.0;
  return QuadraticObservable(0.0, h, CMatrix::Zero(2, 2), CVector::Zero(2));
}

QuadraticObservable obs_photon_number(int mode, int n_modes) {
  require_modes(mode, n_modes);
  CMatrix h = CMatrix::Zero(n_modes, n_modes);
  h(mode, mode) = 1.0;
  return QuadraticObservable(0.0, h, CMatrix::Zero(n_modes, n_modes), CVector::Zero(n_modes));
}

QuadraticObservable obs_quadrature(int mode, double phase, int n_modes) {
  require_modes(mode, n_modes);
  CVector l = CVector::Zero(n_modes);
  l(mode) = std::polar(1.0 / std::numbers::sqrt2, phase);
  return QuadraticObservable(0.0, CMatrix::Zero(n_modes, n_modes),
                             CMatrix::Zero(n_modes, n_modes), l);
}

QuadraticObservable obs_hd_product(double theta, double phi) {
  // X_S(theta) X_I(phi) = (1/2)[a_S^+ a_I^+ e^{i(theta+phi)} + a_S^+ a_I e^{i(theta-phi)} + h.c.]
  CMatrix h = CMatrix::Zero(2, 2);
  h(0, 1) = std::polar(0.5, theta - phi);
  h(1, 0) = std::conj(h(0, 1));
  CMatrix g = CMatrix::Zero(2, 2);
  g(0, 1) = g(1, 0) = std::polar(0.25, theta + phi);
  return QuadraticObservable(0.0, h, g, CVector::Zero(2));
}

QuadraticObservable obs_photon_difference(int mode_c, int mode_d, int n_modes) {
  require_modes(mode_c, n_modes);
  require_modes(mode_d, n_modes);
  if (mode_c == mode_d) throw std::invalid_argument("obs_photon_difference: modes must differ");
  QuadraticObservable diff = obs_photon_number(mode_c, n_modes);
  diff += -1.0 * obs_photon_number(mode_d, n_modes);
  return diff;
}

QuadraticObservable obs_double_htd_core() {
  RMatrix r = RMatrix::Zero(4, 4);
  r(0, 0) = -0.5;  // x_c
  r(1, 1) = 0.5;   // p_c
  r(2, 2) = 0.5;   // x_d
  r(3, 3) = -0.5;  // p_d
  return QuadraticObservable::from_quadratures(r, RVector::Zero(4), 0.0);
}

QuadraticObservable transform_passive(const QuadraticObservable& obs, const CMatrix& w) {
  const int n = obs.n_modes();
  if (w.rows() != n || w.cols() != n) {
    throw std::invalid_argument("transform_passive: mode matrix has wrong dimensions");
  }
  if (max_abs(w * w.adjoint() - CMatrix::Identity(n, n)) > 1e-12) {
    throw std::domain_error("transform_passive: mode matrix is not unitary");
  }
  CMatrix b = CMatrix::Zero(2 * n, 2 * n);
  b.topLeftCorner(n, n) = w;
  b.bottomRightCorner(n, n) = w.conjugate();
  return QuadraticObservable::from_products(b.transpose() * obs.product_matrix() * b,
                                            b.transpose() * obs.product_linear(), obs.c0());
}

QuadraticObservable transform_by_beam_splitter(const QuadraticObservable& obs, double t, double r,
                                               double phi, int mode_i, int mode_j) {
  const int n = obs.n_modes();
  if (mode_i == mode_j || mode_i < 0 || mode_j < 0 || mode_i >= n || mode_j >= n) {
    throw std::out_of_range("transform_by_beam_splitter: invalid mode pair");
  }
  const Eigen::Matrix2cd bs = beam_splitter_matrix(t, r, phi);
  CMatrix w = CMatrix::Identity(n, n);
  w(mode_i, mode_i) = bs(0, 0);
  w(mode_i, mode_j) = bs(0, 1);
  w(mode_j, mode_i) = bs(1, 0);
  w(mode_j, mode_j) = bs(1, 1);
  return transform_passive(obs, w);
}

double heterodyne_vacuum_constant(HeterodyneVariant variant) {
  switch (variant) {
    case HeterodyneVariant::DualModeCI: return 2.0;
    case HeterodyneVariant::SeparateHtdQI: return 1.0;
    case HeterodyneVariant::DoubleHtdAfterBs: return 1.0;
  }
  throw std::invalid_argument("heterodyne_vacuum_constant: unknown variant");
}

ObservableStats heterodyne_degrade(const ObservableStats& base, HeterodyneVariant variant,
                                   const GaussianState& state, int mode_a, int mode_b) {
  require_modes(mode_a, state.n_modes());
  require_modes(mode_b, state.n_modes());
  const double photons = state.mean_photon_number(mode_a) + state.mean_photon_number(mode_b);
  return {0.5 * base.mean,
          0.25 * (base.variance + heterodyne_vacuum_constant(variant) + photons)};
}

}  // namespace gillum

#pragma once

#include "gillum/gaussian_state.hpp"

namespace gillum {

/// Hermitian observable at most quadratic in the mode operators, kept in
/// normal order:
///
///   O = c0 + sum_ij h_ij a_i^+ a_j
///          + sum_ij (g_ij a_i^+ a_j^+ + conj(g_ij) a_i a_j)
///          + sum_i  (l_i a_i^+ + conj(l_i) a_i)
///
/// with h Hermitian and g symmetric. Note that the a^+ a^+ sum runs over all
/// ordered pairs, so a_S^+ a_I^+ + a_S a_I has g_SI = g_IS = 1/2.
class QuadraticObservable {
 public:
  explicit QuadraticObservable(int n_modes);
  /// Throws std::invalid_argument if h is not Hermitian or g not symmetric (1e-12).
  QuadraticObservable(double c0, CMatrix h, CMatrix g, CVector linear);

  /// O = c + sum_kl k_kl b_k b_l + sum_k u_k b_k with b = (a, a^+), in the
  /// operator order written. Reorders to normal form and checks Hermiticity.
  static QuadraticObservable from_products(const CMatrix& k, const CVector& u, Complex c);

  /// O = c0 + sum_kl r_kl q_k q_l + sum_k l_k q_k over the quadratures
  /// q = (x_1, p_1, ..., x_n, p_n), in the operator order written.
  static QuadraticObservable from_quadratures(const RMatrix& r, const RVector& l, double c0);

  int n_modes() const { return static_cast<int>(h_.rows()); }
  double c0() const { return c0_; }
  const CMatrix& h() const { return h_; }
  const CMatrix& g() const { return g_; }
  const CVector& linear() const { return linear_; }

  /// Coefficients k (2n x 2n) and u (2n) of the product form above.
  CMatrix product_matrix() const;
  CVector product_linear() const;

  /// Same observable acting on a larger register (extra modes appended).
  QuadraticObservable embedded(int n_modes) const;

  QuadraticObservable& operator+=(const QuadraticObservable& other);
  QuadraticObservable& operator*=(double a);
  QuadraticObservable& operator+=(double b);

 private:
  double c0_;
  CMatrix h_;
  CMatrix g_;
  CVector linear_;
};

QuadraticObservable operator+(QuadraticObservable lhs, const QuadraticObservable& rhs);
QuadraticObservable operator*(double a, QuadraticObservable obs);
QuadraticObservable operator+(QuadraticObservable obs, double b);

struct ObservableStats {
  double mean = 0.0;
  double variance = 0.0;
};

/// Exact mean and variance on a Gaussian state (Wick factorization with
/// displacement). Variances in (-1e-10 * scale, 0) are clamped to 0; anything
/// more negative, or a mean with a non-negligible imaginary part, throws
/// std::runtime_error. Mismatched mode counts throw std::invalid_argument.
ObservableStats stats(const QuadraticObservable& obs, const GaussianState& state);

// Receiver observables. Two-mode observables act on (S, I) = modes (0, 1).

/// a_S^+ a_I^+ + a_S a_I + alpha a_S^+ a_S + beta a_I^+ a_I
QuadraticObservable obs_bound(double alpha, double beta);
/// a_S^+ a_I^+ + a_S a_I
QuadraticObservable obs_nearly_bound();
/// nu (a_S^+ a_I^+ + a_S a_I) + mu (a_I a_V^+ + a_V a_I^+) on (S, I, V);
/// requires mu^2 - nu^2 = 1 (1e-12).
QuadraticObservable obs_pc(double mu, double nu);
/// sqrt(G(G-1)) (a_S^+ a_I^+ + a_S a_I) + (G-1) a_S a_S^+ + G a_I^+ a_I, G > 1.
QuadraticObservable obs_opa(double gain);
/// -(a_S^+ a_I^+ + a_S a_I) + a_S a_S^+ + a_I^+ a_I
QuadraticObservable obs_dh();
/// a_S^+ a_I + a_I^+ a_S
QuadraticObservable obs_off();

QuadraticObservable obs_photon_number(int mode, int n_modes);
/// X(phase) = (a^+ e^{i phase} + a e^{-i phase}) / sqrt(2) on `mode`.
QuadraticObservable obs_quadrature(int mode, double phase, int n_modes);
/// X_S(theta) X_I(phi).
QuadraticObservable obs_hd_product(double theta, double phi);
/// n_c - n_d.
QuadraticObservable obs_photon_difference(int mode_c, int mode_d, int n_modes);
/// (1/2)[(X_d^2 - P_d^2) - (X_c^2 - P_c^2)] with (c, d) = modes (0, 1): the
/// heterodyne-side form of the nearly bound observable after a 50:50 splitter.
QuadraticObservable obs_double_htd_core();

/// Re-expresses an observable written in output modes in terms of input
/// modes, where a_out = W a_in (W unitary).
QuadraticObservable transform_passive(const QuadraticObservable& obs, const CMatrix& w);

/// Heisenberg picture of apply_beam_splitter: stats(transform(O), rho)
/// equals stats(O, apply_beam_splitter(rho, ...)).
QuadraticObservable transform_by_beam_splitter(const QuadraticObservable& obs, double t, double r,
                                               double phi, int mode_i = 0, int mode_j = 1);

/// Vacuum noise added by heterodyning.
///   DualModeCI:       O_off measured by heterodyning S and I separately.
///   SeparateHtdQI:    O_SI measured by heterodyning S and I separately.
///   DoubleHtdAfterBs: the O_SI core measured by heterodyning c and d after a
///                     50:50 splitter.
enum class HeterodyneVariant { DualModeCI, SeparateHtdQI, DoubleHtdAfterBs };

/// 2, 1 and 1 respectively.
double heterodyne_vacuum_constant(HeterodyneVariant variant);

/// mean -> mean / 2, variance -> (variance + k + <n_a + n_b>) / 4, where
/// the photon numbers are read from `state` on (mode_a, mode_b).
ObservableStats heterodyne_degrade(const ObservableStats& base, HeterodyneVariant variant,
                                   const GaussianState& state, int mode_a = 0, int mode_b = 1);

}  // namespace gillum

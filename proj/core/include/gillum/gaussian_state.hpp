#pragma once

#include <complex>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace gillum {

using Complex = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;
using RVector = Eigen::VectorXd;
using RMatrix = Eigen::MatrixXd;

// Conventions
// -----------
// Mode operators are collected in the column vector b = (a_1..a_n, a_1^+..a_n^+).
//
//   mean  = <b>                      (second half is the conjugate of the first)
//   cov   = V = <db db^+>,  db = b - <b>
//
// so the upper-left block holds <da_i da_j^+>, the upper-right block <da_i da_j>,
// and the lower-right block <da_i^+ da_j>. For a two-mode state this is exactly
// the 4x4 matrix <[a_S a_I a_S^+ a_I^+]^T [a_S^+ a_I^+ a_S a_I]> used for the
// illumination covariance matrices, with entries stored unsymmetrized.
//
// The real quadrature picture uses x = (a + a^+)/sqrt(2), p = (a - a^+)/(i sqrt(2)),
// ordered (x_1, p_1, ..., x_n, p_n). Vacuum has cov_q = I/2 and the symplectic
// form is Omega = diag(J, ..., J) with J = [[0, 1], [-1, 0]].

/// Real quadrature form of an n-mode Gaussian state.
struct QuadratureState {
  RVector mean;  ///< (x_1, p_1, ..., x_n, p_n)
  RMatrix cov;   ///< symmetrized covariance, vacuum = I/2

  int n_modes() const { return static_cast<int>(mean.size() / 2); }
};

/// Immutable n-mode Gaussian state (first moments plus covariance matrix).
class GaussianState {
 public:
  /// Validates shapes and the conjugate symmetry of both mean and cov.
  /// Throws std::invalid_argument on violation.
  GaussianState(CVector mean, CMatrix cov);

  /// Builds a state from the displacement alpha_i = <a_i>, the normal
  /// moments N_ij = <da_i^+ da_j> (Hermitian) and the anomalous moments
  /// M_ij = <da_i da_j> (symmetric).
  static GaussianState from_moments(const CVector& alpha, const CMatrix& normal,
                                    const CMatrix& anomalous);

  int n_modes() const { return n_; }
  const CVector& mean() const { return mean_; }
  const CMatrix& cov() const { return cov_; }

  Complex amplitude(int mode) const { return mean_(mode); }
  CVector amplitudes() const { return mean_.head(n_); }
  CMatrix normal_moments() const { return cov_.bottomRightCorner(n_, n_); }
  CMatrix anomalous_moments() const { return cov_.topRightCorner(n_, n_); }

  /// <a_i^+ a_i> including the coherent part.
  double mean_photon_number(int mode) const;
  double total_photon_number() const;

  /// Reduced state of the listed modes, in the listed order.
  GaussianState reduced(std::span<const int> modes) const;

 private:
  int n_;
  CVector mean_;
  CMatrix cov_;
};

GaussianState make_vacuum(int n_modes);
GaussianState make_thermal(double n_mean);
GaussianState make_coherent(Complex amplitude);
GaussianState make_tmsv(double n_s);

/// Classically correlated thermal state: a thermal beam of mean n_s + n_i split
/// so that the two outputs carry n_s and n_i photons with a real, positive
/// cross correlation <a_S^+ a_I> = sqrt(n_s n_i).
GaussianState make_cct(double n_s, double n_i);

/// Product state, modes of `a` first.
GaussianState tensor(const GaussianState& a, const GaussianState& b);

/// Passive linear optics: the output annihilation operators are a' = W a,
/// with W unitary (checked to 1e-12).
GaussianState apply_passive(const GaussianState& state, const CMatrix& w);

/// 2x2 mode matrix of a beam splitter with amplitude transmittance t,
/// reflectance r and phase phi:
///   a_i -> t a_i + i e^{i phi} r a_j,   a_j -> t a_j + i e^{-i phi} r a_i,
/// the adjoint of a_i^+ -> t a_i^+ - i e^{-i phi} r a_j^+ (and i <-> j).
Eigen::Matrix2cd beam_splitter_matrix(double t, double r, double phi);

/// Throws std::domain_error unless t^2 + r^2 = 1 to 1e-12.
void check_beam_splitter(double t, double r);

GaussianState apply_beam_splitter(const GaussianState& state, int mode_i, int mode_j,
                                  double t, double r, double phi);

QuadratureState to_quadrature(const GaussianState& state);
GaussianState from_quadrature(const QuadratureState& q);

/// T with q = T b, q = (x_1, p_1, ...), b = (a, a^+).
CMatrix quadrature_transform(int n_modes);

/// Standard symplectic form for (x_1, p_1, ..., x_n, p_n).
RMatrix symplectic_form(int n_modes);

/// Symplectic eigenvalues in ascending order, computed from the spectrum of
/// the Hermitian matrix i cov^{1/2} Omega cov^{1/2}.
std::vector<double> symplectic_eigenvalues(const RMatrix& cov_q);
std::vector<double> symplectic_eigenvalues(const GaussianState& state);

/// All symplectic eigenvalues >= 1/2 - tol.
bool is_physical(const GaussianState& state, double tol = 1e-9);

}  // namespace gillum

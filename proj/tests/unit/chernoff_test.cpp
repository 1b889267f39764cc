#include <array>
#include <cmath>
#include <random>

#include <Eigen/Eigenvalues>

#include "doctest.h"
#include "gillum/chernoff.hpp"
#include "gillum/snr.hpp"
#include "test_support.hpp"

using namespace gillum;
using testing_support::rel_diff;

namespace {

ScenarioParams constant(double kappa, double ns, double nb) {
  ScenarioParams p;
  p.kappa = kappa;
  p.n_s = ns;
  p.n_b = nb;
  return p;
}

double reconstruction_error(const RMatrix& cov) {
  const WilliamsonDecomposition w = williamson(cov);
  RVector d(cov.rows());
  for (std::size_t k = 0; k < w.nu.size(); ++k) d(2 * k) = d(2 * k + 1) = w.nu[k];
  return (w.s * d.asDiagonal() * w.s.transpose() - cov).cwiseAbs().maxCoeff();
}

double symplectic_defect(const RMatrix& s) {
  const int n = static_cast<int>(s.rows() / 2);
  const RMatrix omega = symplectic_form(n);
  return (s * omega * s.transpose() - omega).cwiseAbs().maxCoeff();
}

// Two-mode states with zero mean and no anomalous moments are
// rho = exp(-a^dag H a) / det(1 + N), H = ln(1 + N^-1), N_ij = <a_i^dag a_j>.
// The exponent conserves photon number, so Tr(rho^s sigma^(1-s)) is a sum of
// exact finite blocks |j, n - j>.
RMatrix log_occupation_inverse(const RMatrix& n_matrix) {
  Eigen::SelfAdjointEigenSolver<RMatrix> es(n_matrix);
  const RVector h = (1.0 + es.eigenvalues().array().inverse()).log();
  return es.eigenvectors() * h.asDiagonal() * es.eigenvectors().transpose();
}

RMatrix block_exp(const RMatrix& h, int n, double t) {
  RMatrix k = RMatrix::Zero(n + 1, n + 1);
  for (int j = 0; j <= n; ++j) {
    const int m0 = j, m1 = n - j;
    k(j, j) = h(0, 0) * m0 + h(1, 1) * m1;
    if (m1 > 0) k(j + 1, j) = h(0, 1) * std::sqrt((m0 + 1.0) * m1);
    if (m0 > 0) k(j - 1, j) = h(1, 0) * std::sqrt(m0 * (m1 + 1.0));
  }
  Eigen::SelfAdjointEigenSolver<RMatrix> es(k);
  const RVector e = (-t * es.eigenvalues().array()).exp();
  return es.eigenvectors() * e.asDiagonal() * es.eigenvectors().transpose();
}

double fock_log_overlap(const RMatrix& n_on, const RMatrix& n_off, double s) {
  const RMatrix h_on = log_occupation_inverse(n_on);
  const RMatrix h_off = log_occupation_inverse(n_off);
  const RMatrix id = RMatrix::Identity(2, 2);
  double total = 0.0;
  for (int n = 0; n < 400; ++n) {
    const double t = (block_exp(h_on, n, s) * block_exp(h_off, n, 1.0 - s)).trace();
    total += t;
    if (n > 20 && t < 1e-30) break;
  }
  return std::log(total) - s * std::log((id + n_on).determinant()) -
         (1.0 - s) * std::log((id + n_off).determinant());
}

}  // namespace

TEST_CASE("Williamson normal form") {
  const auto th = williamson(to_quadrature(make_thermal(3.0)));
  CHECK(th.nu[0] == doctest::Approx(3.5).epsilon(1e-12));

  const auto sq = williamson(to_quadrature(make_tmsv(2.0)));
  for (double nu : sq.nu) CHECK(nu == doctest::Approx(0.5).epsilon(1e-10));

  const auto on = hypothesis_pair(Source::Tmsv, constant(0.01, 0.01, 30.0)).on;
  const RMatrix cov = to_quadrature(on).cov;
  CHECK(reconstruction_error(cov) < 1e-9);
  CHECK(symplectic_defect(williamson(cov).s) < 1e-9);

  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 20; ++trial) {
    const RMatrix c = to_quadrature(testing_support::random_state(1 + trial % 4, rng, 2.0)).cov;
    CHECK(reconstruction_error(c) < 1e-9 * std::max(1.0, c.norm()));
    CHECK(symplectic_defect(williamson(c).s) < 1e-9);
    for (double nu : williamson(c).nu) CHECK(nu >= 0.5 - 1e-9);
  }

  CHECK_THROWS_AS(williamson(RMatrix::Identity(3, 3)), std::invalid_argument);
  RMatrix neg = RMatrix::Identity(2, 2);
  neg(1, 1) = -1.0;
  CHECK_THROWS_AS(williamson(neg), std::domain_error);
}

TEST_CASE("pure coherent states") {
  const QcbResult same = qcb(make_coherent({0.3, 0.1}), make_coherent({0.3, 0.1}), 1);
  CHECK(same.q_value == 1.0);
  CHECK(same.p_err_bound == 0.5);

  for (auto [a, b] : {std::pair{Complex(0.0), Complex(1.0)}, std::pair{Complex(0.4, -0.2), Complex(-0.3, 0.9)},
                      std::pair{Complex(2.0, 1.0), Complex(1.5, 1.2)}}) {
    const QcbResult r = qcb(make_coherent(a), make_coherent(b), 1);
    CHECK(rel_diff(r.exponent, std::norm(a - b)) < 1e-8);
  }
}

TEST_CASE("coherent illumination against the closed form") {
  for (double kappa : {1e-3, 0.01, 0.1}) {
    for (double ns : {0.01, 1.0, 10.0}) {
      for (double nb : {0.5, 30.0, 100.0}) {
        const ScenarioParams p = constant(kappa, ns, nb);
        const double numeric = qcb(hypothesis_pair(Source::Coherent, p), p.m_modes).exponent;
        const double closed = coherent_qcb_closed(p).exponent;
        CHECK(rel_diff(numeric, closed) < 1e-8);
        const double per_copy = kappa * ns * std::pow(std::sqrt(nb + 1) - std::sqrt(nb), 2);
        CHECK(rel_diff(closed, p.m_modes * per_copy) < 1e-10);
      }
    }
  }
  for (double ns = 0.01; ns <= 10.0; ns *= 2.0) {
    const ScenarioParams p = constant(0.01, ns, 30.0);
    CHECK(rel_diff(qcb(hypothesis_pair(Source::Coherent, p), p.m_modes).exponent,
                   coherent_qcb_closed(p).exponent) < 1e-8);
  }

  const ScenarioParams bright = constant(0.01, 1.0, 1000.0);
  CHECK(coherent_qcb_closed(bright).exponent / (bright.m_modes * 0.01 / 4000.0) ==
        doctest::Approx(1.0).epsilon(0.01));
  CHECK(coherent_qcb_closed(constant(0.0, 1.0, 30.0)).exponent == 0.0);

  ScenarioParams nc = constant(0.01, 1.0, 30.0);
  nc.noise_model = NoiseModel::NonConstant;
  CHECK_THROWS_AS(coherent_qcb_closed(nc), std::domain_error);
}

TEST_CASE("entanglement advantage in the low-brightness limit") {
  const ScenarioParams p = constant(0.01, 1e-3, 100.0);
  const double ratio = qcb(hypothesis_pair(Source::Tmsv, p), 1).exponent /
                       qcb(hypothesis_pair(Source::Coherent, p), 1).exponent;
  CHECK(ratio == doctest::Approx(4.0).epsilon(0.1));
}

TEST_CASE("Chernoff bound structure") {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 12; ++trial) {
    const int n = 1 + trial % 3;
    const GaussianState a = testing_support::random_state(n, rng);
    const GaussianState b = testing_support::random_state(n, rng);
    const QcbResult ab = qcb(a, b, 1);
    const QcbResult ba = qcb(b, a, 1);
    CHECK(ab.q_value <= std::exp(log_chernoff_overlap(a, b, 0.5)) + 1e-12);
    CHECK(std::abs(ab.q_value - ba.q_value) < 1e-9);
    CHECK(std::abs(ab.s_star + ba.s_star - 1.0) < 1e-4);
    if (n == 2) CHECK(ab.s_star == 0.5);
    CHECK(ab.q_value > 0.0);
    CHECK(ab.q_value <= 1.0);

    const QcbResult wider = qcb(tensor(a, make_vacuum(1)), tensor(b, make_vacuum(1)), 1);
    CHECK(std::abs(wider.q_value - ab.q_value) < 1e-10);
  }

  for (Source src : {Source::Tmsv, Source::Cct}) {
    ScenarioParams p = constant(0.05, 0.5, 3.0);
    p.n_i = 0.5;
    const auto pair = hypothesis_pair(src, p);
    const QcbResult r = qcb(pair, 1);
    CHECK(r.q_value <= std::exp(log_chernoff_overlap(pair.on, pair.off, 0.5)) + 1e-12);
    CHECK(std::abs(r.q_value - qcb(pair.off, pair.on, 1).q_value) < 1e-9);
  }
}

TEST_CASE("classical-correlation overlap against a photon-number oracle") {
  for (auto [kappa, ns, ni, nb] : {std::array{0.2, 0.3, 0.3, 0.5}, std::array{0.5, 1.0, 0.4, 0.2},
                                   std::array{0.05, 0.6, 1.2, 0.8}}) {
    ScenarioParams p = constant(kappa, ns, nb);
    p.n_i = ni;
    const auto pair = hypothesis_pair(Source::Cct, p);
    RMatrix n_on(2, 2), n_off(2, 2);
    const double d = std::sqrt(kappa * ns * ni);
    n_on << kappa * ns + nb, d, d, ni;
    n_off << nb, 0.0, 0.0, ni;
    for (double s : {0.1, 0.35, 0.5, 0.8}) {
      CAPTURE(s);
      CHECK(rel_diff(log_chernoff_overlap(pair.on, pair.off, s), fock_log_overlap(n_on, n_off, s)) < 1e-9);
    }
  }
}

TEST_CASE("identical hypotheses and bad inputs") {
  const auto pair = hypothesis_pair(Source::Tmsv, constant(0.0, 0.5, 3.0));
  const QcbResult r = qcb(pair, 1000);
  CHECK(r.q_value == 1.0);
  CHECK(r.exponent == 0.0);
  CHECK(r.p_err_bound == 0.5);

  CMatrix cov = make_vacuum(1).cov();
  cov(0, 0) = 0.8;
  cov(1, 1) = -0.2;
  CHECK_THROWS(qcb(GaussianState(CVector::Zero(2), cov), make_vacuum(1), 1));
  CHECK_THROWS_AS(qcb(make_vacuum(1), make_vacuum(2), 1), std::invalid_argument);
  CHECK_THROWS_AS(log_chernoff_overlap(make_vacuum(1), make_vacuum(1), 1.0), std::domain_error);
}

TEST_CASE("O_off attains the classical-correlation Chernoff exponent") {
  for (double n = 0.1; n <= 5.0; n *= 1.5) {
    ScenarioParams p = constant(0.01, n, 30.0);
    p.n_i = n;
    const double bound = qcb(hypothesis_pair(Source::Cct, p), p.m_modes).exponent;
    CAPTURE(n);
    CHECK(rel_diff(snr_cct(p).snr, bound) < 0.10);
  }
}

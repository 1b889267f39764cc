#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "beta_oracle.hpp"
#include "erfc_oracle.hpp"
#include "gillum/snr.hpp"
#include "test_support.hpp"

using namespace gillum;
using testing_support::rel_close;
using testing_support::rel_diff;

namespace {

ScenarioParams scenario(double kappa, double ns, double nb, NoiseModel model) {
  ScenarioParams p;
  p.kappa = kappa;
  p.n_s = ns;
  p.n_b = nb;
  p.noise_model = model;
  return p;
}

ReceiverSpec spec_of(ReceiverKind kind) {
  ReceiverSpec s;
  s.kind = kind;
  return s;
}

SnrReport generic(ReceiverKind kind, Source src, const ScenarioParams& p) {
  return snr_generic(spec_of(kind), hypothesis_pair(src, p), p.m_modes);
}

}  // namespace

TEST_CASE("report assembly") {
  const double snr = snr_value(3.0, 1.0, 4.0, 1.0, 10);
  CHECK(snr == doctest::Approx(10.0 * 4.0 / (2.0 * 9.0)));
  const SnrReport r = make_report({3.0, 4.0}, {1.0, 1.0}, 10);
  CHECK(r.snr == doctest::Approx(snr).epsilon(1e-15));
  CHECK(r.p_err == doctest::Approx(p_err(snr)).epsilon(1e-15));
  CHECK_THROWS_AS(make_report({1.0, 0.0}, {0.0, 0.0}, 1), std::runtime_error);
  CHECK_THROWS_AS(make_report({1.0, 1.0}, {0.0, 1.0}, 0), std::domain_error);
}

TEST_CASE("threshold") {
  CHECK(threshold(3.0, 1.0, 2.0, 2.0, 5) == doctest::Approx(10.0));
  CHECK(threshold(3.0, 1.0, 0.0, 0.0, 5) == doctest::Approx(10.0));
  for (double v_on : {0.1, 1.0, 7.0}) {
    for (double v_off : {0.3, 2.0}) {
      const double r_on = 2.5, r_off = -0.5;
      const std::int64_t m = 100;
      const double th = threshold(r_on, r_off, v_on, v_off, m);
      CHECK(th > m * r_off);
      CHECK(th < m * r_on);
      // Both error terms erfc((M R_on - th) / sqrt(2 M v_on)) and
      // erfc((th - M R_off) / sqrt(2 M v_off)) reduce to erfc(sqrt(snr)).
      const double z_on = (m * r_on - th) / std::sqrt(2.0 * m * v_on);
      const double z_off = (th - m * r_off) / std::sqrt(2.0 * m * v_off);
      CHECK(z_on == doctest::Approx(z_off).epsilon(1e-12));
      CHECK(z_on * z_on == doctest::Approx(snr_value(r_on, r_off, v_on, v_off, m)).epsilon(1e-12));
    }
  }
}

TEST_CASE("error probability") {
  CHECK(p_err(0.0) == 0.5);
  CHECK(std::erfc(1.0) == doctest::Approx(0.157299207050285).epsilon(1e-13));
  for (double z : {1e-6, 0.1, 0.5, 1.0, 1.7, 2.0, 2.5, 4.0, 6.0, 9.0}) {
    CHECK(rel_diff(2.0 * p_err(z * z), oracle::erfc(z)) < 1e-12);
  }
  double last = 0.5;
  for (double snr = 0.01; snr < 600.0; snr *= 1.3) {
    const double p = p_err(snr);
    CHECK(p < last);
    CHECK(p > 0.0);
    CHECK(p <= p_err_exponential_bound(snr));
    CHECK(2.0 * p <= erfc_asymptotic_bound(std::sqrt(snr)));
    last = p;
  }
}

TEST_CASE("closed forms agree with the generic engine") {
  for (double kappa : {1e-3, 0.01, 0.05, 0.2, 0.5}) {
    for (double ns : {1e-3, 0.01, 0.3, 2.0, 10.0}) {
      for (double nb : {1.0, 30.0, 100.0}) {
        for (NoiseModel model : {NoiseModel::Constant, NoiseModel::NonConstant}) {
          const ScenarioParams p = scenario(kappa, ns, nb, model);
          CAPTURE(kappa);
          CAPTURE(ns);
          CAPTURE(nb);
          CHECK(rel_diff(snr_closed_nearly_bound(p).snr, generic(ReceiverKind::NearlyBound, Source::Tmsv, p).snr) < 1e-10);
          CHECK(rel_diff(snr_closed_pc(p).snr, generic(ReceiverKind::PC, Source::Tmsv, p).snr) < 1e-10);
          CHECK(rel_diff(snr_closed_dh(p).snr, generic(ReceiverKind::DH, Source::Tmsv, p).snr) < 1e-10);
          CHECK(rel_diff(snr_closed_opa(p, kOpaGain, OpaForm::Corrected).snr,
                         generic(ReceiverKind::OPA, Source::Tmsv, p).snr) < 1e-10);
          ScenarioParams q = p;
          q.n_i = 2.0 * ns;
          CHECK(rel_diff(snr_cct(q).snr, generic(ReceiverKind::CctOff, Source::Cct, q).snr) < 1e-10);
          CHECK(rel_diff(snr_coherent_off(q).snr, generic(ReceiverKind::CoherentOff, Source::Coherent, q).snr) < 1e-10);
          CHECK(rel_diff(snr_coherent_hd(p).snr, generic(ReceiverKind::CoherentHD, Source::Coherent, p).snr) < 1e-10);

          if (model == NoiseModel::Constant) {
            ReceiverSpec s = spec_of(ReceiverKind::BoundConstant);
            s.beta = optimal_beta_closed(p);
            CHECK(rel_diff(snr_closed_bound_constant(p).snr,
                           snr_generic(s, hypothesis_pair(Source::Tmsv, p), p.m_modes).snr) < 1e-10);
          } else {
            ReceiverSpec s = spec_of(ReceiverKind::BoundNonConstant);
            s.alpha = -0.3;
            s.beta = -4.0;
            CHECK(rel_diff(snr_closed_bound_nonconstant(p, s.alpha, s.beta).snr,
                           snr_generic(s, hypothesis_pair(Source::Tmsv, p), p.m_modes).snr) < 1e-10);
          }
        }
      }
    }
  }
}

TEST_CASE("the printed OPA cross term differs from the engine") {
  const ScenarioParams p = scenario(0.01, 1.0, 30.0, NoiseModel::Constant);
  const double engine = generic(ReceiverKind::OPA, Source::Tmsv, p).snr;
  CHECK(rel_diff(snr_closed_opa(p, kOpaGain, OpaForm::Corrected).snr, engine) < 1e-10);
  CHECK(rel_diff(snr_closed_opa(p, kOpaGain, OpaForm::AsPrinted).snr, engine) > 1e-8);
}

TEST_CASE("degenerate inputs") {
  for (ReceiverKind kind : {ReceiverKind::NearlyBound, ReceiverKind::PC, ReceiverKind::OPA, ReceiverKind::DH,
                            ReceiverKind::SeparateHTD, ReceiverKind::DoubleHTD, ReceiverKind::HdProduct}) {
    const SnrReport r = generic(kind, Source::Tmsv, scenario(0.0, 0.5, 30.0, NoiseModel::Constant));
    CHECK(r.snr == 0.0);
    CHECK(r.p_err == 0.5);
  }
  ScenarioParams q = scenario(0.01, 1.0, 30.0, NoiseModel::Constant);
  q.n_i = 0.0;
  CHECK(snr_cct(q).snr == 0.0);
  CHECK(snr_closed_bound_constant(scenario(0.01, 0.5, 30.0, NoiseModel::Constant), 0.0).snr ==
        doctest::Approx(snr_closed_nearly_bound(scenario(0.01, 0.5, 30.0, NoiseModel::Constant)).snr));
  CHECK_THROWS_AS(optimal_beta_closed(scenario(0.0, 0.5, 30.0, NoiseModel::Constant)), std::domain_error);
}

TEST_CASE("receiver/source compatibility") {
  const auto cct = hypothesis_pair(Source::Cct, scenario(0.01, 1.0, 30.0, NoiseModel::Constant));
  CHECK_THROWS_AS(snr_generic(spec_of(ReceiverKind::NearlyBound), cct, 10), std::invalid_argument);
  CHECK_NOTHROW(snr_generic(spec_of(ReceiverKind::PNDM), cct, 10));
  ReceiverSpec bad = spec_of(ReceiverKind::PC);
  bad.mu = 1.0;
  CHECK_THROWS_AS(bad.validate(), std::domain_error);
}

TEST_CASE("photon-number difference realizes O_off") {
  ScenarioParams q = scenario(0.02, 1.0, 30.0, NoiseModel::Constant);
  q.n_i = 1.0;
  for (Source src : {Source::Cct, Source::Coherent}) {
    const auto pair = hypothesis_pair(src, q);
    const double a = snr_generic(spec_of(ReceiverKind::PNDM), pair, q.m_modes).snr;
    const double b = snr_generic(spec_of(src == Source::Cct ? ReceiverKind::CctOff : ReceiverKind::CoherentOff),
                                 pair, q.m_modes).snr;
    CHECK(rel_diff(a, b) < 1e-12);
  }
}

TEST_CASE("snr is linear in M") {
  const ScenarioParams p = scenario(0.01, 0.3, 30.0, NoiseModel::Constant);
  const auto pair = hypothesis_pair(Source::Tmsv, p);
  const double one = snr_generic(spec_of(ReceiverKind::DH), pair, 1).snr;
  for (std::int64_t m : {2LL, 1000LL, 10'000'000LL}) {
    CHECK(rel_diff(snr_generic(spec_of(ReceiverKind::DH), pair, m).snr, static_cast<double>(m) * one) < 1e-14);
  }
}

TEST_CASE("snr is invariant under affine rescaling of the observable") {
  const ScenarioParams p = scenario(0.05, 0.7, 10.0, NoiseModel::NonConstant);
  const auto pair = hypothesis_pair(Source::Tmsv, p);
  for (const auto& o : {obs_bound(0.2, -3.0), obs_dh(), obs_opa(1.4)}) {
    const double base = make_report(stats(o, pair.on), stats(o, pair.off), 100).snr;
    for (auto [a, b] : {std::pair{2.0, 0.0}, std::pair{-0.3, 7.0}, std::pair{1e3, -1e2}}) {
      const QuadraticObservable t = a * o + b;
      CHECK(rel_diff(make_report(stats(t, pair.on), stats(t, pair.off), 100).snr, base) < 1e-10);
    }
  }
}

TEST_CASE("asymptotic limits") {
  ScenarioParams p = scenario(1e-3, 1e-3, 100.0, NoiseModel::Constant);
  const double ref_qi = p.m_modes * p.kappa * p.n_s / (2.0 * p.n_b);
  CHECK(snr_closed_nearly_bound(p).snr / ref_qi == doctest::Approx(1.0).epsilon(0.02));
  CHECK(snr_closed_bound_constant(p).snr / ref_qi == doctest::Approx(1.0).epsilon(0.02));
  p.n_i = 100.0;
  const double ref_ci = p.m_modes * p.kappa * p.n_s / (4.0 * p.n_b);
  CHECK(snr_cct(p).snr / ref_ci == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("CCT snr grows with the idler photon number") {
  ScenarioParams p = scenario(0.01, 0.5, 30.0, NoiseModel::Constant);
  double last = 0.0;
  for (double ni = 0.05; ni < 50.0; ni *= 1.5) {
    p.n_i = ni;
    const double s = snr_cct(p).snr;
    CHECK(s > last);
    last = s;
  }
}

TEST_CASE("optimal beta: closed form against a direct maximization") {
  for (double ns = 1e-2; ns <= 10.0; ns *= 1.6) {
    const ScenarioParams p = scenario(0.01, ns, 30.0, NoiseModel::Constant);
    const double best = testing_support::argmax_beta_ld(p.kappa, ns, p.n_b);
    CAPTURE(ns);
    CHECK(std::abs(best - optimal_beta_closed(p)) < 1e-6 * std::max(1.0, best));
    CHECK(snr_closed_bound_constant(p).snr >= snr_closed_bound_constant(p, best).snr * (1.0 - 1e-14));
  }
  const ScenarioParams big = scenario(0.01, 100.0, 30.0, NoiseModel::Constant);
  CHECK(optimal_beta_closed(big) == doctest::Approx(0.1).epsilon(0.01));
}

TEST_CASE("small-signal regime: PC tracks the bound receiver") {
  for (double ns : {1e-3, 3e-3, 9e-3}) {
    const ScenarioParams p = scenario(0.01, ns, 30.0, NoiseModel::Constant);
    CHECK(rel_diff(snr_closed_pc(p).snr, snr_closed_bound_constant(p).snr) < 0.02);
  }
}

#include "gillum/figures.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <functional>
#include <optional>
#include <thread>

#include "gillum/chernoff.hpp"
#include "gillum/snr.hpp"

namespace gillum {

std::string_view to_string(Figure figure) {
  switch (figure) {
    case Figure::Fig1: return "fig1";
    case Figure::Fig2: return "fig2";
    case Figure::Fig3: return "fig3";
    case Figure::Fig4: return "fig4";
    case Figure::Fig5a: return "fig5a";
    case Figure::Fig5b: return "fig5b";
    case Figure::S1: return "s1";
    case Figure::S2: return "s2";
    case Figure::Custom: return "custom";
  }
  return "unknown";
}

Figure parse_figure(std::string_view name) {
  for (Figure f : {Figure::Fig1, Figure::Fig2, Figure::Fig3, Figure::Fig4, Figure::Fig5a,
                   Figure::Fig5b, Figure::S1, Figure::S2, Figure::Custom}) {
    if (to_string(f) == name) return f;
  }
  throw ConfigError("unknown figure '" + std::string(name) +
                    "' (expected fig1, fig2, fig3, fig4, fig5a, fig5b, s1, s2 or custom)");
}

namespace {

// Values shared by several curves at one sweep point, computed on first use.
struct PointCache {
  ScenarioParams params;
  std::optional<double> coh_qcb;
  std::optional<AlphaBetaOptimum> optimum;
  std::optional<double> separate_htd;

  const AlphaBetaOptimum& alpha_beta() {
    if (!optimum) optimum = optimize_alpha_beta_nonconstant(params);
    return *optimum;
  }
};

using Evaluator = std::function<double(PointCache&)>;

struct CurveDef {
  std::string label;
  Evaluator eval;
};

double generic(ReceiverKind kind, Source source, const ScenarioParams& p) {
  ReceiverSpec spec;
  spec.kind = kind;
  return snr_generic(spec, hypothesis_pair(source, p), p.m_modes).snr;
}

double coh_qcb(PointCache& c) {
  if (!c.coh_qcb) {
    ScenarioParams p = c.params;
    p.n_i = 0.0;
    c.coh_qcb = p.noise_model == NoiseModel::Constant
                    ? coherent_qcb_closed(p).exponent
                    : qcb(hypothesis_pair(Source::Coherent, p), p.m_modes).exponent;
  }
  return *c.coh_qcb;
}

double bound(PointCache& c) {
  if (c.params.noise_model == NoiseModel::Constant) {
    return snr_closed_bound_constant(c.params).snr;
  }
  return c.alpha_beta().report.snr;
}

double pc(PointCache& c) { return snr_closed_pc(c.params).snr; }

double separate_htd(PointCache& c) {
  if (!c.separate_htd) c.separate_htd = generic(ReceiverKind::SeparateHTD, Source::Tmsv, c.params);
  return *c.separate_htd;
}

double cct_qcb(const ScenarioParams& p) {
  return qcb(hypothesis_pair(Source::Cct, p), p.m_modes).exponent;
}

// Catalog of curves over an N_S sweep; the sweep value is already in params.
std::vector<CurveDef> signal_catalog() {
  return {
      {"coh-qcb", coh_qcb},
      {"coh-hd", [](PointCache& c) { return snr_coherent_hd(c.params).snr; }},
      {"tmsv-qcb",
       [](PointCache& c) {
         return qcb(hypothesis_pair(Source::Tmsv, c.params), c.params.m_modes).exponent;
       }},
      {"bound", bound},
      {"nearly-bound", [](PointCache& c) { return snr_closed_nearly_bound(c.params).snr; }},
      {"pc", pc},
      {"opa",
       [](PointCache& c) { return snr_closed_opa(c.params, kOpaGain, OpaForm::Corrected).snr; }},
      {"dh", [](PointCache& c) { return snr_closed_dh(c.params).snr; }},
      {"bound-minus-coh", [](PointCache& c) { return bound(c) - coh_qcb(c); }},
      {"pc-minus-coh", [](PointCache& c) { return pc(c) - coh_qcb(c); }},
      {"double-htd",
       [](PointCache& c) { return generic(ReceiverKind::DoubleHTD, Source::Tmsv, c.params); }},
      {"separate-htd", separate_htd},
      {"hd-product",
       [](PointCache& c) { return generic(ReceiverKind::HdProduct, Source::Tmsv, c.params); }},
      {"coh-hd-minus-separate-htd",
       [](PointCache& c) { return snr_coherent_hd(c.params).snr - separate_htd(c); }},
      {"cct-off", [](PointCache& c) { return snr_cct(c.params).snr; }},
      {"cct-qcb", [](PointCache& c) { return cct_qcb(c.params); }},
      {"beta-closed",
       [](PointCache& c) {
         return c.params.kappa * c.params.n_s > 0.0 ? optimal_beta_closed(c.params) : 0.0;
       }},
      {"alpha-nc", [](PointCache& c) { return c.alpha_beta().alpha; }},
      {"beta-nc", [](PointCache& c) { return c.alpha_beta().beta; }},
  };
}

// Curves over a kappa sweep at fixed N_S, one pair per idler photon number.
std::vector<CurveDef> reflectance_catalog() {
  auto with_idler = [](double ni, auto fn) {
    return [ni, fn](PointCache& c) {
      ScenarioParams p = c.params;
      p.n_i = ni;
      return fn(p);
    };
  };
  auto off = [](const ScenarioParams& p) { return snr_cct(p).snr; };
  return {
      {"cct-qcb-ni1", with_idler(1.0, cct_qcb)},
      {"cct-off-ni1", with_idler(1.0, off)},
      {"cct-qcb-ni2", with_idler(2.0, cct_qcb)},
      {"cct-off-ni2", with_idler(2.0, off)},
      {"coh-qcb", coh_qcb},
      {"coh-hd", [](PointCache& c) { return snr_coherent_hd(c.params).snr; }},
  };
}

std::vector<CurveDef> catalog(Figure figure) {
  return figure == Figure::Fig5a ? reflectance_catalog() : signal_catalog();
}

void apply_sweep_value(Figure figure, SweepAxis axis, double x, ScenarioParams& p) {
  if (axis == SweepAxis::Reflectance) {
    p.kappa = x;
    return;
  }
  p.n_s = x;
  if (figure == Figure::Fig5b) p.n_i = x;
}

std::string axis_label(const SweepConfig& c) {
  if (c.axis == SweepAxis::Reflectance) return "kappa";
  return c.figure == Figure::Fig5b ? "N_S = N_I" : "N_S";
}

std::string y_label(Figure figure) {
  switch (figure) {
    case Figure::Fig2: return "SNR difference";
    case Figure::S1: return "optimal |beta|";
    case Figure::S2: return "optimal alpha, beta";
    default: return "SNR";
  }
}

}  // namespace

std::vector<std::string> available_curves(Figure figure) {
  std::vector<std::string> out;
  for (const auto& d : catalog(figure)) out.push_back(d.label);
  return out;
}

std::vector<std::string> default_curves(Figure figure) {
  switch (figure) {
    case Figure::Fig1:
    case Figure::Fig3: return {"coh-qcb", "bound", "nearly-bound", "pc", "opa", "dh"};
    case Figure::Fig2: return {"bound-minus-coh", "pc-minus-coh"};
    case Figure::Fig4:
      return {"coh-hd",       "bound",      "double-htd",
              "separate-htd", "hd-product", "coh-hd-minus-separate-htd"};
    case Figure::Fig5a: return {"cct-qcb-ni1", "cct-off-ni1", "cct-qcb-ni2", "cct-off-ni2"};
    case Figure::Fig5b: return {"cct-qcb", "cct-off", "coh-qcb"};
    case Figure::S1: return {"beta-closed"};
    case Figure::S2: return {"alpha-nc", "beta-nc"};
    case Figure::Custom: return {};
  }
  return {};
}

SweepConfig preset(Figure figure) {
  SweepConfig c;
  c.figure = figure;
  c.params.kappa = 0.01;
  c.params.n_b = 30.0;
  c.params.m_modes = 10'000'000;
  c.params.noise_model = NoiseModel::Constant;
  switch (figure) {
    case Figure::Fig3:
    case Figure::S2: c.params.noise_model = NoiseModel::NonConstant; break;
    case Figure::Fig5a:
      c.axis = SweepAxis::Reflectance;
      c.x_min = 1e-3;
      c.x_max = 0.1;
      c.params.n_s = 1.0;
      break;
    default: break;
  }
  return c;
}

void SweepConfig::validate() const {
  try {
    params.validate();
  } catch (const std::domain_error& e) {
    throw ConfigError(e.what());
  }
  if (!std::isfinite(x_min) || !std::isfinite(x_max) || !(x_min < x_max)) {
    throw ConfigError("sweep range must satisfy min < max");
  }
  if (log_spaced && !(x_min > 0.0)) throw ConfigError("log-spaced sweep needs a positive range");
  if (x_min < 0.0) throw ConfigError("sweep range must be nonnegative");
  if (points < 2) throw ConfigError("--points must be at least 2");
  if (axis == SweepAxis::Reflectance) {
    if (x_max > 1.0) throw ConfigError("reflectance sweep must stay within [0, 1]");
    if (params.noise_model == NoiseModel::Constant && x_max >= 1.0) {
      throw ConfigError("constant noise model is undefined at kappa = 1");
    }
  }
  if (threads < 0) throw ConfigError("thread count must be nonnegative");
  if (figure == Figure::S2 && params.noise_model != NoiseModel::NonConstant) {
    throw ConfigError("s2 optimizes the nonconstant-noise observable; use --noise nonconstant");
  }
  if (figure == Figure::Custom && receivers.empty()) {
    throw ConfigError("custom sweeps need --receivers");
  }
  const auto names = available_curves(figure);
  for (const auto& r : receivers) {
    if (std::find(names.begin(), names.end(), r) == names.end()) {
      std::string list;
      for (const auto& n : names) list += (list.empty() ? "" : ", ") + n;
      throw ConfigError("unknown curve '" + r + "' for " + std::string(to_string(figure)) +
                        " (available: " + list + ")");
    }
  }
  for (std::size_t i = 0; i < receivers.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      if (receivers[i] == receivers[j]) throw ConfigError("curve '" + receivers[i] + "' repeated");
    }
  }
}

std::vector<double> sweep_grid(const SweepConfig& config) {
  std::vector<double> xs(config.points);
  const int last = config.points - 1;
  for (int i = 0; i <= last; ++i) {
    const double f = static_cast<double>(i) / last;
    xs[i] = config.log_spaced
                ? std::exp(std::log(config.x_min) + f * (std::log(config.x_max) - std::log(config.x_min)))
                : config.x_min + f * (config.x_max - config.x_min);
  }
  xs.front() = config.x_min;
  xs.back() = config.x_max;
  return xs;
}

int resolve_threads(int requested) {
  int hw = static_cast<int>(std::thread::hardware_concurrency());
  if (hw < 1) hw = 1;
  int n = requested > 0 ? requested : hw;
  if (const char* env = std::getenv("GILLUM_THREADS"); env != nullptr && *env != '\0') {
    int cap = 0;
    const std::string_view sv(env);
    const auto [ptr, ec] = std::from_chars(sv.data(), sv.data() + sv.size(), cap);
    if (ec != std::errc() || ptr != sv.data() + sv.size() || cap < 1) {
      throw ConfigError("GILLUM_THREADS must be a positive integer, got '" + std::string(sv) + "'");
    }
    n = std::min(n, cap);
  }
  return std::max(n, 1);
}

CurveSet run_figure(const SweepConfig& config) {
  config.validate();
  const std::vector<std::string> labels =
      config.receivers.empty() ? default_curves(config.figure) : config.receivers;
  std::vector<CurveDef> all = catalog(config.figure);
  std::vector<const CurveDef*> selected;
  for (const auto& l : labels) {
    selected.push_back(&*std::find_if(all.begin(), all.end(),
                                      [&](const CurveDef& d) { return d.label == l; }));
  }

  const std::vector<double> xs = sweep_grid(config);
  const std::size_t n_points = xs.size();
  const std::size_t n_curves = selected.size();
  std::vector<double> values(n_points * n_curves);
  std::vector<std::exception_ptr> errors(n_points);

  auto evaluate = [&](std::size_t i) {
    try {
      PointCache cache;
      cache.params = config.params;
      apply_sweep_value(config.figure, config.axis, xs[i], cache.params);
      for (std::size_t k = 0; k < n_curves; ++k) {
        const double y = selected[k]->eval(cache);
        if (!std::isfinite(y)) {
          throw NumericalError("curve '" + selected[k]->label + "' is not finite");
        }
        values[i * n_curves + k] = y;
      }
    } catch (...) {
      errors[i] = std::current_exception();
    }
  };

  const int n_threads =
      std::min<int>(resolve_threads(config.threads), static_cast<int>(n_points));
  if (n_threads <= 1) {
    for (std::size_t i = 0; i < n_points; ++i) evaluate(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    pool.reserve(n_threads);
    for (int t = 0; t < n_threads; ++t) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < n_points; i = next++) evaluate(i);
      });
    }
  }

  for (std::size_t i = 0; i < n_points; ++i) {
    if (!errors[i]) continue;
    try {
      std::rethrow_exception(errors[i]);
    } catch (const std::exception& e) {
      char x[32];
      std::snprintf(x, sizeof x, "%.6g", xs[i]);
      throw NumericalError(std::string("sweep point x = ") + x + ": " + e.what());
    }
  }

  CurveSet out;
  out.x_label = axis_label(config);
  out.y_label = y_label(config.figure);
  for (std::size_t k = 0; k < n_curves; ++k) {
    Curve c;
    c.label = selected[k]->label;
    c.points.reserve(n_points);
    for (std::size_t i = 0; i < n_points; ++i) c.points.emplace_back(xs[i], values[i * n_curves + k]);
    out.curves.push_back(std::move(c));
  }
  return out;
}

}  // namespace gillum

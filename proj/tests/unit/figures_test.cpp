#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <regex>
#include <string>

#include "doctest.h"
#include "gillum/emit.hpp"
#include "gillum/figures.hpp"
#include "test_support.hpp"

using namespace gillum;

namespace {

const Figure kPresets[] = {Figure::Fig1, Figure::Fig2, Figure::Fig3, Figure::Fig4,
                           Figure::Fig5a, Figure::Fig5b, Figure::S1, Figure::S2};

std::size_t count(const std::string& text, const std::string& needle) {
  std::size_t n = 0;
  for (auto pos = text.find(needle); pos != std::string::npos; pos = text.find(needle, pos + 1)) ++n;
  return n;
}

struct ScopedEnv {
  explicit ScopedEnv(const char* value) {
    if (const char* old = std::getenv("GILLUM_THREADS")) saved = old;
    ::setenv("GILLUM_THREADS", value, 1);
  }
  ~ScopedEnv() {
    if (saved.empty()) {
      ::unsetenv("GILLUM_THREADS");
    } else {
      ::setenv("GILLUM_THREADS", saved.c_str(), 1);
    }
  }
  std::string saved;
};

}  // namespace

TEST_CASE("figure names") {
  for (Figure f : kPresets) CHECK(parse_figure(to_string(f)) == f);
  CHECK(parse_figure("custom") == Figure::Custom);
  CHECK_THROWS_AS(parse_figure("fig6"), ConfigError);
  CHECK(parse_format("svg") == OutputFormat::Svg);
  CHECK_THROWS_AS(parse_format("png"), ConfigError);
}

TEST_CASE("sweep grid") {
  SweepConfig c = preset(Figure::Fig1);
  const auto xs = sweep_grid(c);
  REQUIRE(xs.size() == 200);
  CHECK(xs.front() == c.x_min);
  CHECK(xs.back() == c.x_max);
  CHECK(xs[1] / xs[0] == doctest::Approx(xs[100] / xs[99]).epsilon(1e-12));
  c.log_spaced = false;
  const auto lin = sweep_grid(c);
  CHECK(lin[1] - lin[0] == doctest::Approx(lin[150] - lin[149]).epsilon(1e-10));
}

TEST_CASE("config validation") {
  auto rejects = [](SweepConfig c) { CHECK_THROWS_AS(c.validate(), ConfigError); };
  SweepConfig c = preset(Figure::Fig1);
  CHECK_NOTHROW(c.validate());
  { auto d = c; d.points = 1; rejects(d); }
  { auto d = c; d.x_min = 5.0; d.x_max = 1.0; rejects(d); }
  { auto d = c; d.x_min = 0.0; rejects(d); }
  { auto d = c; d.receivers = {"no-such-curve"}; rejects(d); }
  { auto d = c; d.receivers = {"pc", "pc"}; rejects(d); }
  { auto d = c; d.params.n_b = -1.0; rejects(d); }
  {
    auto d = preset(Figure::S2);
    d.params.noise_model = NoiseModel::Constant;
    rejects(d);
  }
  { auto d = preset(Figure::Custom); rejects(d); }
  { auto d = preset(Figure::Fig5a); d.x_max = 1.5; rejects(d); }
  { auto d = preset(Figure::Fig5a); d.x_max = 1.0; rejects(d); }

  try {
    auto d = c;
    d.receivers = {"bogus"};
    d.validate();
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("nearly-bound") != std::string::npos);
  }
}

TEST_CASE("preset defaults") {
  for (Figure f : kPresets) {
    const SweepConfig c = preset(f);
    CHECK(c.points == 200);
    CHECK(c.params.m_modes == 10'000'000);
    CHECK(c.params.n_b == 30.0);
    CHECK_FALSE(default_curves(f).empty());
  }
  CHECK(preset(Figure::Fig3).params.noise_model == NoiseModel::NonConstant);
  CHECK(preset(Figure::Fig5a).axis == SweepAxis::Reflectance);
}

TEST_CASE("thread cap") {
  {
    ScopedEnv env("2");
    CHECK(resolve_threads(0) <= 2);
    CHECK(resolve_threads(8) == 2);
    CHECK(resolve_threads(1) == 1);
  }
  {
    ScopedEnv env("zero");
    CHECK_THROWS_AS(resolve_threads(0), ConfigError);
  }
}

TEST_CASE("emit validation") {
  const auto path = std::filesystem::temp_directory_path() / "gillum_emit_empty.csv";
  std::filesystem::remove(path);
  CHECK_THROWS_AS(emit(CurveSet{"x", "y", {}}, OutputFormat::Csv, path), ConfigError);
  CHECK_FALSE(std::filesystem::exists(path));

  CurveSet bad{"x", "y", {{"a", {{1.0, 2.0}, {1.0, 3.0}}}}};
  CHECK_THROWS_AS(to_json(bad), ConfigError);
  bad.curves[0].points = {{1.0, std::nan("")}};
  CHECK_THROWS_AS(to_svg(bad), ConfigError);

  const CurveSet ok{"x", "y", {{"a", {{1.0, 2.0}, {2.0, 3.0}}}}};
  CHECK_THROWS(emit(ok, OutputFormat::Csv, "/nonexistent-dir/out.csv"));
}

TEST_CASE("svg structure") {
  const CurveSet cs{"N_S", "SNR", {{"a", {{0.1, 2.0}, {1.0, 3.0}}}, {"b<&>", {{0.1, 1.0}, {1.0, 5.0}}}}};
  const std::string svg = to_svg(cs);
  CHECK(svg.find("width=\"800\" height=\"600\"") != std::string::npos);
  CHECK(count(svg, "<polyline") == 2);
  const std::regex pts("points=\"([^\"]*)\"");
  for (auto it = std::sregex_iterator(svg.begin(), svg.end(), pts); it != std::sregex_iterator(); ++it) {
    const std::string p = (*it)[1];
    CHECK(count(p, ",") == 2);
    CHECK(count(p, " ") == 1);
  }
  CHECK(svg.find("b&lt;&amp;&gt;") != std::string::npos);
  CHECK(count(svg, "http") == 1);
}

TEST_CASE("json mirrors the curve set") {
  const CurveSet cs{"N_S", "SNR", {{"a", {{0.1, 2.0}, {1.0, 3.0}}}}};
  const std::string j = to_json(cs);
  CHECK(j.find("\"x_label\": \"N_S\"") != std::string::npos);
  CHECK(j.find("\"label\": \"a\"") != std::string::npos);
}

TEST_CASE("CSV round trip") {
  SweepConfig c = preset(Figure::Fig1);
  c.points = 40;
  const CurveSet cs = run_figure(c);
  const std::string csv = to_csv(cs);
  CHECK(csv.rfind("x,coh-qcb,bound,nearly-bound,pc,opa,dh\n", 0) == 0);
  const CurveSet back = parse_csv(csv);
  REQUIRE(back.curves.size() == cs.curves.size());
  for (std::size_t k = 0; k < cs.curves.size(); ++k) {
    CHECK(back.curves[k].label == cs.curves[k].label);
    REQUIRE(back.curves[k].points.size() == cs.curves[k].points.size());
    for (std::size_t i = 0; i < cs.curves[k].points.size(); ++i) {
      CHECK(testing_support::rel_diff(back.curves[k].points[i].first, cs.curves[k].points[i].first) < 1e-10);
      CHECK(testing_support::rel_diff(back.curves[k].points[i].second, cs.curves[k].points[i].second) < 1e-10);
    }
  }
  CHECK(to_csv(back) == csv);
}

TEST_CASE("output does not depend on the thread count") {
  for (Figure f : {Figure::Fig1, Figure::Fig4, Figure::Fig5a, Figure::S2}) {
    SweepConfig c = preset(f);
    c.points = 24;
    c.threads = 1;
    const std::string one = to_csv(run_figure(c));
    c.threads = 4;
    CHECK(to_csv(run_figure(c)) == one);
    CHECK(to_svg(run_figure(c)) == to_svg(run_figure(c)));
  }
}

TEST_CASE("receiver selection keeps the requested order") {
  SweepConfig c = preset(Figure::Fig1);
  c.points = 5;
  c.receivers = {"dh", "coh-hd"};
  const CurveSet cs = run_figure(c);
  REQUIRE(cs.curves.size() == 2);
  CHECK(cs.curves[0].label == "dh");
  CHECK(cs.curves[1].label == "coh-hd");
}

TEST_CASE("every preset finishes within ten seconds on one thread") {
  for (Figure f : kPresets) {
    SweepConfig c = preset(f);
    c.threads = 1;
    const auto t0 = std::chrono::steady_clock::now();
    const CurveSet cs = run_figure(c);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    CAPTURE(to_string(f));
    CAPTURE(secs);
    CHECK(secs < 10.0);
    CHECK_NOTHROW(validate_curves(cs));
  }
}

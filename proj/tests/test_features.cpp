#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "cogload/error.hpp"
#include "cogload/features.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"

using namespace cogload;

namespace {

double get(const std::vector<Feature>& fs, const std::string& name) {
  for (const auto& f : fs) {
    if (f.name == name) return f.value;
  }
  FAIL("missing feature " << name);
  return 0.0;
}

std::vector<Feature> all_features(const SensorSeries& s) {
  auto out = stat_features(s);
  for (auto& f : dynamic_features(s)) out.push_back(f);
  return out;
}

SensorSeries transformed(const SensorSeries& s, double scale, double shift) {
  SensorSeries out = s;
  for (auto& x : out.samples) x.value = scale * x.value + shift;
  return out;
}

SensorSeries reversed(const SensorSeries& s) {
  SensorSeries out = s;
  const double end = s.samples.back().t;
  const double start = s.samples.front().t;
  std::reverse(out.samples.begin(), out.samples.end());
  for (auto& x : out.samples) x.t = start + (end - x.t);
  return out;
}

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::Empty;
}

}  // namespace

TEST_CASE("stat features of [3, 4, 5]") {
  const auto s = fixture::uniform_series(Modality::eda, 4.0, {3.0, 4.0, 5.0});
  const auto f = stat_features(s);
  CHECK(get(f, "AvgE") == doctest::Approx(4.0));
  CHECK(get(f, "SDGE") == doctest::Approx(1.0));
  CHECK(get(f, "MaxE") == 5.0);
  CHECK(get(f, "MinE") == 3.0);
  CHECK(get(f, "RngE") == 2.0);
  const auto p = stat_features(fixture::uniform_series(Modality::pupil, 200.0, {3.0, 4.0, 5.0}));
  CHECK(p.size() == 3);
}

TEST_CASE("dynamic features of [1, 3, 2, 4] sampled at 1 Hz") {
  const auto s = fixture::uniform_series(Modality::hr, 1.0, {1.0, 3.0, 2.0, 4.0});
  const auto f = dynamic_features(s);
  CHECK(get(f, "AvgHV") == doctest::Approx(5.0 / 3.0));
  CHECK(get(f, "MaxHV") == doctest::Approx(2.0));
  CHECK(get(f, "MaxHC") == doctest::Approx(2.0));
  CHECK(get(f, "HCF") == doctest::Approx(2.0 / 3.0));
}

TEST_CASE("ramp and constant") {
  std::vector<double> ramp(100);
  for (std::size_t i = 0; i < ramp.size(); ++i) ramp[i] = 0.5 * static_cast<double>(i);
  const auto r = dynamic_features(fixture::uniform_series(Modality::eda, 4.0, ramp));
  CHECK(get(r, "ECF") == 0.0);
  CHECK(get(r, "MaxEC") == doctest::Approx(49.5));
  CHECK(get(r, "AvgEV") == doctest::Approx(2.0));
  CHECK(get(r, "MaxEV") == doctest::Approx(2.0));

  const auto c = all_features(fixture::uniform_series(Modality::hr, 0.1, std::vector<double>(9, 72.0)));
  CHECK(get(c, "AvgH") == 72.0);
  CHECK(get(c, "SDH") == 0.0);
  CHECK(get(c, "RngH") == 0.0);
  CHECK(get(c, "AvgHV") == 0.0);
  CHECK(get(c, "MaxHV") == 0.0);
  CHECK(get(c, "MaxHC") == 0.0);
  CHECK(get(c, "HCF") == 0.0);
}

TEST_CASE("plateaus do not break monotone runs") {
  const std::vector<double> x{1.0, 2.0, 2.0, 3.0, 1.0, 1.0, 0.0, 4.0};
  const auto runs = decompose_runs(x);
  REQUIRE(runs.size() == 3);
  CHECK(runs[0].start == 0);
  CHECK(runs[0].end == 4 - 1);
  CHECK(runs[0].direction == 1);
  CHECK(runs[1].direction == -1);
  CHECK(runs[1].end == 6);
  CHECK(runs[2].direction == 1);
  const auto f = dynamic_features(fixture::uniform_series(Modality::eda, 1.0, x));
  CHECK(get(f, "MaxEC") == doctest::Approx(4.0));
  CHECK(get(f, "ECF") == doctest::Approx(2.0 / 7.0));
}

TEST_CASE("stream features agree with the reference on random streams") {
  Rng rng(2024);
  for (Modality m : {Modality::pupil, Modality::eda, Modality::hr}) {
    for (int rep = 0; rep < 5; ++rep) {
      auto s = fixture::random_stream(m, 4.0, 1000, rng);
      // irregular timestamps exercise the per-step speed
      for (auto& x : s.samples) x.t += rng.uniform(0.0, 0.1);
      std::vector<double> t, x;
      for (const auto& p : s.samples) {
        t.push_back(p.t);
        x.push_back(p.value);
      }
      const auto ref = oracle::stream_features(t, x, m);
      const auto got = all_features(s);
      REQUIRE(got.size() == ref.size());
      for (const auto& f : got) {
        INFO(f.name);
        CHECK(f.group == m);
        CHECK(f.value == doctest::Approx(ref.at(f.name)).epsilon(1e-9));
      }
    }
  }
}

TEST_CASE("segment feature vectors agree with the reference") {
  Rng rng(99);
  for (double w : {30.0, 60.0, 120.0}) {
    const auto seg = fixture::random_segment(w, rng);
    for (Schema schema : {Schema::unimodal, Schema::multimodal}) {
      for (bool with_ipa : {false, true}) {
        const auto fv = build_feature_vector(seg, schema, with_ipa);
        const auto ref = oracle::segment_features(seg, schema, with_ipa);
        CHECK(fv.names() == feature_names(schema, with_ipa));
        REQUIRE(fv.size() == ref.size());
        for (const auto& f : fv.features) {
          INFO(f.name);
          CHECK(f.value == doctest::Approx(ref.at(f.name)).epsilon(1e-9));
        }
        CHECK(fv.segment_id == "R#0");
      }
    }
  }
}

TEST_CASE("feature name lists") {
  CHECK(feature_names(Schema::multimodal, true).size() == 26);
  CHECK(feature_names(Schema::multimodal, false).size() == 25);
  CHECK(feature_names(Schema::unimodal, true).size() == 8);
  CHECK(feature_names(Schema::unimodal, false).size() == 7);
  CHECK(feature_names(Schema::unimodal, false) ==
        std::vector<std::string>{"AvgPD", "MaxPD", "MinPD", "AvgPV", "MaxPV", "MaxPC", "PCF"});
  const auto names = feature_names(Schema::multimodal, true);
  const auto groups = feature_groups(Schema::multimodal, true);
  REQUIRE(names.size() == groups.size());
  for (std::size_t i = 0; i < 8; ++i) CHECK(groups[i] == Modality::pupil);
  CHECK(std::count(groups.begin(), groups.end(), Modality::eda) == 9);
  CHECK(std::count(groups.begin(), groups.end(), Modality::hr) == 9);
  auto sorted = names;
  std::sort(sorted.begin(), sorted.end());
  CHECK(std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end());
}

TEST_CASE("IPA") {
  SUBCASE("constant signal has none") {
    CHECK(ipa(fixture::uniform_series(Modality::pupil, 200.0, std::vector<double>(400, 3.0))) == 0.0);
  }
  SUBCASE("square wave with a 5-sample half period beats a ramp") {
    std::vector<double> sq(400), ramp(400);
    for (std::size_t i = 0; i < sq.size(); ++i) {
      sq[i] = (i / 5) % 2 ? 3.2 : 3.0;
      ramp[i] = 3.0 + 0.001 * static_cast<double>(i);
    }
    const auto s = fixture::uniform_series(Modality::pupil, 200.0, sq);
    const auto r = fixture::uniform_series(Modality::pupil, 200.0, ramp);
    CHECK(ipa(s) > ipa(r));
    CHECK(ipa(r) == 0.0);
    std::vector<double> t;
    for (const auto& p : s.samples) t.push_back(p.t);
    CHECK(ipa(s) == doctest::Approx(oracle::ipa(t, sq)));
  }
  SUBCASE("random signals match the reference and are scale and shift invariant") {
    Rng rng(7);
    for (int rep = 0; rep < 10; ++rep) {
      const auto s = fixture::random_stream(Modality::pupil, 200.0, 33 + rep * 97, rng);
      std::vector<double> t, x;
      for (const auto& p : s.samples) {
        t.push_back(p.t);
        x.push_back(p.value);
      }
      CHECK(ipa(s) == doctest::Approx(oracle::ipa(t, x)));
      CHECK(ipa(transformed(s, 2.5, 0.0)) == doctest::Approx(ipa(s)));
      CHECK(ipa(transformed(s, 1.0, -1.7)) == doctest::Approx(ipa(s)));
    }
  }
  SUBCASE("input requirements") {
    CHECK(code_of([] { ipa(fixture::uniform_series(Modality::pupil, 200.0, std::vector<double>(31, 3.0))); }) ==
          ErrorCode::TooFewSamples);
    auto s = fixture::uniform_series(Modality::pupil, 200.0, std::vector<double>(64, 3.0));
    s.samples[10].t += 0.002;
    CHECK(code_of([&] { ipa(s); }) == ErrorCode::NonUniformSampling);
  }
  SUBCASE("gaps split the window into runs") {
    Rng rng(8);
    auto a = fixture::random_stream(Modality::pupil, 200.0, 400, rng, 0.0);
    auto b = fixture::random_stream(Modality::pupil, 200.0, 300, rng, 5.0);
    auto joined = a;
    joined.samples.insert(joined.samples.end(), b.samples.begin(), b.samples.end());
    std::vector<double> ta, xa, tb, xb;
    for (const auto& p : a.samples) {
      ta.push_back(p.t);
      xa.push_back(p.value);
    }
    for (const auto& p : b.samples) {
      tb.push_back(p.t);
      xb.push_back(p.value);
    }
    const double ea = oracle::ipa(ta, xa) * (ta.back() - ta.front());
    const double eb = oracle::ipa(tb, xb) * (tb.back() - tb.front());
    const double expected = (ea + eb) / ((ta.back() - ta.front()) + (tb.back() - tb.front()));
    CHECK(ipa_across_gaps(joined) == doctest::Approx(expected));
    CHECK(ipa_across_gaps(a) == doctest::Approx(ipa(a)));
  }
}

TEST_CASE("shifting a stream moves only the level features") {
  Rng rng(31);
  for (Modality m : {Modality::pupil, Modality::eda, Modality::hr}) {
    const auto s = fixture::random_stream(m, 4.0, 300, rng);
    const auto base = all_features(s);
    const auto moved = all_features(transformed(s, 1.0, 12.5));
    for (std::size_t i = 0; i < base.size(); ++i) {
      INFO(base[i].name);
      const auto& n = base[i].name;
      const bool level = n.rfind("Avg", 0) == 0 && n.back() != 'V';
      const bool extreme = (n.rfind("Max", 0) == 0 || n.rfind("Min", 0) == 0) && n.back() != 'V' && n.back() != 'C';
      const double expected = (level || extreme) ? base[i].value + 12.5 : base[i].value;
      CHECK(moved[i].value == doctest::Approx(expected).epsilon(1e-9));
    }
  }
}

TEST_CASE("reversing time leaves the features unchanged") {
  Rng rng(32);
  for (Modality m : {Modality::pupil, Modality::eda, Modality::hr}) {
    const auto s = fixture::random_stream(m, 4.0, 300, rng);
    const auto a = all_features(s);
    const auto b = all_features(reversed(s));
    for (std::size_t i = 0; i < a.size(); ++i) {
      INFO(a[i].name);
      CHECK(b[i].value == doctest::Approx(a[i].value).epsilon(1e-9));
    }
  }
}

TEST_CASE("feature errors") {
  CHECK(code_of([] { stat_features(fixture::uniform_series(Modality::eda, 4.0, {1.0})); }) ==
        ErrorCode::TooFewSamples);
  CHECK(code_of([] { dynamic_features(fixture::uniform_series(Modality::eda, 4.0, {1.0, 2.0})); }) ==
        ErrorCode::TooFewSamples);
  CHECK(code_of([] { dynamic_features(fixture::series(Modality::eda, {0.0, 1.0, 1.0}, {1.0, 2.0, 3.0})); }) ==
        ErrorCode::NonMonotonicTime);
  FeatureVector fv;
  fv.features.push_back({"AvgPD", Modality::pupil, 3.0});
  CHECK(fv.at("AvgPD") == 3.0);
  CHECK(code_of([&] { fv.at("AvgE"); }) == ErrorCode::SchemaMismatch);
}

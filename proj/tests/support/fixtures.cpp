#include "fixtures.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace fixture {

using namespace cogload;

SensorSeries series(Modality m, const std::vector<double>& t, const std::vector<double>& x) {
  SensorSeries s = make_series(m);
  for (std::size_t i = 0; i < t.size(); ++i) s.samples.push_back({t[i], x[i], 1.0, true});
  return s;
}

SensorSeries uniform_series(Modality m, double rate, const std::vector<double>& x, double t0) {
  std::vector<double> t(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) t[i] = t0 + static_cast<double>(i) / rate;
  SensorSeries s = series(m, t, x);
  s.nominal_rate = rate;
  return s;
}

SensorSeries random_stream(Modality m, double rate, std::size_t n, Rng& rng, double t0) {
  std::vector<double> x(n);
  double v = rng.uniform(1.0, 10.0);
  for (auto& xi : x) {
    const double u = rng.uniform();
    if (u < 0.1) {
      // plateau: repeat the previous value
    } else if (u < 0.2) {
      v = std::round(v);  // rounded values create exact ties
    } else {
      v += rng.normal(0.0, 0.3);
    }
    xi = v;
  }
  return uniform_series(m, rate, x, t0);
}

Segment random_segment(double window_s, Rng& rng) {
  Segment seg;
  seg.participant_id = "R";
  seg.window_s = window_s;
  const double start = 1000.0;
  seg.pupil = random_stream(Modality::pupil, kPupilRateHz, static_cast<std::size_t>(window_s * kPupilRateHz), rng,
                            start - window_s);
  seg.eda = random_stream(Modality::eda, kEdaRateHz, static_cast<std::size_t>(window_s * kEdaRateHz), rng,
                          start - window_s);
  seg.hr = random_stream(Modality::hr, kHrRateHz, static_cast<std::size_t>(window_s * kHrRateHz), rng,
                         start - window_s);
  return seg;
}

std::filesystem::path temp_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("cogload-test-" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

Blobs blobs(std::size_t per_class, std::size_t p, double separation, Rng& rng) {
  Blobs b;
  b.X = Matrix(0, p);
  for (std::size_t c = 0; c < 3; ++c) {
    for (std::size_t i = 0; i < per_class; ++i) {
      std::vector<double> row(p);
      for (std::size_t f = 0; f < p; ++f) {
        const double centre = (f % 3 == c) ? separation : 0.0;
        row[f] = centre + rng.normal();
      }
      b.X.append_row(row);
      b.y.push_back(static_cast<Level>(c));
    }
  }
  return b;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace fixture

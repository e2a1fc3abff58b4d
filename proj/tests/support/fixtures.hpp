#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "cogload/matrix.hpp"
#include "cogload/random.hpp"
#include "cogload/sensor.hpp"

namespace fixture {

cogload::SensorSeries series(cogload::Modality m, const std::vector<double>& t, const std::vector<double>& x);
cogload::SensorSeries uniform_series(cogload::Modality m, double rate, const std::vector<double>& x, double t0 = 0.0);

// Random-walk stream with ties and occasional plateaus; n samples at `rate`.
cogload::SensorSeries random_stream(cogload::Modality m, double rate, std::size_t n, cogload::Rng& rng,
                                    double t0 = 0.0);

// Random segment with uniform sampling on every stream.
cogload::Segment random_segment(double window_s, cogload::Rng& rng);

// Fresh empty directory under the system temp dir.
std::filesystem::path temp_dir(const std::string& name);

// Three well separated Gaussian blobs in `p` dimensions, `per_class` rows each.
struct Blobs {
  cogload::Matrix X;
  std::vector<cogload::Level> y;
};
Blobs blobs(std::size_t per_class, std::size_t p, double separation, cogload::Rng& rng);

std::string read_file(const std::filesystem::path& path);

}  // namespace fixture

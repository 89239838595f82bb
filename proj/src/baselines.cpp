#include "sbgp/baselines.hpp"

#include <algorithm>
#include <bit>

namespace sbgp {
namespace {

std::uint32_t rotate_left(std::uint32_t code, int neighbors) {
  const std::uint32_t mask = neighbors == 32 ? ~0U : ((1U << neighbors) - 1U);
  return ((code << 1U) | (code >> (neighbors - 1))) & mask;
}

}  // namespace

bool LbpMapping::is_uniform(std::uint32_t code, int neighbors) {
  return std::popcount(code ^ rotate_left(code, neighbors)) <= 2;
}

LbpMapping::LbpMapping(int neighbors, LbpVariant variant)
    : neighbors_(neighbors), variant_(variant), label_count_(0) {
  if (neighbors < 2 || neighbors > 32) {
    throw InputError("LBP mapping needs 2 <= P <= 32, got " + std::to_string(neighbors));
  }
  // Uniform codes: all-zeros, all-ones, and every run of n ones (1 <= n < P)
  // at each of the P rotations.
  const std::uint32_t mask = neighbors == 32 ? ~0U : ((1U << neighbors) - 1U);
  uniform_codes_.push_back(0);
  uniform_codes_.push_back(mask);
  for (int ones = 1; ones < neighbors; ++ones) {
    std::uint32_t run = (1U << ones) - 1U;
    for (int shift = 0; shift < neighbors; ++shift) {
      uniform_codes_.push_back(run);
      run = rotate_left(run, neighbors);
    }
  }
  std::sort(uniform_codes_.begin(), uniform_codes_.end());
  uniform_codes_.erase(std::unique(uniform_codes_.begin(), uniform_codes_.end()),
                       uniform_codes_.end());

  label_count_ = variant == LbpVariant::kUniform ? static_cast<int>(uniform_codes_.size()) + 1
                                                 : neighbors + 2;
  if (neighbors <= 16) {
    table_.resize(std::size_t{1} << neighbors);
    for (std::uint32_t code = 0; code < table_.size(); ++code) table_[code] = map_code(code);
  }
}

std::int32_t LbpMapping::map_code(std::uint32_t code) const {
  const auto it = std::lower_bound(uniform_codes_.begin(), uniform_codes_.end(), code);
  const bool uniform = it != uniform_codes_.end() && *it == code;
  if (variant_ == LbpVariant::kUniform) {
    return uniform ? static_cast<std::int32_t>(it - uniform_codes_.begin())
                   : static_cast<std::int32_t>(uniform_codes_.size());
  }
  return uniform ? std::popcount(code) : neighbors_ + 1;
}

std::vector<CircularSample> circular_samples(int neighbors, double radius) {
  constexpr double kSnap = 1e-9;
  std::vector<CircularSample> samples;
  samples.reserve(static_cast<std::size_t>(neighbors));
  for (int p = 0; p < neighbors; ++p) {
    const double angle = 2.0 * std::numbers::pi * p / neighbors;
    double x = radius * std::cos(angle);
    double y = -radius * std::sin(angle);
    if (std::abs(x - std::round(x)) < kSnap) x = std::round(x);
    if (std::abs(y - std::round(y)) < kSnap) y = std::round(y);
    const double x0 = std::floor(x);
    const double y0 = std::floor(y);
    CircularSample s{};
    s.row0 = static_cast<int>(y0);
    s.col0 = static_cast<int>(x0);
    s.fx = x - x0;
    s.fy = y - y0;
    // an exact grid coordinate never reads past the radius
    s.row1 = s.fy == 0.0 ? s.row0 : s.row0 + 1;
    s.col1 = s.fx == 0.0 ? s.col0 : s.col0 + 1;
    samples.push_back(s);
  }
  return samples;
}

}  // namespace sbgp

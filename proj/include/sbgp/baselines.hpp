#ifndef SBGP_BASELINES_HPP
#define SBGP_BASELINES_HPP

#include "sbgp/core.hpp"
#include "sbgp/gradient.hpp"

#include <cmath>
#include <cstdint>
#include <numbers>
#include <string>
#include <vector>

namespace sbgp {

enum class LbpVariant { kUniform, kRotationInvariantUniform };

// Maps raw P-bit LBP codes to u2 or riu2 labels.
//
// u2: uniform codes (at most two circular 0/1 transitions) get labels
// 0..P(P-1)+1 in ascending code order; every non-uniform code shares the last
// label, P(P-1)+2 labels in total.
// riu2: a uniform code is labelled by its popcount (0..P); non-uniform codes
// get P+1, P+2 labels in total.
class LbpMapping {
 public:
  LbpMapping(int neighbors, LbpVariant variant);

  int neighbors() const { return neighbors_; }
  LbpVariant variant() const { return variant_; }
  int label_count() const { return label_count_; }

  std::int32_t operator()(std::uint32_t code) const {
    return table_.empty() ? map_code(code) : table_[code];
  }

  static bool is_uniform(std::uint32_t code, int neighbors);

 private:
  std::int32_t map_code(std::uint32_t code) const;

  int neighbors_;
  LbpVariant variant_;
  int label_count_;
  std::vector<std::uint32_t> uniform_codes_;  // sorted
  std::vector<std::int32_t> table_;           // filled for P <= 16
};

// Bilinear sample of a circular neighbour: the value is
//   top + fx (top_right - top) blended with the bottom pair by fy,
// which reproduces a constant neighbourhood exactly.
struct CircularSample {
  int row0;
  int col0;
  int row1;
  int col1;
  double fx;
  double fy;
};

/// Sample point p at angle 2 pi p / P: column offset R cos, row offset -R sin.
std::vector<CircularSample> circular_samples(int neighbors, double radius);

template <typename Scalar>
double sample_at(const Scalar* centre, Eigen::Index stride, const CircularSample& s) {
  const auto at = [&](int r, int c) { return static_cast<double>(centre[r * stride + c]); };
  const double a = at(s.row0, s.col0);
  const double b = at(s.row0, s.col1);
  const double c = at(s.row1, s.col0);
  const double d = at(s.row1, s.col1);
  const double top = a + s.fx * (b - a);
  const double bottom = c + s.fx * (d - c);
  return top + s.fy * (bottom - top);
}

/// LBP labels over the interior (border R), threshold at the centre (>= -> 1).
template <typename Derived>
LabelMap lbp_map(const Eigen::MatrixBase<Derived>& image, const SpatialResolution& res,
                 LbpVariant variant, OpCounter* counter = nullptr) {
  using Scalar = typename Derived::Scalar;
  const int r = res.radius();
  const int p = res.neighbors();
  require_min_size(image, r, "lbp_map");
  if (p > 32) throw InputError("lbp_map supports P <= 32");

  const Eigen::Ref<const ImageT<Scalar>> img(image.derived());
  const Eigen::Index stride = img.outerStride();
  const LbpMapping mapping(p, variant);
  const auto samples = circular_samples(p, r);

  LabelMap map;
  map.labels.resize(img.rows() - 2 * r, img.cols() - 2 * r);
  map.n_bins = mapping.label_count();
  map.border = r;

  std::uint64_t differences = 0;
  std::uint64_t tests = 0;
  for (Eigen::Index i = 0; i < map.labels.rows(); ++i) {
    for (Eigen::Index j = 0; j < map.labels.cols(); ++j) {
      const Scalar* centre = img.data() + (i + r) * stride + (j + r);
      const double c = static_cast<double>(*centre);
      std::uint32_t code = 0;
      for (int q = 0; q < p; ++q) {
        const double diff = sample_at(centre, stride, samples[static_cast<std::size_t>(q)]) - c;
        ++differences;
        code |= static_cast<std::uint32_t>(diff >= 0.0) << q;
        ++tests;
      }
      map.labels(i, j) = mapping(code);
    }
  }
  if (counter != nullptr) {
    counter->differences += differences;
    counter->sign_tests += tests;
    counter->pixels += static_cast<std::uint64_t>(map.labels.size());
  }
  return map;
}

/// CS-LBP labels over the interior (border R). Intensities are divided by 255
/// before the centre-symmetric differences are thresholded (strict >).
template <typename Derived>
LabelMap cs_lbp_map(const Eigen::MatrixBase<Derived>& image, const SpatialResolution& res,
                    double threshold, OpCounter* counter = nullptr) {
  using Scalar = typename Derived::Scalar;
  const int r = res.radius();
  const int k = res.directions();
  require_min_size(image, r, "cs_lbp_map");
  if (threshold < 0.0) throw InputError("cs_lbp_map: threshold must be >= 0");
  if (k > 16) throw InputError("cs_lbp_map supports P <= 32");

  const Eigen::Ref<const ImageT<Scalar>> img(image.derived());
  const Eigen::Index stride = img.outerStride();
  const auto samples = circular_samples(res.neighbors(), r);
  constexpr double kUnit = 1.0 / 255.0;

  LabelMap map;
  map.labels.resize(img.rows() - 2 * r, img.cols() - 2 * r);
  map.n_bins = 1 << k;
  map.border = r;

  std::uint64_t tests = 0;
  for (Eigen::Index i = 0; i < map.labels.rows(); ++i) {
    for (Eigen::Index j = 0; j < map.labels.cols(); ++j) {
      const Scalar* centre = img.data() + (i + r) * stride + (j + r);
      std::uint32_t code = 0;
      for (int q = 0; q < k; ++q) {
        const double a = sample_at(centre, stride, samples[static_cast<std::size_t>(q)]);
        const double b = sample_at(centre, stride, samples[static_cast<std::size_t>(q + k)]);
        code |= static_cast<std::uint32_t>((a * kUnit - b * kUnit) > threshold) << q;
        ++tests;
      }
      map.labels(i, j) = static_cast<std::int32_t>(code);
    }
  }
  if (counter != nullptr) {
    counter->differences += tests;
    counter->sign_tests += tests;
    counter->pixels += static_cast<std::uint64_t>(map.labels.size());
  }
  return map;
}

/// Quantised gradient orientation per pixel over the whole image (border 0).
template <typename Derived>
LabelMap higo_map(const Eigen::MatrixBase<Derived>& image, int bins) {
  if (bins < 1) throw InputError("higo_map: bins must be >= 1");
  const auto theta = igo(compute_gradients(image));
  LabelMap map;
  map.labels.resize(theta.rows(), theta.cols());
  map.n_bins = bins;
  map.border = 0;
  for (Eigen::Index i = 0; i < theta.size(); ++i) {
    map.labels.data()[i] = orientation_bin(theta.data()[i], bins);
  }
  return map;
}

}  // namespace sbgp

#endif  // SBGP_BASELINES_HPP

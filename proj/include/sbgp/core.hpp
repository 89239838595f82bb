#ifndef SBGP_CORE_HPP
#define SBGP_CORE_HPP

#include <Eigen/Dense>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace sbgp {

// Dense row-major image templated on the pixel scalar. Intensities are
// non-negative; 8-bit inputs are widened to double on load.
template <typename Scalar>
using ImageT = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

using Image = ImageT<double>;
using Imagef = ImageT<float>;

using LabelMatrix = Eigen::Matrix<std::int32_t, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Bad input from the caller (files, parameters, manifests).
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A postcondition the library itself should have guaranteed did not hold.
class InvariantError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Neighbour count P and radius R of a pattern operator. The square-perimeter
/// operators (SBGP) need the maximal sampling P = 8R; circular baselines
/// accept any even P in [2, 32].
class SpatialResolution {
 public:
  SpatialResolution(int neighbors, int radius) : neighbors_(neighbors), radius_(radius) {
    if (radius < 1 || neighbors < 2 || neighbors > 32 || neighbors % 2 != 0) {
      throw InputError("invalid spatial resolution (" + std::to_string(neighbors) + "," +
                       std::to_string(radius) + "): need R >= 1 and even P in [2, 32]");
    }
  }

  static SpatialResolution from_radius(int radius) { return {8 * radius, radius}; }

  int neighbors() const { return neighbors_; }
  int radius() const { return radius_; }
  /// Number of antipodal directions, P/2.
  int directions() const { return neighbors_ / 2; }
  bool is_maximal() const { return neighbors_ == 8 * radius_; }

  void require_maximal(const char* what) const {
    if (!is_maximal()) {
      throw InputError(std::string(what) + " needs P = 8R, got (" + std::to_string(neighbors_) +
                       "," + std::to_string(radius_) + ")");
    }
  }

  friend bool operator==(const SpatialResolution&, const SpatialResolution&) = default;

 private:
  int neighbors_;
  int radius_;
};

// Per-pixel bin indices over the interior of the source image. `border` is the
// number of source pixels trimmed from every edge; pixels holding
// kNonStructural belong to no bin.
struct LabelMap {
  static constexpr std::int32_t kNonStructural = -1;

  LabelMatrix labels;
  int n_bins = 0;
  int border = 0;

  Eigen::Index width() const { return labels.cols(); }
  Eigen::Index height() const { return labels.rows(); }

  Eigen::Index non_structural_count() const {
    return (labels.array() == kNonStructural).count();
  }
  double non_structural_fraction() const {
    return labels.size() == 0 ? 0.0
                              : static_cast<double>(non_structural_count()) /
                                    static_cast<double>(labels.size());
  }
};

// Operation counts recorded by the pattern operators while they run. A
// computational unit is one intensity difference or one sign test; a pairwise
// comparison is one sign test.
struct OpCounter {
  std::uint64_t differences = 0;
  std::uint64_t sign_tests = 0;
  std::uint64_t pixels = 0;

  std::uint64_t comparisons() const { return sign_tests; }
  std::uint64_t units() const { return differences + sign_tests; }

  double comparisons_per_pixel() const { return ratio(comparisons()); }
  double units_per_pixel() const { return ratio(units()); }

  OpCounter& operator+=(const OpCounter& other) {
    differences += other.differences;
    sign_tests += other.sign_tests;
    pixels += other.pixels;
    return *this;
  }

 private:
  double ratio(std::uint64_t n) const {
    return pixels == 0 ? 0.0 : static_cast<double>(n) / static_cast<double>(pixels);
  }
};

template <typename Derived>
void require_min_size(const Eigen::MatrixBase<Derived>& image, int radius, const char* what) {
  const Eigen::Index side = 2 * static_cast<Eigen::Index>(radius) + 1;
  if (image.rows() < side || image.cols() < side) {
    throw InputError(std::string(what) + ": image " + std::to_string(image.cols()) + "x" +
                     std::to_string(image.rows()) + " is smaller than " +
                     std::to_string(side) + "x" + std::to_string(side));
  }
}

}  // namespace sbgp

#endif  // SBGP_CORE_HPP

#ifndef SBGP_PATTERNS_HPP
#define SBGP_PATTERNS_HPP

#include "sbgp/core.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace sbgp {

// One antipodal neighbour pair on the square perimeter, as (row, col) offsets
// from the centre. The principal bit of the direction is 1 iff
// I(plus) - I(minus) >= 0.
struct DirectionPair {
  int plus_row;
  int plus_col;
  int minus_row;
  int minus_col;
};

/// The k = P/2 direction pairs in bit order: first the right column top to
/// bottom (2R+1 pairs), then the bottom row right to left without corners
/// (2R-1 pairs). Walking the plus ends and then the minus ends traces the
/// perimeter once.
std::vector<DirectionPair> direction_pairs(const SpatialResolution& res);

// The P structural labels of a P-neighbour operator. `labels` keeps the
// generation order t = 1..P, which also defines the histogram bin index.
class StructuralLabelSet {
 public:
  explicit StructuralLabelSet(int neighbors);

  int neighbors() const { return neighbors_; }
  int directions() const { return neighbors_ / 2; }
  const std::vector<std::uint64_t>& labels() const { return labels_; }
  std::size_t size() const { return labels_.size(); }

  /// Bin of `label`, or LabelMap::kNonStructural.
  std::int32_t index_of(std::uint64_t label) const;

  /// label -> bin table over all 2^k labels. Requires k <= 16.
  std::vector<std::int32_t> lookup_table() const;

 private:
  int neighbors_;
  std::vector<std::uint64_t> labels_;
};

StructuralLabelSet structural_labels(int neighbors);

/// True iff the circular string (b_1..b_k, !b_1..!b_k) holds its ones in a
/// single contiguous run.
bool structural_oracle(std::span<const std::uint8_t> principal_bits);
bool structural_oracle(std::span<const std::uint8_t> principal_bits, const SpatialResolution& res);

/// Sum of 2^(t-1) b_t.
std::uint64_t label_from_bits(std::span<const std::uint8_t> principal_bits);

// Principal and associated bits of one pixel, materialised separately.
struct BgpBits {
  std::vector<std::uint8_t> principal;
  std::vector<std::uint8_t> associated;
};

namespace detail {

template <typename Derived>
void require_interior(const Eigen::MatrixBase<Derived>& image, Eigen::Index row, Eigen::Index col,
                      int radius) {
  if (row < radius || col < radius || row + radius >= image.rows() ||
      col + radius >= image.cols()) {
    throw InputError("pixel (" + std::to_string(row) + "," + std::to_string(col) +
                     ") is closer than R=" + std::to_string(radius) + " to the image border");
  }
}

}  // namespace detail

/// Principal/associated bits of pixel (row, col) with the two perimeter loops
/// evaluated literally. Used as the reference for the map operators.
template <typename Derived>
BgpBits bgp_bits(const Eigen::MatrixBase<Derived>& image, Eigen::Index row, Eigen::Index col,
                 const SpatialResolution& res) {
  res.require_maximal("bgp_bits");
  const int r = res.radius();
  detail::require_interior(image, row, col, r);
  BgpBits bits;
  const auto push = [&](auto plus, auto minus) {
    const std::uint8_t b = (plus - minus >= 0) ? 1 : 0;
    bits.principal.push_back(b);
    bits.associated.push_back(static_cast<std::uint8_t>(1 - b));
  };
  for (int n1 = -r; n1 <= r; ++n1) {
    push(image(row + n1, col + r), image(row - n1, col - r));
  }
  for (int n2 = -(r - 1); n2 <= r - 1; ++n2) {
    push(image(row + r, col - n2), image(row - r, col + n2));
  }
  return bits;
}

template <typename Derived>
std::uint64_t bgp_label(const Eigen::MatrixBase<Derived>& image, Eigen::Index row, Eigen::Index col,
                        const SpatialResolution& res) {
  return label_from_bits(bgp_bits(image, row, col, res).principal);
}

/// Structural-pattern map over the interior (border R). Each pixel holds the
/// bin of its label in structural_labels(P), or kNonStructural.
template <typename Derived>
LabelMap sbgp_map(const Eigen::MatrixBase<Derived>& image, const SpatialResolution& res,
                  OpCounter* counter = nullptr) {
  using Scalar = typename Derived::Scalar;
  const int r = res.radius();
  res.require_maximal("sbgp_map");
  require_min_size(image, r, "sbgp_map");

  const Eigen::Ref<const ImageT<Scalar>> img(image.derived());
  const Eigen::Index w = img.outerStride();
  const Eigen::Index out_h = img.rows() - 2 * r;
  const Eigen::Index out_w = img.cols() - 2 * r;

  const auto pairs = direction_pairs(res);
  std::vector<Eigen::Index> plus;
  std::vector<Eigen::Index> minus;
  for (const auto& p : pairs) {
    plus.push_back(p.plus_row * w + p.plus_col);
    minus.push_back(p.minus_row * w + p.minus_col);
  }
  const auto table = structural_labels(res.neighbors()).lookup_table();
  const std::size_t k = pairs.size();

  LabelMap map;
  map.labels.resize(out_h, out_w);
  map.n_bins = res.neighbors();
  map.border = r;

  std::uint64_t tests = 0;
  for (Eigen::Index i = 0; i < out_h; ++i) {
    const Scalar* row = img.data() + (i + r) * w + r;
    std::int32_t* out = map.labels.data() + i * out_w;
    for (Eigen::Index j = 0; j < out_w; ++j) {
      const Scalar* centre = row + j;
      std::uint32_t label = 0;
      for (std::size_t t = 0; t < k; ++t) {
        // a - b >= 0 and a >= b agree for finite IEEE values and for
        // integer pixels promoted to int.
        label |= static_cast<std::uint32_t>(centre[plus[t]] >= centre[minus[t]]) << t;
        ++tests;
      }
      out[j] = table[label];
    }
  }
  if (counter != nullptr) {
    counter->sign_tests += tests;
    counter->differences += tests;
    counter->pixels += static_cast<std::uint64_t>(out_h * out_w);
  }
  return map;
}

/// Raw BGP labels in [0, 2^k) over the interior, without structural filtering.
template <typename Derived>
LabelMatrix bgp_label_map(const Eigen::MatrixBase<Derived>& image, const SpatialResolution& res) {
  const int r = res.radius();
  require_min_size(image, r, "bgp_label_map");
  LabelMatrix labels(image.rows() - 2 * r, image.cols() - 2 * r);
  for (Eigen::Index i = 0; i < labels.rows(); ++i) {
    for (Eigen::Index j = 0; j < labels.cols(); ++j) {
      labels(i, j) = static_cast<std::int32_t>(bgp_label(image, i + r, j + r, res));
    }
  }
  return labels;
}

}  // namespace sbgp

#endif  // SBGP_PATTERNS_HPP

#ifndef SBGP_GRADIENT_HPP
#define SBGP_GRADIENT_HPP

#include "sbgp/core.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <type_traits>
#include <vector>

namespace sbgp {

// Real type used for gradient math on a given pixel type; integer pixels
// are promoted to double.
template <typename Scalar>
using RealOf = std::conditional_t<std::is_floating_point_v<Scalar>, Scalar, double>;

template <typename Real>
struct GradientField {
  ImageT<Real> gx;
  ImageT<Real> gy;
};

using CodeMatrix = Eigen::Matrix<std::uint8_t, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Central differences in the interior, one-sided differences on the outermost
/// rows and columns. x runs along columns, y along rows.
template <typename Derived>
GradientField<RealOf<typename Derived::Scalar>> compute_gradients(
    const Eigen::MatrixBase<Derived>& image) {
  using Real = RealOf<typename Derived::Scalar>;
  if (image.rows() < 3 || image.cols() < 3) {
    throw InputError("compute_gradients: image must be at least 3x3, got " +
                     std::to_string(image.cols()) + "x" + std::to_string(image.rows()));
  }
  const ImageT<Real> img = image.template cast<Real>();
  const Eigen::Index h = img.rows();
  const Eigen::Index w = img.cols();

  GradientField<Real> field{ImageT<Real>(h, w), ImageT<Real>(h, w)};
  field.gx.middleCols(1, w - 2) = (img.rightCols(w - 2) - img.leftCols(w - 2)) / Real(2);
  field.gx.col(0) = img.col(1) - img.col(0);
  field.gx.col(w - 1) = img.col(w - 1) - img.col(w - 2);

  field.gy.middleRows(1, h - 2) = (img.bottomRows(h - 2) - img.topRows(h - 2)) / Real(2);
  field.gy.row(0) = img.row(1) - img.row(0);
  field.gy.row(h - 1) = img.row(h - 1) - img.row(h - 2);
  return field;
}

/// Four-quadrant orientation in [0, 2pi); zero gradients map to 0.
template <typename Real>
Real orientation(Real gx, Real gy) {
  constexpr Real kTwoPi = Real(2) * std::numbers::pi_v<Real>;
  if (gx == Real(0) && gy == Real(0)) return Real(0);
  Real theta = std::atan2(gy, gx);
  if (theta < Real(0)) theta += kTwoPi;
  // -tiny + 2pi can round up to 2pi itself
  if (theta >= kTwoPi) theta = std::nextafter(kTwoPi, Real(0));
  return theta;
}

template <typename Real>
ImageT<Real> igo(const GradientField<Real>& field) {
  ImageT<Real> theta(field.gx.rows(), field.gx.cols());
  for (Eigen::Index i = 0; i < theta.size(); ++i) {
    theta.data()[i] = orientation(field.gx.data()[i], field.gy.data()[i]);
  }
  return theta;
}

// Two-bit gradient-sign code: bit 1 is sign(gy) >= 0, bit 0 is sign(gx) >= 0.
template <typename Real>
CodeMatrix quantize_igo_four(const GradientField<Real>& field) {
  CodeMatrix codes(field.gx.rows(), field.gx.cols());
  for (Eigen::Index i = 0; i < codes.size(); ++i) {
    const unsigned x_bit = field.gx.data()[i] >= Real(0) ? 1U : 0U;
    const unsigned y_bit = field.gy.data()[i] >= Real(0) ? 1U : 0U;
    codes.data()[i] = static_cast<std::uint8_t>((y_bit << 1U) | x_bit);
  }
  return codes;
}

template <typename Real>
ImageT<Real> igm(const GradientField<Real>& field) {
  return (field.gx.array().square() + field.gy.array().square()).sqrt().matrix();
}

/// Equal-width bin of an angle in [0, 2pi) among `bins` bins.
template <typename Real>
int orientation_bin(Real theta, int bins) {
  constexpr Real kTwoPi = Real(2) * std::numbers::pi_v<Real>;
  const int b = static_cast<int>(std::floor(theta * static_cast<Real>(bins) / kTwoPi));
  return b < 0 ? 0 : (b >= bins ? bins - 1 : b);
}

template <typename Real>
int dominant_orientation(Real theta, int channels) {
  if (channels < 1) throw InputError("dominant_orientation: channel count must be >= 1");
  return orientation_bin(theta, channels);
}

/// Orientational gradient-magnitude channels. Channel t at (i, j) is the sum of
/// gradient magnitudes over window pixels whose dominant orientation is t,
/// divided by the full window area.
template <typename Real>
struct OigmStack {
  std::vector<ImageT<Real>> channels;
  int window = 7;

  int s() const { return static_cast<int>(channels.size()); }
  int n() const { return window * window; }
};

// Window sum with the window clipped at the image border (separable).
template <typename Real>
ImageT<Real> clipped_box_sum(const ImageT<Real>& src, int window) {
  const Eigen::Index h = src.rows();
  const Eigen::Index w = src.cols();
  const Eigen::Index half = window / 2;

  ImageT<Real> horizontal = ImageT<Real>::Zero(h, w);
  for (Eigen::Index r = 0; r < h; ++r) {
    for (Eigen::Index c = 0; c < w; ++c) {
      const Eigen::Index lo = std::max<Eigen::Index>(0, c - half);
      const Eigen::Index hi = std::min<Eigen::Index>(w - 1, c + half);
      horizontal(r, c) = src.row(r).segment(lo, hi - lo + 1).sum();
    }
  }
  ImageT<Real> out = ImageT<Real>::Zero(h, w);
  for (Eigen::Index r = 0; r < h; ++r) {
    const Eigen::Index lo = std::max<Eigen::Index>(0, r - half);
    const Eigen::Index hi = std::min<Eigen::Index>(h - 1, r + half);
    out.row(r) = horizontal.middleRows(lo, hi - lo + 1).colwise().sum();
  }
  return out;
}

template <typename Derived>
OigmStack<RealOf<typename Derived::Scalar>> build_oigm(const Eigen::MatrixBase<Derived>& image,
                                                        int channels, int window) {
  using Real = RealOf<typename Derived::Scalar>;
  if (channels < 1) throw InputError("build_oigm: channel count must be >= 1");
  if (window < 1 || window % 2 == 0) throw InputError("build_oigm: window must be odd and >= 1");

  const auto field = compute_gradients(image);
  const ImageT<Real> magnitude = igm(field);
  const Real n = static_cast<Real>(window) * static_cast<Real>(window);

  std::vector<ImageT<Real>> masked(static_cast<std::size_t>(channels),
                                   ImageT<Real>::Zero(magnitude.rows(), magnitude.cols()));
  for (Eigen::Index i = 0; i < magnitude.size(); ++i) {
    const int t = orientation_bin(orientation(field.gx.data()[i], field.gy.data()[i]), channels);
    masked[static_cast<std::size_t>(t)].data()[i] = magnitude.data()[i];
  }

  OigmStack<Real> stack;
  stack.window = window;
  stack.channels.reserve(masked.size());
  for (const auto& m : masked) stack.channels.push_back(clipped_box_sum(m, window) / n);
  return stack;
}

}  // namespace sbgp

#endif  // SBGP_GRADIENT_HPP

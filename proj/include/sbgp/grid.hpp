#ifndef SBGP_GRID_HPP
#define SBGP_GRID_HPP

#include "sbgp/core.hpp"

#include <Eigen/Dense>

#include <vector>

namespace sbgp {

struct BlockRect {
  Eigen::Index x = 0;
  Eigen::Index y = 0;
  Eigen::Index width = 0;
  Eigen::Index height = 0;

  Eigen::Index area() const { return width * height; }
  friend bool operator==(const BlockRect&, const BlockRect&) = default;
};

// Non-overlapping tiling of a width x height area, rectangles in row-major
// block order. When a side is not divisible, the first `remainder` blocks get
// one extra pixel.
struct BlockGrid {
  int n_blocks_x = 0;
  int n_blocks_y = 0;
  std::vector<BlockRect> rectangles;

  int size() const { return n_blocks_x * n_blocks_y; }
};

BlockGrid make_block_grid(Eigen::Index width, Eigen::Index height, int n_blocks_x,
                          int n_blocks_y);

/// Lengths of `count` consecutive segments covering `extent`, longer ones first.
std::vector<Eigen::Index> split_extent(Eigen::Index extent, int count);

// (channel, block, bin) shape of a feature vector.
struct FeatureLayout {
  int n_channels = 1;
  int n_blocks = 0;
  int n_bins = 0;

  Eigen::Index dims() const {
    return static_cast<Eigen::Index>(n_channels) * n_blocks * n_bins;
  }
  Eigen::Index offset(int channel, int block) const {
    return (static_cast<Eigen::Index>(channel) * n_blocks + block) * n_bins;
  }
  friend bool operator==(const FeatureLayout&, const FeatureLayout&) = default;
};

struct FeatureVector {
  Eigen::VectorXd values;
  FeatureLayout layout;

  Eigen::Index dims() const { return values.size(); }
};

}  // namespace sbgp

#endif  // SBGP_GRID_HPP

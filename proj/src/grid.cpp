#include "sbgp/grid.hpp"

#include "sbgp/core.hpp"

#include <string>

namespace sbgp {

std::vector<Eigen::Index> split_extent(Eigen::Index extent, int count) {
  if (count < 1 || count > extent) {
    throw InputError("cannot split " + std::to_string(extent) + " pixels into " +
                     std::to_string(count) + " blocks");
  }
  const Eigen::Index base = extent / count;
  const Eigen::Index remainder = extent % count;
  std::vector<Eigen::Index> lengths(static_cast<std::size_t>(count), base);
  for (Eigen::Index i = 0; i < remainder; ++i) {
    ++lengths[static_cast<std::size_t>(i)];
  }
  return lengths;
}

BlockGrid make_block_grid(Eigen::Index width, Eigen::Index height, int n_blocks_x,
                          int n_blocks_y) {
  const auto widths = split_extent(width, n_blocks_x);
  const auto heights = split_extent(height, n_blocks_y);

  BlockGrid grid;
  grid.n_blocks_x = n_blocks_x;
  grid.n_blocks_y = n_blocks_y;
  grid.rectangles.reserve(static_cast<std::size_t>(n_blocks_x) * n_blocks_y);
  Eigen::Index y = 0;
  for (const auto h : heights) {
    Eigen::Index x = 0;
    for (const auto w : widths) {
      grid.rectangles.push_back({x, y, w, h});
      x += w;
    }
    y += h;
  }
  return grid;
}

}  // namespace sbgp

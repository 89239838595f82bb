#include "sbgp/patterns.hpp"

#include <algorithm>
#include <string>

namespace sbgp {

std::vector<DirectionPair> direction_pairs(const SpatialResolution& res) {
  res.require_maximal("direction_pairs");
  const int r = res.radius();
  std::vector<DirectionPair> pairs;
  pairs.reserve(static_cast<std::size_t>(res.directions()));
  for (int n1 = -r; n1 <= r; ++n1) pairs.push_back({n1, r, -n1, -r});
  for (int n2 = -(r - 1); n2 <= r - 1; ++n2) pairs.push_back({r, -n2, -r, n2});
  return pairs;
}

StructuralLabelSet::StructuralLabelSet(int neighbors) : neighbors_(neighbors) {
  if (neighbors < 4 || neighbors % 2 != 0 || neighbors > 126) {
    throw InputError("structural labels need an even neighbour count in [4, 126], got " +
                     std::to_string(neighbors));
  }
  const int k = neighbors / 2;
  const std::uint64_t all_ones = (k == 64) ? ~std::uint64_t{0} : (std::uint64_t{1} << k) - 1;
  labels_.resize(static_cast<std::size_t>(neighbors));
  for (int t = 1; t <= neighbors; ++t) {
    auto& label = labels_[static_cast<std::size_t>(t - 1)];
    if (t <= k) {
      label = (std::uint64_t{1} << (t - 1)) - 1;
    } else {
      // 2^k - L_{2k-t+1} - 1
      label = all_ones - labels_[static_cast<std::size_t>(2 * k - t)];
    }
  }
}

std::int32_t StructuralLabelSet::index_of(std::uint64_t label) const {
  const auto it = std::find(labels_.begin(), labels_.end(), label);
  return it == labels_.end() ? LabelMap::kNonStructural
                             : static_cast<std::int32_t>(it - labels_.begin());
}

std::vector<std::int32_t> StructuralLabelSet::lookup_table() const {
  const int k = directions();
  if (k > 16) throw InputError("label lookup table needs k <= 16");
  std::vector<std::int32_t> table(std::size_t{1} << k, LabelMap::kNonStructural);
  for (std::size_t t = 0; t < labels_.size(); ++t) {
    table[labels_[t]] = static_cast<std::int32_t>(t);
  }
  return table;
}

StructuralLabelSet structural_labels(int neighbors) { return StructuralLabelSet(neighbors); }

bool structural_oracle(std::span<const std::uint8_t> principal_bits) {
  const std::size_t k = principal_bits.size();
  if (k == 0) return false;
  std::vector<std::uint8_t> ring(principal_bits.begin(), principal_bits.end());
  for (const auto b : principal_bits) ring.push_back(static_cast<std::uint8_t>(b == 0 ? 1 : 0));

  // k ones and k zeros: a single run iff exactly one cyclic 0 -> 1 edge.
  int rising = 0;
  for (std::size_t i = 0; i < ring.size(); ++i) {
    const auto prev = ring[(i + ring.size() - 1) % ring.size()];
    if (prev == 0 && ring[i] != 0) ++rising;
  }
  return rising == 1;
}

bool structural_oracle(std::span<const std::uint8_t> principal_bits,
                       const SpatialResolution& res) {
  if (principal_bits.size() != static_cast<std::size_t>(res.directions())) {
    throw InputError("structural_oracle: expected " + std::to_string(res.directions()) +
                     " principal bits, got " + std::to_string(principal_bits.size()));
  }
  return structural_oracle(principal_bits);
}

std::uint64_t label_from_bits(std::span<const std::uint8_t> principal_bits) {
  if (principal_bits.size() > 64) throw InputError("label_from_bits: more than 64 bits");
  std::uint64_t label = 0;
  for (std::size_t t = 0; t < principal_bits.size(); ++t) {
    if (principal_bits[t] != 0) label |= std::uint64_t{1} << t;
  }
  return label;
}

}  // namespace sbgp

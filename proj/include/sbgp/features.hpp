#ifndef SBGP_FEATURES_HPP
#define SBGP_FEATURES_HPP

#include "sbgp/core.hpp"
#include "sbgp/grid.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace sbgp {

enum class PatternKind { kSbgp, kLbpU2, kLbpRiu2, kCsLbp, kHigo };

struct PatternDescriptorConfig {
  PatternKind kind = PatternKind::kSbgp;
  SpatialResolution resolution{16, 2};
  double cs_threshold = 0.01;
  int higo_bins = 4;
};

struct OigmParams {
  int channels = 3;
  int window = 7;
};

enum class Normalization { kPerBlockL1, kNone };

struct ExtractorConfig {
  PatternDescriptorConfig descriptor;
  int blocks_x = 6;
  int blocks_y = 6;
  std::optional<OigmParams> sbgpm;
  Normalization normalization = Normalization::kPerBlockL1;
  bool sqrt_transform = false;

  void validate() const;
  int n_channels() const { return sbgpm ? sbgpm->channels : 1; }
};

/// Histogram bins produced by a descriptor: P for SBGP, 2^(P/2) for CS-LBP,
/// P(P-1)+3 / P+2 for LBP u2 / riu2 and the bin count for HIGO.
int bin_count(const PatternDescriptorConfig& descriptor);

/// Width of the border the descriptor trims from each side of its input.
int border_width(const PatternDescriptorConfig& descriptor);

FeatureLayout feature_layout(const ExtractorConfig& cfg);

/// Runs the configured pattern operator on one channel image.
LabelMap label_map(const Image& image, const PatternDescriptorConfig& descriptor,
                   OpCounter* counter = nullptr);

/// Per-bin pixel counts of `rect`; kNonStructural pixels are not counted.
Eigen::VectorXd block_histogram(const LabelMap& map, const BlockRect& rect, int n_bins);

FeatureVector extract(const Image& image, const ExtractorConfig& cfg,
                      OpCounter* counter = nullptr);

FeatureVector sqrt_transform(const FeatureVector& v);

std::string_view to_string(PatternKind kind);
PatternKind parse_pattern_kind(std::string_view name);

/// Name used on the command line: sbgp, sbgpm, lbp-u2, lbp-riu2, cs-lbp, higo.
std::string descriptor_name(const ExtractorConfig& cfg);

}  // namespace sbgp

#endif  // SBGP_FEATURES_HPP

#include "sbgp/features.hpp"

#include "sbgp/baselines.hpp"
#include "sbgp/gradient.hpp"
#include "sbgp/patterns.hpp"

namespace sbgp {

void ExtractorConfig::validate() const {
  if (descriptor.cs_threshold < 0.0) throw InputError("cs-lbp threshold must be >= 0");
  if (descriptor.kind == PatternKind::kHigo && descriptor.higo_bins < 2) {
    throw InputError("higo needs at least 2 bins");
  }
  if (descriptor.kind == PatternKind::kSbgp) descriptor.resolution.require_maximal("sbgp");
  if (blocks_x < 1 || blocks_y < 1) throw InputError("block counts must be >= 1");
  if (sbgpm) {
    if (descriptor.kind != PatternKind::kSbgp) {
      throw InputError("the OIGM pipeline is only defined for the sbgp descriptor");
    }
    if (sbgpm->channels < 1) throw InputError("sbgpm channel count must be >= 1");
    if (sbgpm->window < 1 || sbgpm->window % 2 == 0) {
      throw InputError("sbgpm window must be odd and >= 1");
    }
  }
}

int bin_count(const PatternDescriptorConfig& descriptor) {
  const int p = descriptor.resolution.neighbors();
  switch (descriptor.kind) {
    case PatternKind::kSbgp:
      return p;
    case PatternKind::kLbpU2:
      return p * (p - 1) + 3;
    case PatternKind::kLbpRiu2:
      return p + 2;
    case PatternKind::kCsLbp:
      return 1 << descriptor.resolution.directions();
    case PatternKind::kHigo:
      return descriptor.higo_bins;
  }
  throw InvariantError("unknown pattern kind");
}

int border_width(const PatternDescriptorConfig& descriptor) {
  return descriptor.kind == PatternKind::kHigo ? 0 : descriptor.resolution.radius();
}

FeatureLayout feature_layout(const ExtractorConfig& cfg) {
  return {cfg.n_channels(), cfg.blocks_x * cfg.blocks_y, bin_count(cfg.descriptor)};
}

LabelMap label_map(const Image& image, const PatternDescriptorConfig& descriptor,
                   OpCounter* counter) {
  switch (descriptor.kind) {
    case PatternKind::kSbgp:
      return sbgp_map(image, descriptor.resolution, counter);
    case PatternKind::kLbpU2:
      return lbp_map(image, descriptor.resolution, LbpVariant::kUniform, counter);
    case PatternKind::kLbpRiu2:
      return lbp_map(image, descriptor.resolution, LbpVariant::kRotationInvariantUniform, counter);
    case PatternKind::kCsLbp:
      return cs_lbp_map(image, descriptor.resolution, descriptor.cs_threshold, counter);
    case PatternKind::kHigo:
      return higo_map(image, descriptor.higo_bins);
  }
  throw InvariantError("unknown pattern kind");
}

Eigen::VectorXd block_histogram(const LabelMap& map, const BlockRect& rect, int n_bins) {
  if (rect.x < 0 || rect.y < 0 || rect.x + rect.width > map.width() ||
      rect.y + rect.height > map.height()) {
    throw InputError("block rectangle lies outside the label map");
  }
  Eigen::VectorXd hist = Eigen::VectorXd::Zero(n_bins);
  for (Eigen::Index r = rect.y; r < rect.y + rect.height; ++r) {
    const std::int32_t* row = map.labels.data() + r * map.labels.cols();
    for (Eigen::Index c = rect.x; c < rect.x + rect.width; ++c) {
      const std::int32_t label = row[c];
      if (label == LabelMap::kNonStructural) continue;
      if (label < 0 || label >= n_bins) {
        throw InvariantError("label " + std::to_string(label) + " outside [0, " +
                             std::to_string(n_bins) + ")");
      }
      hist[label] += 1.0;
    }
  }
  return hist;
}

namespace {

void append_channel(const LabelMap& map, const ExtractorConfig& cfg, int channel,
                    const FeatureLayout& layout, Eigen::VectorXd& out) {
  const BlockGrid grid = make_block_grid(map.width(), map.height(), cfg.blocks_x, cfg.blocks_y);
  for (int b = 0; b < grid.size(); ++b) {
    Eigen::VectorXd hist = block_histogram(map, grid.rectangles[static_cast<std::size_t>(b)],
                                           layout.n_bins);
    if (cfg.normalization == Normalization::kPerBlockL1) {
      const double mass = hist.sum();
      if (mass > 0.0) hist /= mass;
    }
    out.segment(layout.offset(channel, b), layout.n_bins) = hist;
  }
}

}  // namespace

FeatureVector extract(const Image& image, const ExtractorConfig& cfg, OpCounter* counter) {
  cfg.validate();
  FeatureVector fv;
  fv.layout = feature_layout(cfg);
  fv.values = Eigen::VectorXd::Zero(fv.layout.dims());

  if (cfg.sbgpm) {
    const auto stack = build_oigm(image, cfg.sbgpm->channels, cfg.sbgpm->window);
    for (int t = 0; t < stack.s(); ++t) {
      const LabelMap map =
          label_map(stack.channels[static_cast<std::size_t>(t)], cfg.descriptor, counter);
      append_channel(map, cfg, t, fv.layout, fv.values);
    }
  } else {
    append_channel(label_map(image, cfg.descriptor, counter), cfg, 0, fv.layout, fv.values);
  }

  if (cfg.sqrt_transform) fv = sqrt_transform(fv);
  return fv;
}

FeatureVector sqrt_transform(const FeatureVector& v) {
  if ((v.values.array() < 0.0).any()) {
    throw InvariantError("sqrt_transform: feature vector has negative entries");
  }
  return {v.values.array().sqrt().matrix(), v.layout};
}

std::string_view to_string(PatternKind kind) {
  switch (kind) {
    case PatternKind::kSbgp:
      return "sbgp";
    case PatternKind::kLbpU2:
      return "lbp-u2";
    case PatternKind::kLbpRiu2:
      return "lbp-riu2";
    case PatternKind::kCsLbp:
      return "cs-lbp";
    case PatternKind::kHigo:
      return "higo";
  }
  return "unknown";
}

PatternKind parse_pattern_kind(std::string_view name) {
  for (const auto kind : {PatternKind::kSbgp, PatternKind::kLbpU2, PatternKind::kLbpRiu2,
                          PatternKind::kCsLbp, PatternKind::kHigo}) {
    if (to_string(kind) == name) return kind;
  }
  throw InputError("unknown descriptor '" + std::string(name) + "'");
}

std::string descriptor_name(const ExtractorConfig& cfg) {
  return cfg.sbgpm ? "sbgpm" : std::string(to_string(cfg.descriptor.kind));
}

}  // namespace sbgp

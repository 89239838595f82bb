#include "sbgp/features.hpp"
#include "sbgp/patterns.hpp"

#include "test_support.hpp"

#include <doctest.h>

using namespace sbgp;

namespace {

ExtractorConfig sbgp_config(int p, int r) {
  ExtractorConfig cfg;
  cfg.descriptor.resolution = SpatialResolution(p, r);
  return cfg;
}

ExtractorConfig kind_config(PatternKind kind, int p, int r) {
  ExtractorConfig cfg = sbgp_config(p, r);
  cfg.descriptor.kind = kind;
  return cfg;
}

}  // namespace

TEST_CASE("dimension law") {
  const Image img = test::random_image(1, 100, 100);
  CHECK(extract(img, sbgp_config(8, 1)).dims() == 288);
  CHECK(extract(img, sbgp_config(16, 2)).dims() == 576);
  CHECK(extract(img, sbgp_config(24, 3)).dims() == 864);
  ExtractorConfig sbgpm = sbgp_config(16, 2);
  sbgpm.sbgpm = OigmParams{};
  CHECK(extract(img, sbgpm).dims() == 1728);
  CHECK(extract(img, kind_config(PatternKind::kLbpU2, 8, 1)).dims() == 59 * 36);
  CHECK(extract(img, kind_config(PatternKind::kLbpRiu2, 8, 1)).dims() == 10 * 36);
  CHECK(extract(img, kind_config(PatternKind::kCsLbp, 8, 2)).dims() == 16 * 36);
  ExtractorConfig higo = kind_config(PatternKind::kHigo, 16, 2);
  higo.descriptor.higo_bins = 6;
  CHECK(extract(img, higo).dims() == 6 * 36);
  for (const auto& cfg : {sbgp_config(8, 1), sbgpm, higo}) {
    CHECK(feature_layout(cfg).dims() == extract(img, cfg).dims());
  }
}

TEST_CASE("each block slice sums to one or is empty") {
  const Image img = test::random_image(2, 60, 70);
  for (auto kind : {PatternKind::kSbgp, PatternKind::kLbpU2, PatternKind::kCsLbp}) {
    const ExtractorConfig cfg = kind_config(kind, 8, 1);
    const FeatureVector fv = extract(img, cfg);
    for (int b = 0; b < fv.layout.n_blocks; ++b) {
      const double mass = fv.values.segment(fv.layout.offset(0, b), fv.layout.n_bins).sum();
      CHECK(mass == doctest::Approx(1.0).epsilon(1e-12));
    }
  }
}

TEST_CASE("non-structural pixels do not enter the histograms") {
  const Image img = test::random_image(3, 40, 40);
  ExtractorConfig cfg = sbgp_config(16, 2);
  cfg.blocks_x = 1;
  cfg.blocks_y = 1;
  cfg.normalization = Normalization::kNone;
  const LabelMap map = sbgp_map(img, SpatialResolution(16, 2));
  const FeatureVector fv = extract(img, cfg);
  CHECK(fv.values.sum() == static_cast<double>(map.labels.size() - map.non_structural_count()));
  for (int bin = 0; bin < 16; ++bin) CHECK(fv.values[bin] == (map.labels.array() == bin).count());
}

TEST_CASE("an all-noise block stays zero") {
  LabelMap map;
  map.labels = LabelMatrix::Constant(4, 4, LabelMap::kNonStructural);
  map.n_bins = 8;
  CHECK(block_histogram(map, {0, 0, 4, 4}, 8).isZero(0));
  map.labels(1, 1) = 8;
  CHECK_THROWS_AS(block_histogram(map, {0, 0, 4, 4}, 8), InvariantError);
}

TEST_CASE("grid is laid over the trimmed label map") {
  Image img = Image::Constant(20, 20, 50.0);
  ExtractorConfig cfg = sbgp_config(8, 1);
  cfg.blocks_x = 2;
  cfg.blocks_y = 1;
  cfg.normalization = Normalization::kNone;
  // The 18x18 map splits into two 9-column halves.
  const FeatureVector fv = extract(img, cfg);
  CHECK(fv.values.segment(0, 8).sum() == 162);
  CHECK(fv.values.segment(8, 8).sum() == 162);
}

TEST_CASE("square-root transform") {
  FeatureVector v{Eigen::VectorXd(4), FeatureLayout{1, 1, 4}};
  v.values << 0, 1, 4, 9;
  CHECK(sqrt_transform(v).values == Eigen::Vector4d(0, 1, 2, 3));
  FeatureVector binary{Eigen::VectorXd(3), FeatureLayout{1, 1, 3}};
  binary.values << 0, 1, 1;
  CHECK(sqrt_transform(binary).values == binary.values);
  v.values[2] = -1;
  CHECK_THROWS_AS(sqrt_transform(v), InvariantError);

  const Image img = test::random_image(4, 50, 50);
  ExtractorConfig cfg = sbgp_config(8, 1);
  const FeatureVector plain = extract(img, cfg);
  cfg.sqrt_transform = true;
  CHECK(extract(img, cfg).values == plain.values.array().sqrt().matrix());
}

TEST_CASE("extraction is deterministic") {
  const Image img = test::random_image(5, 64, 64);
  ExtractorConfig cfg = sbgp_config(16, 2);
  cfg.sbgpm = OigmParams{};
  CHECK(extract(img, cfg).values == extract(img, cfg).values);
}

TEST_CASE("SBGP features ignore monotone intensity changes") {
  const Image img = test::random_image(6, 64, 64);
  const ExtractorConfig cfg = sbgp_config(16, 2);
  const FeatureVector base = extract(img, cfg);
  CHECK(extract(Image((img.array() * 1.3 + 20).matrix()), cfg).values == base.values);
  CHECK(extract(Image((255.0 * (img.array() / 255.0).pow(0.4)).matrix()), cfg).values == base.values);
}

TEST_CASE("SBGPM features ignore affine intensity changes") {
  const Image img = test::random_image(7, 64, 64);
  ExtractorConfig cfg = sbgp_config(16, 2);
  cfg.sbgpm = OigmParams{};
  const FeatureVector base = extract(img, cfg);
  CHECK(extract(Image((img.array() * 2.0 + 30).matrix()), cfg).values == base.values);
  CHECK(extract(Image((img.array() + 17).matrix()), cfg).values == base.values);
  CHECK(extract(Image((img.array() * 1.3 + 20).matrix()), cfg).values == base.values);
}

TEST_CASE("configuration validation") {
  CHECK_THROWS_AS(extract(test::random_image(1, 30, 30), sbgp_config(8, 2)), InputError);
  ExtractorConfig higo = kind_config(PatternKind::kHigo, 16, 2);
  higo.descriptor.higo_bins = 1;
  CHECK_THROWS_AS(higo.validate(), InputError);
  ExtractorConfig lbp = kind_config(PatternKind::kLbpU2, 8, 1);
  lbp.sbgpm = OigmParams{};
  CHECK_THROWS_AS(lbp.validate(), InputError);
  ExtractorConfig even_window = sbgp_config(8, 1);
  even_window.sbgpm = OigmParams{3, 4};
  CHECK_THROWS_AS(even_window.validate(), InputError);
  ExtractorConfig too_many = sbgp_config(8, 1);
  too_many.blocks_x = 40;
  CHECK_THROWS_AS(extract(test::random_image(1, 30, 30), too_many), InputError);
}

TEST_CASE("descriptor names round-trip") {
  for (auto kind : {PatternKind::kSbgp, PatternKind::kLbpU2, PatternKind::kLbpRiu2,
                    PatternKind::kCsLbp, PatternKind::kHigo}) {
    CHECK(parse_pattern_kind(to_string(kind)) == kind);
  }
  CHECK_THROWS_AS(parse_pattern_kind("gabor"), InputError);
  ExtractorConfig cfg;
  cfg.sbgpm = OigmParams{};
  CHECK(descriptor_name(cfg) == "sbgpm");
}

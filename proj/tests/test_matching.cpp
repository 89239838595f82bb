#include "sbgp/matching.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

using namespace sbgp;

namespace {

FeatureVector fv(std::initializer_list<double> values) {
  FeatureVector v;
  v.values.resize(static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (double x : values) v.values[i++] = x;
  v.layout = FeatureLayout{1, 1, static_cast<int>(values.size())};
  return v;
}

}  // namespace

TEST_CASE("similarity measures on small vectors") {
  const Eigen::Vector2d a(1, 0);
  const Eigen::Vector2d b(0, 1);
  CHECK(chi_square(a, b) == 2.0);
  CHECK(histogram_intersection(a, b) == 0.0);
  CHECK(euclidean(a, b) == doctest::Approx(std::sqrt(2.0)));
  CHECK(cosine(a, b) == 0.0);
  CHECK(chi_square(Eigen::Vector3d(0, 0.5, 0.5), Eigen::Vector3d(0, 0.5, 0.5)) == 0.0);
  CHECK(histogram_intersection(Eigen::Vector3d(0.2, 0.5, 0.3), Eigen::Vector3d(0.4, 0.1, 0.5)) ==
        doctest::Approx(0.2 + 0.1 + 0.3));
  CHECK(cosine(Eigen::Vector2d::Zero(), Eigen::Vector2d::Zero()) == 1.0);
  CHECK(cosine(Eigen::Vector2d(3, 4), Eigen::Vector2d(6, 8)) == doctest::Approx(1.0));
}

TEST_CASE("measures are symmetric") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int n = 0; n < 20; ++n) {
    Eigen::VectorXd a(16), b(16);
    for (int i = 0; i < 16; ++i) {
      a[i] = u(rng) < 0.3 ? 0.0 : u(rng);
      b[i] = u(rng) < 0.3 ? 0.0 : u(rng);
    }
    for (auto kind : {SimilarityKind::kHistogramIntersection, SimilarityKind::kChiSquare,
                      SimilarityKind::kEuclidean, SimilarityKind::kCosine}) {
      CHECK(similarity(a, b, kind) == similarity(b, a, kind));
    }
  }
}

TEST_CASE("dimension mismatch is an input error") {
  CHECK_THROWS_AS(similarity(Eigen::VectorXd::Zero(3), Eigen::VectorXd::Zero(4),
                             SimilarityKind::kChiSquare),
                  InputError);
  Gallery g;
  g.add(fv({1, 0}), "a");
  CHECK_THROWS_AS(g.add(fv({1, 0, 0}), "b"), InputError);
  CHECK_THROWS_AS(nn_classify(g, fv({1}), SimilarityKind::kHistogramIntersection), InputError);
  CHECK_THROWS_AS(nn_classify(Gallery{}, fv({1}), SimilarityKind::kHistogramIntersection), InputError);
}

TEST_CASE("nearest neighbour picks the best score, lowest index on ties") {
  Gallery g;
  g.add(fv({0.5, 0.5, 0.0}), "a");
  g.add(fv({0.0, 0.5, 0.5}), "b");
  g.add(fv({0.5, 0.5, 0.0}), "c");
  const Match hi = nn_classify(g, fv({0.6, 0.4, 0.0}), SimilarityKind::kHistogramIntersection);
  CHECK(hi.subject_id == "a");
  CHECK(hi.index == 0);
  CHECK(hi.score == doctest::Approx(0.9));
  const Match l2 = nn_classify(g, fv({0.0, 0.4, 0.6}), SimilarityKind::kEuclidean);
  CHECK(l2.subject_id == "b");
  CHECK(nn_classify(g, fv({0.0, 1.0, 0.0}), SimilarityKind::kChiSquare).index == 0);
}

TEST_CASE("per-image scaling does not change the cosine match") {
  Gallery g;
  g.add(fv({1, 2, 3}), "a");
  g.add(fv({3, 2, 1}), "b");
  CHECK(nn_classify(g, fv({10, 19, 31}), SimilarityKind::kCosine).subject_id == "a");
  CHECK(nn_classify(g, fv({0.1, 0.19, 0.31}), SimilarityKind::kCosine).subject_id == "a");
}

TEST_CASE("measure names") {
  for (auto kind : {SimilarityKind::kHistogramIntersection, SimilarityKind::kChiSquare,
                    SimilarityKind::kEuclidean, SimilarityKind::kCosine}) {
    CHECK(parse_similarity(to_string(kind)) == kind);
  }
  CHECK(to_string(SimilarityKind::kHistogramIntersection) == "hi");
  CHECK_THROWS_AS(parse_similarity("emd"), InputError);
  CHECK(higher_is_better(SimilarityKind::kCosine));
  CHECK_FALSE(higher_is_better(SimilarityKind::kChiSquare));
}

TEST_CASE("hand-traced two-fold verification") {
  // Fold 1 is inverted relative to fold 0, so each fold's threshold misleads the other.
  const std::vector<ScoredPair> pairs{
      {0.9, true, 0}, {0.1, false, 0}, {0.4, true, 1}, {0.6, false, 1}};
  const VerificationResult r = verify_scores(pairs, SimilarityKind::kHistogramIntersection);
  REQUIRE(r.folds.size() == 2);
  // Trained on {0.4 same, 0.6 diff}: accept-all and reject-all tie at 1/2, the lower wins.
  CHECK(r.folds[0].threshold == 0.4);
  CHECK(r.folds[0].accuracy == 1.0);
  // Trained on {0.1 diff, 0.9 same}: the midpoint separates them.
  CHECK(r.folds[1].threshold == 0.5);
  CHECK(r.folds[1].accuracy == 0.0);
  CHECK(r.mean_accuracy == 0.5);
  CHECK(r.standard_error == doctest::Approx(0.5));
  CHECK(r.accept_rule == ">=");

  // Same data as distances: the accept side flips.
  std::vector<ScoredPair> distances = pairs;
  for (auto& p : distances) p.score = 1.0 - p.score;
  const VerificationResult d = verify_scores(distances, SimilarityKind::kEuclidean);
  CHECK(d.accept_rule == "<=");
  CHECK(d.mean_accuracy == 0.5);
  CHECK(d.folds[0].threshold == doctest::Approx(0.6));
  CHECK(d.folds[1].threshold == doctest::Approx(0.5));
}

TEST_CASE("a threshold between the classes survives rounding noise") {
  std::vector<ScoredPair> pairs;
  for (int f = 0; f < 3; ++f) {
    pairs.push_back({36.0 + (f - 1) * 1e-14, true, f});
    pairs.push_back({20.0 + f, false, f});
  }
  CHECK(verify_scores(pairs, SimilarityKind::kHistogramIntersection).mean_accuracy == 1.0);
}

TEST_CASE("perfectly separable folds give accuracy one") {
  std::vector<ScoredPair> pairs;
  for (int f = 0; f < 10; ++f) {
    for (int i = 0; i < 30; ++i) {
      pairs.push_back({0.6 + 0.01 * i, true, f});
      pairs.push_back({0.1 + 0.01 * i, false, f});
    }
  }
  const auto r = verify_scores(pairs, SimilarityKind::kHistogramIntersection);
  CHECK(r.mean_accuracy == 1.0);
  CHECK(r.standard_error == 0.0);
}

TEST_CASE("label-free scores sit near chance") {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::bernoulli_distribution coin(0.5);
  std::vector<ScoredPair> pairs;
  for (int f = 0; f < 10; ++f) {
    for (int i = 0; i < 600; ++i) pairs.push_back({u(rng), coin(rng), f});
  }
  const auto r = verify_scores(pairs, SimilarityKind::kChiSquare);
  CHECK(r.mean_accuracy >= 0.45);
  CHECK(r.mean_accuracy <= 0.55);
  double sum = 0.0;
  for (const auto& f : r.folds) sum += f.accuracy;
  CHECK(std::abs(sum / 10 - r.mean_accuracy) < 1e-12);
}

TEST_CASE("pooled ROC is monotone and spans the unit square") {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> n(0.0, 1.0);
  std::vector<ScoredPair> pairs;
  for (int f = 0; f < 4; ++f) {
    for (int i = 0; i < 50; ++i) {
      pairs.push_back({1.0 + n(rng), true, f});
      pairs.push_back({n(rng), false, f});
    }
  }
  const auto r = verify_scores(pairs, SimilarityKind::kCosine);
  REQUIRE(r.roc.size() >= 2);
  CHECK(r.roc.front().false_accept == 0.0);
  CHECK(r.roc.front().true_accept == 0.0);
  CHECK(std::isinf(r.roc.front().threshold));
  CHECK(r.roc.back().false_accept == 1.0);
  CHECK(r.roc.back().true_accept == 1.0);
  for (std::size_t i = 1; i < r.roc.size(); ++i) {
    CHECK(r.roc[i].false_accept >= r.roc[i - 1].false_accept);
    CHECK(r.roc[i].true_accept >= r.roc[i - 1].true_accept);
    CHECK(r.roc[i].threshold < r.roc[i - 1].threshold);
  }
}

TEST_CASE("fold structure is validated") {
  CHECK_THROWS_AS(verify_scores({{0.5, true, 0}, {0.2, false, 0}}, SimilarityKind::kCosine),
                  InputError);
  CHECK_THROWS_AS(verify_scores({{0.5, true, 0}, {0.2, false, 2}}, SimilarityKind::kCosine),
                  InputError);
  CHECK_THROWS_AS(verify_scores({{0.5, true, -1}, {0.2, false, 1}}, SimilarityKind::kCosine),
                  InputError);
}

TEST_CASE("feature pairs are scored with the chosen measure") {
  const FeatureVector a = fv({0.5, 0.5});
  const FeatureVector b = fv({0.5, 0.5});
  const FeatureVector c = fv({1.0, 0.0});
  const std::vector<FeaturePair> pairs{{&a, &b, true, 0}, {&a, &c, false, 0},
                                       {&b, &a, true, 1}, {&c, &b, false, 1}};
  CHECK(verify_pairs(pairs, SimilarityKind::kHistogramIntersection).mean_accuracy == 1.0);
}

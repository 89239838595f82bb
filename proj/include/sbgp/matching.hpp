#ifndef SBGP_MATCHING_HPP
#define SBGP_MATCHING_HPP

#include "sbgp/grid.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace sbgp {

enum class SimilarityKind { kHistogramIntersection, kChiSquare, kEuclidean, kCosine };

/// True for measures where a larger score means more similar.
constexpr bool higher_is_better(SimilarityKind kind) {
  return kind == SimilarityKind::kHistogramIntersection || kind == SimilarityKind::kCosine;
}

std::string_view to_string(SimilarityKind kind);
SimilarityKind parse_similarity(std::string_view name);

// Free functions over any Eigen vector expression.
template <typename A, typename B>
double histogram_intersection(const Eigen::MatrixBase<A>& a, const Eigen::MatrixBase<B>& b) {
  return a.cwiseMin(b).sum();
}

// 0/0 terms contribute nothing.
template <typename A, typename B>
double chi_square(const Eigen::MatrixBase<A>& a, const Eigen::MatrixBase<B>& b) {
  const auto sum = (a + b).array();
  const auto diff2 = (a - b).array().square();
  return (sum > 0.0).select(diff2 / sum, 0.0).sum();
}

template <typename A, typename B>
double euclidean(const Eigen::MatrixBase<A>& a, const Eigen::MatrixBase<B>& b) {
  return (a - b).norm();
}

/// Cosine of the angle between a and b; two zero vectors score 1, one zero
/// vector scores 0.
template <typename A, typename B>
double cosine(const Eigen::MatrixBase<A>& a, const Eigen::MatrixBase<B>& b) {
  const double na = a.norm();
  const double nb = b.norm();
  if (na == 0.0 && nb == 0.0) return 1.0;
  if (na == 0.0 || nb == 0.0) return 0.0;
  return a.dot(b) / (na * nb);
}

double similarity(const Eigen::VectorXd& a, const Eigen::VectorXd& b, SimilarityKind kind);
double similarity(const FeatureVector& a, const FeatureVector& b, SimilarityKind kind);

/// True when score `a` is strictly better than `b` under `kind`.
constexpr bool better(double a, double b, SimilarityKind kind) {
  return higher_is_better(kind) ? a > b : a < b;
}

struct GalleryEntry {
  FeatureVector features;
  std::string subject_id;
  std::string path;
};

class Gallery {
 public:
  void add(FeatureVector features, std::string subject_id, std::string path = {});

  const std::vector<GalleryEntry>& entries() const { return entries_; }
  bool empty() const { return entries_.empty(); }
  std::size_t size() const { return entries_.size(); }
  Eigen::Index dims() const { return dims_; }

 private:
  std::vector<GalleryEntry> entries_;
  Eigen::Index dims_ = -1;
};

struct Match {
  std::string subject_id;
  double score = 0.0;
  std::size_t index = 0;
};

// Best-scoring gallery entry; ties go to the lowest index.
Match nn_classify(const Gallery& gallery, const FeatureVector& probe, SimilarityKind kind);

struct ScoredPair {
  double score = 0.0;
  bool same = false;
  int fold = 0;
};

struct FoldResult {
  int fold = 0;
  std::size_t pairs = 0;
  double threshold = 0.0;  // in score units; see VerificationResult::accept_rule
  double accuracy = 0.0;
};

struct RocPoint {
  double threshold = 0.0;
  double false_accept = 0.0;
  double true_accept = 0.0;
};

struct VerificationResult {
  std::vector<FoldResult> folds;
  double mean_accuracy = 0.0;
  double standard_error = 0.0;
  std::vector<RocPoint> roc;
  // ">=" when a pair is accepted at score >= threshold, "<=" for distances.
  std::string accept_rule;
};

/// Leave-one-fold-out verification: each fold is scored with the threshold
/// that maximises accuracy on the remaining folds. Candidates are the lowest
/// training score, midpoints between distinct scores, and +inf; ties go to the
/// smallest.
/// Fold indices must be 0..F-1 with F >= 2 and every fold non-empty.
VerificationResult verify_scores(const std::vector<ScoredPair>& pairs, SimilarityKind kind);

struct FeaturePair {
  const FeatureVector* a = nullptr;
  const FeatureVector* b = nullptr;
  bool same = false;
  int fold = 0;
};

VerificationResult verify_pairs(const std::vector<FeaturePair>& pairs, SimilarityKind kind);

}  // namespace sbgp

#endif  // SBGP_MATCHING_HPP

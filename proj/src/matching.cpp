#include "sbgp/matching.hpp"

#include "sbgp/core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace sbgp {

std::string_view to_string(SimilarityKind kind) {
  switch (kind) {
    case SimilarityKind::kHistogramIntersection:
      return "hi";
    case SimilarityKind::kChiSquare:
      return "chi2";
    case SimilarityKind::kEuclidean:
      return "l2";
    case SimilarityKind::kCosine:
      return "cos";
  }
  return "unknown";
}

SimilarityKind parse_similarity(std::string_view name) {
  for (const auto kind : {SimilarityKind::kHistogramIntersection, SimilarityKind::kChiSquare,
                          SimilarityKind::kEuclidean, SimilarityKind::kCosine}) {
    if (to_string(kind) == name) return kind;
  }
  throw InputError("unknown similarity '" + std::string(name) + "'");
}

double similarity(const Eigen::VectorXd& a, const Eigen::VectorXd& b, SimilarityKind kind) {
  if (a.size() != b.size()) {
    throw InputError("feature dimension mismatch: " + std::to_string(a.size()) + " vs " +
                     std::to_string(b.size()));
  }
  switch (kind) {
    case SimilarityKind::kHistogramIntersection:
      return histogram_intersection(a, b);
    case SimilarityKind::kChiSquare:
      return chi_square(a, b);
    case SimilarityKind::kEuclidean:
      return euclidean(a, b);
    case SimilarityKind::kCosine:
      return cosine(a, b);
  }
  throw InvariantError("unknown similarity kind");
}

double similarity(const FeatureVector& a, const FeatureVector& b, SimilarityKind kind) {
  return similarity(a.values, b.values, kind);
}

void Gallery::add(FeatureVector features, std::string subject_id, std::string path) {
  if (dims_ >= 0 && features.dims() != dims_) {
    throw InputError("gallery entry has " + std::to_string(features.dims()) +
                     " dimensions, expected " + std::to_string(dims_));
  }
  dims_ = features.dims();
  entries_.push_back({std::move(features), std::move(subject_id), std::move(path)});
}

Match nn_classify(const Gallery& gallery, const FeatureVector& probe, SimilarityKind kind) {
  if (gallery.empty()) throw InputError("nn_classify: empty gallery");
  if (probe.dims() != gallery.dims()) {
    throw InputError("probe has " + std::to_string(probe.dims()) + " dimensions, gallery has " +
                     std::to_string(gallery.dims()));
  }
  Match best;
  for (std::size_t i = 0; i < gallery.size(); ++i) {
    const double s = similarity(gallery.entries()[i].features, probe, kind);
    if (i == 0 || better(s, best.score, kind)) {
      best = {gallery.entries()[i].subject_id, s, i};
    }
  }
  return best;
}

namespace {

struct Affinity {
  double value;  // larger means more similar
  bool same;
};

// Threshold maximising accuracy of "accept iff affinity >= t"; ties go to the
// smallest t. +inf (reject everything) is the last candidate.
double best_threshold(std::vector<Affinity> train) {
  std::sort(train.begin(), train.end(),
            [](const Affinity& x, const Affinity& y) { return x.value < y.value; });
  const auto total_same =
      static_cast<std::size_t>(std::count_if(train.begin(), train.end(),
                                             [](const Affinity& a) { return a.same; }));
  // Candidates: the lowest value (accept all), midpoints between distinct
  // neighbours, and +inf (reject all). `correct` counts accepted same pairs
  // plus rejected different pairs.
  std::size_t same_below = 0;
  std::size_t diff_below = 0;
  double best_t = train.empty() ? std::numeric_limits<double>::infinity() : train.front().value;
  std::size_t best_correct = total_same;
  for (std::size_t i = 0; i < train.size();) {
    const double t = train[i].value;
    for (; i < train.size() && train[i].value == t; ++i) {
      (train[i].same ? same_below : diff_below) += 1;
    }
    const double next = i < train.size() ? t + (train[i].value - t) / 2.0
                                         : std::numeric_limits<double>::infinity();
    const std::size_t correct = (total_same - same_below) + diff_below;
    if (correct > best_correct) {
      best_correct = correct;
      best_t = next;
    }
  }
  return best_t;
}

}  // namespace

VerificationResult verify_scores(const std::vector<ScoredPair>& pairs, SimilarityKind kind) {
  int n_folds = 0;
  for (const auto& p : pairs) {
    if (p.fold < 0) throw InputError("negative fold index " + std::to_string(p.fold));
    n_folds = std::max(n_folds, p.fold + 1);
  }
  if (n_folds < 2) throw InputError("verification needs at least 2 folds");
  std::vector<std::size_t> fold_sizes(static_cast<std::size_t>(n_folds), 0);
  for (const auto& p : pairs) ++fold_sizes[static_cast<std::size_t>(p.fold)];
  for (int f = 0; f < n_folds; ++f) {
    if (fold_sizes[static_cast<std::size_t>(f)] == 0) {
      throw InputError("fold " + std::to_string(f) + " is empty");
    }
  }

  const double sign = higher_is_better(kind) ? 1.0 : -1.0;
  VerificationResult result;
  result.accept_rule = higher_is_better(kind) ? ">=" : "<=";

  double accuracy_sum = 0.0;
  for (int f = 0; f < n_folds; ++f) {
    std::vector<Affinity> train;
    for (const auto& p : pairs) {
      if (p.fold != f) train.push_back({sign * p.score, p.same});
    }
    const double t = best_threshold(std::move(train));
    std::size_t correct = 0;
    for (const auto& p : pairs) {
      if (p.fold != f) continue;
      const bool accept = sign * p.score >= t;
      if (accept == p.same) ++correct;
    }
    FoldResult fr;
    fr.fold = f;
    fr.pairs = fold_sizes[static_cast<std::size_t>(f)];
    fr.threshold = sign * t;
    fr.accuracy = static_cast<double>(correct) / static_cast<double>(fr.pairs);
    accuracy_sum += fr.accuracy;
    result.folds.push_back(fr);
  }
  result.mean_accuracy = accuracy_sum / n_folds;
  double ss = 0.0;
  for (const auto& fr : result.folds) ss += (fr.accuracy - result.mean_accuracy) * (fr.accuracy - result.mean_accuracy);
  result.standard_error = std::sqrt(ss / (n_folds - 1)) / std::sqrt(static_cast<double>(n_folds));

  // Pooled ROC, one point per distinct score, thresholds from strict to lax.
  std::vector<Affinity> all;
  all.reserve(pairs.size());
  std::size_t n_same = 0;
  for (const auto& p : pairs) {
    all.push_back({sign * p.score, p.same});
    if (p.same) ++n_same;
  }
  const std::size_t n_diff = pairs.size() - n_same;
  std::sort(all.begin(), all.end(),
            [](const Affinity& x, const Affinity& y) { return x.value > y.value; });
  const auto rate = [](std::size_t k, std::size_t n) {
    return n == 0 ? 0.0 : static_cast<double>(k) / static_cast<double>(n);
  };
  result.roc.push_back({sign * std::numeric_limits<double>::infinity(), 0.0, 0.0});
  std::size_t same_acc = 0;
  std::size_t diff_acc = 0;
  for (std::size_t i = 0; i < all.size();) {
    const double t = all[i].value;
    for (; i < all.size() && all[i].value == t; ++i) {
      (all[i].same ? same_acc : diff_acc) += 1;
    }
    result.roc.push_back({sign * t, rate(diff_acc, n_diff), rate(same_acc, n_same)});
  }
  return result;
}

VerificationResult verify_pairs(const std::vector<FeaturePair>& pairs, SimilarityKind kind) {
  std::vector<ScoredPair> scored;
  scored.reserve(pairs.size());
  for (const auto& p : pairs) {
    if (p.a == nullptr || p.b == nullptr) throw InputError("verify_pairs: null feature vector");
    scored.push_back({similarity(*p.a, *p.b, kind), p.same, p.fold});
  }
  return verify_scores(scored, kind);
}

}  // namespace sbgp

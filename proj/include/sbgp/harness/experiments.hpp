#ifndef SBGP_HARNESS_EXPERIMENTS_HPP
#define SBGP_HARNESS_EXPERIMENTS_HPP

#include "sbgp/features.hpp"
#include "sbgp/harness/manifest.hpp"
#include "sbgp/harness/synthetic.hpp"
#include "sbgp/matching.hpp"

#include <json.hpp>

#include <functional>
#include <map>
#include <string>
#include <vector>

namespace sbgp::harness {

/// Runs fn(i) for i in [0, n) on up to `threads` workers. Each index is
/// handled exactly once; callers write results into slot i.
void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& fn);

struct ExtractionStats {
  OpCounter counter;             // summed in input order
  std::vector<double> seconds;   // per image
};

std::vector<FeatureVector> extract_all(const std::vector<Image>& images, const ExtractorConfig& cfg,
                                       int threads = 1, ExtractionStats* stats = nullptr);

/// Loads every path; failures are collected and reported together.
std::vector<Image> load_images(const std::vector<std::filesystem::path>& paths, int threads = 1);

nlohmann::json config_json(const ExtractorConfig& cfg);

/// `name@P,R`, e.g. `lbp-riu2@16,2` or `sbgpm@16,2`; `@P,R` may be omitted.
ExtractorConfig parse_config_spec(const std::string& spec, const ExtractorConfig& defaults);

struct GroupTally {
  std::size_t probes = 0;
  std::size_t correct = 0;
  double rate() const { return probes == 0 ? 0.0 : static_cast<double>(correct) / probes; }
};

struct IdentificationResult {
  GroupTally overall;
  std::map<std::string, GroupTally> groups;
  std::map<std::pair<std::string, std::string>, std::size_t> confusion;  // (true, predicted)
};

/// Nearest-neighbour identification of every probe row against every gallery
/// row; `features` is in manifest order.
IdentificationResult identify(const DatasetManifest& manifest,
                              const std::vector<FeatureVector>& features, SimilarityKind kind);

nlohmann::json identification_report(const DatasetManifest& manifest, const ExtractorConfig& cfg,
                                     SimilarityKind kind, int threads);

nlohmann::json verification_report(const PairManifest& manifest, const ExtractorConfig& cfg,
                                   SimilarityKind kind, int threads);

nlohmann::json to_json(const VerificationResult& result);

struct BenchRow {
  std::string descriptor;
  int neighbors = 0;
  int radius = 0;
  double units_per_pixel = 0.0;
  double comparisons_per_pixel = 0.0;
  int labels = 0;
  Eigen::Index dims = 0;
  double mean_seconds = 0.0;    // mean per-image time over all timed iterations
  double median_seconds = 0.0;  // median of per-iteration means
  double pixels_per_second = 0.0;
  int iterations = 0;
};

/// Complexity rows: SBGP, LBP u2 and LBP riu2 at (8,1), (16,2), (24,3).
std::vector<ExtractorConfig> default_bench_configs(const ExtractorConfig& defaults);

std::vector<BenchRow> run_bench(const std::vector<Image>& images,
                                const std::vector<ExtractorConfig>& configs, int iterations = 20,
                                int warmup = 3);

nlohmann::json bench_report(const std::vector<BenchRow>& rows);

struct PerturbOutcome {
  std::string descriptor;
  int neighbors = 0;
  int radius = 0;
  GroupTally tally;
  // Plain SBGP only: non-structural fraction over the probes of this level.
  bool has_non_structural = false;
  double ns_mean = 0.0;
  double ns_min = 0.0;
  double ns_max = 0.0;
  double ns_clean_mean = 0.0;
};

struct PerturbLevel {
  Perturbation perturbation;
  std::vector<PerturbOutcome> outcomes;  // one per config
};

/// Gallery = `bases`; probes are `probes_per_subject` perturbed copies of each
/// base per level, kept real-valued. A probe is correct when its nearest
/// gallery entry has the same subject id as its base. `subject_ids` defaults
/// to the base index.
std::vector<PerturbLevel> run_perturbation_study(const std::vector<Image>& bases,
                                                 const std::vector<Perturbation>& levels,
                                                 const std::vector<ExtractorConfig>& configs,
                                                 SimilarityKind kind, std::uint64_t seed,
                                                 int probes_per_subject = 1, int threads = 1,
                                                 std::vector<std::string> subject_ids = {});

nlohmann::json perturb_report(const std::vector<PerturbLevel>& levels, SimilarityKind kind);

}  // namespace sbgp::harness

#endif  // SBGP_HARNESS_EXPERIMENTS_HPP

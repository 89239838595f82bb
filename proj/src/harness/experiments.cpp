#include "sbgp/harness/experiments.hpp"

#include "sbgp/image_io.hpp"
#include "sbgp/patterns.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <exception>
#include <mutex>
#include <thread>

namespace sbgp::harness {

using nlohmann::json;

void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& fn) {
  const auto workers = static_cast<std::size_t>(std::max(1, threads));
  if (workers == 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < std::min(workers, n); ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < n; i = next++) {
          try {
            fn(i);
          } catch (...) {
            const std::lock_guard lock(error_mutex);
            if (!error) error = std::current_exception();
          }
        }
      });
    }
  }
  if (error) std::rethrow_exception(error);
}

std::vector<FeatureVector> extract_all(const std::vector<Image>& images, const ExtractorConfig& cfg,
                                       int threads, ExtractionStats* stats) {
  cfg.validate();
  std::vector<FeatureVector> out(images.size());
  std::vector<OpCounter> counters(images.size());
  std::vector<double> seconds(images.size(), 0.0);
  parallel_for(images.size(), threads, [&](std::size_t i) {
    const auto start = std::chrono::steady_clock::now();
    out[i] = extract(images[i], cfg, &counters[i]);
    seconds[i] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  });
  if (stats != nullptr) {
    for (const auto& c : counters) stats->counter += c;
    stats->seconds = std::move(seconds);
  }
  return out;
}

std::vector<Image> load_images(const std::vector<std::filesystem::path>& paths, int threads) {
  std::vector<Image> images(paths.size());
  std::vector<std::string> errors(paths.size());
  parallel_for(paths.size(), threads, [&](std::size_t i) {
    try {
      images[i] = load_image(paths[i]);
    } catch (const InputError& e) {
      errors[i] = e.what();
    }
  });
  std::string message;
  std::size_t failed = 0;
  for (const auto& e : errors) {
    if (e.empty()) continue;
    ++failed;
    message += "\n  " + e;
  }
  if (failed > 0) {
    throw InputError("failed to load " + std::to_string(failed) + " image(s):" + message);
  }
  return images;
}

json config_json(const ExtractorConfig& cfg) {
  json j;
  j["descriptor"] = descriptor_name(cfg);
  j["P"] = cfg.descriptor.resolution.neighbors();
  j["R"] = cfg.descriptor.resolution.radius();
  j["blocks"] = {cfg.blocks_x, cfg.blocks_y};
  j["normalization"] = cfg.normalization == Normalization::kPerBlockL1 ? "per-block-l1" : "none";
  j["sqrt"] = cfg.sqrt_transform;
  if (cfg.descriptor.kind == PatternKind::kCsLbp) j["cs_threshold"] = cfg.descriptor.cs_threshold;
  if (cfg.descriptor.kind == PatternKind::kHigo) j["higo_bins"] = cfg.descriptor.higo_bins;
  if (cfg.sbgpm) j["sbgpm"] = {{"s", cfg.sbgpm->channels}, {"window", cfg.sbgpm->window}};
  j["dims"] = feature_layout(cfg).dims();
  return j;
}

ExtractorConfig parse_config_spec(const std::string& spec, const ExtractorConfig& defaults) {
  ExtractorConfig cfg = defaults;
  const auto at = spec.find('@');
  const std::string name = spec.substr(0, at);
  if (name == "sbgpm") {
    cfg.descriptor.kind = PatternKind::kSbgp;
    if (!cfg.sbgpm) cfg.sbgpm = OigmParams{};
  } else {
    cfg.descriptor.kind = parse_pattern_kind(name);
    cfg.sbgpm.reset();
  }
  if (at != std::string::npos) {
    const std::string pr = spec.substr(at + 1);
    const auto comma = pr.find(',');
    try {
      std::size_t used_p = 0;
      std::size_t used_r = 0;
      if (comma == std::string::npos) throw std::invalid_argument(pr);
      const int p = std::stoi(pr.substr(0, comma), &used_p);
      const int r = std::stoi(pr.substr(comma + 1), &used_r);
      if (used_p != comma || used_r != pr.size() - comma - 1) throw std::invalid_argument(pr);
      cfg.descriptor.resolution = SpatialResolution(p, r);
    } catch (const std::logic_error&) {
      throw InputError("bad resolution in config '" + spec + "', expected name@P,R");
    }
  }
  cfg.validate();
  return cfg;
}

IdentificationResult identify(const DatasetManifest& manifest,
                              const std::vector<FeatureVector>& features, SimilarityKind kind) {
  if (features.size() != manifest.rows.size()) {
    throw InvariantError("feature count does not match manifest rows");
  }
  Gallery gallery;
  for (std::size_t i = 0; i < manifest.rows.size(); ++i) {
    const auto& row = manifest.rows[i];
    if (row.role == Role::kGallery) gallery.add(features[i], row.subject_id, row.path);
  }
  if (gallery.empty()) throw InputError("manifest has no gallery rows");

  IdentificationResult result;
  for (std::size_t i = 0; i < manifest.rows.size(); ++i) {
    const auto& row = manifest.rows[i];
    if (row.role != Role::kProbe) continue;
    const Match m = nn_classify(gallery, features[i], kind);
    const bool hit = m.subject_id == row.subject_id;
    auto& g = result.groups[row.group];
    ++g.probes;
    ++result.overall.probes;
    if (hit) {
      ++g.correct;
      ++result.overall.correct;
    }
    ++result.confusion[{row.subject_id, m.subject_id}];
  }
  if (result.overall.probes == 0) throw InputError("manifest has no probe rows");
  return result;
}

namespace {

json tally_json(const GroupTally& t) {
  return {{"probes", t.probes}, {"correct", t.correct}, {"rate", t.rate()}};
}

json timing_json(const ExtractionStats& stats, const std::vector<Image>& images) {
  std::vector<double> s = stats.seconds;
  double total = 0.0;
  double pixels = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    total += s[i];
    pixels += static_cast<double>(images[i].size());
  }
  double median = 0.0;
  if (!s.empty()) {
    std::sort(s.begin(), s.end());
    median = s.size() % 2 == 1 ? s[s.size() / 2] : 0.5 * (s[s.size() / 2 - 1] + s[s.size() / 2]);
  }
  return {{"mean_seconds_per_image", s.empty() ? 0.0 : total / static_cast<double>(s.size())},
          {"median_seconds_per_image", median},
          {"pixels_per_second", total > 0.0 ? pixels / total : 0.0}};
}

json counter_json(const OpCounter& c) {
  return {{"pixels", c.pixels},
          {"comparisons", c.comparisons()},
          {"units", c.units()},
          {"comparisons_per_pixel", c.comparisons_per_pixel()},
          {"units_per_pixel", c.units_per_pixel()}};
}

}  // namespace

json identification_report(const DatasetManifest& manifest, const ExtractorConfig& cfg,
                           SimilarityKind kind, int threads) {
  std::vector<std::filesystem::path> paths;
  for (const auto& row : manifest.rows) paths.push_back(manifest.resolve(row.path));
  const auto images = load_images(paths, threads);
  ExtractionStats stats;
  const auto features = extract_all(images, cfg, threads, &stats);

  const IdentificationResult primary = identify(manifest, features, kind);
  json report;
  report["command"] = "evaluate-id";
  report["config"] = config_json(cfg);
  report["similarity"] = std::string(to_string(kind));
  report["dims"] = feature_layout(cfg).dims();
  report["gallery_size"] = std::count_if(manifest.rows.begin(), manifest.rows.end(),
                                         [](const DatasetRow& r) { return r.role == Role::kGallery; });
  report["probes"] = primary.overall.probes;
  report["correct"] = primary.overall.correct;
  report["recognition_rate"] = primary.overall.rate();
  json groups = json::array();
  for (const auto& [name, tally] : primary.groups) {
    json g = tally_json(tally);
    g["group"] = name;
    groups.push_back(g);
  }
  report["groups"] = groups;
  json confusion = json::array();
  for (const auto& [key, count] : primary.confusion) {
    confusion.push_back({{"true", key.first}, {"predicted", key.second}, {"count", count}});
  }
  report["confusion"] = confusion;
  json measures;
  for (const auto k : {SimilarityKind::kHistogramIntersection, SimilarityKind::kChiSquare,
                       SimilarityKind::kEuclidean, SimilarityKind::kCosine}) {
    measures[std::string(to_string(k))] = tally_json(identify(manifest, features, k).overall);
  }
  report["all_measures"] = measures;
  report["counters"] = counter_json(stats.counter);
  report["timing"] = timing_json(stats, images);
  return report;
}

json to_json(const VerificationResult& result) {
  json folds = json::array();
  for (const auto& f : result.folds) {
    folds.push_back({{"fold", f.fold},
                     {"pairs", f.pairs},
                     {"threshold", f.threshold},
                     {"accuracy", f.accuracy}});
  }
  json roc = json::array();
  for (const auto& p : result.roc) {
    roc.push_back({{"threshold", p.threshold},
                   {"false_accept", p.false_accept},
                   {"true_accept", p.true_accept}});
  }
  return {{"folds", folds},
          {"mean_accuracy", result.mean_accuracy},
          {"standard_error", result.standard_error},
          {"accept_rule", result.accept_rule},
          {"roc", roc}};
}

json verification_report(const PairManifest& manifest, const ExtractorConfig& cfg,
                         SimilarityKind kind, int threads) {
  if (manifest.fold_count() < 2) throw InputError("pair manifest needs at least 2 folds");
  std::vector<std::string> unique;
  std::map<std::string, std::size_t> index;
  for (const auto& row : manifest.rows) {
    for (const auto* p : {&row.path_a, &row.path_b}) {
      if (index.emplace(*p, unique.size()).second) unique.push_back(*p);
    }
  }
  std::vector<std::filesystem::path> paths;
  for (const auto& p : unique) paths.push_back(manifest.resolve(p));
  const auto images = load_images(paths, threads);
  ExtractionStats stats;
  const auto features = extract_all(images, cfg, threads, &stats);

  std::vector<FeaturePair> pairs;
  for (const auto& row : manifest.rows) {
    pairs.push_back({&features[index.at(row.path_a)], &features[index.at(row.path_b)], row.same,
                     row.fold});
  }
  json report;
  report["command"] = "evaluate-verify";
  report["config"] = config_json(cfg);
  report["similarity"] = std::string(to_string(kind));
  report["dims"] = feature_layout(cfg).dims();
  report["pairs"] = manifest.rows.size();
  report["verification"] = to_json(verify_pairs(pairs, kind));
  report["counters"] = counter_json(stats.counter);
  report["timing"] = timing_json(stats, images);
  return report;
}

std::vector<ExtractorConfig> default_bench_configs(const ExtractorConfig& defaults) {
  std::vector<ExtractorConfig> configs;
  for (const int r : {3, 2, 1}) {
    for (const auto kind : {PatternKind::kLbpU2, PatternKind::kLbpRiu2, PatternKind::kSbgp}) {
      ExtractorConfig cfg = defaults;
      cfg.sbgpm.reset();
      cfg.descriptor.kind = kind;
      cfg.descriptor.resolution = SpatialResolution::from_radius(r);
      configs.push_back(cfg);
    }
  }
  return configs;
}

std::vector<BenchRow> run_bench(const std::vector<Image>& images,
                                const std::vector<ExtractorConfig>& configs, int iterations,
                                int warmup) {
  if (images.empty()) throw InputError("bench needs at least one image");
  if (iterations < 1) throw InputError("bench needs at least one timed iteration");
  double pixels = 0.0;
  for (const auto& img : images) pixels += static_cast<double>(img.size());

  std::vector<BenchRow> rows;
  for (const auto& cfg : configs) {
    cfg.validate();
    BenchRow row;
    row.descriptor = descriptor_name(cfg);
    row.neighbors = cfg.descriptor.resolution.neighbors();
    row.radius = cfg.descriptor.resolution.radius();
    row.labels = bin_count(cfg.descriptor);
    row.dims = feature_layout(cfg).dims();
    row.iterations = iterations;

    OpCounter counter;
    for (const auto& img : images) extract(img, cfg, &counter);
    row.units_per_pixel = counter.units_per_pixel();
    row.comparisons_per_pixel = counter.comparisons_per_pixel();

    for (int w = 0; w < warmup; ++w) {
      for (const auto& img : images) extract(img, cfg);
    }
    std::vector<double> means;
    double sink = 0.0;
    for (int it = 0; it < iterations; ++it) {
      const auto start = std::chrono::steady_clock::now();
      for (const auto& img : images) sink += extract(img, cfg).values[0];
      const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      means.push_back(s / static_cast<double>(images.size()));
    }
    if (sink < 0.0) throw InvariantError("negative feature value");
    double total = 0.0;
    for (const double m : means) total += m;
    row.mean_seconds = total / static_cast<double>(means.size());
    std::sort(means.begin(), means.end());
    const std::size_t n = means.size();
    row.median_seconds = n % 2 == 1 ? means[n / 2] : 0.5 * (means[n / 2 - 1] + means[n / 2]);
    row.pixels_per_second =
        row.mean_seconds > 0.0 ? pixels / static_cast<double>(images.size()) / row.mean_seconds : 0.0;
    rows.push_back(row);
  }
  return rows;
}

json bench_report(const std::vector<BenchRow>& rows) {
  json configs = json::array();
  json timing = json::array();
  for (const auto& r : rows) {
    configs.push_back({{"descriptor", r.descriptor},
                       {"P", r.neighbors},
                       {"R", r.radius},
                       {"units_per_pixel", r.units_per_pixel},
                       {"comparisons_per_pixel", r.comparisons_per_pixel},
                       {"labels", r.labels},
                       {"dims", r.dims}});
    timing.push_back({{"descriptor", r.descriptor},
                      {"P", r.neighbors},
                      {"R", r.radius},
                      {"iterations", r.iterations},
                      {"mean_seconds_per_image", r.mean_seconds},
                      {"median_seconds_per_image", r.median_seconds},
                      {"pixels_per_second", r.pixels_per_second}});
  }
  return {{"command", "bench"}, {"configs", configs}, {"timing", timing}};
}

std::vector<PerturbLevel> run_perturbation_study(const std::vector<Image>& bases,
                                                 const std::vector<Perturbation>& levels,
                                                 const std::vector<ExtractorConfig>& configs,
                                                 SimilarityKind kind, std::uint64_t seed,
                                                 int probes_per_subject, int threads,
                                                 std::vector<std::string> subject_ids) {
  if (bases.empty()) throw InputError("perturbation study needs at least one gallery image");
  if (probes_per_subject < 1) throw InputError("probes per subject must be >= 1");
  if (subject_ids.empty()) {
    for (std::size_t s = 0; s < bases.size(); ++s) subject_ids.push_back(std::to_string(s));
  }
  if (subject_ids.size() != bases.size()) throw InputError("one subject id per base image expected");

  std::vector<PerturbLevel> out;
  for (const auto& level : levels) out.push_back({level, {}});

  for (const auto& cfg : configs) {
    cfg.validate();
    const bool plain_sbgp = cfg.descriptor.kind == PatternKind::kSbgp && !cfg.sbgpm;
    const auto gallery_features = extract_all(bases, cfg, threads);
    Gallery gallery;
    for (std::size_t s = 0; s < bases.size(); ++s) {
      gallery.add(gallery_features[s], subject_ids[s]);
    }
    double clean_ns = 0.0;
    if (plain_sbgp) {
      for (const auto& b : bases) {
        clean_ns += sbgp_map(b, cfg.descriptor.resolution).non_structural_fraction();
      }
      clean_ns /= static_cast<double>(bases.size());
    }

    for (std::size_t l = 0; l < levels.size(); ++l) {
      const std::size_t n = bases.size() * static_cast<std::size_t>(probes_per_subject);
      std::vector<std::uint8_t> hits(n, 0);
      std::vector<double> ns(n, 0.0);
      parallel_for(n, threads, [&](std::size_t i) {
        const std::size_t subject = i / static_cast<std::size_t>(probes_per_subject);
        const std::size_t repeat = i % static_cast<std::size_t>(probes_per_subject);
        const Image probe = apply_perturbation(
            bases[subject], levels[l], mix_seed(seed, subject, (l << 20) | repeat));
        const Match m = nn_classify(gallery, extract(probe, cfg), kind);
        hits[i] = m.subject_id == subject_ids[subject] ? 1 : 0;
        if (plain_sbgp) ns[i] = sbgp_map(probe, cfg.descriptor.resolution).non_structural_fraction();
      });

      PerturbOutcome o;
      o.descriptor = descriptor_name(cfg);
      o.neighbors = cfg.descriptor.resolution.neighbors();
      o.radius = cfg.descriptor.resolution.radius();
      o.tally.probes = n;
      for (const auto h : hits) o.tally.correct += h;
      if (plain_sbgp) {
        o.has_non_structural = true;
        double sum = 0.0;
        for (const double v : ns) sum += v;
        o.ns_mean = sum / static_cast<double>(n);
        o.ns_min = *std::min_element(ns.begin(), ns.end());
        o.ns_max = *std::max_element(ns.begin(), ns.end());
        o.ns_clean_mean = clean_ns;
      }
      out[l].outcomes.push_back(o);
    }
  }
  return out;
}

json perturb_report(const std::vector<PerturbLevel>& levels, SimilarityKind kind) {
  json jl = json::array();
  for (const auto& level : levels) {
    json results = json::array();
    for (const auto& o : level.outcomes) {
      json r = {{"descriptor", o.descriptor}, {"P", o.neighbors}, {"R", o.radius}};
      r["probes"] = o.tally.probes;
      r["correct"] = o.tally.correct;
      r["rate"] = o.tally.rate();
      if (o.has_non_structural) {
        r["non_structural_fraction"] = {{"mean", o.ns_mean},
                                        {"min", o.ns_min},
                                        {"max", o.ns_max},
                                        {"clean_mean", o.ns_clean_mean},
                                        {"above_clean", o.ns_mean > o.ns_clean_mean}};
      }
      results.push_back(r);
    }
    jl.push_back({{"perturbation", level.perturbation.name},
                  {"monotone", level.perturbation.is_monotone()},
                  {"results", results}});
  }
  return {{"command", "perturb"}, {"similarity", std::string(to_string(kind))}, {"levels", jl}};
}

}  // namespace sbgp::harness

#include "sbgp/harness/cli.hpp"

#include "sbgp/harness/experiments.hpp"
#include "sbgp/harness/manifest.hpp"
#include "sbgp/harness/synthetic.hpp"
#include "sbgp/patterns.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

namespace sbgp::harness {
namespace {

struct CommonOptions {
  std::string descriptor = "sbgp";
  std::string pr = "16,2";
  std::string blocks = "6x6";
  std::string similarity = "hi";
  std::string normalization = "l1";
  bool sqrt = false;
  int sbgpm_s = 3;
  int sbgpm_window = 7;
  double cs_threshold = 0.01;
  int higo_bins = 4;
  std::uint64_t seed = 7;
  std::string out;
  std::string manifest;
  int threads = 1;
};

std::pair<int, int> parse_pair(const std::string& text, char sep, const char* flag) {
  const auto pos = text.find(sep);
  try {
    if (pos == std::string::npos) throw std::invalid_argument(text);
    std::size_t used_a = 0;
    std::size_t used_b = 0;
    const int a = std::stoi(text.substr(0, pos), &used_a);
    const int b = std::stoi(text.substr(pos + 1), &used_b);
    if (used_a != pos || used_b != text.size() - pos - 1) throw std::invalid_argument(text);
    return {a, b};
  } catch (const std::logic_error&) {
    throw InputError(std::string("malformed ") + flag + " value '" + text + "'");
  }
}

ExtractorConfig make_config(const CommonOptions& o) {
  ExtractorConfig cfg;
  const auto [p, r] = parse_pair(o.pr, ',', "--pr");
  cfg.descriptor.resolution = SpatialResolution(p, r);
  const auto [bx, by] = parse_pair(o.blocks, 'x', "--blocks");
  cfg.blocks_x = bx;
  cfg.blocks_y = by;
  cfg.descriptor.cs_threshold = o.cs_threshold;
  cfg.descriptor.higo_bins = o.higo_bins;
  cfg.sqrt_transform = o.sqrt;
  if (o.normalization == "l1") {
    cfg.normalization = Normalization::kPerBlockL1;
  } else if (o.normalization == "none") {
    cfg.normalization = Normalization::kNone;
  } else {
    throw InputError("--normalization must be l1 or none");
  }
  if (o.descriptor == "sbgpm") {
    cfg.descriptor.kind = PatternKind::kSbgp;
    cfg.sbgpm = OigmParams{o.sbgpm_s, o.sbgpm_window};
  } else {
    cfg.descriptor.kind = parse_pattern_kind(o.descriptor);
  }
  cfg.validate();
  return cfg;
}

void add_extractor_flags(CLI::App* cmd, CommonOptions& o) {
  cmd->add_option("--descriptor", o.descriptor, "sbgp, sbgpm, lbp-u2, lbp-riu2, cs-lbp, higo")
      ->check(CLI::IsMember({"sbgp", "sbgpm", "lbp-u2", "lbp-riu2", "cs-lbp", "higo"}));
  cmd->add_option("--pr", o.pr, "spatial resolution P,R");
  cmd->add_option("--blocks", o.blocks, "block grid NxM");
  cmd->add_flag("--sqrt", o.sqrt, "element-wise square root of the features");
  cmd->add_option("--sbgpm-s", o.sbgpm_s, "number of OIGM channels");
  cmd->add_option("--sbgpm-window", o.sbgpm_window, "OIGM window side (odd)");
  cmd->add_option("--cs-threshold", o.cs_threshold, "CS-LBP threshold on [0,1] intensities");
  cmd->add_option("--higo-bins", o.higo_bins, "HIGO orientation bins");
  cmd->add_option("--normalization", o.normalization, "l1 or none");
  cmd->add_option("--threads", o.threads, "worker threads");
}

void add_similarity_flag(CLI::App* cmd, CommonOptions& o) {
  cmd->add_option("--similarity", o.similarity, "hi, chi2, l2, cos")
      ->check(CLI::IsMember({"hi", "chi2", "l2", "cos"}));
}

// Writes to --out when set, otherwise to `out`.
void emit(const std::string& path, std::ostream& out, const std::string& text) {
  if (path.empty()) {
    out << text;
    return;
  }
  std::ofstream file(path);
  if (!file) throw InputError("cannot write '" + path + "'");
  file << text;
  if (!file) throw InputError("failed writing '" + path + "'");
}

std::vector<ExtractorConfig> configs_from(const std::vector<std::string>& specs,
                                          const ExtractorConfig& defaults) {
  std::vector<ExtractorConfig> configs;
  for (const auto& s : specs) configs.push_back(parse_config_spec(s, defaults));
  return configs;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Structural binary gradient pattern descriptors and evaluation harness", "sbgp"};
  app.require_subcommand(1);
  CommonOptions o;

  auto* extract_cmd = app.add_subcommand("extract", "write feature vectors for a manifest as CSV");
  extract_cmd->add_option("--manifest", o.manifest, "dataset manifest CSV")->required();
  extract_cmd->add_option("--out", o.out, "output CSV (default stdout)");
  add_extractor_flags(extract_cmd, o);

  auto* id_cmd = app.add_subcommand("evaluate-id", "nearest-neighbour identification");
  id_cmd->add_option("--manifest", o.manifest, "dataset manifest CSV")->required();
  id_cmd->add_option("--out", o.out, "output JSON (default stdout)");
  add_extractor_flags(id_cmd, o);
  add_similarity_flag(id_cmd, o);

  auto* verify_cmd = app.add_subcommand("evaluate-verify", "cross-fold pair verification");
  verify_cmd->add_option("--manifest", o.manifest, "pair manifest CSV")->required();
  verify_cmd->add_option("--out", o.out, "output JSON (default stdout)");
  add_extractor_flags(verify_cmd, o);
  add_similarity_flag(verify_cmd, o);

  std::vector<std::string> bench_images;
  std::vector<std::string> config_specs;
  int iterations = 20;
  auto* bench_cmd = app.add_subcommand("bench", "complexity and timing per descriptor");
  bench_cmd->add_option("--manifest", o.manifest, "dataset manifest CSV");
  bench_cmd->add_option("--image", bench_images, "image path (repeatable)");
  bench_cmd->add_option("--config", config_specs,
                        "descriptor@P,R (repeatable; default: LBP u2/riu2 and SBGP at R=1..3)");
  bench_cmd->add_option("--iterations", iterations, "timed iterations (>= 20)");
  bench_cmd->add_option("--out", o.out, "output JSON (default stdout)");
  add_extractor_flags(bench_cmd, o);

  std::vector<std::string> level_specs;
  int probes_per_subject = 1;
  auto* perturb_cmd = app.add_subcommand("perturb", "identification under synthetic perturbations");
  perturb_cmd->add_option("--manifest", o.manifest, "dataset manifest CSV (gallery rows are used)")
      ->required();
  perturb_cmd->add_option("--level", level_specs, "perturbation, e.g. affine:2,30 or ramp:0.4+noise:6")
      ->required();
  perturb_cmd->add_option("--config", config_specs, "descriptor@P,R (repeatable)");
  perturb_cmd->add_option("--probes-per-subject", probes_per_subject, "perturbed copies per level");
  perturb_cmd->add_option("--seed", o.seed, "noise/occlusion seed");
  perturb_cmd->add_option("--out", o.out, "output JSON (default stdout)");
  add_extractor_flags(perturb_cmd, o);
  add_similarity_flag(perturb_cmd, o);

  int labels_p = 0;
  auto* labels_cmd = app.add_subcommand("labels", "print the structural label set as JSON");
  labels_cmd->add_option("--P", labels_p, "neighbour count")->required();
  labels_cmd->add_option("--out", o.out, "output JSON (default stdout)");

  int subjects = 10;
  int variants = 3;
  int size = 100;
  auto* synth_cmd = app.add_subcommand("synth", "write a seeded synthetic dataset");
  synth_cmd->add_option("--subjects", subjects, "number of subjects (>= 2)");
  synth_cmd->add_option("--variants", variants, "images per subject; variant 0 is clean");
  synth_cmd->add_option("--size", size, "image side in pixels");
  synth_cmd->add_option("--seed", o.seed, "texture seed");
  synth_cmd->add_option("--out", o.out, "output directory")->required();

  std::vector<const char*> argv{"sbgp"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInputError;
  }

  try {
    if (*extract_cmd) {
      const ExtractorConfig cfg = make_config(o);
      const auto manifest = read_dataset_manifest(o.manifest);
      std::vector<std::filesystem::path> paths;
      for (const auto& row : manifest.rows) paths.push_back(manifest.resolve(row.path));
      const auto features = extract_all(load_images(paths, o.threads), cfg, o.threads);
      std::vector<FeatureRow> rows;
      for (std::size_t i = 0; i < features.size(); ++i) {
        rows.push_back({manifest.rows[i].path, manifest.rows[i].subject_id, &features[i]});
      }
      std::ostringstream csv;
      write_feature_csv(csv, rows, feature_layout(cfg).dims());
      emit(o.out, out, csv.str());
    } else if (*id_cmd) {
      const ExtractorConfig cfg = make_config(o);
      const auto report = identification_report(read_dataset_manifest(o.manifest), cfg,
                                                parse_similarity(o.similarity), o.threads);
      emit(o.out, out, report.dump(2) + "\n");
    } else if (*verify_cmd) {
      const ExtractorConfig cfg = make_config(o);
      const auto report = verification_report(read_pair_manifest(o.manifest), cfg,
                                              parse_similarity(o.similarity), o.threads);
      emit(o.out, out, report.dump(2) + "\n");
    } else if (*bench_cmd) {
      const ExtractorConfig defaults = make_config(o);
      if (iterations < 20) throw InputError("--iterations must be >= 20");
      std::vector<std::filesystem::path> paths(bench_images.begin(), bench_images.end());
      if (!o.manifest.empty()) {
        const auto manifest = read_dataset_manifest(o.manifest);
        for (const auto& row : manifest.rows) paths.push_back(manifest.resolve(row.path));
      }
      if (paths.empty()) throw InputError("bench needs --image or --manifest");
      const auto configs = config_specs.empty() ? default_bench_configs(defaults)
                                                : configs_from(config_specs, defaults);
      const auto rows = run_bench(load_images(paths, o.threads), configs, iterations);
      emit(o.out, out, bench_report(rows).dump(2) + "\n");
    } else if (*perturb_cmd) {
      const ExtractorConfig defaults = make_config(o);
      const auto manifest = read_dataset_manifest(o.manifest);
      std::vector<std::filesystem::path> paths;
      std::vector<std::string> ids;
      for (const auto& row : manifest.rows) {
        if (row.role != Role::kGallery) continue;
        paths.push_back(manifest.resolve(row.path));
        ids.push_back(row.subject_id);
      }
      if (paths.empty()) throw InputError("manifest has no gallery rows");
      std::vector<Perturbation> levels;
      for (const auto& spec : level_specs) levels.push_back(parse_perturbation(spec));
      const auto configs = config_specs.empty() ? std::vector<ExtractorConfig>{defaults}
                                                : configs_from(config_specs, defaults);
      const SimilarityKind kind = parse_similarity(o.similarity);
      const auto result = run_perturbation_study(load_images(paths, o.threads), levels, configs,
                                                 kind, o.seed, probes_per_subject, o.threads, ids);
      emit(o.out, out, perturb_report(result, kind).dump(2) + "\n");
    } else if (*labels_cmd) {
      const StructuralLabelSet set = structural_labels(labels_p);
      nlohmann::json j = {{"P", set.neighbors()}, {"k", set.directions()}, {"labels", set.labels()}};
      emit(o.out, out, j.dump() + "\n");
    } else if (*synth_cmd) {
      const auto ds = make_synthetic_dataset(subjects, variants, o.seed, size);
      const auto manifest_path = write_synthetic_dataset(ds, o.out);
      err << "wrote " << ds.images.size() << " images and " << manifest_path.string() << "\n";
    }
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kExitInternalError;
  }
  return kExitOk;
}

}  // namespace sbgp::harness

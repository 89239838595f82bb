#ifndef SBGP_HARNESS_SYNTHETIC_HPP
#define SBGP_HARNESS_SYNTHETIC_HPP

#include "sbgp/core.hpp"
#include "sbgp/harness/manifest.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace sbgp::harness {

/// Seeded subject texture: oriented sinusoids plus Gaussian blobs, rescaled to
/// [30, 225] and rounded to integers. Distinct subject indices give distinct
/// textures for the same seed.
Image subject_texture(int subject, std::uint64_t seed, int size = 100);

enum class PerturbKind { kAffine, kGamma, kRamp, kNoise, kOcclude };

// One intensity transform. Parameters:
//   affine  a, b     I -> a I + b, a > 0
//   gamma   g        I -> 255 (I / 255)^g, g > 0
//   ramp    s        I -> I (1 + s (2x / (w - 1) - 1)), 0 <= s < 1
//   noise   sigma    I -> I + N(0, sigma^2), sigma >= 0
//   occlude side     a side x side zero patch at a seeded position
struct PerturbStep {
  PerturbKind kind = PerturbKind::kAffine;
  std::vector<double> params;
};

// A level is a sequence of steps applied left to right, written
// `kind:p1,p2+kind:p1` (e.g. `ramp:0.4+noise:6`).
struct Perturbation {
  std::vector<PerturbStep> steps;
  std::string name;

  bool is_monotone() const;
};

Perturbation parse_perturbation(const std::string& spec);

/// Applies every step; `seed` drives the noise and occlusion placement.
Image apply_perturbation(const Image& image, const Perturbation& p, std::uint64_t seed);

/// Variant v > 0 of the synthetic suite uses default_variant_suite()[(v-1) % n].
const std::vector<Perturbation>& default_variant_suite();

struct SyntheticDataset {
  DatasetManifest manifest;
  std::vector<Image> images;  // 8-bit quantised, manifest order
};

/// Builds the dataset in memory: per subject, variant 0 is the clean texture
/// (role gallery), later variants are perturbed probes. Images are quantised
/// to 8 bits exactly as they are written to disk.
SyntheticDataset make_synthetic_dataset(int n_subjects, int variants, std::uint64_t seed,
                                        int size = 100);

/// Writes the PGMs and `manifest.csv` into `out_dir`; returns the manifest path.
std::filesystem::path write_synthetic_dataset(const SyntheticDataset& dataset,
                                              const std::filesystem::path& out_dir);

/// Deterministic per-item seed derived from a base seed and indices.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0);

}  // namespace sbgp::harness

#endif  // SBGP_HARNESS_SYNTHETIC_HPP

#include "sbgp/harness/synthetic.hpp"

#include "sbgp/image_io.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <random>

namespace sbgp::harness {

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(a >> 32),
                    static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32)};
  std::array<std::uint32_t, 2> out{};
  seq.generate(out.begin(), out.end());
  return (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
}

Image subject_texture(int subject, std::uint64_t seed, int size) {
  if (size < 8) throw InputError("synthetic images must be at least 8x8");
  std::mt19937_64 rng(mix_seed(seed, static_cast<std::uint64_t>(subject), 0x7e47));
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const auto uniform = [&](double lo, double hi) { return lo + (hi - lo) * unit(rng); };

  Image img = Image::Zero(size, size);
  for (int w = 0; w < 5; ++w) {
    const double freq = uniform(0.04, 0.2);
    const double angle = uniform(0.0, std::numbers::pi);
    const double phase = uniform(0.0, 2.0 * std::numbers::pi);
    const double amp = uniform(0.5, 1.5);
    const double kx = 2.0 * std::numbers::pi * freq * std::cos(angle);
    const double ky = 2.0 * std::numbers::pi * freq * std::sin(angle);
    for (int r = 0; r < size; ++r) {
      for (int c = 0; c < size; ++c) img(r, c) += amp * std::sin(kx * c + ky * r + phase);
    }
  }
  for (int b = 0; b < 8; ++b) {
    const double cx = uniform(0.0, size);
    const double cy = uniform(0.0, size);
    const double sigma = uniform(4.0, 14.0);
    const double amp = uniform(-2.0, 2.0);
    for (int r = 0; r < size; ++r) {
      for (int c = 0; c < size; ++c) {
        const double d2 = (c - cx) * (c - cx) + (r - cy) * (r - cy);
        img(r, c) += amp * std::exp(-d2 / (2.0 * sigma * sigma));
      }
    }
  }
  const double lo = img.minCoeff();
  const double hi = img.maxCoeff();
  img = ((img.array() - lo) * (195.0 / (hi - lo)) + 30.0).round().matrix();
  return img;
}

bool Perturbation::is_monotone() const {
  for (const auto& s : steps) {
    if (s.kind != PerturbKind::kAffine && s.kind != PerturbKind::kGamma) return false;
  }
  return true;
}

namespace {

std::vector<double> parse_numbers(const std::string& text, const std::string& spec) {
  std::vector<double> values;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto comma = text.find(',', start);
    const std::string item =
        text.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
    if (item.empty() || ec != std::errc() || ptr != item.data() + item.size()) {
      throw InputError("perturbation '" + spec + "': bad number '" + item + "'");
    }
    values.push_back(v);
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return values;
}

PerturbStep parse_step(const std::string& text, const std::string& spec) {
  const auto colon = text.find(':');
  const std::string kind = text.substr(0, colon);
  const std::vector<double> params =
      colon == std::string::npos ? std::vector<double>{} : parse_numbers(text.substr(colon + 1), spec);
  const auto expect = [&](std::size_t n) {
    if (params.size() != n) {
      throw InputError("perturbation '" + spec + "': " + kind + " takes " + std::to_string(n) +
                       " parameter(s)");
    }
  };
  PerturbStep step;
  step.params = params;
  if (kind == "affine") {
    expect(2);
    if (!(params[0] > 0.0)) throw InputError("perturbation '" + spec + "': affine needs a > 0");
    step.kind = PerturbKind::kAffine;
  } else if (kind == "gamma") {
    expect(1);
    if (!(params[0] > 0.0)) throw InputError("perturbation '" + spec + "': gamma must be > 0");
    step.kind = PerturbKind::kGamma;
  } else if (kind == "ramp") {
    expect(1);
    if (!(params[0] >= 0.0 && params[0] < 1.0)) {
      throw InputError("perturbation '" + spec + "': ramp severity must be in [0, 1)");
    }
    step.kind = PerturbKind::kRamp;
  } else if (kind == "noise") {
    expect(1);
    if (!(params[0] >= 0.0)) throw InputError("perturbation '" + spec + "': sigma must be >= 0");
    step.kind = PerturbKind::kNoise;
  } else if (kind == "occlude") {
    expect(1);
    if (!(params[0] >= 1.0) || params[0] != std::floor(params[0])) {
      throw InputError("perturbation '" + spec + "': occlusion side must be a positive integer");
    }
    step.kind = PerturbKind::kOcclude;
  } else {
    throw InputError("perturbation '" + spec + "': unknown kind '" + kind + "'");
  }
  return step;
}

}  // namespace

Perturbation parse_perturbation(const std::string& spec) {
  if (spec.empty()) throw InputError("empty perturbation spec");
  Perturbation p;
  p.name = spec;
  std::size_t start = 0;
  while (true) {
    const auto plus = spec.find('+', start);
    p.steps.push_back(parse_step(
        spec.substr(start, plus == std::string::npos ? std::string::npos : plus - start), spec));
    if (plus == std::string::npos) break;
    start = plus + 1;
  }
  return p;
}

Image apply_perturbation(const Image& image, const Perturbation& p, std::uint64_t seed) {
  Image out = image;
  std::mt19937_64 rng(mix_seed(seed, 0x9e37));
  for (const auto& step : p.steps) {
    switch (step.kind) {
      case PerturbKind::kAffine:
        out = (out.array() * step.params[0] + step.params[1]).matrix();
        break;
      case PerturbKind::kGamma:
        out = ((out.array() / 255.0).pow(step.params[0]) * 255.0).matrix();
        break;
      case PerturbKind::kRamp: {
        const double s = step.params[0];
        const Eigen::Index w = out.cols();
        for (Eigen::Index c = 0; c < w; ++c) {
          const double x = w > 1 ? 2.0 * static_cast<double>(c) / static_cast<double>(w - 1) - 1.0 : 0.0;
          out.col(c) *= 1.0 + s * x;
        }
        break;
      }
      case PerturbKind::kNoise: {
        std::normal_distribution<double> noise(0.0, step.params[0]);
        for (Eigen::Index i = 0; i < out.size(); ++i) out.data()[i] += noise(rng);
        break;
      }
      case PerturbKind::kOcclude: {
        const auto side = static_cast<Eigen::Index>(step.params[0]);
        if (side > out.rows() || side > out.cols()) {
          throw InputError("occlusion patch " + std::to_string(side) + " exceeds the image");
        }
        std::uniform_int_distribution<Eigen::Index> row(0, out.rows() - side);
        std::uniform_int_distribution<Eigen::Index> col(0, out.cols() - side);
        const Eigen::Index r0 = row(rng);
        const Eigen::Index c0 = col(rng);
        out.block(r0, c0, side, side).setZero();
        break;
      }
    }
  }
  return out;
}

const std::vector<Perturbation>& default_variant_suite() {
  static const std::vector<Perturbation> suite = {
      parse_perturbation("affine:1.3,20"), parse_perturbation("gamma:0.6"),
      parse_perturbation("ramp:0.5"),      parse_perturbation("noise:10"),
      parse_perturbation("occlude:20"),
  };
  return suite;
}

SyntheticDataset make_synthetic_dataset(int n_subjects, int variants, std::uint64_t seed,
                                        int size) {
  if (n_subjects < 2) throw InputError("synthetic dataset needs at least 2 subjects");
  if (variants < 1) throw InputError("synthetic dataset needs at least 1 variant per subject");
  SyntheticDataset ds;
  const auto& suite = default_variant_suite();
  for (int s = 0; s < n_subjects; ++s) {
    const Image base = subject_texture(s, seed, size);
    char subject[32];
    std::snprintf(subject, sizeof subject, "s%03d", s);
    for (int v = 0; v < variants; ++v) {
      char file[64];
      std::snprintf(file, sizeof file, "subject_%03d_v%02d.pgm", s, v);
      if (v == 0) {
        ds.images.push_back(base);
        ds.manifest.rows.push_back({file, subject, "clean", Role::kGallery});
      } else {
        const auto& p = suite[static_cast<std::size_t>(v - 1) % suite.size()];
        ds.images.push_back(quantize_8bit(apply_perturbation(
            base, p, mix_seed(seed, static_cast<std::uint64_t>(s), static_cast<std::uint64_t>(v)))));
        ds.manifest.rows.push_back({file, subject, p.name, Role::kProbe});
      }
    }
  }
  return ds;
}

std::filesystem::path write_synthetic_dataset(const SyntheticDataset& dataset,
                                              const std::filesystem::path& out_dir) {
  std::filesystem::create_directories(out_dir);
  for (std::size_t i = 0; i < dataset.images.size(); ++i) {
    write_pgm(out_dir / dataset.manifest.rows[i].path, dataset.images[i]);
  }
  const auto manifest_path = out_dir / "manifest.csv";
  std::ofstream out(manifest_path);
  if (!out) throw InputError("cannot write '" + manifest_path.string() + "'");
  write_dataset_manifest(out, dataset.manifest);
  return manifest_path;
}

}  // namespace sbgp::harness

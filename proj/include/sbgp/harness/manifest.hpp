#ifndef SBGP_HARNESS_MANIFEST_HPP
#define SBGP_HARNESS_MANIFEST_HPP

#include "sbgp/grid.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace sbgp::harness {

enum class Role { kGallery, kProbe };

struct DatasetRow {
  std::string path;  // as written in the manifest
  std::string subject_id;
  std::string group;
  Role role = Role::kGallery;
};

// CSV with header `path,subject_id,group,role`. Relative paths resolve
// against `base_dir` (the manifest's directory when read from disk).
struct DatasetManifest {
  std::vector<DatasetRow> rows;
  std::filesystem::path base_dir;

  std::filesystem::path resolve(const std::string& path) const;
};

struct PairRow {
  std::string path_a;
  std::string path_b;
  bool same = false;
  int fold = 0;
};

// CSV with header `path_a,path_b,same,fold`; folds contiguous from 0.
struct PairManifest {
  std::vector<PairRow> rows;
  std::filesystem::path base_dir;

  std::filesystem::path resolve(const std::string& path) const;
  int fold_count() const;
};

/// Splits one CSV line on commas; double-quoted fields may contain commas and "" escapes.
std::vector<std::string> split_csv_line(const std::string& line);

/// Quotes a field when it holds a comma, quote or line break.
std::string csv_field(const std::string& text);

DatasetManifest parse_dataset_manifest(std::istream& in, const std::filesystem::path& base_dir);
DatasetManifest read_dataset_manifest(const std::filesystem::path& path);
void write_dataset_manifest(std::ostream& out, const DatasetManifest& manifest);

PairManifest parse_pair_manifest(std::istream& in, const std::filesystem::path& base_dir);
PairManifest read_pair_manifest(const std::filesystem::path& path);
void write_pair_manifest(std::ostream& out, const PairManifest& manifest);

struct FeatureRow {
  std::string path;
  std::string subject_id;
  const FeatureVector* features = nullptr;
};

/// Header `path,subject_id,dims,v0..v{dims-1}` then one row per image, values
/// with 9 significant digits. `dims` sets the header width when there are no
/// rows.
void write_feature_csv(std::ostream& out, const std::vector<FeatureRow>& rows, Eigen::Index dims);

std::string format_value(double v);

std::string_view to_string(Role role);

}  // namespace sbgp::harness

#endif  // SBGP_HARNESS_MANIFEST_HPP

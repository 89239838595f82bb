#include "sbgp/harness/manifest.hpp"

#include "sbgp/core.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>

namespace sbgp::harness {
namespace {

std::string trim(std::string s) {
  const auto not_space = [](unsigned char c) { return !std::isspace(c); };
  s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
  s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
  return s;
}

[[noreturn]] void fail(std::size_t line, const std::string& what) {
  throw InputError("manifest line " + std::to_string(line) + ": " + what);
}

int parse_int(const std::string& text, std::size_t line, const char* column) {
  int value = 0;
  const auto* first = text.data();
  const auto* last = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (text.empty() || ec != std::errc() || ptr != last) {
    fail(line, std::string("malformed ") + column + " value '" + text + "'");
  }
  return value;
}

// Reads the header and returns the data lines with their 1-based line numbers.
std::vector<std::pair<std::size_t, std::vector<std::string>>> read_table(
    std::istream& in, const std::vector<std::string>& expected_header) {
  std::string line;
  std::size_t number = 0;
  bool have_header = false;
  std::vector<std::pair<std::size_t, std::vector<std::string>>> rows;
  while (std::getline(in, line)) {
    ++number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    auto fields = split_csv_line(line);
    for (auto& f : fields) f = trim(f);
    if (!have_header) {
      if (fields != expected_header) {
        std::string want;
        for (const auto& h : expected_header) want += (want.empty() ? "" : ",") + h;
        fail(number, "expected header '" + want + "'");
      }
      have_header = true;
      continue;
    }
    if (fields.size() != expected_header.size()) {
      fail(number, "expected " + std::to_string(expected_header.size()) + " columns, got " +
                       std::to_string(fields.size()));
    }
    rows.emplace_back(number, std::move(fields));
  }
  if (!have_header) throw InputError("manifest is empty (missing header)");
  return rows;
}

std::filesystem::path resolve_under(const std::filesystem::path& base, const std::string& path) {
  const std::filesystem::path p(path);
  return p.is_absolute() ? p : base / p;
}

}  // namespace

std::filesystem::path DatasetManifest::resolve(const std::string& path) const {
  return resolve_under(base_dir, path);
}

std::filesystem::path PairManifest::resolve(const std::string& path) const {
  return resolve_under(base_dir, path);
}

int PairManifest::fold_count() const {
  int n = 0;
  for (const auto& r : rows) n = std::max(n, r.fold + 1);
  return n;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields(1);
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        fields.back() += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        fields.back() += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.emplace_back();
    } else {
      fields.back() += c;
    }
  }
  if (quoted) throw InputError("unterminated quote in '" + line + "'");
  return fields;
}

std::string csv_field(const std::string& text) {
  if (text.find_first_of(",\"\n\r") == std::string::npos) return text;
  std::string out = "\"";
  for (const char c : text) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

std::string_view to_string(Role role) { return role == Role::kGallery ? "gallery" : "probe"; }

DatasetManifest parse_dataset_manifest(std::istream& in, const std::filesystem::path& base_dir) {
  DatasetManifest manifest;
  manifest.base_dir = base_dir;
  for (auto& [number, f] : read_table(in, {"path", "subject_id", "group", "role"})) {
    if (f[0].empty()) fail(number, "empty path");
    if (f[1].empty()) fail(number, "empty subject_id");
    Role role{};
    if (f[3] == "gallery") {
      role = Role::kGallery;
    } else if (f[3] == "probe") {
      role = Role::kProbe;
    } else {
      fail(number, "role must be 'gallery' or 'probe', got '" + f[3] + "'");
    }
    manifest.rows.push_back({f[0], f[1], f[2], role});
  }
  return manifest;
}

DatasetManifest read_dataset_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open manifest '" + path.string() + "'");
  return parse_dataset_manifest(in, path.parent_path());
}

void write_dataset_manifest(std::ostream& out, const DatasetManifest& manifest) {
  out << "path,subject_id,group,role\n";
  for (const auto& r : manifest.rows) {
    out << csv_field(r.path) << ',' << csv_field(r.subject_id) << ',' << csv_field(r.group) << ','
        << to_string(r.role) << '\n';
  }
}

PairManifest parse_pair_manifest(std::istream& in, const std::filesystem::path& base_dir) {
  PairManifest manifest;
  manifest.base_dir = base_dir;
  for (auto& [number, f] : read_table(in, {"path_a", "path_b", "same", "fold"})) {
    if (f[0].empty() || f[1].empty()) fail(number, "empty path");
    const int same = parse_int(f[2], number, "same");
    if (same != 0 && same != 1) fail(number, "same must be 0 or 1");
    const int fold = parse_int(f[3], number, "fold");
    if (fold < 0) fail(number, "fold must be >= 0");
    manifest.rows.push_back({f[0], f[1], same == 1, fold});
  }
  std::vector<bool> seen(static_cast<std::size_t>(manifest.fold_count()), false);
  for (const auto& r : manifest.rows) seen[static_cast<std::size_t>(r.fold)] = true;
  for (std::size_t f = 0; f < seen.size(); ++f) {
    if (!seen[f]) throw InputError("pair manifest folds are not contiguous: fold " +
                                   std::to_string(f) + " has no pairs");
  }
  return manifest;
}

PairManifest read_pair_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open pair manifest '" + path.string() + "'");
  return parse_pair_manifest(in, path.parent_path());
}

void write_pair_manifest(std::ostream& out, const PairManifest& manifest) {
  out << "path_a,path_b,same,fold\n";
  for (const auto& r : manifest.rows) {
    out << csv_field(r.path_a) << ',' << csv_field(r.path_b) << ',' << (r.same ? 1 : 0) << ',' << r.fold << '\n';
  }
}

std::string format_value(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

void write_feature_csv(std::ostream& out, const std::vector<FeatureRow>& rows, Eigen::Index dims) {
  out << "path,subject_id,dims";
  for (Eigen::Index i = 0; i < dims; ++i) out << ",v" << i;
  out << '\n';
  for (const auto& r : rows) {
    if (r.features == nullptr || r.features->dims() != dims) {
      throw InvariantError("feature row for '" + r.path + "' does not have " +
                           std::to_string(dims) + " dimensions");
    }
    out << csv_field(r.path) << ',' << csv_field(r.subject_id) << ',' << dims;
    for (Eigen::Index i = 0; i < dims; ++i) out << ',' << format_value(r.features->values[i]);
    out << '\n';
  }
}

}  // namespace sbgp::harness

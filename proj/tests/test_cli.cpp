#include "sbgp/harness/cli.hpp"
#include "sbgp/harness/manifest.hpp"
#include "sbgp/harness/synthetic.hpp"
#include "sbgp/image_io.hpp"

#include "test_support.hpp"

#include <doctest.h>
#include <json.hpp>

#include <cstdlib>
#include <fstream>
#include <sstream>

using namespace sbgp;
using namespace sbgp::harness;
using nlohmann::json;

namespace {

struct Run {
  int code = -1;
  std::string out;
  std::string err;
};

Run cli(std::vector<std::string> args) {
  std::ostringstream out;
  std::ostringstream err;
  Run r;
  r.code = run_cli(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

void write_text(const std::filesystem::path& p, const std::string& text) {
  std::ofstream(p) << text;
}

json strip_timing(json j) {
  j.erase("timing");
  return j;
}

}  // namespace

TEST_CASE("labels subcommand") {
  const Run r8 = cli({"labels", "--P", "8"});
  CHECK(r8.code == kExitOk);
  CHECK(json::parse(r8.out)["labels"] == json({0, 1, 3, 7, 8, 12, 14, 15}));
  CHECK(json::parse(cli({"labels", "--P", "4"}).out)["labels"] == json({0, 1, 2, 3}));
  const Run r7 = cli({"labels", "--P", "7"});
  CHECK(r7.code == kExitInputError);
  CHECK(r7.err.find("error") != std::string::npos);
}

TEST_CASE("usage errors exit with 1, help with 0") {
  CHECK(cli({}).code == kExitInputError);
  CHECK(cli({"frobnicate"}).code == kExitInputError);
  CHECK(cli({"labels"}).code == kExitInputError);
  CHECK(cli({"extract", "--manifest", "m.csv", "--descriptor", "gabor"}).code == kExitInputError);
  CHECK(cli({"--help"}).code == kExitOk);
}

TEST_CASE("extract writes one row per manifest entry") {
  const auto dir = test::scratch_dir("cli_extract");
  write_pgm(dir / "a.pgm", test::random_image(1, 100, 100));
  write_pgm(dir / "b.pgm", test::random_image(2, 100, 100));
  write_text(dir / "m.csv", "path,subject_id,group,role\na.pgm,s1,clean,gallery\nb.pgm,s2,clean,probe\n");
  const Run r = cli({"extract", "--manifest", (dir / "m.csv").string(), "--pr", "8,1", "--out",
                     (dir / "f.csv").string()});
  REQUIRE(r.code == kExitOk);
  std::ifstream in(dir / "f.csv");
  std::string line;
  std::vector<std::vector<std::string>> rows;
  while (std::getline(in, line)) rows.push_back(split_csv_line(line));
  REQUIRE(rows.size() == 3);
  CHECK(rows[0].size() == 3 + 288);
  CHECK(rows[1][0] == "a.pgm");
  CHECK(rows[2][1] == "s2");
  CHECK(rows[2][2] == "288");
  CHECK(rows[2].size() == 3 + 288);
}

TEST_CASE("extract on an empty manifest writes only the header") {
  const auto dir = test::scratch_dir("cli_empty");
  write_text(dir / "m.csv", "path,subject_id,group,role\n");
  const Run r = cli({"extract", "--manifest", (dir / "m.csv").string(), "--pr", "8,1", "--blocks", "2x2"});
  CHECK(r.code == kExitOk);
  CHECK(r.out.rfind("path,subject_id,dims,v0,", 0) == 0);
  CHECK(std::count(r.out.begin(), r.out.end(), '\n') == 1);
}

TEST_CASE("extract reports missing images by path") {
  const auto dir = test::scratch_dir("cli_missing");
  write_text(dir / "m.csv", "path,subject_id,group,role\nnowhere.pgm,s1,clean,gallery\n");
  const Run r = cli({"extract", "--manifest", (dir / "m.csv").string()});
  CHECK(r.code == kExitInputError);
  CHECK(r.err.find("nowhere.pgm") != std::string::npos);
  CHECK(cli({"extract", "--manifest", (dir / "absent.csv").string()}).code == kExitInputError);
}

TEST_CASE("identification through the CLI") {
  const auto dir = test::scratch_dir("cli_id");
  std::string manifest = "path,subject_id,group,role\n";
  for (int s = 0; s < 4; ++s) {
    const Image base = subject_texture(s, 3, 64);
    const std::string g = "g" + std::to_string(s) + ".pgm";
    const std::string same = "same" + std::to_string(s) + ".pgm";
    const std::string affine = "affine" + std::to_string(s) + ".pgm";
    write_pgm(dir / g, base);
    write_pgm(dir / same, base);
    write_pgm(dir / affine, Image((base.array() * 1.3 + 20).round().matrix()));
    manifest += g + ",s" + std::to_string(s) + ",clean,gallery\n";
    manifest += same + ",s" + std::to_string(s) + ",same,probe\n";
    manifest += affine + ",s" + std::to_string(s) + ",affine,probe\n";
  }
  write_text(dir / "m.csv", manifest);
  const Run r = cli({"evaluate-id", "--manifest", (dir / "m.csv").string()});
  REQUIRE(r.code == kExitOk);
  const json j = json::parse(r.out);
  CHECK(j["recognition_rate"] == 1.0);
  CHECK(j["probes"] == 8);
  CHECK(j["dims"] == 576);
  for (const auto& g : j["groups"]) CHECK(g["rate"] == 1.0);
  CHECK(j["counters"]["comparisons_per_pixel"] == 8.0);
  CHECK(j["counters"]["units_per_pixel"] == 16.0);

  const Run threaded = cli({"evaluate-id", "--manifest", (dir / "m.csv").string(), "--threads", "3"});
  CHECK(strip_timing(json::parse(threaded.out)) == strip_timing(j));

  write_text(dir / "one.csv",
             "path,subject_id,group,role\ng0.pgm,s0,clean,gallery\ng1.pgm,s1,x,probe\ng2.pgm,s2,x,probe\n");
  const Run forced = cli({"evaluate-id", "--manifest", (dir / "one.csv").string(), "--similarity", "chi2"});
  REQUIRE(forced.code == kExitOk);
  CHECK(json::parse(forced.out)["recognition_rate"] == 0.0);

  write_text(dir / "nogallery.csv", "path,subject_id,group,role\ng0.pgm,s0,clean,probe\n");
  CHECK(cli({"evaluate-id", "--manifest", (dir / "nogallery.csv").string()}).code == kExitInputError);
}

TEST_CASE("verification through the CLI") {
  const auto dir = test::scratch_dir("cli_verify");
  std::string manifest = "path_a,path_b,same,fold\n";
  for (int f = 0; f < 3; ++f) {
    for (int i = 0; i < 4; ++i) {
      const int id = f * 4 + i;
      const std::string a = "img" + std::to_string(id) + ".pgm";
      const std::string n1 = "noise" + std::to_string(id) + "a.pgm";
      const std::string n2 = "noise" + std::to_string(id) + "b.pgm";
      write_pgm(dir / a, subject_texture(id, 5, 48));
      write_pgm(dir / n1, test::random_image(1000 + id, 48, 48));
      write_pgm(dir / n2, test::random_image(2000 + id, 48, 48));
      manifest += a + "," + a + ",1," + std::to_string(f) + "\n";
      manifest += n1 + "," + n2 + ",0," + std::to_string(f) + "\n";
    }
  }
  write_text(dir / "pairs.csv", manifest);
  const Run r = cli({"evaluate-verify", "--manifest", (dir / "pairs.csv").string()});
  REQUIRE(r.code == kExitOk);
  const json j = json::parse(r.out);
  CHECK(j["verification"]["mean_accuracy"] == 1.0);
  CHECK(j["verification"]["folds"].size() == 3);
  CHECK(j["verification"]["roc"][0]["threshold"].is_null());

  write_text(dir / "bad.csv", "path_a,path_b,same,fold\nimg0.pgm,img0.pgm,1,0\nimg1.pgm,img1.pgm,1,one\n");
  const Run bad = cli({"evaluate-verify", "--manifest", (dir / "bad.csv").string()});
  CHECK(bad.code == kExitInputError);
  CHECK(bad.err.find("line 3") != std::string::npos);

  write_text(dir / "onefold.csv", "path_a,path_b,same,fold\nimg0.pgm,img0.pgm,1,0\n");
  CHECK(cli({"evaluate-verify", "--manifest", (dir / "onefold.csv").string()}).code == kExitInputError);
}

TEST_CASE("bench reports the complexity columns") {
  const auto dir = test::scratch_dir("cli_bench");
  write_pgm(dir / "a.pgm", test::random_image(1, 100, 100));
  const Run r = cli({"bench", "--image", (dir / "a.pgm").string(), "--config", "sbgp@24,3", "--config",
                     "lbp-riu2@16,2"});
  REQUIRE(r.code == kExitOk);
  const json j = json::parse(r.out);
  REQUIRE(j["configs"].size() == 2);
  CHECK(j["configs"][0]["units_per_pixel"] == 24.0);
  CHECK(j["configs"][0]["labels"] == 24);
  CHECK(j["configs"][0]["dims"] == 864);
  CHECK(j["configs"][1]["units_per_pixel"] == 32.0);
  CHECK(j["configs"][1]["labels"] == 18);
  CHECK(j["timing"][0]["iterations"] == 20);
  CHECK(cli({"bench"}).code == kExitInputError);
  CHECK(cli({"bench", "--image", (dir / "a.pgm").string(), "--iterations", "5"}).code == kExitInputError);
}

TEST_CASE("perturb and synth through the CLI") {
  const auto dir = test::scratch_dir("cli_synth");
  REQUIRE(cli({"synth", "--subjects", "5", "--variants", "2", "--size", "64", "--out", dir.string()}).code ==
          kExitOk);
  CHECK(std::filesystem::exists(dir / "manifest.csv"));
  CHECK(std::filesystem::exists(dir / "subject_004_v01.pgm"));
  const Run r = cli({"perturb", "--manifest", (dir / "manifest.csv").string(), "--level", "affine:2,30",
                     "--level", "gamma:0.4", "--level", "noise:30", "--config", "sbgp@16,2"});
  REQUIRE(r.code == kExitOk);
  const json j = json::parse(r.out);
  REQUIRE(j["levels"].size() == 3);
  CHECK(j["levels"][0]["results"][0]["rate"] == 1.0);
  CHECK(j["levels"][1]["results"][0]["rate"] == 1.0);
  CHECK(j["levels"][2]["results"][0]["non_structural_fraction"]["above_clean"] == true);
  CHECK(cli({"perturb", "--manifest", (dir / "manifest.csv").string(), "--level", "affine:0,1"}).code ==
        kExitInputError);
  CHECK(cli({"synth", "--subjects", "1", "--out", dir.string()}).code == kExitInputError);
}

TEST_CASE("the installed binary maps errors to exit codes") {
  const std::string bin = SBGP_CLI_PATH;
  const auto status = [](const std::string& cmd) {
    const int raw = std::system((cmd + " >/dev/null 2>&1").c_str());
    return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  };
  CHECK(status(bin + " labels --P 16") == 0);
  CHECK(status(bin + " labels --P 9") == 1);
  CHECK(status(bin + " extract --manifest /nonexistent/m.csv") == 1);
}

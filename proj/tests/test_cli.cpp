#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "seqcomp/config.hpp"
#include "seqcomp/errors.hpp"
#include "test_util.hpp"

using namespace seqcomp;
namespace fs = std::filesystem;

namespace {

#ifndef SEQCOMP_CLI_PATH
#define SEQCOMP_CLI_PATH ""
#endif

int run_cli(const std::string& args) {
  const std::string cmd = std::string(SEQCOMP_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / name) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST_CASE("config: parse, comments, overrides") {
  const auto cfg = KeyValueConfig::parse(
      "# comment\nmode = sum\n epochs=5 \nlearning_rate = 1e-3 # inline\n\n", "test");
  CHECK(cfg.get_string("mode", "x") == "sum");
  CHECK(cfg.get_int("epochs", 0) == 5);
  CHECK(cfg.get_double("learning_rate", 0) == doctest::Approx(1e-3));
  CHECK(cfg.get_int("missing", 7) == 7);
  CHECK(throws_with<DataError>(
      [] { KeyValueConfig::parse("no equals sign here", "t"); }, "key = value"));
  CHECK(throws_with<DataError>(
      [] { KeyValueConfig::parse("epochs = abc", "t").get_int("epochs", 0); }, "epochs"));
}

TEST_CASE("cli: usage errors exit 1, missing data exits 2") {
  REQUIRE(std::string(SEQCOMP_CLI_PATH) != "");
  CHECK(run_cli("no-such-command") == 1);
  CHECK(run_cli("train") == 1);  // missing required flags
  CHECK(run_cli("train --train missing.tsv --dev missing.tsv --unknown-flag 1") == 1);
  CHECK(run_cli("evaluate --checkpoint nope.ckpt --test nope.tsv") == 2);
  CHECK(run_cli("--help") == 0);
  CHECK(run_cli("train --help") == 0);
}

TEST_CASE("cli: gen-corpus then train then evaluate round trip") {
  TempDir tmp("seqcomp_cli_rt");
  const std::string corpus_dir = (tmp.path / "corpus").string();
  const std::string run_dir = (tmp.path / "run").string();

  CHECK(run_cli("gen-corpus --out " + corpus_dir +
                " --train-sentences 60 --dev-sentences 15 --test-sentences 15") == 0);
  CHECK(fs::exists(fs::path(corpus_dir) / "train.tsv"));
  CHECK(fs::exists(fs::path(corpus_dir) / "labels.txt"));
  CHECK(fs::exists(fs::path(corpus_dir) / "frequency.tsv"));

  CHECK(run_cli("train --train " + corpus_dir + "/train.tsv --dev " + corpus_dir +
                "/dev.tsv --schema " + corpus_dir +
                "/labels.txt --out " + run_dir +
                " --mode sum --epochs 2 --word-dim 8 --hidden-dim 12 --output-dim 8") == 0);
  CHECK(fs::exists(fs::path(run_dir) / "best.ckpt"));
  CHECK(fs::exists(fs::path(run_dir) / "metrics.tsv"));

  CHECK(run_cli("evaluate --checkpoint " + run_dir + "/best.ckpt --test " + corpus_dir +
                "/test.tsv --out " + (tmp.path / "report.tsv").string()) == 0);
  const std::string report = slurp(tmp.path / "report.tsv");
  CHECK(report.find("overall") != std::string::npos);
  CHECK(report.find("bucket") != std::string::npos);
  CHECK(report.find("layer") != std::string::npos);
  CHECK(report.find("boundary") != std::string::npos);

  CHECK(run_cli("export-embeddings --checkpoint " + run_dir + "/best.ckpt --out " +
                (tmp.path / "emb").string()) == 0);
  CHECK(fs::exists(tmp.path / "emb.composed.tsv"));
  CHECK(fs::exists(tmp.path / "emb.components.tsv"));

  CHECK(run_cli("project --checkpoint " + run_dir + "/best.ckpt --method pca --out " +
                (tmp.path / "proj").string() + " --svg") == 0);
  CHECK(fs::exists(tmp.path / "proj.tsv"));
  CHECK(fs::exists(tmp.path / "proj.svg"));

  // projecting from the exported TSV works too
  CHECK(run_cli("project --embeddings " + (tmp.path / "emb.composed.tsv").string() +
                " --method pca --out " + (tmp.path / "proj2").string()) == 0);
  CHECK(slurp(tmp.path / "proj.tsv") == slurp(tmp.path / "proj2.tsv"));
}

TEST_CASE("cli: identical seeds give byte-identical outputs") {
  TempDir tmp("seqcomp_cli_det");
  const std::string c1 = (tmp.path / "c1").string();
  const std::string c2 = (tmp.path / "c2").string();
  const std::string args = " --train-sentences 40 --dev-sentences 10 --test-sentences 10"
                           " --seed 5";
  REQUIRE(run_cli("gen-corpus --out " + c1 + args) == 0);
  REQUIRE(run_cli("gen-corpus --out " + c2 + args) == 0);
  for (const char* f : {"train.tsv", "dev.tsv", "test.tsv", "labels.txt", "frequency.tsv"})
    CHECK(slurp(fs::path(c1) / f) == slurp(fs::path(c2) / f));

  const std::string train_args = " --train " + c1 + "/train.tsv --dev " + c1 +
                                 "/dev.tsv --schema " + c1 + "/labels.txt" +
                                 " --mode concat --epochs 2 --seed 3"
                                 " --word-dim 8 --hidden-dim 12 --output-dim 8 --out ";
  const std::string r1 = (tmp.path / "r1").string();
  const std::string r2 = (tmp.path / "r2").string();
  REQUIRE(run_cli("train" + train_args + r1) == 0);
  REQUIRE(run_cli("train" + train_args + r2) == 0);
  CHECK(slurp(fs::path(r1) / "metrics.tsv") == slurp(fs::path(r2) / "metrics.tsv"));
  CHECK(slurp(fs::path(r1) / "best.ckpt") == slurp(fs::path(r2) / "best.ckpt"));
}

TEST_CASE("cli: train rejects corpus labels missing from the schema") {
  TempDir tmp("seqcomp_cli_schema");
  {
    std::ofstream out(tmp.path / "train.tsv");
    out << "a\tB-X\nb\tO\n\n";
  }
  {
    std::ofstream out(tmp.path / "dev.tsv");
    out << "a\tB-Y\n\n";  // B-Y not in inferred train schema
  }
  CHECK(run_cli("train --train " + (tmp.path / "train.tsv").string() + " --dev " +
                (tmp.path / "dev.tsv").string() + " --out " +
                (tmp.path / "run").string() + " --epochs 1") == 2);
}

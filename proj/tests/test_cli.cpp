#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const std::string kCli = S2D2_CLI_PATH;

fs::path scratch_dir() {
  static const fs::path dir = [] {
    fs::path p = fs::temp_directory_path() / "s2d2_cli_tests";
    fs::create_directories(p);
    return p;
  }();
  return dir;
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  REQUIRE(f.good());
  f << content;
}

std::string read_file(const fs::path& path) {
  std::ifstream f(path, std::ios::binary);
  REQUIRE(f.good());
  std::stringstream buf;
  buf << f.rdbuf();
  return buf.str();
}

// Returns the process exit code.
int run(const std::string& args, const fs::path& stderr_to = {}) {
  std::string cmd = kCli + " " + args;
  if (!stderr_to.empty()) cmd += " 2>" + stderr_to.string();
  cmd += stderr_to.empty() ? " 2>/dev/null" : "";
  cmd += " >/dev/null";
  const int status = std::system(cmd.c_str());
  REQUIRE(status != -1);
  return WEXITSTATUS(status);
}

std::vector<json> read_jsonl(const fs::path& path) {
  std::ifstream f(path);
  REQUIRE(f.good());
  std::vector<json> records;
  std::string line;
  while (std::getline(f, line))
    if (!line.empty()) records.push_back(json::parse(line));
  return records;
}

std::vector<std::string> read_lines(const fs::path& path) {
  std::ifstream f(path);
  REQUIRE(f.good());
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(f, line))
    if (!line.empty()) lines.push_back(line);
  return lines;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) out.push_back(field);
  return out;
}

const std::string kBaseConfig =
    "model.vocab_size = 32\n"
    "model.seed = 7\n"
    "model.drift = 0.1\n"
    "decode.block_size = 8\n"
    "decode.max_new_tokens = 32\n"
    "decode.sampler = s2d2\n"
    "policy.kind = min_span\n"
    "policy.tau_span = 1\n"
    "run.prompts = 1 2 3\n"
    "run.seed = 11\n";

}  // namespace

TEST_CASE("decode is byte-identical across runs") {
  const fs::path cfg = scratch_dir() / "det.cfg";
  write_file(cfg, kBaseConfig);
  const fs::path out_a = scratch_dir() / "det_a.jsonl";
  const fs::path out_b = scratch_dir() / "det_b.jsonl";
  CHECK(run("decode --config " + cfg.string() + " --out " + out_a.string()) == 0);
  CHECK(run("decode --config " + cfg.string() + " --out " + out_b.string()) == 0);
  CHECK(read_file(out_a) == read_file(out_b));
}

TEST_CASE("missing decode.block_size exits 2 and names the field") {
  const fs::path cfg = scratch_dir() / "missing.cfg";
  write_file(cfg, "model.vocab_size = 32\nrun.seed = 1\n");
  const fs::path err = scratch_dir() / "missing.err";
  CHECK(run("decode --config " + cfg.string(), err) == 2);
  CHECK(read_file(err).find("decode.block_size") != std::string::npos);
}

TEST_CASE("unknown keys exit 2 with a line diagnostic") {
  const fs::path cfg = scratch_dir() / "typo.cfg";
  write_file(cfg, "decode.block_size = 8\npolicy.tau_spam = 2\n");
  const fs::path err = scratch_dir() / "typo.err";
  CHECK(run("decode --config " + cfg.string(), err) == 2);
  const std::string msg = read_file(err);
  CHECK(msg.find("tau_spam") != std::string::npos);
  CHECK(msg.find("line 2") != std::string::npos);
}

TEST_CASE("always-verify policy marks every step verified") {
  const fs::path cfg = scratch_dir() / "verify.cfg";
  write_file(cfg, kBaseConfig);
  const fs::path out = scratch_dir() / "verify.jsonl";
  REQUIRE(run("decode --config " + cfg.string() + " --out " + out.string()) == 0);
  std::size_t steps = 0;
  for (const json& rec : read_jsonl(out)) {
    if (rec["kind"] == "step") {
      ++steps;
      CHECK(rec["verified"].get<bool>());
    }
  }
  CHECK(steps > 0);
}

TEST_CASE("summary rows re-derive from the step records") {
  const fs::path cfg = scratch_dir() / "roundtrip.cfg";
  write_file(cfg, kBaseConfig);
  const fs::path out = scratch_dir() / "roundtrip.jsonl";
  REQUIRE(run("decode --config " + cfg.string() + " --out " + out.string()) == 0);
  std::size_t steps = 0, verified = 0, commits = 0, nfe = 0;
  json summary;
  for (const json& rec : read_jsonl(out)) {
    if (rec["kind"] == "step") {
      ++steps;
      if (rec["verified"].get<bool>()) ++verified;
      commits += rec["commits"].size();
      nfe = rec["nfe_after"].get<std::size_t>();
    } else if (rec["kind"] == "summary") {
      summary = rec;
    }
  }
  REQUIRE(!summary.is_null());
  (void)nfe;
  CHECK(summary["tokens"].get<std::size_t>() == commits);
  // NFE accounting identity: draft passes + verifier passes + cache passes.
  CHECK(summary["nfe"].get<std::size_t>() ==
        steps + verified + summary["blocks"].get<std::size_t>());
  CHECK(summary["verify_rate"].get<double>() ==
        doctest::Approx(static_cast<double>(verified) / static_cast<double>(steps)));
}

TEST_CASE("sweep produces the full Cartesian product") {
  const fs::path cfg = scratch_dir() / "grid.cfg";
  write_file(cfg, kBaseConfig + "sweep.decode.block_size = 4, 8\nsweep.policy.tau_span = 1, 2\n");
  const fs::path out = scratch_dir() / "grid.csv";
  REQUIRE(run("sweep --config " + cfg.string() + " --out " + out.string()) == 0);
  const auto lines = read_lines(out);
  REQUIRE(lines.size() == 5);  // header + 4 cells
  const auto header = split_csv(lines[0]);
  CHECK(header[0] == "cell");
  CHECK(header[1] == "decode.block_size");
  CHECK(header[2] == "policy.tau_span");
  CHECK(header.back() == "global_arness_at_k");
}

TEST_CASE("the AR cell is its own baseline") {
  const fs::path cfg = scratch_dir() / "ar.cfg";
  write_file(cfg,
             "model.vocab_size = 32\nmodel.seed = 7\ndecode.block_size = 1\n"
             "decode.sampler = bd3\ndecode.max_new_tokens = 16\nrun.seed = 3\n"
             "run.prompts = 1 2\nsweep.decode.block_size = 1\n");
  const fs::path out = scratch_dir() / "ar.csv";
  REQUIRE(run("sweep --config " + cfg.string() + " --out " + out.string()) == 0);
  const auto lines = read_lines(out);
  REQUIRE(lines.size() == 2);
  const auto header = split_csv(lines[0]);
  const auto row = split_csv(lines[1]);
  std::size_t col = 0;
  for (; col < header.size(); ++col)
    if (header[col] == "speedup_vs_ar") break;
  REQUIRE(col < header.size());
  CHECK(std::stod(row[col]) == doctest::Approx(1.0));
}

TEST_CASE("min_span tau_span=B verifies once per block") {
  const fs::path cfg = scratch_dir() / "first_step.cfg";
  write_file(cfg,
             "model.vocab_size = 32\nmodel.seed = 5\nmodel.drift = 0.05\n"
             "decode.block_size = 8\ndecode.sampler = s2d2\ndecode.max_new_tokens = 48\n"
             "policy.kind = min_span\npolicy.tau_span = 8\nrun.prompts = 1 2 3\nrun.seed = 9\n");
  const fs::path out = scratch_dir() / "first_step.jsonl";
  REQUIRE(run("decode --config " + cfg.string() + " --out " + out.string()) == 0);
  std::size_t steps = 0, verified = 0, blocks = 0;
  for (const json& rec : read_jsonl(out)) {
    if (rec["kind"] == "step") {
      ++steps;
      if (rec["verified"].get<bool>()) {
        ++verified;
        // only a fully masked block has a span of length B
        CHECK(rec["span_len"].get<std::size_t>() == 8);
      }
    } else if (rec["kind"] == "summary") {
      blocks = rec["blocks"].get<std::size_t>();
      CHECK(rec["verify_rate"].get<double>() ==
            doctest::Approx(static_cast<double>(verified) / static_cast<double>(steps)));
    }
  }
  CHECK(verified == blocks);
}

TEST_CASE("seed flag overrides the config") {
  const fs::path cfg = scratch_dir() / "seed.cfg";
  write_file(cfg, kBaseConfig);
  const fs::path out_a = scratch_dir() / "seed_a.jsonl";
  const fs::path out_b = scratch_dir() / "seed_b.jsonl";
  const fs::path out_c = scratch_dir() / "seed_c.jsonl";
  REQUIRE(run("decode --config " + cfg.string() + " --out " + out_a.string()) == 0);
  REQUIRE(run("decode --config " + cfg.string() + " --seed 11 --out " + out_b.string()) == 0);
  REQUIRE(run("decode --config " + cfg.string() + " --seed 12 --out " + out_c.string()) == 0);
  CHECK(read_file(out_a) == read_file(out_b));  // same seed as the config
  CHECK(read_file(out_a) != read_file(out_c));
}

TEST_CASE("verify-dist and oracle-khat exit codes") {
  CHECK(run("verify-dist --pairs 5 --samples 50000") == 0);
  CHECK(run("verify-dist --pairs 5 --samples 50000 --gamma 2 --assert") == 1);
  CHECK(run("oracle-khat --vectors 1000") == 0);
}

TEST_CASE("prompt files are accepted") {
  const fs::path prompts = scratch_dir() / "prompts.txt";
  write_file(prompts, "1 2 3\n4 5\n");
  const fs::path cfg = scratch_dir() / "pfile.cfg";
  write_file(cfg, "decode.block_size = 4\ndecode.max_new_tokens = 8\nmodel.vocab_size = 16\n"
                  "run.prompt_file = " + prompts.string() + "\n");
  const fs::path out = scratch_dir() / "pfile.jsonl";
  REQUIRE(run("decode --config " + cfg.string() + " --out " + out.string()) == 0);
  std::size_t summaries = 0;
  for (const json& rec : read_jsonl(out))
    if (rec["kind"] == "summary") ++summaries;
  CHECK(summaries == 2);
}

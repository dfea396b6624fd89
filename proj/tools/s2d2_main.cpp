#include <cstdint>
#include <string>

#include "CLI11.hpp"
#include "s2d2/runner.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Block-diffusion decoding simulation harness"};
  app.require_subcommand(1);

  s2d2::cli::CommonOptions common;
  std::uint64_t seed_value = 0;

  std::vector<CLI::Option*> seed_opts;
  auto add_common = [&](CLI::App* sub, bool config_required) {
    auto* cfg = sub->add_option("--config", common.config_path, "Run configuration file");
    if (config_required) cfg->required();
    sub->add_option("--out", common.out_path, "Output file (stdout when omitted)");
    seed_opts.push_back(sub->add_option("--seed", seed_value, "Override run.seed from the config"));
    sub->add_option("--jobs", common.jobs, "Worker threads for sweeps")
        ->check(CLI::PositiveNumber);
  };

  auto* decode = app.add_subcommand("decode", "Decode each configured prompt once");
  add_common(decode, true);

  auto* sweep = app.add_subcommand("sweep", "Run the configured parameter grid");
  add_common(sweep, true);

  s2d2::cli::VerifyDistOptions vopts;
  auto* verify = app.add_subcommand(
      "verify-dist", "Check the committed-token law against the verifier distribution");
  verify->add_option("--vocab", vopts.vocab, "Vocabulary size");
  verify->add_option("--pairs", vopts.n_pairs, "Number of random distribution pairs");
  verify->add_option("--samples", vopts.n_samples, "Monte Carlo samples per pair");
  verify->add_option("--gamma", vopts.gamma, "Acceptance-ratio tempering exponent");
  verify->add_option("--seed", vopts.seed, "Random seed");
  verify->add_option("--tolerance", vopts.tolerance, "Total-variation tolerance");
  verify->add_flag("--assert,!--no-assert", vopts.assert_tolerance,
                   "Exit nonzero when the tolerance is breached (default on)");

  s2d2::cli::OracleKhatOptions kopts;
  auto* khat = app.add_subcommand(
      "oracle-khat", "Check the closed-form expected accepted prefix against brute force");
  khat->add_option("--vectors", kopts.n_vectors, "Number of random acceptance vectors");
  khat->add_option("--seed", kopts.seed, "Random seed");
  khat->add_option("--tolerance", kopts.tolerance, "Absolute tolerance");

  CLI11_PARSE(app, argc, argv);

  for (const CLI::Option* opt : seed_opts)
    if (opt->count() > 0) common.seed_override = seed_value;

  if (decode->parsed()) return s2d2::cli::cmd_decode(common);
  if (sweep->parsed()) return s2d2::cli::cmd_sweep(common);
  if (verify->parsed()) return s2d2::cli::cmd_verify_dist(vopts);
  if (khat->parsed()) return s2d2::cli::cmd_oracle_khat(kopts);
  return s2d2::cli::kExitConfig;
}

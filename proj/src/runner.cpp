#include "s2d2/runner.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include "json.hpp"
#include "s2d2/metrics.hpp"
#include "s2d2/oracle.hpp"

namespace s2d2::cli {
namespace {

using ordered_json = nlohmann::ordered_json;

const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys = {
      "model.vocab_size",    "model.seed",          "model.sharpness",
      "model.drift",         "model.eos_bonus",     "decode.sampler",
      "decode.block_size",   "decode.max_steps",    "decode.conf_threshold",
      "decode.temper_gamma", "decode.schedule",     "decode.draft_mask_mode",
      "decode.cache_mode",   "decode.verifier_view", "decode.max_new_tokens",
      "decode.greedy",       "policy.kind",         "policy.tau_span",
      "policy.tau_score",    "policy.tau_on",       "policy.tau_off",
      "policy.score_mode",   "policy.cost_c",       "policy.ucb_beta",
      "policy.bins_span",    "policy.bins_progress", "policy.bins_entropy",
      "policy.bandit_persist", "estimator.kind",    "estimator.beta",
      "estimator.gamma_conf", "estimator.tau_ent",  "estimator.tau_margin",
      "run.prompts",         "run.prompt_file",     "run.num_sequences",
      "run.seed",            "metrics.arness_k",
  };
  return keys;
}

[[noreturn]] void bad_value(const std::string& key, const std::string& value) {
  throw ConfigError("config: invalid value '" + value + "' for key '" + key + "'");
}

Sampler parse_sampler(const std::string& v) {
  if (v == "bd3") return Sampler::kBd3;
  if (v == "s2d2") return Sampler::kS2d2;
  if (v == "subs") return Sampler::kSubs;
  bad_value("decode.sampler", v);
}

Schedule parse_schedule(const std::string& v) {
  if (v == "static") return Schedule::kStatic;
  if (v == "dynamic") return Schedule::kDynamic;
  if (v == "subs") return Schedule::kSubs;
  bad_value("decode.schedule", v);
}

DraftMaskMode parse_draft_mask_mode(const std::string& v) {
  if (v == "block") return DraftMaskMode::kBlock;
  if (v == "ar") return DraftMaskMode::kAr;
  bad_value("decode.draft_mask_mode", v);
}

CacheMode parse_cache_mode(const std::string& v) {
  if (v == "block") return CacheMode::kBlock;
  if (v == "ar") return CacheMode::kAr;
  bad_value("decode.cache_mode", v);
}

VerifierView parse_verifier_view(const std::string& v) {
  if (v == "position_aligned") return VerifierView::kPositionAligned;
  if (v == "right_shifted") return VerifierView::kRightShifted;
  bad_value("decode.verifier_view", v);
}

PolicyKind parse_policy_kind(const std::string& v) {
  if (v == "never") return PolicyKind::kNever;
  if (v == "min_span") return PolicyKind::kMinSpan;
  if (v == "score_threshold") return PolicyKind::kScoreThreshold;
  if (v == "hysteresis") return PolicyKind::kHysteresis;
  if (v == "bandit") return PolicyKind::kBandit;
  bad_value("policy.kind", v);
}

ScoreMode parse_score_mode(const std::string& v) {
  if (v == "static") return ScoreMode::kStatic;
  if (v == "dynamic") return ScoreMode::kDynamic;
  bad_value("policy.score_mode", v);
}

EstimatorSpec::Kind parse_estimator_kind(const std::string& v) {
  if (v == "random") return EstimatorSpec::Kind::kRandom;
  if (v == "soft_entropy") return EstimatorSpec::Kind::kSoftEntropy;
  if (v == "conf_power") return EstimatorSpec::Kind::kConfPower;
  if (v == "renyi2") return EstimatorSpec::Kind::kRenyi2;
  if (v == "hard_entropy") return EstimatorSpec::Kind::kHardEntropy;
  if (v == "hard_margin") return EstimatorSpec::Kind::kHardMargin;
  bad_value("estimator.kind", v);
}

std::vector<TokenId> parse_prompt(const std::string& text, std::size_t vocab_size) {
  std::vector<TokenId> prompt;
  std::istringstream in(text);
  std::string tok;
  while (in >> tok) {
    std::uint64_t id = 0;
    try {
      std::size_t used = 0;
      id = std::stoull(tok, &used);
      if (used != tok.size()) throw std::invalid_argument(tok);
    } catch (const std::exception&) {
      throw ConfigError("config: prompt token '" + tok + "' is not an integer");
    }
    if (id >= vocab_size)
      throw ConfigError("config: prompt token " + tok + " out of range for vocab_size " +
                        std::to_string(vocab_size));
    prompt.push_back(static_cast<TokenId>(id));
  }
  if (prompt.empty()) throw ConfigError("config: empty prompt");
  return prompt;
}

std::vector<std::vector<TokenId>> load_prompts(const Config& cfg, std::size_t vocab_size) {
  std::vector<std::vector<TokenId>> prompts;
  if (cfg.has("run.prompt_file")) {
    const std::string path = cfg.require_string("run.prompt_file");
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open run.prompt_file '" + path + "'");
    std::string line;
    while (std::getline(in, line)) {
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      prompts.push_back(parse_prompt(line, vocab_size));
    }
    if (prompts.empty()) throw ConfigError("config: run.prompt_file '" + path + "' has no prompts");
    return prompts;
  }
  const std::string inline_prompts = cfg.get_string("run.prompts", "1 2 3");
  std::string chunk;
  std::istringstream in(inline_prompts);
  while (std::getline(in, chunk, ';')) {
    if (chunk.find_first_not_of(" \t") == std::string::npos) continue;
    prompts.push_back(parse_prompt(chunk, vocab_size));
  }
  if (prompts.empty()) throw ConfigError("config: run.prompts declares no prompts");
  return prompts;
}

// Fixed-precision, locale-free float formatting so output bytes are stable.
std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return std::string(buf);
}

const char* mode_name(StepMode mode) {
  switch (mode) {
    case StepMode::kDiffusion: return "diffusion";
    case StepMode::kSpeculative: return "speculative";
    case StepMode::kSubs: return "subs";
  }
  return "diffusion";
}

ordered_json step_to_json(const StepRecord& s, std::size_t prompt_index) {
  ordered_json j;
  j["kind"] = "step";
  j["prompt"] = prompt_index;
  j["step"] = s.step_index;
  j["block"] = s.block_index;
  j["mode"] = mode_name(s.mode);
  j["span_len"] = s.span_len;
  j["verified"] = s.verified;
  j["accepted"] = s.accepted_count;
  if (s.rejected_at)
    j["rejected_at"] = *s.rejected_at;
  else
    j["rejected_at"] = nullptr;
  if (s.khat)
    j["khat"] = *s.khat;
  else
    j["khat"] = nullptr;
  if (s.score)
    j["score"] = *s.score;
  else
    j["score"] = nullptr;
  j["forced"] = s.forced;
  j["nfe_after"] = s.nfe_after;
  ordered_json commits = ordered_json::array();
  for (const auto& c : s.commits) {
    ordered_json e;
    e["pos"] = c.pos;
    e["conf"] = c.conf;
    if (c.verifier_conf)
      e["verifier_conf"] = *c.verifier_conf;
    else
      e["verifier_conf"] = nullptr;
    e["resampled"] = c.resampled;
    commits.push_back(std::move(e));
  }
  j["commits"] = std::move(commits);
  return j;
}

struct SequenceResult {
  std::vector<TokenId> tokens;
  DecodeTrace trace;
};

SequenceResult run_one(const RunSetup& setup, const std::vector<TokenId>& prompt,
                       RoutingState& policy, Rng& rng) {
  auto [tokens, trace] = decode_sequence(setup.model, prompt, setup.decode, setup.sampler, policy,
                                         rng);
  return SequenceResult{std::move(tokens), std::move(trace)};
}

// AR reference: confidence-thresholded sampler at block size 1, which decodes
// exactly one token per two forward passes.
DecodeTrace run_ar_baseline(const RunSetup& setup, const std::vector<TokenId>& prompt, Rng& rng) {
  DecodeConfig cfg = setup.decode;
  cfg.block_size = 1;
  cfg.max_steps = 1;
  RoutingState never;
  never.policy = PolicyKind::kNever;
  auto [tokens, trace] = decode_sequence(setup.model, prompt, cfg, Sampler::kBd3, never, rng);
  (void)tokens;
  return trace;
}

struct Aggregate {
  std::size_t tokens = 0;
  std::size_t nfe = 0;
  std::size_t steps = 0;
  std::size_t verified = 0;
  std::size_t rejected = 0;
  std::size_t accepted_sum = 0;
  double local_weighted = 0.0;
  double global_weighted = 0.0;
  std::size_t arness_events = 0;
  std::size_t ar_tokens = 0;
  std::size_t ar_nfe = 0;

  void add(const DecodeTrace& t, std::size_t k) {
    tokens += t.generated_tokens;
    nfe += t.total_nfe;
    steps += t.sampler_steps();
    for (const auto& s : t.steps) {
      if (s.verified) {
        ++verified;
        accepted_sum += s.accepted_count;
        if (s.rejected_at) ++rejected;
      }
    }
    std::size_t events = 0;
    for (const auto& s : t.steps) events += s.commits.size();
    if (events > 0) {
      local_weighted += local_arness_at_k(t, k) * static_cast<double>(events);
      global_weighted += global_arness_at_k(t, k) * static_cast<double>(events);
      arness_events += events;
    }
  }

  void add_baseline(const DecodeTrace& t) {
    ar_tokens += t.generated_tokens;
    ar_nfe += t.total_nfe;
  }

  double tokens_per_nfe() const {
    return nfe == 0 ? 0.0 : static_cast<double>(tokens) / static_cast<double>(nfe);
  }
  double speedup_vs_ar() const {
    if (tokens == 0 || ar_tokens == 0 || nfe == 0 || ar_nfe == 0) return 0.0;
    const double method = static_cast<double>(nfe) / static_cast<double>(tokens);
    const double base = static_cast<double>(ar_nfe) / static_cast<double>(ar_tokens);
    return base / method;
  }
  double verify_rate() const {
    return steps == 0 ? 0.0 : static_cast<double>(verified) / static_cast<double>(steps);
  }
  double mean_accepted_prefix() const {
    return verified == 0 ? 0.0 : static_cast<double>(accepted_sum) / static_cast<double>(verified);
  }
  double rejection_rate() const {
    return verified == 0 ? 0.0 : static_cast<double>(rejected) / static_cast<double>(verified);
  }
  double local_arness() const { return arness_events == 0 ? 0.0 : local_weighted / arness_events; }
  double global_arness() const {
    return arness_events == 0 ? 0.0 : global_weighted / arness_events;
  }
};

std::vector<std::pair<std::string, std::vector<std::string>>> sweep_grid(const Config& cfg) {
  std::vector<std::pair<std::string, std::vector<std::string>>> grid;
  for (const auto& [key, value] : cfg.values()) {
    if (key.rfind("sweep.", 0) != 0) continue;
    const std::string target = key.substr(6);
    if (!known_keys().count(target))
      throw ConfigError("config: unknown sweep target '" + target + "'");
    auto options = cfg.get_list(key);
    if (options.empty()) throw ConfigError("config: empty grid for '" + key + "'");
    grid.emplace_back(target, std::move(options));
    (void)value;
  }
  return grid;
}

}  // namespace

RunSetup build_setup(const Config& cfg) {
  cfg.validate_keys(known_keys(), known_keys());

  RunSetup setup;
  setup.model.vocab_size = static_cast<std::size_t>(cfg.get_u64("model.vocab_size", 64));
  setup.model.seed = cfg.get_u64("model.seed", 0);
  setup.model.sharpness = cfg.get_double("model.sharpness", 6.0);
  setup.model.drift = cfg.get_double("model.drift", 0.0);
  setup.model.eos_bonus = cfg.get_double("model.eos_bonus", 0.0);
  try {
    setup.model.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }

  if (!cfg.has("decode.block_size"))
    throw ConfigError("config: missing required key 'decode.block_size'");
  setup.decode.block_size = static_cast<std::size_t>(cfg.require_u64("decode.block_size"));
  setup.decode.max_steps = static_cast<std::size_t>(cfg.get_u64("decode.max_steps", 64));
  setup.decode.conf_threshold = cfg.get_double("decode.conf_threshold", 0.9);
  setup.decode.temper_gamma = cfg.get_double("decode.temper_gamma", 1.0);
  setup.decode.schedule = parse_schedule(cfg.get_string("decode.schedule", "dynamic"));
  setup.decode.draft_mask_mode =
      parse_draft_mask_mode(cfg.get_string("decode.draft_mask_mode", "block"));
  setup.decode.cache_mode = parse_cache_mode(cfg.get_string("decode.cache_mode", "block"));
  setup.decode.verifier_view =
      parse_verifier_view(cfg.get_string("decode.verifier_view", "position_aligned"));
  setup.decode.max_new_tokens = static_cast<std::size_t>(cfg.get_u64("decode.max_new_tokens", 64));
  setup.decode.greedy = cfg.get_bool("decode.greedy", false);
  setup.sampler = parse_sampler(cfg.get_string("decode.sampler", "bd3"));
  try {
    setup.decode.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }

  setup.decode.estimator.kind =
      parse_estimator_kind(cfg.get_string("estimator.kind", "soft_entropy"));
  setup.decode.estimator.beta = cfg.get_double("estimator.beta", 1.0);
  setup.decode.estimator.gamma_conf = cfg.get_double("estimator.gamma_conf", 1.0);
  setup.decode.estimator.tau_ent = cfg.get_double("estimator.tau_ent", 0.2);
  setup.decode.estimator.tau_margin = cfg.get_double("estimator.tau_margin", 0.1);

  setup.policy.policy = parse_policy_kind(cfg.get_string("policy.kind", "never"));
  setup.policy.tau_span = static_cast<std::size_t>(cfg.get_u64("policy.tau_span", 1));
  setup.policy.tau_score = cfg.get_double("policy.tau_score", 0.0);
  setup.policy.tau_on = cfg.get_double("policy.tau_on", 1.0);
  setup.policy.tau_off = cfg.get_double("policy.tau_off", -5.0);
  setup.policy.score_mode = parse_score_mode(cfg.get_string("policy.score_mode", "static"));
  setup.policy.cost_c = cfg.get_double("policy.cost_c", 1.0);
  setup.policy.ucb_beta = cfg.get_double("policy.ucb_beta", 0.5);
  setup.policy.bins = {static_cast<int>(cfg.get_u64("policy.bins_span", 2)),
                       static_cast<int>(cfg.get_u64("policy.bins_progress", 2)),
                       static_cast<int>(cfg.get_u64("policy.bins_entropy", 2))};
  setup.policy.validate();
  setup.bandit_persist = cfg.get_bool("policy.bandit_persist", true);

  setup.seed = cfg.get_u64("run.seed", 0);
  setup.num_sequences = static_cast<std::size_t>(cfg.get_u64("run.num_sequences", 1));
  if (setup.num_sequences == 0) throw ConfigError("config: run.num_sequences must be >= 1");
  setup.arness_k = static_cast<std::size_t>(cfg.get_u64("metrics.arness_k", 2));
  if (setup.arness_k == 0) throw ConfigError("config: metrics.arness_k must be >= 1");
  setup.prompts = load_prompts(cfg, setup.model.vocab_size);
  return setup;
}

TraceSummary summarize(const DecodeTrace& trace, std::size_t arness_k) {
  Aggregate agg;
  agg.add(trace, arness_k);
  TraceSummary s;
  s.tokens = agg.tokens;
  s.nfe = agg.nfe;
  s.tokens_per_nfe = agg.tokens_per_nfe();
  s.verify_rate = agg.verify_rate();
  s.mean_accepted_prefix = agg.mean_accepted_prefix();
  s.rejection_rate = agg.rejection_rate();
  s.local_arness = agg.local_arness();
  s.global_arness = agg.global_arness();
  return s;
}

int cmd_decode(const CommonOptions& opts) {
  RunSetup setup;
  try {
    Config cfg = Config::parse_file(opts.config_path);
    if (opts.seed_override) cfg.set("run.seed", std::to_string(*opts.seed_override));
    setup = build_setup(cfg);
  } catch (const ConfigError& e) {
    std::cerr << e.what() << "\n";
    return kExitConfig;
  }

  std::ostringstream out;
  try {
    for (std::size_t p = 0; p < setup.prompts.size(); ++p) {
      RoutingState policy = setup.policy;
      Rng rng = Rng::derive(setup.seed, {0, p, 0});
      SequenceResult res = run_one(setup, setup.prompts[p], policy, rng);
      for (const auto& step : res.trace.steps)
        out << step_to_json(step, p).dump() << "\n";

      const TraceSummary s = summarize(res.trace, setup.arness_k);
      ordered_json j;
      j["kind"] = "summary";
      j["prompt"] = p;
      j["tokens"] = s.tokens;
      j["nfe"] = s.nfe;
      j["cache_passes"] = res.trace.cache_passes;
      j["blocks"] = res.trace.blocks;
      j["tokens_per_nfe"] = s.tokens_per_nfe;
      j["verify_rate"] = s.verify_rate;
      j["mean_accepted_prefix"] = s.mean_accepted_prefix;
      j["rejection_rate"] = s.rejection_rate;
      j["local_arness"] = s.local_arness;
      j["global_arness"] = s.global_arness;
      j["arness_k"] = setup.arness_k;
      j["sequence"] = res.tokens;
      out << j.dump() << "\n";
    }
  } catch (const std::exception& e) {
    std::cerr << "runtime error: " << e.what() << "\n";
    return kExitRuntime;
  }

  if (opts.out_path.empty()) {
    std::cout << out.str();
  } else {
    std::ofstream f(opts.out_path, std::ios::binary);
    if (!f) {
      std::cerr << "cannot open output file '" << opts.out_path << "'\n";
      return kExitRuntime;
    }
    f << out.str();
  }
  return kExitOk;
}

int cmd_sweep(const CommonOptions& opts) {
  Config base;
  std::vector<std::pair<std::string, std::vector<std::string>>> grid;
  try {
    base = Config::parse_file(opts.config_path);
    if (opts.seed_override) base.set("run.seed", std::to_string(*opts.seed_override));
    grid = sweep_grid(base);
    // Fail fast on config errors before spawning workers.
    Config probe = base;
    for (const auto& [key, options] : grid) probe.set(key, options.front());
    (void)build_setup(probe);
  } catch (const ConfigError& e) {
    std::cerr << e.what() << "\n";
    return kExitConfig;
  }

  std::size_t n_cells = 1;
  for (const auto& [key, options] : grid) n_cells *= options.size();

  std::vector<std::string> rows(n_cells);
  std::atomic<std::size_t> next{0};
  std::mutex err_mutex;
  std::string first_error;

  auto worker = [&]() {
    for (;;) {
      const std::size_t cell = next.fetch_add(1);
      if (cell >= n_cells) return;
      try {
        Config cfg = base;
        std::vector<std::string> cell_values;
        std::size_t rem = cell;
        // Row-major over the grid keys in sorted-key order.
        for (std::size_t g = grid.size(); g-- > 0;) {
          const auto& [key, options] = grid[g];
          cell_values.insert(cell_values.begin(), options[rem % options.size()]);
          cfg.set(key, options[rem % options.size()]);
          rem /= options.size();
        }
        RunSetup setup = build_setup(cfg);

        Aggregate agg;
        RoutingState persistent = setup.policy;
        for (std::size_t p = 0; p < setup.prompts.size(); ++p) {
          for (std::size_t s = 0; s < setup.num_sequences; ++s) {
            const std::uint64_t seq = p * setup.num_sequences + s;
            if (!setup.bandit_persist) persistent = setup.policy;
            Rng rng = Rng::derive(setup.seed, {cell, seq, 0});
            SequenceResult res = run_one(setup, setup.prompts[p], persistent, rng);
            agg.add(res.trace, setup.arness_k);
            Rng ar_rng = Rng::derive(setup.seed, {cell, seq, 1});
            agg.add_baseline(run_ar_baseline(setup, setup.prompts[p], ar_rng));
          }
        }

        std::ostringstream row;
        row << cell;
        for (const auto& v : cell_values) row << "," << v;
        row << "," << agg.tokens << "," << agg.nfe << "," << fmt_double(agg.tokens_per_nfe())
            << "," << fmt_double(agg.speedup_vs_ar()) << "," << fmt_double(agg.verify_rate())
            << "," << fmt_double(agg.mean_accepted_prefix()) << ","
            << fmt_double(agg.rejection_rate()) << "," << fmt_double(agg.local_arness()) << ","
            << fmt_double(agg.global_arness());
        rows[cell] = row.str();
      } catch (const std::exception& e) {
        std::lock_guard<std::mutex> lock(err_mutex);
        if (first_error.empty()) first_error = e.what();
      }
    }
  };

  const unsigned jobs = std::max(1u, std::min<unsigned>(opts.jobs, static_cast<unsigned>(n_cells)));
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned i = 0; i < jobs; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (!first_error.empty()) {
    std::cerr << "runtime error: " << first_error << "\n";
    return kExitRuntime;
  }

  std::ostringstream out;
  out << "cell";
  for (const auto& [key, options] : grid) out << "," << key;
  out << ",tokens,nfe,tokens_per_nfe,speedup_vs_ar,verify_rate,mean_accepted_prefix,"
         "rejection_rate,local_arness_at_k,global_arness_at_k\n";
  for (const auto& row : rows) out << row << "\n";

  if (opts.out_path.empty()) {
    std::cout << out.str();
  } else {
    std::ofstream f(opts.out_path, std::ios::binary);
    if (!f) {
      std::cerr << "cannot open output file '" << opts.out_path << "'\n";
      return kExitRuntime;
    }
    f << out.str();
  }
  return kExitOk;
}

int cmd_verify_dist(const VerifyDistOptions& opts) {
  if (opts.vocab < 2 || opts.n_pairs == 0 || opts.n_samples == 0) {
    std::cerr << "verify-dist: vocab must be >= 2 and counts positive\n";
    return kExitConfig;
  }
  double max_tv = 0.0;
  for (std::size_t i = 0; i < opts.n_pairs; ++i) {
    Rng gen = Rng::derive(opts.seed, {i, 0});
    auto draw_dist = [&]() {
      Dist d;
      d.probs.resize(opts.vocab);
      double sum = 0.0;
      for (auto& p : d.probs) {
        p = 0.05 + gen.next_double();
        sum += p;
      }
      for (auto& p : d.probs) p /= sum;
      return d;
    };
    const Dist p_draft = draw_dist();
    const Dist p_ver = draw_dist();
    Rng mc = Rng::derive(opts.seed, {i, 1});
    const auto law = oracle::mc_committed_token_law(p_draft, p_ver, opts.gamma, opts.n_samples, mc);
    max_tv = std::max(max_tv, law.tv_distance);
    std::printf("pair=%zu tv=%.6f\n", i, law.tv_distance);
  }
  const bool ok = max_tv <= opts.tolerance;
  std::printf("max_tv=%.6f tolerance=%.6f gamma=%.3f %s\n", max_tv, opts.tolerance, opts.gamma,
              ok ? "PASS" : "FAIL");
  if (opts.assert_tolerance && !ok) return kExitRuntime;
  return kExitOk;
}

int cmd_oracle_khat(const OracleKhatOptions& opts) {
  if (opts.n_vectors == 0) {
    std::cerr << "oracle-khat: n_vectors must be positive\n";
    return kExitConfig;
  }
  double max_err = 0.0;
  Rng rng = Rng::derive(opts.seed, {0});
  for (std::size_t i = 0; i < opts.n_vectors; ++i) {
    const std::size_t len = 1 + static_cast<std::size_t>(rng.next_u64() % 12);
    std::vector<double> alpha(len);
    for (auto& a : alpha) a = rng.next_double();
    const double exact = oracle::brute_force_expected_prefix(alpha);
    const double closed = expected_prefix(alpha);
    max_err = std::max(max_err, std::abs(exact - closed));
  }
  const bool ok = max_err <= opts.tolerance;
  std::printf("vectors=%zu max_abs_err=%.3e tolerance=%.3e %s\n", opts.n_vectors, max_err,
              opts.tolerance, ok ? "PASS" : "FAIL");
  return ok ? kExitOk : kExitRuntime;
}

}  // namespace s2d2::cli

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "s2d2/core.hpp"
#include "s2d2/decode.hpp"
#include "s2d2/masks.hpp"
#include "s2d2/metrics.hpp"
#include "s2d2/oracle.hpp"
#include "s2d2/routing.hpp"
#include "s2d2/runner.hpp"
#include "s2d2/synthmodel.hpp"

namespace py = pybind11;
using namespace s2d2;

namespace {

std::vector<std::vector<int>> mask_rows(const AttnMask& m) {
  std::vector<std::vector<int>> rows(m.size(), std::vector<int>(m.size(), 0));
  for (std::size_t r = 0; r < m.size(); ++r)
    for (std::size_t c = 0; c < m.size(); ++c) rows[r][c] = m.at(r, c) ? 1 : 0;
  return rows;
}

PolicyKind policy_from_name(const std::string& name) {
  if (name == "never") return PolicyKind::kNever;
  if (name == "min_span") return PolicyKind::kMinSpan;
  if (name == "score_threshold") return PolicyKind::kScoreThreshold;
  if (name == "hysteresis") return PolicyKind::kHysteresis;
  if (name == "bandit") return PolicyKind::kBandit;
  throw py::value_error("unknown policy '" + name + "'");
}

Sampler sampler_from_name(const std::string& name) {
  if (name == "bd3") return Sampler::kBd3;
  if (name == "s2d2") return Sampler::kS2d2;
  if (name == "subs") return Sampler::kSubs;
  throw py::value_error("unknown sampler '" + name + "'");
}

py::dict run_decode(const ModelSpec& model, const std::vector<TokenId>& prompt,
                    std::size_t block_size, const std::string& sampler_name,
                    const std::string& policy_name, std::size_t tau_span, double conf_threshold,
                    double temper_gamma, std::size_t max_new_tokens, std::uint64_t seed,
                    std::size_t arness_k) {
  DecodeConfig cfg;
  cfg.block_size = block_size;
  cfg.conf_threshold = conf_threshold;
  cfg.temper_gamma = temper_gamma;
  cfg.max_new_tokens = max_new_tokens;
  cfg.validate();
  RoutingState policy;
  policy.policy = policy_from_name(policy_name);
  policy.tau_span = tau_span;
  Rng rng = Rng::derive(seed, {0, 0, 0});
  auto [tokens, trace] =
      decode_sequence(model, prompt, cfg, sampler_from_name(sampler_name), policy, rng);
  const cli::TraceSummary s = cli::summarize(trace, arness_k);
  py::dict out;
  out["tokens"] = tokens;
  out["generated"] = s.tokens;
  out["nfe"] = s.nfe;
  out["blocks"] = trace.blocks;
  out["steps"] = trace.sampler_steps();
  out["tokens_per_nfe"] = s.tokens_per_nfe;
  out["verify_rate"] = s.verify_rate;
  out["mean_accepted_prefix"] = s.mean_accepted_prefix;
  out["rejection_rate"] = s.rejection_rate;
  out["local_arness"] = s.local_arness;
  out["global_arness"] = s.global_arness;
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Block-diffusion decoding engine with self-speculative verification";

  py::register_exception<AllZeroError>(m, "AllZeroError");
  py::register_exception<DraftProbZero>(m, "DraftProbZero");

  py::class_<ModelSpec>(m, "ModelSpec")
      .def(py::init([](std::size_t vocab_size, std::uint64_t seed, double sharpness, double drift,
                       double eos_bonus) {
             ModelSpec spec{vocab_size, seed, sharpness, drift, eos_bonus};
             spec.validate();
             return spec;
           }),
           py::arg("vocab_size") = 64, py::arg("seed") = 0, py::arg("sharpness") = 6.0,
           py::arg("drift") = 0.0, py::arg("eos_bonus") = 0.0)
      .def_readonly("vocab_size", &ModelSpec::vocab_size)
      .def_readonly("seed", &ModelSpec::seed)
      .def_readonly("sharpness", &ModelSpec::sharpness)
      .def_readonly("drift", &ModelSpec::drift)
      .def_property_readonly("mask_id", &ModelSpec::mask_id)
      .def_property_readonly("eos_id", &ModelSpec::eos_id);

  m.def(
      "normalize_dist",
      [](const std::vector<double>& w) { return normalize_dist(w).probs; }, py::arg("weights"));
  m.def(
      "top1_margin", [](const std::vector<double>& p) { return top1_margin(Dist{p}); },
      py::arg("probs"));
  m.def(
      "normalized_entropy",
      [](const std::vector<double>& p) { return normalized_entropy(Dist{p}); }, py::arg("probs"));

  m.def(
      "causal_mask", [](std::size_t n) { return mask_rows(causal_mask(n)); }, py::arg("n"));
  m.def(
      "verifier_mask", [](std::size_t L) { return mask_rows(verifier_mask(L)); }, py::arg("L"));
  m.def(
      "draft_mask", [](std::size_t B, std::size_t j) { return mask_rows(draft_mask(B, j)); },
      py::arg("B"), py::arg("j"));

  m.def("accept_prob", &accept_prob, py::arg("p"), py::arg("q"), py::arg("gamma") = 1.0);
  m.def(
      "residual_dist",
      [](const std::vector<double>& ver, const std::vector<double>& draft) {
        return residual_dist(Dist{ver}, Dist{draft}).probs;
      },
      py::arg("p_ver"), py::arg("p_draft"));
  m.def("expected_prefix", &expected_prefix, py::arg("alpha"));
  m.def("brute_force_expected_prefix", &oracle::brute_force_expected_prefix, py::arg("alpha"));
  m.def("local_energy", &local_energy, py::arg("p"), py::arg("q"));

  m.def(
      "forward",
      [](const ModelSpec& spec, const std::vector<TokenId>& prefix,
         const std::vector<TokenId>& block, const std::vector<std::size_t>& query_positions,
         bool verify) {
        BlockState state{block, prefix, spec.mask_id()};
        const auto dists = forward(spec, prefix, block, block_full_mask(block.size()),
                                   query_positions,
                                   verify ? ForwardMode::kVerify : ForwardMode::kDraft);
        std::vector<std::vector<double>> out;
        out.reserve(dists.size());
        for (const auto& d : dists) out.push_back(d.probs);
        return out;
      },
      py::arg("model"), py::arg("prefix"), py::arg("block"), py::arg("query_positions"),
      py::arg("verify") = false);

  m.def("decode", &run_decode, py::arg("model"), py::arg("prompt"), py::arg("block_size") = 8,
        py::arg("sampler") = "s2d2", py::arg("policy") = "min_span", py::arg("tau_span") = 1,
        py::arg("conf_threshold") = 0.9, py::arg("temper_gamma") = 1.0,
        py::arg("max_new_tokens") = 64, py::arg("seed") = 0, py::arg("arness_k") = 2);
}

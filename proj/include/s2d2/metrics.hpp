#pragma once

#include <stdexcept>
#include <vector>

#include "s2d2/trace.hpp"

namespace s2d2 {

struct ZeroNfe : std::runtime_error {
  ZeroNfe() : std::runtime_error("nfe_speedup: method trace has no forward passes") {}
};

struct NonpositiveProb : std::runtime_error {
  NonpositiveProb() : std::runtime_error("local_energy: probabilities must be positive") {}
};

// (baseline NFE per token) / (method NFE per token).
double nfe_speedup(const DecodeTrace& trace, const DecodeTrace& baseline);

// Fraction of commit events landing within the k block positions cyclically
// following the previously committed position (block start for the first
// event of each block). 1.0 means exact left-to-right decoding.
double local_arness_at_k(const DecodeTrace& trace, std::size_t k);

// Fraction of commit events whose position is among the k leftmost
// still-masked positions of the current block.
double global_arness_at_k(const DecodeTrace& trace, std::size_t k);

// E = -log q + log p; min(1, exp(-E)) equals the untempered acceptance ratio.
double local_energy(double p, double q);

struct ConfidenceCurve {
  std::vector<double> mean_confidence;   // per bin, NaN-free: empty bins are 0
  std::vector<double> tokens_per_step;   // per bin
  std::vector<std::size_t> event_count;  // commits per bin
};

// Commit events bucketed by normalized sequence position.
ConfidenceCurve confidence_curve(const DecodeTrace& trace, std::size_t n_bins);

}  // namespace s2d2

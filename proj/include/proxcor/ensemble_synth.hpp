#pragma once

// Synthetic detector ensembles: clusters of output vectors on T^n standing in
// for families of detectors trained with different architectures.

#include <cstdint>
#include <vector>

#include "proxcor/coverage.hpp"

namespace proxcor {

struct SynthConfig {
    NormalizedVector anchor;
    double target_q = 0.6;
    int clusters = 1;
    double within_spread = 0.05;  // sd of per-record tail noise
    double between_spread = 1.0;  // length of each cluster's centre offset
    int count_per_cluster = 10;
    double q_jitter = 0.02;       // sd of per-record accuracy around target_q
    std::uint64_t seed = 0;
};

// Record j of cluster k has
//   q_hat = clamp(target_q + q_jitter * N(0, 1)) into (0, 1)
//   tail  = sqrt(1 - q_hat^2) * normalize(centre_k + within_spread * eps_j)
// with centre_k = between_spread * (uniform direction in R^{n-2}), and vector
// B^T (0, q_hat, tail). Records are tagged "cluster-k".
std::vector<EnsembleRecord> generate_ensemble(const SynthConfig& config);

} // namespace proxcor

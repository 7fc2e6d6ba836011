#pragma once

#include <cstdint>
#include <vector>

#include "tpa/tensor.hpp"

namespace tpa {

// SplitMix64 mixing step; the basis of all sub-seed derivation.
std::uint64_t splitmix64(std::uint64_t x);

// Per-trial sub-seed: splitmix64(master + (trial+1) * golden-gamma increment).
// Documented so any single trial can be reproduced in isolation.
std::uint64_t trial_seed(std::uint64_t master, std::uint64_t trial);

// iid standard normal entries.
Tensor3 random_tensor(int n1, int n2, int n3, std::uint64_t seed);

// Every Fourier face gets singular values drawn uniformly from
// [sigma_min, sigma_max]; with the defaults the tensor is invertible with
// ||A||_2 <= sigma_max and ||A^-1||_2 <= 1/sigma_min.
Tensor3 random_well_conditioned(int n1, int n2, int n3, std::uint64_t seed,
                                double sigma_min = 1.0, double sigma_max = 2.0);

// Fourier face i gets exactly ranks[i] nonzero singular values, each in
// [sigma_min, sigma_max]. The profile must be conjugate-symmetric
// (ranks[i] == ranks[(n3-i) % n3]) and within min(n1, n2); InfeasibleDims
// otherwise.
Tensor3 random_rank_profile(int n1, int n2, int n3, const std::vector<int>& ranks,
                            std::uint64_t seed, double sigma_min = 1.0,
                            double sigma_max = 2.0);

// Square tensor whose first Fourier face is rank-deficient; inv() must refuse.
Tensor3 random_singular(int n, int n3, std::uint64_t seed);

// Perturbation that cannot change any face rank: each face perturbation lives
// inside the span of that face's top singular subspaces with spectral norm
// min(scale * sigma_max(face), 0.4 * sigma_r(face)), keeping sigma_r bounded
// away from both zero and the rank tolerance. Zero-rank faces stay zero.
Tensor3 rank_preserving_perturbation(const Tensor3& a, double scale, std::uint64_t seed);

// a scaled so its Frobenius norm is exactly `target` (zero tensor stays zero).
Tensor3 with_frobenius_norm(const Tensor3& a, double target);

// a scaled so its spectral norm is exactly `target` (zero tensor stays zero).
Tensor3 with_spectral_norm(const Tensor3& a, double target);

}  // namespace tpa

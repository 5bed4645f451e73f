#pragma once

#include <random>

#include "isopair/bcl.hpp"

namespace isopair::rng {

inline constexpr uint64_t kDefaultSeed = 0xC0FFEE;

/// Standard complex Gaussian via explicit Box-Muller on engine uniforms, so
/// seeded suites reproduce across standard libraries.
Cplx gaussian(std::mt19937_64& gen);

/// Haar-like unitary: orthonormalization (QR) of a complex Gaussian matrix,
/// with the R-diagonal phases absorbed.
Eigen::MatrixXcd haar_unitary(int d, std::mt19937_64& gen);

/// Conjugated coordinate projection of the given rank.
Eigen::MatrixXcd random_projection(int d, int rank, std::mt19937_64& gen);

/// Random normal matrix U diag U*.
Eigen::MatrixXcd random_normal(int d, std::mt19937_64& gen);

/// Generic triple: Haar-like U, conjugated coordinate projection of random
/// rank in [1, d-1] (so the defect is typically Mixed).
bcl::BclTriple random_triple(int d, std::mt19937_64& gen);

/// Zero-class triple: U block-diagonal over ran P and its complement.
bcl::BclTriple random_triple_zero(int d, std::mt19937_64& gen);

/// OffDiagonal-class triple on C^{2k}: U swaps ran P and its complement.
bcl::BclTriple random_triple_offdiag(int k, std::mt19937_64& gen);

/// Commuting pair as two random cubic polynomials of one Gaussian matrix,
/// normalized to unit scale; their joint spectrum is {(p(mu), q(mu))}.
std::pair<Eigen::MatrixXcd, Eigen::MatrixXcd> random_commuting_pair(int d, std::mt19937_64& gen);

}  // namespace isopair::rng

#pragma once

#include "isopair/io.hpp"
#include "isopair/random_gen.hpp"

namespace isopair::verify {

struct Assertion {
  std::string id;
  bool pass = false;
  double value = 0.0;  // measured deviation / residual / gap
  double bound = 0.0;  // what it must stay below
};

struct SuiteResult {
  std::string suite;
  std::vector<Assertion> assertions;
  bool all_pass() const;
  double max_value() const;
};

std::string suite_json(const SuiteResult& r);

/// Defect identities: direct Eq-style defect, projection-difference form and
/// the triple formula agree entrywise on certified windows, for the shipped
/// models (through their exact intertwiners where the presentation differs)
/// and for seeded random finite triples.
SuiteResult identities_suite(int grade = 8, uint64_t seed = rng::kDefaultSeed,
                             int random_triples = 50, int max_dim = 8);

/// Equivalence ladders agree with the detected class on the shipped models
/// and per-class random finite triples.
SuiteResult ladders_suite(int grade = 8, uint64_t seed = rng::kDefaultSeed, int per_class = 50);

/// All four intertwiners: orthonormal columns and exact intertwining on
/// every basis vector of the given grade.  W parameterizes the zero and
/// equal-range cases; defaults to diag(1, i).
SuiteResult intertwiners_suite(int grade = 8,
                               const std::optional<Eigen::MatrixXcd>& W = std::nullopt);

/// koszul_finite verdicts match joint_spectrum_finite membership on seeded
/// commuting pairs, plus the reducing-spectrum properties (block direct sum,
/// adjoint conjugation, tensor product of normals).
SuiteResult koszul_oracle_suite(uint64_t seed = rng::kDefaultSeed, int count = 200,
                                int max_dim = 6, double tol = 1e-9, int property_count = 50);

/// Stage-2 certificate at one parameter point.
SuiteResult stage2_suite(Cplx l1, Cplx l2, int series_cap = 40, int generators = 20);

/// Invariant-subspace embedding: orthonormal image, compression to the
/// coordinate pair, positive compressed defect.
SuiteResult embedding_suite(int grade = 4);

}  // namespace isopair::verify

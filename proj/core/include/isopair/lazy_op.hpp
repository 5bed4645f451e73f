#pragma once

#include <Eigen/Dense>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>

#include "isopair/sparse_vec.hpp"

namespace isopair {

/// An operator between countable orthonormal bases given by exact forward and
/// adjoint actions on basis vectors.  Actions must return exactly supported
/// vectors (tail_bound 0); apply() extends them linearly.  Instances are
/// immutable values; basis actions are memoized behind an internal lock, so
/// concurrent use is safe and results never depend on the cache.
class LazyOp {
 public:
  using Action = std::function<SparseVec(const BasisIndex&)>;

  LazyOp(IndexScheme domain, IndexScheme codomain, Action forward, Action adjoint,
         double norm_bound, std::optional<int> band_radius = std::nullopt,
         std::string label = {});

  const IndexScheme& domain() const;
  const IndexScheme& codomain() const;
  double norm_bound() const;
  /// Max grade displacement of basis images, when known.
  std::optional<int> band_radius() const;
  const std::string& label() const;

  /// Exact image of a domain basis vector.
  SparseVec forward(const BasisIndex& i) const;
  /// Exact image of a codomain basis vector under the adjoint.
  SparseVec adjoint_action(const BasisIndex& i) const;

 private:
  struct Impl;
  std::shared_ptr<const Impl> impl_;
};

/// Linear extension of the forward action; tail bound scales by norm_bound.
SparseVec apply(const LazyOp& op, const SparseVec& v);
SparseVec apply_adjoint(const LazyOp& op, const SparseVec& v);

LazyOp adjoint(const LazyOp& op);
/// compose(a, b) acts as a after b.
LazyOp compose(const LazyOp& a, const LazyOp& b);
LazyOp add(const LazyOp& a, const LazyOp& b);
LazyOp scale(Cplx c, const LazyOp& a);
LazyOp identity(const IndexScheme& scheme);

/// Operator supported on span(window), given by a square matrix in that
/// window's basis (column i holds the image of window[i]); zero outside.
LazyOp from_matrix(const IndexScheme& scheme, std::span<const BasisIndex> window,
                   const Eigen::MatrixXcd& m);

/// matrix(j, i) = <op e_i, e_j>; exact because basis actions are exact.
Eigen::MatrixXcd compress(const LazyOp& op, std::span<const BasisIndex> window);
Eigen::MatrixXcd compress(const LazyOp& op, std::span<const BasisIndex> domain_window,
                          std::span<const BasisIndex> codomain_window);

}  // namespace isopair

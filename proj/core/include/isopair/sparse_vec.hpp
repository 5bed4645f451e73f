#pragma once

#include <map>
#include <vector>

#include "isopair/schemes.hpp"

namespace isopair {

/// Finitely supported coefficient vector over a countable orthonormal basis,
/// with a certified upper bound on the l2 norm of any dropped coefficients.
/// tail_bound == 0 means the vector is exactly supported.
class SparseVec {
 public:
  SparseVec() : scheme_(IndexScheme::hardy_disc()) {}
  explicit SparseVec(IndexScheme scheme, double tail_bound = 0.0);
  static SparseVec basis(const IndexScheme& scheme, const BasisIndex& i);

  const IndexScheme& scheme() const { return scheme_; }
  double tail_bound() const { return tail_bound_; }
  void set_tail_bound(double t);

  /// Sets a coefficient; exact zeros are erased from the support.
  void set(const BasisIndex& i, Cplx v);
  /// Accumulates into a coefficient.
  void add_term(const BasisIndex& i, Cplx v);
  Cplx coeff(const BasisIndex& i) const;

  const std::map<BasisIndex, Cplx>& entries() const { return entries_; }
  size_t support_size() const { return entries_.size(); }
  bool is_zero() const { return entries_.empty(); }

  double norm() const;
  double sup_norm() const;

  SparseVec& operator+=(const SparseVec& o);
  SparseVec& operator-=(const SparseVec& o);
  SparseVec& operator*=(Cplx c);
  /// this += c * v
  void axpy(Cplx c, const SparseVec& v);

  friend SparseVec operator+(SparseVec a, const SparseVec& b) { return a += b; }
  friend SparseVec operator-(SparseVec a, const SparseVec& b) { return a -= b; }
  friend SparseVec operator*(Cplx c, SparseVec v) { return v *= c; }

 private:
  IndexScheme scheme_;
  std::map<BasisIndex, Cplx> entries_;
  double tail_bound_ = 0.0;
};

/// <x, y>, linear in x and conjugate-linear in y.
Cplx inner(const SparseVec& x, const SparseVec& y);

/// sup-norm of the coefficient difference x - y.
double deviation(const SparseVec& x, const SparseVec& y);

/// Throws std::invalid_argument if v is not finite (NaN/Inf).
void require_finite(Cplx v);

}  // namespace isopair

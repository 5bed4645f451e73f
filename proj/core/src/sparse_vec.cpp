#include "isopair/sparse_vec.hpp"

#include <cmath>
#include <stdexcept>

namespace isopair {

void require_finite(Cplx v) {
  if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
    throw std::invalid_argument("non-finite scalar");
}

SparseVec::SparseVec(IndexScheme scheme, double tail_bound) : scheme_(std::move(scheme)) {
  set_tail_bound(tail_bound);
}

SparseVec SparseVec::basis(const IndexScheme& scheme, const BasisIndex& i) {
  require_valid(scheme, i);
  SparseVec v(scheme);
  v.entries_[i] = Cplx(1.0, 0.0);
  return v;
}

void SparseVec::set_tail_bound(double t) {
  if (!(t >= 0.0) || !std::isfinite(t))
    throw std::invalid_argument("tail bound must be finite and nonnegative");
  tail_bound_ = t;
}

void SparseVec::set(const BasisIndex& i, Cplx v) {
  require_finite(v);
  require_valid(scheme_, i);
  if (v == Cplx(0.0, 0.0)) {
    entries_.erase(i);
  } else {
    entries_[i] = v;
  }
}

void SparseVec::add_term(const BasisIndex& i, Cplx v) {
  require_finite(v);
  require_valid(scheme_, i);
  auto it = entries_.find(i);
  if (it == entries_.end()) {
    if (v != Cplx(0.0, 0.0)) entries_[i] = v;
    return;
  }
  it->second += v;
  if (it->second == Cplx(0.0, 0.0)) entries_.erase(it);
}

Cplx SparseVec::coeff(const BasisIndex& i) const {
  auto it = entries_.find(i);
  return it == entries_.end() ? Cplx(0.0, 0.0) : it->second;
}

double SparseVec::norm() const {
  double s = 0.0;
  for (const auto& [i, v] : entries_) s += std::norm(v);
  return std::sqrt(s);
}

double SparseVec::sup_norm() const {
  double m = 0.0;
  for (const auto& [i, v] : entries_) m = std::max(m, std::abs(v));
  return m;
}

SparseVec& SparseVec::operator+=(const SparseVec& o) {
  if (scheme_ != o.scheme_) throw std::invalid_argument("SparseVec: scheme mismatch in +");
  for (const auto& [i, v] : o.entries_) add_term(i, v);
  tail_bound_ += o.tail_bound_;
  return *this;
}

SparseVec& SparseVec::operator-=(const SparseVec& o) {
  if (scheme_ != o.scheme_) throw std::invalid_argument("SparseVec: scheme mismatch in -");
  for (const auto& [i, v] : o.entries_) add_term(i, -v);
  tail_bound_ += o.tail_bound_;
  return *this;
}

SparseVec& SparseVec::operator*=(Cplx c) {
  require_finite(c);
  if (c == Cplx(0.0, 0.0)) {
    entries_.clear();
  } else {
    for (auto& [i, v] : entries_) v *= c;
  }
  tail_bound_ *= std::abs(c);
  return *this;
}

void SparseVec::axpy(Cplx c, const SparseVec& v) {
  require_finite(c);
  if (scheme_ != v.scheme_) throw std::invalid_argument("SparseVec: scheme mismatch in axpy");
  for (const auto& [i, x] : v.entries_) add_term(i, c * x);
  tail_bound_ += std::abs(c) * v.tail_bound_;
}

Cplx inner(const SparseVec& x, const SparseVec& y) {
  if (x.scheme() != y.scheme()) throw std::invalid_argument("inner: scheme mismatch");
  const SparseVec* small = &x;
  const SparseVec* big = &y;
  bool conj_small = false;
  if (y.support_size() < x.support_size()) {
    small = &y;
    big = &x;
    conj_small = true;
  }
  Cplx s(0.0, 0.0);
  for (const auto& [i, v] : small->entries()) {
    Cplx w = big->coeff(i);
    if (w == Cplx(0.0, 0.0)) continue;
    // accumulate x_i * conj(y_i)
    s += conj_small ? w * std::conj(v) : v * std::conj(w);
  }
  return s;
}

double deviation(const SparseVec& x, const SparseVec& y) {
  if (x.scheme() != y.scheme()) throw std::invalid_argument("deviation: scheme mismatch");
  double m = 0.0;
  for (const auto& [i, v] : x.entries()) m = std::max(m, std::abs(v - y.coeff(i)));
  for (const auto& [i, v] : y.entries()) m = std::max(m, std::abs(x.coeff(i) - v));
  return m;
}

}  // namespace isopair

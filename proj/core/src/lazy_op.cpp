#include "isopair/lazy_op.hpp"

#include <mutex>
#include <stdexcept>
#include <unordered_map>

namespace isopair {

struct LazyOp::Impl {
  IndexScheme domain, codomain;
  Action fwd, adj;
  double norm_bound;
  std::optional<int> band_radius;
  std::string label;

  mutable std::mutex lock;
  mutable std::unordered_map<BasisIndex, SparseVec, BasisIndexHash> fwd_memo, adj_memo;

  Impl(IndexScheme d, IndexScheme c, Action f, Action a, double nb, std::optional<int> br,
       std::string lb)
      : domain(std::move(d)),
        codomain(std::move(c)),
        fwd(std::move(f)),
        adj(std::move(a)),
        norm_bound(nb),
        band_radius(br),
        label(std::move(lb)) {}

  SparseVec eval(bool forward, const BasisIndex& i) const {
    const IndexScheme& in = forward ? domain : codomain;
    const IndexScheme& out = forward ? codomain : domain;
    require_valid(in, i);
    {
      std::lock_guard<std::mutex> g(lock);
      auto& memo = forward ? fwd_memo : adj_memo;
      auto it = memo.find(i);
      if (it != memo.end()) return it->second;
    }
    SparseVec v = (forward ? fwd : adj)(i);
    if (v.scheme() != out) throw std::logic_error("LazyOp action returned wrong scheme");
    if (v.tail_bound() != 0.0) throw std::logic_error("LazyOp action must be exact (tail 0)");
    std::lock_guard<std::mutex> g(lock);
    auto& memo = forward ? fwd_memo : adj_memo;
    return memo.emplace(i, std::move(v)).first->second;
  }
};

LazyOp::LazyOp(IndexScheme domain, IndexScheme codomain, Action forward, Action adjoint,
               double norm_bound, std::optional<int> band_radius, std::string label) {
  if (!(norm_bound >= 0.0)) throw std::invalid_argument("LazyOp: negative norm bound");
  if (band_radius && *band_radius < 0) throw std::invalid_argument("LazyOp: negative band radius");
  impl_ = std::make_shared<Impl>(std::move(domain), std::move(codomain), std::move(forward),
                                 std::move(adjoint), norm_bound, band_radius, std::move(label));
}

const IndexScheme& LazyOp::domain() const { return impl_->domain; }
const IndexScheme& LazyOp::codomain() const { return impl_->codomain; }
double LazyOp::norm_bound() const { return impl_->norm_bound; }
std::optional<int> LazyOp::band_radius() const { return impl_->band_radius; }
const std::string& LazyOp::label() const { return impl_->label; }

SparseVec LazyOp::forward(const BasisIndex& i) const { return impl_->eval(true, i); }
SparseVec LazyOp::adjoint_action(const BasisIndex& i) const { return impl_->eval(false, i); }

SparseVec apply(const LazyOp& op, const SparseVec& v) {
  if (v.scheme() != op.domain()) throw std::invalid_argument("apply: scheme mismatch");
  SparseVec out(op.codomain());
  for (const auto& [i, c] : v.entries()) out.axpy(c, op.forward(i));
  out.set_tail_bound(op.norm_bound() * v.tail_bound());
  return out;
}

SparseVec apply_adjoint(const LazyOp& op, const SparseVec& v) {
  if (v.scheme() != op.codomain()) throw std::invalid_argument("apply_adjoint: scheme mismatch");
  SparseVec out(op.domain());
  for (const auto& [i, c] : v.entries()) out.axpy(c, op.adjoint_action(i));
  out.set_tail_bound(op.norm_bound() * v.tail_bound());
  return out;
}

LazyOp adjoint(const LazyOp& op) {
  return LazyOp(
      op.codomain(), op.domain(), [op](const BasisIndex& i) { return op.adjoint_action(i); },
      [op](const BasisIndex& i) { return op.forward(i); }, op.norm_bound(), op.band_radius(),
      op.label().empty() ? std::string() : "adj(" + op.label() + ")");
}

LazyOp compose(const LazyOp& a, const LazyOp& b) {
  if (a.domain() != b.codomain()) throw std::invalid_argument("compose: scheme mismatch");
  std::optional<int> band;
  if (a.band_radius() && b.band_radius()) band = *a.band_radius() + *b.band_radius();
  return LazyOp(
      b.domain(), a.codomain(), [a, b](const BasisIndex& i) { return apply(a, b.forward(i)); },
      [a, b](const BasisIndex& i) { return apply_adjoint(b, a.adjoint_action(i)); },
      a.norm_bound() * b.norm_bound(), band);
}

LazyOp add(const LazyOp& a, const LazyOp& b) {
  if (a.domain() != b.domain() || a.codomain() != b.codomain())
    throw std::invalid_argument("add: scheme mismatch");
  std::optional<int> band;
  if (a.band_radius() && b.band_radius()) band = std::max(*a.band_radius(), *b.band_radius());
  return LazyOp(
      a.domain(), a.codomain(),
      [a, b](const BasisIndex& i) { return a.forward(i) + b.forward(i); },
      [a, b](const BasisIndex& i) { return a.adjoint_action(i) + b.adjoint_action(i); },
      a.norm_bound() + b.norm_bound(), band);
}

LazyOp scale(Cplx c, const LazyOp& a) {
  require_finite(c);
  return LazyOp(
      a.domain(), a.codomain(), [a, c](const BasisIndex& i) { return c * a.forward(i); },
      [a, c](const BasisIndex& i) { return std::conj(c) * a.adjoint_action(i); },
      std::abs(c) * a.norm_bound(), a.band_radius());
}

LazyOp identity(const IndexScheme& scheme) {
  auto act = [scheme](const BasisIndex& i) { return SparseVec::basis(scheme, i); };
  return LazyOp(scheme, scheme, act, act, 1.0, 0, "I");
}

LazyOp from_matrix(const IndexScheme& scheme, std::span<const BasisIndex> window,
                   const Eigen::MatrixXcd& m) {
  const auto n = static_cast<Eigen::Index>(window.size());
  if (m.rows() != n || m.cols() != n)
    throw std::invalid_argument("from_matrix: matrix not square over the window");
  if (!m.allFinite()) throw std::invalid_argument("from_matrix: non-finite matrix");
  std::vector<BasisIndex> w(window.begin(), window.end());
  auto pos = std::make_shared<std::map<BasisIndex, int>>();
  int band = 0;
  for (int i = 0; i < n; ++i) {
    require_valid(scheme, w[static_cast<size_t>(i)]);
    (*pos)[w[static_cast<size_t>(i)]] = i;
  }
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (m(j, i) != Cplx(0.0, 0.0)) {
        long d = std::abs(scheme.grade(w[static_cast<size_t>(j)]) -
                          scheme.grade(w[static_cast<size_t>(i)]));
        band = std::max<int>(band, static_cast<int>(d));
      }
    }
  }
  auto make = [scheme, w, pos, n](const Eigen::MatrixXcd& mat) {
    return [scheme, w, pos, n, mat](const BasisIndex& i) {
      SparseVec out(scheme);
      auto it = pos->find(i);
      if (it == pos->end()) return out;  // zero outside the window
      for (Eigen::Index j = 0; j < n; ++j) {
        if (mat(j, it->second) != Cplx(0.0, 0.0))
          out.set(w[static_cast<size_t>(j)], mat(j, it->second));
      }
      return out;
    };
  };
  // Frobenius norm dominates the operator norm.
  return LazyOp(scheme, scheme, make(m), make(m.adjoint()), m.norm(), band, "window-matrix");
}

Eigen::MatrixXcd compress(const LazyOp& op, std::span<const BasisIndex> domain_window,
                          std::span<const BasisIndex> codomain_window) {
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(codomain_window.size()),
                                              static_cast<Eigen::Index>(domain_window.size()));
  std::map<BasisIndex, Eigen::Index> row;
  for (size_t j = 0; j < codomain_window.size(); ++j) {
    require_valid(op.codomain(), codomain_window[j]);
    row[codomain_window[j]] = static_cast<Eigen::Index>(j);
  }
  for (size_t i = 0; i < domain_window.size(); ++i) {
    SparseVec img = op.forward(domain_window[i]);
    for (const auto& [idx, v] : img.entries()) {
      auto it = row.find(idx);
      if (it != row.end()) m(it->second, static_cast<Eigen::Index>(i)) = v;
    }
  }
  return m;
}

Eigen::MatrixXcd compress(const LazyOp& op, std::span<const BasisIndex> window) {
  if (op.domain() != op.codomain())
    throw std::invalid_argument("compress: single window needs equal schemes");
  return compress(op, window, window);
}

}  // namespace isopair

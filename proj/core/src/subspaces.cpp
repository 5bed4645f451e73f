#include "isopair/subspaces.hpp"

#include <map>
#include <set>
#include <stdexcept>

namespace isopair {

namespace {

// Dense matrix whose columns are the given vectors over the union of their
// supports; rows ordered by the (self-contained) BasisIndex order.
std::pair<Eigen::MatrixXcd, std::vector<BasisIndex>> stack_columns(
    const std::vector<SparseVec>& vs) {
  std::set<BasisIndex> support;
  for (const auto& v : vs)
    for (const auto& [i, c] : v.entries()) support.insert(i);
  std::vector<BasisIndex> rows(support.begin(), support.end());
  std::map<BasisIndex, Eigen::Index> pos;
  for (size_t k = 0; k < rows.size(); ++k) pos[rows[k]] = static_cast<Eigen::Index>(k);
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(rows.size()),
                                              static_cast<Eigen::Index>(vs.size()));
  for (size_t j = 0; j < vs.size(); ++j)
    for (const auto& [i, c] : vs[j].entries()) m(pos[i], static_cast<Eigen::Index>(j)) = c;
  return {m, rows};
}

// SVD basis columns carry rotation noise (~1e-16) across the whole window;
// strip it so kernel vectors keep their true support.
constexpr double kCoefficientNoise = 1e-14;

void clean_and_normalize(SparseVec& v) {
  std::vector<BasisIndex> drop;
  for (const auto& [i, c] : v.entries())
    if (std::abs(c) <= kCoefficientNoise) drop.push_back(i);
  for (const auto& i : drop) v.set(i, Cplx(0.0, 0.0));
  double n = v.norm();
  if (n > 0.0) v *= Cplx(1.0 / n, 0.0);
}

}  // namespace

int numerical_rank(const Eigen::MatrixXcd& m, double tol) {
  if (m.size() == 0) return 0;
  Eigen::ColPivHouseholderQR<Eigen::MatrixXcd> qr(m);
  qr.setThreshold(tol * static_cast<double>(std::max(m.rows(), m.cols())));
  return static_cast<int>(qr.rank());
}

std::vector<SparseVec> window_nullspace(const LazyOp& op, std::span<const BasisIndex> window,
                                        double tol) {
  if (window.empty()) return {};
  std::vector<SparseVec> images;
  images.reserve(window.size());
  for (const auto& i : window) images.push_back(op.forward(i));
  auto [m, rows] = stack_columns(images);
  std::vector<SparseVec> out;
  const auto n = static_cast<Eigen::Index>(window.size());
  if (m.rows() == 0) {
    // every window vector is annihilated
    for (const auto& i : window) out.push_back(SparseVec::basis(op.domain(), i));
    return out;
  }
  Eigen::FullPivLU<Eigen::MatrixXcd> lu(m);
  lu.setThreshold(tol * static_cast<double>(std::max(m.rows(), m.cols())));
  const auto nullity = lu.dimensionOfKernel();
  if (nullity == 0) return out;
  Eigen::MatrixXcd k = lu.kernel();
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(k);
  Eigen::MatrixXcd q = qr.householderQ() * Eigen::MatrixXcd::Identity(n, nullity);
  for (Eigen::Index c = 0; c < nullity; ++c) {
    SparseVec v(op.domain());
    for (Eigen::Index r = 0; r < n; ++r) {
      if (q(r, c) != Cplx(0.0, 0.0)) v.set(window[static_cast<size_t>(r)], q(r, c));
    }
    clean_and_normalize(v);
    out.push_back(std::move(v));
  }
  return out;
}

std::vector<SparseVec> orthonormalize(const std::vector<SparseVec>& vs, double tol) {
  if (vs.empty()) return {};
  auto [m, rows] = stack_columns(vs);
  if (m.rows() == 0) return {};
  Eigen::ColPivHouseholderQR<Eigen::MatrixXcd> qr(m);
  qr.setThreshold(tol * static_cast<double>(std::max(m.rows(), m.cols())));
  const auto rank = qr.rank();
  Eigen::MatrixXcd q = qr.householderQ() * Eigen::MatrixXcd::Identity(m.rows(), rank);
  std::vector<SparseVec> out;
  for (Eigen::Index k = 0; k < rank; ++k) {
    SparseVec v(vs[0].scheme());
    for (size_t r = 0; r < rows.size(); ++r) {
      Cplx c = q(static_cast<Eigen::Index>(r), k);
      if (c != Cplx(0.0, 0.0)) v.set(rows[r], c);
    }
    clean_and_normalize(v);
    out.push_back(std::move(v));
  }
  return out;
}

SparseVec orthogonal_residual(const SparseVec& x, const std::vector<SparseVec>& onb) {
  SparseVec r = x;
  for (const auto& b : onb) r.axpy(-inner(x, b), b);
  return r;
}

double subspace_inclusion_deviation(const std::vector<SparseVec>& a,
                                    const std::vector<SparseVec>& b) {
  double dev = 0.0;
  for (const auto& v : a) dev = std::max(dev, orthogonal_residual(v, b).norm());
  return dev;
}

Eigen::MatrixXcd projection_matrix(const std::vector<SparseVec>& onb,
                                   std::span<const BasisIndex> window) {
  const auto n = static_cast<Eigen::Index>(window.size());
  Eigen::MatrixXcd p = Eigen::MatrixXcd::Zero(n, n);
  // P(j, i) = sum_k conj(v_k[i]) v_k[j]
  for (const auto& v : onb) {
    Eigen::VectorXcd col = Eigen::VectorXcd::Zero(n);
    for (Eigen::Index i = 0; i < n; ++i) col(i) = v.coeff(window[static_cast<size_t>(i)]);
    p += col * col.adjoint();
  }
  return p;
}

Eigen::MatrixXcd gram_matrix(const std::vector<SparseVec>& vs) {
  const auto n = static_cast<Eigen::Index>(vs.size());
  Eigen::MatrixXcd g(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      g(i, j) = inner(vs[static_cast<size_t>(i)], vs[static_cast<size_t>(j)]);
  return g;
}

std::vector<SparseVec> restrict_to_window(const std::vector<SparseVec>& vs,
                                          std::span<const BasisIndex> window) {
  std::set<BasisIndex> inside(window.begin(), window.end());
  std::vector<SparseVec> out;
  for (const auto& v : vs) {
    bool ok = true;
    for (const auto& [i, c] : v.entries()) {
      if (!inside.count(i)) {
        ok = false;
        break;
      }
    }
    if (ok) out.push_back(v);
  }
  return out;
}

std::vector<SparseVec> apply_to_family(const LazyOp& op, const std::vector<SparseVec>& vs) {
  std::vector<SparseVec> out;
  out.reserve(vs.size());
  for (const auto& v : vs) out.push_back(apply(op, v));
  return out;
}

}  // namespace isopair

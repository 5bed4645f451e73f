#include "isopair/bcl.hpp"

#include <cmath>
#include <set>
#include <stdexcept>

#include "isopair/subspaces.hpp"

namespace isopair::bcl {

std::string to_string(DefectTag t) {
  switch (t) {
    case DefectTag::Zero: return "Zero";
    case DefectTag::Positive: return "Positive";
    case DefectTag::Negative: return "Negative";
    case DefectTag::OffDiagonal: return "OffDiagonal";
    case DefectTag::Mixed: return "Mixed";
  }
  return "?";
}

double triple_validation_deviation(const Eigen::MatrixXcd& U, const Eigen::MatrixXcd& P) {
  if (U.rows() != U.cols() || P.rows() != P.cols() || U.rows() != P.rows())
    throw std::invalid_argument("BclTriple: U and P must be square of equal size");
  const auto d = U.rows();
  Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(d, d);
  double dev = (U.adjoint() * U - id).cwiseAbs().maxCoeff();
  dev = std::max(dev, (U * U.adjoint() - id).cwiseAbs().maxCoeff());
  dev = std::max(dev, (P - P.adjoint()).cwiseAbs().maxCoeff());
  dev = std::max(dev, (P * P - P).cwiseAbs().maxCoeff());
  return dev;
}

BclTriple BclTriple::finite(Eigen::MatrixXcd U, Eigen::MatrixXcd P) {
  double dev = triple_validation_deviation(U, P);
  if (dev > kIdentityTolerance)
    throw std::invalid_argument("BclTriple: not a valid (E, P, U) triple, deviation " +
                                std::to_string(dev));
  return finite_unchecked(std::move(U), std::move(P));
}

BclTriple BclTriple::finite_unchecked(Eigen::MatrixXcd U, Eigen::MatrixXcd P) {
  BclTriple t;
  t.finite_ = FiniteTriple{std::move(U), std::move(P)};
  t.name_ = "finite(d=" + std::to_string(t.finite_->dim()) + ")";
  return t;
}

namespace {

LazyOp bilateral_shift() {
  IndexScheme z = IndexScheme::bilateral_z();
  return LazyOp(
      z, z, [z](const BasisIndex& i) { return SparseVec::basis(z, BasisIndex({i[0] + 1})); },
      [z](const BasisIndex& i) { return SparseVec::basis(z, BasisIndex({i[0] - 1})); }, 1.0, 1,
      "omega");
}

LazyOp halfline_projection(bool negative_side) {
  IndexScheme z = IndexScheme::bilateral_z();
  auto act = [z, negative_side](const BasisIndex& i) {
    bool keep = negative_side ? i[0] < 0 : i[0] >= 0;
    return keep ? SparseVec::basis(z, i) : SparseVec(z);
  };
  return LazyOp(z, z, act, act, 1.0, 0, negative_side ? "p_minus" : "p_zero_plus");
}

}  // namespace

bool BclTriple::is_preset_name(const std::string& name) {
  return name == "bilateral_p_minus" || name == "bilateral_p_zero_plus";
}

BclTriple BclTriple::preset(const std::string& name) {
  if (!is_preset_name(name)) throw std::invalid_argument("unknown triple preset: " + name);
  BclTriple t;
  t.lazy_ = LazyTriple{bilateral_shift(), halfline_projection(name == "bilateral_p_minus"), 1,
                       name};
  t.name_ = name;
  return t;
}

const FiniteTriple& BclTriple::finite_part() const {
  if (!finite_) throw std::invalid_argument("BclTriple: not finite");
  return *finite_;
}

const LazyTriple& BclTriple::lazy_part() const {
  if (!lazy_) throw std::invalid_argument("BclTriple: not lazy");
  return *lazy_;
}

IndexScheme BclTriple::multiplier_scheme() const {
  if (is_finite()) return IndexScheme::vector_hardy(finite_->dim());
  return IndexScheme::vector_hardy_bilateral();
}

IndexScheme BclTriple::fiber_scheme() const {
  if (is_finite()) throw std::invalid_argument("BclTriple: finite triples have no fiber scheme");
  return IndexScheme::bilateral_z();
}

Eigen::MatrixXcd phi1(const FiniteTriple& t, Cplx z) {
  const auto d = t.U.rows();
  Eigen::MatrixXcd pperp = Eigen::MatrixXcd::Identity(d, d) - t.P;
  return t.U.adjoint() * (pperp + z * t.P);
}

Eigen::MatrixXcd phi2(const FiniteTriple& t, Cplx z) {
  const auto d = t.U.rows();
  Eigen::MatrixXcd pperp = Eigen::MatrixXcd::Identity(d, d) - t.P;
  return (t.P + z * pperp) * t.U;
}

LazyOp phi1(const LazyTriple& t, Cplx z) {
  LazyOp pperp = add(identity(t.P.domain()), scale(Cplx(-1.0, 0.0), t.P));
  return compose(adjoint(t.U), add(pperp, scale(z, t.P)));
}

LazyOp phi2(const LazyTriple& t, Cplx z) {
  LazyOp pperp = add(identity(t.P.domain()), scale(Cplx(-1.0, 0.0), t.P));
  return compose(add(t.P, scale(z, pperp)), t.U);
}

namespace {

// M = I (x) A0 + M_z (x) A1 on vector_hardy(d).
LazyOp finite_multiplier(const Eigen::MatrixXcd& A0, const Eigen::MatrixXcd& A1,
                         const std::string& label) {
  const int d = static_cast<int>(A0.rows());
  IndexScheme s = IndexScheme::vector_hardy(d);
  Eigen::MatrixXcd A0h = A0.adjoint(), A1h = A1.adjoint();
  auto fwd = [s, A0, A1, d](const BasisIndex& i) {
    auto [in, t] = s.split_mult(i);
    int n = in[0];
    SparseVec out(s);
    for (int r = 0; r < d; ++r) {
      if (A0(r, t) != Cplx(0.0, 0.0))
        out.add_term(s.join_mult(BasisIndex({n}), r), A0(r, t));
      if (A1(r, t) != Cplx(0.0, 0.0))
        out.add_term(s.join_mult(BasisIndex({n + 1}), r), A1(r, t));
    }
    return out;
  };
  auto adj = [s, A0h, A1h, d](const BasisIndex& i) {
    auto [in, t] = s.split_mult(i);
    int n = in[0];
    SparseVec out(s);
    for (int r = 0; r < d; ++r) {
      if (A0h(r, t) != Cplx(0.0, 0.0))
        out.add_term(s.join_mult(BasisIndex({n}), r), A0h(r, t));
      if (n >= 1 && A1h(r, t) != Cplx(0.0, 0.0))
        out.add_term(s.join_mult(BasisIndex({n - 1}), r), A1h(r, t));
    }
    return out;
  };
  return LazyOp(s, s, fwd, adj, 1.0, 1, label);
}

// M = I (x) F0 + M_z (x) F1 on vector_hardy_bilateral.
LazyOp bilateral_multiplier(const LazyOp& F0, const LazyOp& F1, int fiber_band,
                            const std::string& label) {
  IndexScheme s = IndexScheme::vector_hardy_bilateral();
  auto lift = [s](const SparseVec& fiber_vec, int n, SparseVec& out, Cplx c = Cplx(1.0, 0.0)) {
    for (const auto& [j, v] : fiber_vec.entries()) out.add_term(BasisIndex({n, j[0]}), c * v);
  };
  auto fwd = [s, F0, F1, lift](const BasisIndex& i) {
    int n = i[0];
    BasisIndex j({i[1]});
    SparseVec out(s);
    lift(F0.forward(j), n, out);
    lift(F1.forward(j), n + 1, out);
    return out;
  };
  auto adj = [s, F0, F1, lift](const BasisIndex& i) {
    int n = i[0];
    BasisIndex j({i[1]});
    SparseVec out(s);
    lift(F0.adjoint_action(j), n, out);
    if (n >= 1) lift(F1.adjoint_action(j), n - 1, out);
    return out;
  };
  return LazyOp(s, s, fwd, adj, 1.0, 1 + fiber_band, label);
}

}  // namespace

std::pair<LazyOp, LazyOp> multiplier_pair(const BclTriple& t) {
  if (t.is_finite()) {
    const FiniteTriple& f = t.finite_part();
    const auto d = f.U.rows();
    Eigen::MatrixXcd pperp = Eigen::MatrixXcd::Identity(d, d) - f.P;
    Eigen::MatrixXcd Uh = f.U.adjoint();
    return {finite_multiplier(Uh * pperp, Uh * f.P, "M_phi1"),
            finite_multiplier(f.P * f.U, pperp * f.U, "M_phi2")};
  }
  const LazyTriple& l = t.lazy_part();
  LazyOp pperp = add(identity(l.P.domain()), scale(Cplx(-1.0, 0.0), l.P));
  LazyOp Uadj = adjoint(l.U);
  LazyOp a0 = compose(Uadj, pperp), a1 = compose(Uadj, l.P);
  LazyOp b0 = compose(l.P, l.U), b1 = compose(pperp, l.U);
  int band = l.band_radius;
  return {bilateral_multiplier(a0, a1, band, "M_" + l.name + "_1"),
          bilateral_multiplier(b0, b1, band, "M_" + l.name + "_2")};
}

Eigen::MatrixXcd fiber_defect(const FiniteTriple& t) {
  return t.U.adjoint() * t.P * t.U - t.P;
}

LazyOp fiber_defect(const LazyTriple& t) {
  return add(compose(adjoint(t.U), compose(t.P, t.U)), scale(Cplx(-1.0, 0.0), t.P));
}

LazyOp triple_defect_op(const BclTriple& t) {
  IndexScheme s = t.multiplier_scheme();
  if (t.is_finite()) {
    Eigen::MatrixXcd D = fiber_defect(t.finite_part());
    const int d = static_cast<int>(D.rows());
    auto act = [s, D, d](const BasisIndex& i) {
      auto [in, t_] = s.split_mult(i);
      SparseVec out(s);
      if (in[0] != 0) return out;
      for (int r = 0; r < d; ++r) {
        if (D(r, t_) != Cplx(0.0, 0.0)) out.add_term(s.join_mult(BasisIndex({0}), r), D(r, t_));
      }
      return out;
    };
    auto adj = [s, D, d](const BasisIndex& i) {
      auto [in, t_] = s.split_mult(i);
      SparseVec out(s);
      if (in[0] != 0) return out;
      for (int r = 0; r < d; ++r) {
        Cplx c = std::conj(D(t_, r));
        if (c != Cplx(0.0, 0.0)) out.add_term(s.join_mult(BasisIndex({0}), r), c);
      }
      return out;
    };
    return LazyOp(s, s, act, adj, 2.0, 0, "E0xD");
  }
  LazyOp D = fiber_defect(t.lazy_part());
  auto act_of = [s](const LazyOp& fiber_op) {
    return [s, fiber_op](const BasisIndex& i) {
      SparseVec out(s);
      if (i[0] != 0) return out;
      SparseVec f = fiber_op.forward(BasisIndex({i[1]}));
      for (const auto& [j, v] : f.entries()) out.add_term(BasisIndex({0, j[0]}), v);
      return out;
    };
  };
  return LazyOp(s, s, act_of(D), act_of(adjoint(D)), 2.0, 2 * t.lazy_part().band_radius,
                "E0xD");
}

Eigen::MatrixXcd defect_from_triple(const BclTriple& t, std::span<const BasisIndex> window) {
  return compress(triple_defect_op(t), window);
}

DefectTag classify_eigenvalues(const std::vector<double>& eigs, double threshold) {
  bool pos = false, neg = false;
  for (double e : eigs) {
    if (e > threshold) pos = true;
    if (e < -threshold) neg = true;
  }
  if (!pos && !neg) return DefectTag::Zero;
  if (pos && !neg) return DefectTag::Positive;
  if (neg && !pos) return DefectTag::Negative;
  return DefectTag::Mixed;
}

namespace {

std::vector<double> hermitian_eigenvalues(const Eigen::MatrixXcd& m) {
  if (m.rows() == 0) return {};
  Eigen::MatrixXcd h = (m + m.adjoint()) / 2.0;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h, Eigen::EigenvaluesOnly);
  std::vector<double> out(static_cast<size_t>(es.eigenvalues().size()));
  for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k)
    out[static_cast<size_t>(k)] = es.eigenvalues()(k);
  return out;
}

// sup-norm of (U*PU - Pperp) e_i over a fiber window, exact sparse actions.
double offdiagonal_deviation_lazy(const LazyTriple& t, std::span<const BasisIndex> window) {
  LazyOp upu = compose(adjoint(t.U), compose(t.P, t.U));
  LazyOp pperp = add(identity(t.P.domain()), scale(Cplx(-1.0, 0.0), t.P));
  double dev = 0.0;
  for (const auto& i : window)
    dev = std::max(dev, deviation(upu.forward(i), pperp.forward(i)));
  return dev;
}

}  // namespace

DefectClass classify(const BclTriple& t, int window_grade) {
  DefectClass out;
  if (t.is_finite()) {
    const FiniteTriple& f = t.finite_part();
    Eigen::MatrixXcd D = fiber_defect(f);
    out.evidence = hermitian_eigenvalues(D);
    out.support_certified = true;  // the whole fiber is in evidence
    Eigen::MatrixXcd pperp = Eigen::MatrixXcd::Identity(f.U.rows(), f.U.cols()) - f.P;
    double off_dev = (f.U.adjoint() * f.P * f.U - pperp).cwiseAbs().maxCoeff();
    if (D.cwiseAbs().maxCoeff() <= kExactZeroThreshold) {
      out.tag = DefectTag::Zero;
    } else if (off_dev <= kIdentityTolerance) {
      out.tag = DefectTag::OffDiagonal;
    } else {
      out.tag = classify_eigenvalues(out.evidence);
    }
    return out;
  }
  const LazyTriple& l = t.lazy_part();
  LazyOp D = fiber_defect(l);
  int band = std::max(1, 2 * l.band_radius);
  IndexScheme fiber = t.fiber_scheme();
  std::vector<BasisIndex> win = fiber.window(window_grade);
  std::vector<BasisIndex> enlarged = fiber.window(window_grade + 2 * band);

  // exact columns over the enlarged window
  std::map<BasisIndex, SparseVec> cols;
  for (const auto& i : enlarged) cols.emplace(i, D.forward(i));

  // detected support: indices touched by a nonzero entry of an inner column
  std::set<BasisIndex> support;
  long support_grade = -1;
  for (const auto& i : win) {
    const SparseVec& c = cols.at(i);
    bool nonzero = false;
    for (const auto& [k, v] : c.entries()) {
      if (std::abs(v) > kExactZeroThreshold) {
        support.insert(k);
        support_grade = std::max(support_grade, fiber.grade(k));
        nonzero = true;
      }
    }
    if (nonzero) {
      support.insert(i);
      support_grade = std::max(support_grade, fiber.grade(i));
    }
  }

  // certification: every entry involving an index outside the detected
  // support vanishes, over the window enlarged by the band
  double ring_max = 0.0;
  for (const auto& [i, c] : cols) {
    bool i_in = support.count(i) > 0;
    for (const auto& [k, v] : c.entries()) {
      if (!i_in || !support.count(k)) ring_max = std::max(ring_max, std::abs(v));
    }
  }
  bool cert = ring_max <= kExactZeroThreshold &&
              (support.empty() || support_grade <= window_grade - 1);
  out.support_certified = cert;
  out.evidence = hermitian_eigenvalues(compress(D, win));
  if (support.empty()) {
    out.tag = DefectTag::Zero;
  } else if (offdiagonal_deviation_lazy(l, enlarged) <= kIdentityTolerance) {
    out.tag = DefectTag::OffDiagonal;
  } else {
    out.tag = classify_eigenvalues(out.evidence);
  }
  return out;
}

SarkarResult sarkar_triple(const LazyOp& V1, const LazyOp& V2, int window_grade) {
  if (V1.domain() != V2.domain() || V1.codomain() != V2.codomain() || V1.domain() != V1.codomain())
    throw std::invalid_argument("sarkar_triple: pair must act on one scheme");
  const IndexScheme& s = V1.domain();
  int band = std::max({V1.band_radius().value_or(1), V2.band_radius().value_or(1), 1});
  std::vector<BasisIndex> win = s.window(window_grade);
  std::vector<BasisIndex> win_mid = s.window(window_grade + band);
  LazyOp V = compose(V1, V2);

  auto kernel_pair = [&](const LazyOp& op) {
    std::vector<SparseVec> k_inner = window_nullspace(adjoint(op), win);
    std::vector<SparseVec> k_mid = window_nullspace(adjoint(op), win_mid);
    // stabilized when enlarging the window reveals nothing new inside it
    std::vector<SparseVec> projected;
    for (const auto& v : k_mid) {
      SparseVec p(v.scheme());
      for (const auto& [i, c] : v.entries()) {
        if (s.grade(i) <= window_grade) p.set(i, c);
      }
      if (!p.is_zero()) projected.push_back(p);
    }
    bool stable = orthonormalize(projected).size() == k_inner.size();
    return std::make_pair(k_inner, stable);
  };

  auto [k1, stable1] = kernel_pair(V1);
  auto [k2, stable2] = kernel_pair(V2);
  auto [kv, stable3] = kernel_pair(V);

  SarkarResult res;
  res.stabilized = stable1 && stable2 && stable3;
  res.dim_ker_v1 = static_cast<int>(k1.size());

  std::vector<SparseVec> basis = k1;
  std::vector<SparseVec> v1k2 = apply_to_family(V1, k2);
  basis.insert(basis.end(), v1k2.begin(), v1k2.end());
  res.kernel_basis = basis;

  const auto n = static_cast<Eigen::Index>(basis.size());
  Eigen::MatrixXcd U0(n, n), P(n, n);
  std::vector<SparseVec> images;
  images.reserve(basis.size());
  for (size_t c = 0; c < k1.size(); ++c) images.push_back(apply(V2, k1[c]));
  for (size_t c = 0; c < k2.size(); ++c) images.push_back(k2[c]);
  std::vector<SparseVec> v2k1(images.begin(), images.begin() + static_cast<long>(k1.size()));
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j)
      U0(j, i) = inner(images[static_cast<size_t>(i)], basis[static_cast<size_t>(j)]);
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      Cplx acc(0.0, 0.0);
      for (const auto& p : v2k1)
        acc += inner(basis[static_cast<size_t>(i)], p) * inner(p, basis[static_cast<size_t>(j)]);
      P(j, i) = acc;
    }
  }

  double dev = 0.0;
  if (n > 0) {
    Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(n, n);
    dev = std::max((U0.adjoint() * U0 - id).cwiseAbs().maxCoeff(),
                   (U0 * U0.adjoint() - id).cwiseAbs().maxCoeff());
  }
  res.unitary_deviation = dev;
  if (!res.stabilized) res.note = "kernel bases not stabilized at this window";
  if (dev > kIdentityTolerance) {
    if (!res.note.empty()) res.note += "; ";
    res.note += "ker V* extends beyond the window; U0 compression loses mass at the top grade";
  }
  res.triple = BclTriple::finite_unchecked(std::move(U0), std::move(P));
  return res;
}

}  // namespace isopair::bcl

#include "isopair/defect.hpp"

#include <cmath>
#include <set>

#include "isopair/window_checks.hpp"

namespace isopair::defect {

using bcl::DefectTag;
using bcl::kExactZeroThreshold;
using bcl::kIdentityTolerance;

LazyOp defect_op(const LazyOp& V1, const LazyOp& V2) {
  if (V1.domain() != V2.domain() || V1.codomain() != V1.domain() || V2.codomain() != V2.domain())
    throw std::invalid_argument("defect_op: pair must act on one scheme");
  LazyOp V = compose(V1, V2);
  LazyOp t1 = scale(Cplx(-1.0, 0.0), compose(V1, adjoint(V1)));
  LazyOp t2 = scale(Cplx(-1.0, 0.0), compose(V2, adjoint(V2)));
  LazyOp t3 = compose(V, adjoint(V));
  return add(add(identity(V1.domain()), t1), add(t2, t3));
}

namespace {

int pair_band(const LazyOp& V1, const LazyOp& V2) {
  return std::max({V1.band_radius().value_or(1), V2.band_radius().value_or(1), 1});
}

std::vector<double> hermitian_eigenvalues(const Eigen::MatrixXcd& m) {
  if (m.rows() == 0) return {};
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es((m + m.adjoint()) / 2.0,
                                                     Eigen::EigenvaluesOnly);
  std::vector<double> out(static_cast<size_t>(es.eigenvalues().size()));
  for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k)
    out[static_cast<size_t>(k)] = es.eigenvalues()(k);
  return out;
}

// dimension of span(family) intersected with span(window); family must be
// linearly independent and unit-normalized
int dim_in_window(const std::vector<SparseVec>& family, const std::set<BasisIndex>& window_set,
                  double tol = 1e-10) {
  if (family.empty()) return 0;
  std::set<BasisIndex> outside;
  for (const auto& v : family)
    for (const auto& [i, c] : v.entries())
      if (!window_set.count(i)) outside.insert(i);
  if (outside.empty()) return static_cast<int>(family.size());
  std::map<BasisIndex, Eigen::Index> pos;
  Eigen::Index r = 0;
  for (const auto& i : outside) pos[i] = r++;
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(r, static_cast<Eigen::Index>(family.size()));
  for (size_t c = 0; c < family.size(); ++c)
    for (const auto& [i, v] : family[c].entries())
      if (!window_set.count(i)) a(pos[i], static_cast<Eigen::Index>(c)) = v;
  // absolute floor: the vectors are unit, so an out-of-window singular value
  // below tol is window-membership noise, whatever sigma_max is
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(a);
  double smax = svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
  double thr = std::max(tol * smax * static_cast<double>(std::max(a.rows(), a.cols())), tol);
  int rank = 0;
  for (Eigen::Index k = 0; k < svd.singularValues().size(); ++k)
    if (svd.singularValues()(k) > thr) ++rank;
  return static_cast<int>(family.size()) - rank;
}

bool kernel_stabilized(const LazyOp& iso, const IndexScheme& s, int grade, int band) {
  std::vector<BasisIndex> win = s.window(grade);
  std::vector<BasisIndex> win_big = s.window(grade + band);
  std::vector<SparseVec> k = window_nullspace(adjoint(iso), win);
  std::vector<SparseVec> k_big = window_nullspace(adjoint(iso), win_big);
  std::vector<SparseVec> projected;
  for (const auto& v : k_big) {
    SparseVec p(v.scheme());
    for (const auto& [i, c] : v.entries())
      if (s.grade(i) <= grade) p.set(i, c);
    if (!p.is_zero()) projected.push_back(p);
  }
  return orthonormalize(projected).size() == k.size();
}

}  // namespace

DefectReport defect_window_matrix(const LazyOp& V1, const LazyOp& V2, int window_grade) {
  const IndexScheme& s = V1.domain();
  LazyOp D = defect_op(V1, V2);
  int ring = D.band_radius().value_or(2 * pair_band(V1, V2) + 2);
  ring = std::max(ring, 1);

  DefectReport rep;
  rep.window_grade = window_grade;
  rep.window = s.window(window_grade);
  std::vector<BasisIndex> enlarged = s.window(window_grade + ring);

  std::map<BasisIndex, SparseVec> cols;
  for (const auto& i : enlarged) cols.emplace(i, D.forward(i));

  // window matrix
  const auto n = static_cast<Eigen::Index>(rep.window.size());
  std::map<BasisIndex, Eigen::Index> row;
  for (size_t k = 0; k < rep.window.size(); ++k)
    row[rep.window[k]] = static_cast<Eigen::Index>(k);
  rep.matrix = Eigen::MatrixXcd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (const auto& [idx, v] : cols.at(rep.window[static_cast<size_t>(i)]).entries()) {
      auto it = row.find(idx);
      if (it != row.end()) rep.matrix(it->second, i) = v;
    }
  }
  rep.hermiticity_deviation = (rep.matrix - rep.matrix.adjoint()).cwiseAbs().maxCoeff();
  rep.eigenvalues = hermitian_eigenvalues(rep.matrix);

  // detected support from the inner columns
  std::set<BasisIndex> support;
  long support_grade = -1;
  for (const auto& i : rep.window) {
    bool nonzero = false;
    for (const auto& [k, v] : cols.at(i).entries()) {
      if (std::abs(v) > kExactZeroThreshold) {
        support.insert(k);
        support_grade = std::max(support_grade, s.grade(k));
        nonzero = true;
      }
    }
    if (nonzero) {
      support.insert(i);
      support_grade = std::max(support_grade, s.grade(i));
    }
  }
  double ring_max = 0.0;
  for (const auto& [i, c] : cols) {
    bool i_in = support.count(i) > 0;
    for (const auto& [k, v] : c.entries())
      if (!i_in || !support.count(k)) ring_max = std::max(ring_max, std::abs(v));
  }
  rep.boundary_ring_max = ring_max;
  rep.support_certified = ring_max <= kExactZeroThreshold &&
                          (support.empty() || support_grade <= window_grade - 1);

  rep.ker_v1 = window_nullspace(adjoint(V1), rep.window);
  rep.ker_v2 = window_nullspace(adjoint(V2), rep.window);
  rep.ker_v = window_nullspace(adjoint(compose(V1, V2)), rep.window);

  // classification from eigenvalue signs, with the projection-pair case
  if (support.empty()) {
    rep.tag = DefectTag::Zero;
  } else {
    DefectTag sign = bcl::classify_eigenvalues(rep.eigenvalues);
    if (sign == DefectTag::Mixed) {
      int n_pos = 0, n_neg = 0;
      bool spectral_pm = true;
      for (double e : rep.eigenvalues) {
        if (std::abs(e - 1.0) <= 1e-10) {
          ++n_pos;
        } else if (std::abs(e + 1.0) <= 1e-10) {
          ++n_neg;
        } else if (std::abs(e) > 1e-10) {
          spectral_pm = false;
        }
      }
      bool spanning = n_pos == n_neg && n_pos > 0 &&
                      n_pos + n_neg == static_cast<int>(rep.ker_v.size());
      rep.tag = (spectral_pm && spanning) ? DefectTag::OffDiagonal : DefectTag::Mixed;
    } else {
      rep.tag = sign;
    }
  }
  return rep;
}

ProjectionIdentityReport verify_projection_identities(const LazyOp& V1, const LazyOp& V2,
                                                      int window_grade) {
  const IndexScheme& s = V1.domain();
  int band = pair_band(V1, V2);
  int margin = 2 * band + 2;
  std::vector<BasisIndex> win = s.window(window_grade);
  std::vector<BasisIndex> win_enl = s.window(window_grade + margin);
  std::set<BasisIndex> win_set(win.begin(), win.end());
  LazyOp V = compose(V1, V2);

  ProjectionIdentityReport rep;
  rep.window_grade = window_grade;
  rep.kernels_stabilized = kernel_stabilized(V1, s, window_grade + margin, band) &&
                           kernel_stabilized(V2, s, window_grade + margin, band) &&
                           kernel_stabilized(V, s, window_grade + margin, 2 * band);

  std::vector<SparseVec> k1 = window_nullspace(adjoint(V1), win_enl);
  std::vector<SparseVec> k2 = window_nullspace(adjoint(V2), win_enl);
  std::vector<SparseVec> kv = window_nullspace(adjoint(V), win_enl);
  std::vector<SparseVec> v2k1 = apply_to_family(V2, k1);
  std::vector<SparseVec> v1k2 = apply_to_family(V1, k2);

  Eigen::MatrixXcd direct = compress(defect_op(V1, V2), win);
  Eigen::MatrixXcd form1 = projection_matrix(k1, win) - projection_matrix(v2k1, win);
  Eigen::MatrixXcd form2 = projection_matrix(k2, win) - projection_matrix(v1k2, win);
  rep.deviation_form1 = (direct - form1).cwiseAbs().maxCoeff();
  rep.deviation_form2 = (direct - form2).cwiseAbs().maxCoeff();

  rep.dim_ker_v1 = dim_in_window(k1, win_set);
  rep.dim_ker_v2 = dim_in_window(k2, win_set);
  rep.dim_ker_v = dim_in_window(kv, win_set);
  rep.dim_v1_ker_v2 = dim_in_window(v1k2, win_set);
  rep.dim_v2_ker_v1 = dim_in_window(v2k1, win_set);
  rep.dims_consistent = rep.dim_ker_v1 + rep.dim_v1_ker_v2 == rep.dim_ker_v &&
                        rep.dim_ker_v2 + rep.dim_v2_ker_v1 == rep.dim_ker_v;
  return rep;
}

FringeReport fringe_matrices(const LazyOp& V1, const LazyOp& V2, int window_grade) {
  const IndexScheme& s = V1.domain();
  int band = pair_band(V1, V2);
  int margin = 2 * band + 2;
  std::vector<BasisIndex> win = s.window(window_grade);
  std::vector<BasisIndex> win_enl = s.window(window_grade + margin);

  FringeReport rep;
  rep.kernels_stabilized = kernel_stabilized(V1, s, window_grade + margin, band) &&
                           kernel_stabilized(V2, s, window_grade + margin, band);

  auto build = [&](const LazyOp& own, const LazyOp& other, Eigen::MatrixXcd& f,
                   double& iso_dev, double& adj_iso_dev, double& max_abs) {
    std::vector<SparseVec> cols_basis = window_nullspace(adjoint(own), win);
    std::vector<SparseVec> rows_basis = window_nullspace(adjoint(own), win_enl);
    const auto nc = static_cast<Eigen::Index>(cols_basis.size());
    const auto nr = static_cast<Eigen::Index>(rows_basis.size());
    f = Eigen::MatrixXcd::Zero(nr, nc);
    Eigen::MatrixXcd g = Eigen::MatrixXcd::Zero(nr, nc);  // P_ker other* columns
    for (Eigen::Index c = 0; c < nc; ++c) {
      SparseVec img = apply(other, cols_basis[static_cast<size_t>(c)]);
      SparseVec img_adj = apply_adjoint(other, cols_basis[static_cast<size_t>(c)]);
      for (Eigen::Index r = 0; r < nr; ++r) {
        f(r, c) = inner(img, rows_basis[static_cast<size_t>(r)]);
        g(r, c) = inner(img_adj, rows_basis[static_cast<size_t>(r)]);
      }
    }
    max_abs = f.size() ? f.cwiseAbs().maxCoeff() : 0.0;
    Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(nc, nc);
    iso_dev = f.size() ? (f.adjoint() * f - id).cwiseAbs().maxCoeff() : 0.0;
    adj_iso_dev = g.size() ? (g.adjoint() * g - id).cwiseAbs().maxCoeff() : 0.0;
  };
  build(V1, V2, rep.f1, rep.f1_isometry_dev, rep.f1_adjoint_isometry_dev, rep.f1_max_abs);
  build(V2, V1, rep.f2, rep.f2_isometry_dev, rep.f2_adjoint_isometry_dev, rep.f2_max_abs);

  const double pass = 1e-10;
  bool f_zero = rep.f1_max_abs <= pass && rep.f2_max_abs <= pass;
  bool isos = rep.f1_isometry_dev <= pass && rep.f2_isometry_dev <= pass;
  bool adj_isos = rep.f1_adjoint_isometry_dev <= pass && rep.f2_adjoint_isometry_dev <= pass;
  bool nonzero_kernels = rep.f1.cols() > 0 || rep.f2.cols() > 0;
  if (!nonzero_kernels) {
    rep.classification = DefectTag::Zero;  // no kernel: both V unitary, defect 0
  } else if (f_zero) {
    rep.classification = DefectTag::OffDiagonal;
  } else if (isos && adj_isos) {
    rep.classification = DefectTag::Zero;
  } else if (isos) {
    rep.classification = DefectTag::Positive;
  } else if (adj_isos) {
    rep.classification = DefectTag::Negative;
  } else {
    rep.classification = DefectTag::Mixed;
  }
  return rep;
}

WoldReport wold(const LazyOp& V, int window_grade) {
  const IndexScheme& s = V.domain();
  int band = std::max(1, V.band_radius().value_or(1));
  std::vector<BasisIndex> win = s.window(window_grade);
  std::vector<BasisIndex> win_enl = s.window(window_grade + band);
  std::set<BasisIndex> win_set(win.begin(), win.end());

  WoldReport rep;
  rep.window_grade = window_grade;
  rep.window_size = static_cast<int>(win.size());

  std::vector<SparseVec> layer = window_nullspace(adjoint(V), win_enl);
  layer = restrict_to_window(layer, win);
  std::vector<SparseVec> family;
  while (!layer.empty()) {
    rep.layers.push_back(layer);
    family.insert(family.end(), layer.begin(), layer.end());
    std::vector<SparseVec> next;
    for (const auto& v : layer) {
      SparseVec img = apply(V, v);
      bool inside = true;
      for (const auto& [i, c] : img.entries())
        if (!win_set.count(i)) {
          inside = false;
          break;
        }
      if (inside) next.push_back(img);
    }
    layer = std::move(next);
  }
  rep.family_size = static_cast<int>(family.size());
  rep.residual_dim = rep.window_size - rep.family_size;
  if (!family.empty()) {
    Eigen::MatrixXcd g = gram_matrix(family);
    rep.orthonormality_deviation =
        (g - Eigen::MatrixXcd::Identity(g.rows(), g.cols())).cwiseAbs().maxCoeff();
  }
  return rep;
}

namespace {

struct LadderContext {
  const LazyOp* V1 = nullptr;
  const LazyOp* V2 = nullptr;
  IndexScheme s = IndexScheme::hardy_disc();
  int grade = 0;
  std::vector<BasisIndex> win, win_enl;
  std::set<BasisIndex> win_set;
  std::vector<SparseVec> k1, k2, kv;           // kernels over the enlarged window
  std::vector<SparseVec> k1_in, k2_in, kv_in;  // kernels over the window
  std::vector<SparseVec> v1k2, v2k1;
  Eigen::MatrixXcd defect_matrix;
  FringeReport fringe;
  std::optional<bcl::BclTriple> triple;
  double tol = 1e-10;

  bool incl(const std::vector<SparseVec>& a, const std::vector<SparseVec>& b,
            double* dev = nullptr) const {
    double d = subspace_inclusion_deviation(a, b);
    if (dev) *dev = d;
    return d <= tol;
  }
  int dw(const std::vector<SparseVec>& fam) const { return dim_in_window(fam, win_set); }
};

double orthogonality_deviation(const std::vector<SparseVec>& a, const std::vector<SparseVec>& b) {
  double dev = 0.0;
  for (const auto& x : a)
    for (const auto& y : b) dev = std::max(dev, std::abs(inner(x, y)));
  return dev;
}

// U-invariance items evaluated on the triple; {invariant, equal} for ran P
// (use_perp = false) or ran P\perp (use_perp = true)
struct InvarianceResult {
  bool defined = false;
  bool invariant = false;
  bool equal = false;          // U(range) = range
  bool maps_to_perp = false;   // U(ran P) = ran P\perp
  double deviation = 0.0;
};

InvarianceResult triple_invariance(const bcl::BclTriple& t, bool use_perp, int grade) {
  InvarianceResult r;
  r.defined = true;
  if (t.is_finite()) {
    const auto& f = t.finite_part();
    const auto d = f.U.rows();
    Eigen::MatrixXcd P = use_perp ? Eigen::MatrixXcd(Eigen::MatrixXcd::Identity(d, d) - f.P)
                                  : f.P;
    Eigen::MatrixXcd Pother = Eigen::MatrixXcd::Identity(d, d) - P;
    double inv_dev = (Pother * f.U * P).cwiseAbs().maxCoeff();      // U(ran P) <= ran P
    double com_dev = (f.U * P - P * f.U).cwiseAbs().maxCoeff();     // U(ran P) = ran P
    double perp_dev = (f.U.adjoint() * P * f.U - Pother).cwiseAbs().maxCoeff();
    r.invariant = inv_dev <= 1e-10;
    // in finite dimensions invariance under a unitary forces equality
    r.equal = com_dev <= 1e-10;
    r.maps_to_perp = perp_dev <= 1e-10;
    r.deviation = inv_dev;
    return r;
  }
  const auto& l = t.lazy_part();
  IndexScheme fiber = l.P.domain();
  std::vector<BasisIndex> win = fiber.window(grade);
  LazyOp P = use_perp ? add(identity(fiber), scale(Cplx(-1.0, 0.0), l.P)) : l.P;
  LazyOp Pother = add(identity(fiber), scale(Cplx(-1.0, 0.0), P));
  LazyOp UP = compose(l.U, P);
  LazyOp PU = compose(P, l.U);
  LazyOp UPU = compose(adjoint(l.U), compose(P, l.U));
  double inv_dev = 0.0, com_dev = 0.0, perp_dev = 0.0;
  for (const auto& i : win) {
    SparseVec up = UP.forward(i);
    inv_dev = std::max(inv_dev, apply(Pother, up).norm());
    com_dev = std::max(com_dev, deviation(up, PU.forward(i)));
    perp_dev = std::max(perp_dev, deviation(UPU.forward(i), Pother.forward(i)));
  }
  r.invariant = inv_dev <= 1e-10;
  r.equal = com_dev <= 1e-10;
  r.maps_to_perp = perp_dev <= 1e-10;
  r.deviation = inv_dev;
  return r;
}

std::vector<LadderItem> zero_ladder(const LadderContext& c) {
  std::vector<LadderItem> items;
  double dev = c.defect_matrix.size() ? c.defect_matrix.cwiseAbs().maxCoeff() : 0.0;
  items.push_back({"zero.a:defect=0", dev <= kIdentityTolerance, dev});

  // (b) ker V2* reduces V1, restriction unitary
  {
    double d1 = 0, d2 = 0, d3 = 0;
    bool fwd = c.incl(apply_to_family(*c.V1, c.k2_in), c.k2, &d1);
    std::vector<SparseVec> adj_im;
    for (const auto& v : c.k2_in) adj_im.push_back(apply_adjoint(*c.V1, v));
    bool bwd = c.incl(adj_im, c.k2, &d2);
    bool onto = c.incl(c.k2_in, apply_to_family(*c.V1, c.k2), &d3);
    items.push_back({"zero.b:kerV2*_reduces_V1", fwd && bwd && onto, std::max({d1, d2, d3})});
  }
  {
    double d1 = 0, d2 = 0, d3 = 0;
    bool fwd = c.incl(apply_to_family(*c.V2, c.k1_in), c.k1, &d1);
    std::vector<SparseVec> adj_im;
    for (const auto& v : c.k1_in) adj_im.push_back(apply_adjoint(*c.V2, v));
    bool bwd = c.incl(adj_im, c.k1, &d2);
    bool onto = c.incl(c.k1_in, apply_to_family(*c.V2, c.k1), &d3);
    items.push_back({"zero.c:kerV1*_reduces_V2", fwd && bwd && onto, std::max({d1, d2, d3})});
  }
  {
    double dev_u = std::max({c.fringe.f1_isometry_dev, c.fringe.f2_isometry_dev,
                             c.fringe.f1_adjoint_isometry_dev, c.fringe.f2_adjoint_isometry_dev});
    items.push_back({"zero.d:fringes_unitary", dev_u <= c.tol, dev_u});
  }
  {
    double ortho = orthogonality_deviation(c.k1, c.k2);
    bool dims = c.dw(c.k1) + c.dw(c.k2) == c.dw(c.kv);
    double d1 = 0, d2 = 0;
    bool in1 = c.incl(c.k1_in, c.kv, &d1), in2 = c.incl(c.k2_in, c.kv, &d2);
    items.push_back({"zero.e:kerV1*+kerV2*=kerV*", ortho <= c.tol && dims && in1 && in2,
                     std::max({ortho, d1, d2})});
  }
  {
    // (f) ran V1 - ran V and ran V2 - ran V are orthogonal and fill H with
    // ran V; the complements are V1(ker V2*) and V2(ker V1*)
    std::vector<SparseVec> ran_v;
    for (const auto& i : c.win_enl)
      ran_v.push_back(apply(compose(*c.V1, *c.V2), SparseVec::basis(c.s, i)));
    int dim_ran_v = dim_in_window(ran_v, c.win_set);
    double ortho = orthogonality_deviation(c.v1k2, c.v2k1);
    bool ok = ortho <= c.tol && c.dw(c.v1k2) + c.dw(c.v2k1) + dim_ran_v ==
                                    static_cast<int>(c.win.size());
    items.push_back({"zero.f:range_splitting", ok, ortho});
  }
  if (c.triple) {
    InvarianceResult r = triple_invariance(*c.triple, false, c.grade);
    items.push_back({"zero.g:ranP_reduces_U", r.equal, r.deviation});
  }
  return items;
}

std::vector<LadderItem> positive_ladder(const LadderContext& c) {
  std::vector<LadderItem> items;
  {
    std::vector<double> eig = hermitian_eigenvalues(c.defect_matrix);
    bool nonneg = eig.empty() ? false : eig.front() >= -c.tol;
    bool nonzero = eig.empty() ? false : eig.back() > 0.5;
    items.push_back({"pos.a:defect>=0_and_nonzero", nonneg && nonzero,
                     eig.empty() ? 1.0 : std::max(0.0, -eig.front())});
  }
  {
    double d = 0;
    bool sub = c.incl(apply_to_family(*c.V2, c.k1_in), c.k1, &d);
    bool strict = c.dw(apply_to_family(*c.V2, c.k1)) < c.dw(c.k1);
    items.push_back({"pos.b:V2kerV1*_strictly_inside", sub && strict, d});
  }
  {
    double d = 0;
    bool sub = c.incl(apply_to_family(*c.V1, c.k2_in), c.k2, &d);
    bool strict = c.dw(apply_to_family(*c.V1, c.k2)) < c.dw(c.k2);
    items.push_back({"pos.c:V1kerV2*_strictly_inside", sub && strict, d});
  }
  {
    bool isos = c.fringe.f1_isometry_dev <= c.tol && c.fringe.f2_isometry_dev <= c.tol;
    bool not_unitary = c.fringe.f1_adjoint_isometry_dev > 1e-6 ||
                       c.fringe.f2_adjoint_isometry_dev > 1e-6;
    items.push_back({"pos.d:fringes_isometric_not_unitary", isos && not_unitary,
                     std::max(c.fringe.f1_isometry_dev, c.fringe.f2_isometry_dev)});
  }
  {
    double dc = double_commutation_deviation(*c.V1, *c.V2, c.win);
    double mx = c.defect_matrix.size() ? c.defect_matrix.cwiseAbs().maxCoeff() : 0.0;
    items.push_back({"pos.e:doubly_commuting_defect_nonzero", dc <= c.tol && mx > 0.5, dc});
  }
  {
    double idem = c.defect_matrix.size()
                      ? (c.defect_matrix * c.defect_matrix - c.defect_matrix).cwiseAbs().maxCoeff()
                      : 1.0;
    double mx = c.defect_matrix.size() ? c.defect_matrix.cwiseAbs().maxCoeff() : 0.0;
    items.push_back({"pos.f:defect_is_projection", idem <= c.tol && mx > 0.5, idem});
  }
  if (c.triple) {
    InvarianceResult r = triple_invariance(*c.triple, false, c.grade);
    items.push_back({"pos.g:U_ranP_strictly_inside", r.invariant && !r.equal, r.deviation});
  }
  return items;
}

std::vector<LadderItem> negative_ladder(const LadderContext& c) {
  std::vector<LadderItem> items;
  {
    std::vector<double> eig = hermitian_eigenvalues(c.defect_matrix);
    bool nonpos = eig.empty() ? false : eig.back() <= c.tol;
    bool nonzero = eig.empty() ? false : eig.front() < -0.5;
    items.push_back({"neg.a:defect<=0_and_nonzero", nonpos && nonzero,
                     eig.empty() ? 1.0 : std::max(0.0, eig.back())});
  }
  {
    double d = 0;
    bool sup = c.incl(c.k1_in, apply_to_family(*c.V2, c.k1), &d);
    bool strict = c.dw(apply_to_family(*c.V2, c.k1)) > c.dw(c.k1);
    items.push_back({"neg.b:V2kerV1*_strictly_contains", sup && strict, d});
  }
  {
    double d = 0;
    bool sup = c.incl(c.k2_in, apply_to_family(*c.V1, c.k2), &d);
    bool strict = c.dw(apply_to_family(*c.V1, c.k2)) > c.dw(c.k2);
    items.push_back({"neg.c:V1kerV2*_strictly_contains", sup && strict, d});
  }
  {
    bool adj_isos = c.fringe.f1_adjoint_isometry_dev <= c.tol &&
                    c.fringe.f2_adjoint_isometry_dev <= c.tol;
    bool not_unitary = c.fringe.f1_isometry_dev > 1e-6 || c.fringe.f2_isometry_dev > 1e-6;
    items.push_back({"neg.d:fringe_adjoints_isometric_not_unitary", adj_isos && not_unitary,
                     std::max(c.fringe.f1_adjoint_isometry_dev,
                              c.fringe.f2_adjoint_isometry_dev)});
  }
  {
    double ortho = orthogonality_deviation(c.k1, c.k2);
    bool dims_strict = c.dw(c.k1) + c.dw(c.k2) < c.dw(c.kv);
    items.push_back({"neg.e:kernels_orthogonal_sum_strictly_smaller",
                     ortho <= c.tol && dims_strict, ortho});
  }
  {
    double idem = c.defect_matrix.size()
                      ? (c.defect_matrix * c.defect_matrix + c.defect_matrix).cwiseAbs().maxCoeff()
                      : 1.0;
    double mx = c.defect_matrix.size() ? c.defect_matrix.cwiseAbs().maxCoeff() : 0.0;
    items.push_back({"neg.f:defect_is_minus_projection", idem <= c.tol && mx > 0.5, idem});
  }
  if (c.triple) {
    InvarianceResult r = triple_invariance(*c.triple, true, c.grade);
    items.push_back({"neg.g:U_ranPperp_strictly_inside", r.invariant && !r.equal, r.deviation});
  }
  return items;
}

std::vector<LadderItem> offdiagonal_ladder(const LadderContext& c) {
  std::vector<LadderItem> items;
  {
    double d1 = 0, d2 = 0;
    bool eq = c.incl(c.k1_in, c.k2, &d1) && c.incl(c.k2_in, c.k1, &d2);
    items.push_back({"off.a:kerV1*=kerV2*", eq, std::max(d1, d2)});
  }
  {
    double d1 = 0, d2 = 0;
    bool eq = c.incl(c.v1k2, c.v2k1, &d1) && c.incl(c.v2k1, c.v1k2, &d2);
    items.push_back({"off.b:V1kerV2*=V2kerV1*", eq, std::max(d1, d2)});
  }
  {
    // defect = P1 - P2, mutually orthogonal, ranges spanning ker V*
    const Eigen::MatrixXcd& m = c.defect_matrix;
    std::vector<double> eig = hermitian_eigenvalues(m);
    int n_pos = 0, n_neg = 0;
    bool pm = !eig.empty();
    for (double e : eig) {
      if (std::abs(e - 1.0) <= 1e-10) {
        ++n_pos;
      } else if (std::abs(e + 1.0) <= 1e-10) {
        ++n_neg;
      } else if (std::abs(e) > 1e-10) {
        pm = false;
      }
    }
    bool spanning = n_pos > 0 && n_pos == n_neg && n_pos + n_neg == c.dw(c.kv);
    items.push_back({"off.c:defect_difference_of_projections", pm && spanning,
                     pm ? 0.0 : 1.0});
  }
  {
    double mx = std::max(c.fringe.f1_max_abs, c.fringe.f2_max_abs);
    items.push_back({"off.d:fringes_zero", mx <= c.tol && c.fringe.f1.cols() > 0, mx});
  }
  if (c.triple) {
    InvarianceResult r = triple_invariance(*c.triple, false, c.grade);
    items.push_back({"off.e:U_ranP=ranPperp", r.maps_to_perp, r.deviation});
  }
  return items;
}

}  // namespace

LadderReport equivalence_suite(const LazyOp& V1, const LazyOp& V2, int window_grade,
                               const std::optional<bcl::BclTriple>& triple) {
  LadderContext c;
  c.V1 = &V1;
  c.V2 = &V2;
  c.s = V1.domain();
  c.grade = window_grade;
  int band = pair_band(V1, V2);
  int margin = 2 * band + 2;
  c.win = c.s.window(window_grade);
  c.win_enl = c.s.window(window_grade + margin);
  c.win_set = std::set<BasisIndex>(c.win.begin(), c.win.end());
  c.k1 = window_nullspace(adjoint(V1), c.win_enl);
  c.k2 = window_nullspace(adjoint(V2), c.win_enl);
  c.kv = window_nullspace(adjoint(compose(V1, V2)), c.win_enl);
  c.k1_in = window_nullspace(adjoint(V1), c.win);
  c.k2_in = window_nullspace(adjoint(V2), c.win);
  c.kv_in = window_nullspace(adjoint(compose(V1, V2)), c.win);
  c.v1k2 = apply_to_family(V1, c.k2);
  c.v2k1 = apply_to_family(V2, c.k1);

  DefectReport dr = defect_window_matrix(V1, V2, window_grade);
  c.defect_matrix = dr.matrix;
  c.fringe = fringe_matrices(V1, V2, window_grade);
  c.triple = triple;
  if (!c.triple) {
    bcl::SarkarResult sr = bcl::sarkar_triple(V1, V2, window_grade);
    if (sr.stabilized && sr.unitary_deviation <= kIdentityTolerance)
      c.triple = sr.triple;
  }

  LadderReport rep;
  rep.detected = dr.tag;
  rep.ladders.push_back({DefectTag::Zero, zero_ladder(c), false, false});
  rep.ladders.push_back({DefectTag::Positive, positive_ladder(c), false, false});
  rep.ladders.push_back({DefectTag::Negative, negative_ladder(c), false, false});
  rep.ladders.push_back({DefectTag::OffDiagonal, offdiagonal_ladder(c), false, false});

  rep.consistent = true;
  for (auto& L : rep.ladders) {
    L.all_true = true;
    L.all_false = true;
    for (const auto& item : L.items) {
      L.all_true = L.all_true && item.holds;
      L.all_false = L.all_false && !item.holds;
    }
    bool want_true = L.ladder == rep.detected;
    bool ok = want_true ? L.all_true : L.all_false;
    if (!ok && rep.consistent) {
      rep.consistent = false;
      for (const auto& item : L.items) {
        if (item.holds != want_true) {
          rep.offending = item.id;
          break;
        }
      }
    }
  }
  return rep;
}

}  // namespace isopair::defect

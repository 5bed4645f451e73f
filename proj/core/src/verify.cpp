#include "isopair/verify.hpp"

#include <json.hpp>

#include "isopair/window_checks.hpp"

namespace isopair::verify {

using bcl::DefectTag;

bool SuiteResult::all_pass() const {
  for (const auto& a : assertions)
    if (!a.pass) return false;
  return true;
}

double SuiteResult::max_value() const {
  double m = 0.0;
  for (const auto& a : assertions) m = std::max(m, a.value);
  return m;
}

std::string suite_json(const SuiteResult& r) {
  nlohmann::json items = nlohmann::json::array();
  for (const auto& a : r.assertions)
    items.push_back(nlohmann::json{
        {"id", a.id}, {"pass", a.pass}, {"value", a.value}, {"bound", a.bound}});
  nlohmann::json j{{"format_version", io::kFormatVersion},
                   {"suite", r.suite},
                   {"pass", r.all_pass()},
                   {"assertions", items}};
  return j.dump(2) + "\n";
}

namespace {

void check(SuiteResult& r, const std::string& id, double value, double bound) {
  r.assertions.push_back({id, value <= bound, value, bound});
}

void check_flag(SuiteResult& r, const std::string& id, bool ok) {
  r.assertions.push_back({id, ok, ok ? 0.0 : 1.0, 0.0});
}

// Transported triple-formula defect: entries of E0 (x) (U*PU - P) of the
// model's triple against the images of the model basis under the exact
// intertwiner onto the triple's multiplier presentation.
double transported_triple_deviation(const models::ModelPair& m, const LazyOp& lambda,
                                    int grade) {
  LazyOp d_triple = bcl::triple_defect_op(*m.triple);
  LazyOp d_direct = defect::defect_op(m.V1, m.V2);
  std::vector<BasisIndex> win = m.scheme.window(grade);
  std::vector<SparseVec> images;
  images.reserve(win.size());
  for (const auto& i : win) images.push_back(lambda.forward(i));
  std::vector<SparseVec> d_images;
  d_images.reserve(win.size());
  for (const auto& img : images) d_images.push_back(apply(d_triple, img));
  double dev = 0.0;
  for (size_t i = 0; i < win.size(); ++i) {
    SparseVec direct = d_direct.forward(win[i]);
    for (size_t j = 0; j < win.size(); ++j) {
      Cplx a = direct.coeff(win[j]);
      Cplx b = inner(d_images[i], images[j]);
      dev = std::max(dev, std::abs(a - b));
    }
  }
  return dev;
}

double entrywise_triple_deviation(const models::ModelPair& m, int grade) {
  std::vector<BasisIndex> win = m.scheme.window(grade);
  Eigen::MatrixXcd direct = compress(defect::defect_op(m.V1, m.V2), win);
  Eigen::MatrixXcd from_triple = bcl::defect_from_triple(*m.triple, win);
  return (direct - from_triple).cwiseAbs().maxCoeff();
}

models::ModelPair multiplier_model(const bcl::BclTriple& t, const std::string& name) {
  auto [v1, v2] = bcl::multiplier_pair(t);
  return models::ModelPair{v1, v2, DefectTag::Mixed, t.multiplier_scheme(), name, name, t};
}

}  // namespace

SuiteResult identities_suite(int grade, uint64_t seed, int random_triples, int max_dim) {
  SuiteResult r{"identities", {}};
  const double tol = 1e-12;

  struct Entry {
    models::ModelPair model;
    std::optional<LazyOp> transport;  // onto the triple's multiplier presentation
  };
  std::vector<Entry> entries;
  entries.push_back({models::pos_pair(), models::intertwiner_pos()});
  entries.push_back({models::neg_pair(), models::intertwiner_neg()});
  {
    Eigen::MatrixXcd w = models::default_unitary();
    // the default zero/offdiag models; their triples' multiplier pairs are
    // the twisted / two-block presentations carried over by the intertwiners
    models::ModelPair zero = models::zero_pair(w);
    entries.push_back({zero, adjoint(models::intertwiner_zero(w))});
    entries.push_back({models::offdiag_pair(w), adjoint(models::intertwiner_off(w))});
  }
  entries.push_back({models::psi_pair(), std::nullopt});
  entries.push_back({models::eta_pair(), std::nullopt});

  for (const auto& e : entries) {
    const auto& m = e.model;
    defect::ProjectionIdentityReport p =
        defect::verify_projection_identities(m.V1, m.V2, grade);
    check(r, m.name + ".eq11_vs_projection_form1", p.deviation_form1, tol);
    check(r, m.name + ".eq11_vs_projection_form2", p.deviation_form2, tol);
    check_flag(r, m.name + ".kernel_dims_consistent", p.dims_consistent);
    double triple_dev = e.transport ? transported_triple_deviation(m, *e.transport, grade)
                                    : entrywise_triple_deviation(m, grade);
    check(r, m.name + ".eq11_vs_triple_formula", triple_dev, tol);
    defect::DefectReport d = defect::defect_window_matrix(m.V1, m.V2, grade);
    check_flag(r, m.name + ".support_certified", d.support_certified);
  }

  std::mt19937_64 gen(seed);
  for (int k = 0; k < random_triples; ++k) {
    int d = 2 + static_cast<int>(gen() % static_cast<uint64_t>(max_dim - 1));
    bcl::BclTriple t = rng::random_triple(d, gen);
    models::ModelPair m = multiplier_model(t, "random" + std::to_string(k));
    defect::ProjectionIdentityReport p =
        defect::verify_projection_identities(m.V1, m.V2, grade);
    double dev = std::max(p.deviation_form1, p.deviation_form2);
    check(r, m.name + ".projection_forms", dev, tol);
    check_flag(r, m.name + ".kernel_dims_consistent", p.dims_consistent);
    check(r, m.name + ".triple_formula", entrywise_triple_deviation(m, grade), tol);
  }
  return r;
}

SuiteResult ladders_suite(int grade, uint64_t seed, int per_class) {
  SuiteResult r{"ladders", {}};
  auto run = [&](const models::ModelPair& m, DefectTag expect) {
    defect::LadderReport rep = defect::equivalence_suite(m.V1, m.V2, grade, m.triple);
    check_flag(r, m.name + ".detected_" + bcl::to_string(expect), rep.detected == expect);
    check_flag(r, m.name + ".ladder_consistent" +
                      (rep.consistent ? "" : "(" + rep.offending + ")"),
               rep.consistent);
  };
  run(models::pos_pair(), DefectTag::Positive);
  run(models::neg_pair(), DefectTag::Negative);
  run(models::zero_pair(models::default_unitary()), DefectTag::Zero);
  run(models::offdiag_pair(models::default_unitary()), DefectTag::OffDiagonal);
  run(models::psi_pair(), DefectTag::Negative);
  run(models::eta_pair(), DefectTag::Positive);

  std::mt19937_64 gen(seed);
  for (int k = 0; k < per_class; ++k) {
    int d = 2 + static_cast<int>(gen() % 5ull);
    bcl::BclTriple tz = rng::random_triple_zero(d, gen);
    run(multiplier_model(tz, "rand_zero" + std::to_string(k)), DefectTag::Zero);
    bcl::BclTriple to = rng::random_triple_offdiag((d + 1) / 2, gen);
    run(multiplier_model(to, "rand_off" + std::to_string(k)), DefectTag::OffDiagonal);
    bcl::BclTriple tm = rng::random_triple(d, gen);
    models::ModelPair mm = multiplier_model(tm, "rand_mixed" + std::to_string(k));
    DefectTag got = bcl::classify(tm).tag;
    if (got != DefectTag::Mixed) continue;  // rare non-Mixed draw: skip, not a class case
    run(mm, DefectTag::Mixed);
  }
  return r;
}

SuiteResult intertwiners_suite(int grade, const std::optional<Eigen::MatrixXcd>& W) {
  SuiteResult r{"intertwiners", {}};
  const double tol = 1e-13;
  Eigen::MatrixXcd w = W.value_or(models::default_unitary());

  struct Case {
    std::string name;
    LazyOp lambda;
    std::pair<LazyOp, LazyOp> from;
    std::pair<LazyOp, LazyOp> to;
  };
  models::ModelPair pos = models::pos_pair(), neg = models::neg_pair();
  models::ModelPair psi = models::psi_pair(), eta = models::eta_pair();
  models::ModelPair zt = models::zero_pair_twisted(w), z0 = models::zero_pair(w);
  models::ModelPair off = models::offdiag_pair(w);
  auto off_mult = bcl::multiplier_pair(*off.triple);

  std::vector<Case> cases;
  cases.push_back({"neg", models::intertwiner_neg(), {neg.V1, neg.V2}, {psi.V1, psi.V2}});
  cases.push_back({"pos", models::intertwiner_pos(), {pos.V1, pos.V2}, {eta.V1, eta.V2}});
  cases.push_back({"zero", models::intertwiner_zero(w), {zt.V1, zt.V2}, {z0.V1, z0.V2}});
  cases.push_back({"off", models::intertwiner_off(w), off_mult, {off.V1, off.V2}});

  for (const auto& c : cases) {
    std::vector<BasisIndex> win = c.lambda.domain().window(grade);
    std::vector<SparseVec> images;
    for (const auto& i : win) images.push_back(c.lambda.forward(i));
    Eigen::MatrixXcd g = gram_matrix(images);
    double gram_dev =
        (g - Eigen::MatrixXcd::Identity(g.rows(), g.cols())).cwiseAbs().maxCoeff();
    check(r, c.name + ".gram_identity", gram_dev, tol);
    double inter_dev = 0.0;
    for (const auto& i : win) {
      inter_dev = std::max(
          inter_dev, deviation(apply(c.lambda, c.from.first.forward(i)),
                               apply(c.to.first, c.lambda.forward(i))));
      inter_dev = std::max(
          inter_dev, deviation(apply(c.lambda, c.from.second.forward(i)),
                               apply(c.to.second, c.lambda.forward(i))));
    }
    check(r, c.name + ".intertwining", inter_dev, tol);
  }
  return r;
}

namespace {

Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  Eigen::MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

double set_hausdorff(const std::vector<std::pair<Cplx, Cplx>>& a,
                     const std::vector<std::pair<Cplx, Cplx>>& b) {
  auto one = [](const auto& x, const auto& y) {
    double h = 0.0;
    for (const auto& p : x) {
      double best = std::numeric_limits<double>::infinity();
      for (const auto& q : y)
        best = std::min(best, std::hypot(std::abs(p.first - q.first),
                                         std::abs(p.second - q.second)));
      h = std::max(h, best);
    }
    return h;
  };
  if (a.empty() && b.empty()) return 0.0;
  if (a.empty() || b.empty()) return 1e30;
  return std::max(one(a, b), one(b, a));
}

}  // namespace

SuiteResult koszul_oracle_suite(uint64_t seed, int count, int max_dim, double tol,
                                int property_count) {
  SuiteResult r{"koszul-oracle", {}};
  std::mt19937_64 gen(seed);
  int agree = 0, total = 0;
  for (int k = 0; k < count; ++k) {
    int d = 2 + static_cast<int>(gen() % static_cast<uint64_t>(max_dim - 1));
    auto [a, b] = rng::random_commuting_pair(d, gen);
    auto spec = koszul::joint_spectrum_finite(a, b, tol);
    bool ok = true;
    for (const auto& [l1, l2] : spec) {
      if (!koszul::koszul_finite(a, b, l1, l2, tol).in_spectrum()) ok = false;
    }
    // off-spectrum probes: shifted away from every spectrum point
    for (const auto& [l1, l2] : spec) {
      Cplx p1 = l1 + Cplx(0.37, 0.11), p2 = l2 + Cplx(-0.23, 0.31);
      bool near = false;
      for (const auto& [q1, q2] : spec)
        if (std::abs(p1 - q1) < 1e-3 && std::abs(p2 - q2) < 1e-3) near = true;
      if (near) continue;
      if (koszul::koszul_finite(a, b, p1, p2, tol).in_spectrum()) ok = false;
    }
    ++total;
    if (ok) ++agree;
  }
  check_flag(r, "oracle_agreement_" + std::to_string(agree) + "/" + std::to_string(total),
             agree == total);

  // block direct sums: sigma(A1 (+) A2, B1 (+) B2) = union of block spectra
  int block_ok = 0;
  for (int k = 0; k < property_count; ++k) {
    int d1 = 2 + static_cast<int>(gen() % 2ull), d2 = 2 + static_cast<int>(gen() % 2ull);
    auto [a1, b1] = rng::random_commuting_pair(d1, gen);
    auto [a2, b2] = rng::random_commuting_pair(d2, gen);
    Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(d1 + d2, d1 + d2);
    Eigen::MatrixXcd b = a;
    a.topLeftCorner(d1, d1) = a1;
    a.bottomRightCorner(d2, d2) = a2;
    b.topLeftCorner(d1, d1) = b1;
    b.bottomRightCorner(d2, d2) = b2;
    auto s = koszul::joint_spectrum_finite(a, b, tol);
    auto s1 = koszul::joint_spectrum_finite(a1, b1, tol);
    auto s2 = koszul::joint_spectrum_finite(a2, b2, tol);
    s1.insert(s1.end(), s2.begin(), s2.end());
    if (set_hausdorff(s, s1) <= 1e-6) ++block_ok;
  }
  check_flag(r, "block_direct_sum_" + std::to_string(block_ok) + "/" +
                    std::to_string(property_count),
             block_ok == property_count);

  // conjugation: (l1, l2) singular for (A, B) iff (conj l1, conj l2) for (A*, B*)
  int conj_ok = 0;
  for (int k = 0; k < property_count; ++k) {
    int d = 2 + static_cast<int>(gen() % 3ull);
    auto [a, b] = rng::random_commuting_pair(d, gen);
    auto spec = koszul::joint_spectrum_finite(a, b, tol);
    bool ok = true;
    Eigen::MatrixXcd ah = a.adjoint(), bh = b.adjoint();
    for (const auto& [l1, l2] : spec) {
      if (!koszul::koszul_finite(ah, bh, std::conj(l1), std::conj(l2), tol).in_spectrum())
        ok = false;
      Cplx p1 = std::conj(l1) + Cplx(0.41, -0.17), p2 = std::conj(l2) + Cplx(0.13, 0.29);
      bool near = false;
      for (const auto& [q1, q2] : spec)
        if (std::abs(p1 - std::conj(q1)) < 1e-3 && std::abs(p2 - std::conj(q2)) < 1e-3)
          near = true;
      if (!near && koszul::koszul_finite(ah, bh, p1, p2, tol).in_spectrum()) ok = false;
    }
    if (ok) ++conj_ok;
  }
  check_flag(r, "adjoint_conjugation_" + std::to_string(conj_ok) + "/" +
                    std::to_string(property_count),
             conj_ok == property_count);

  // sigma(T (x) I, I (x) S) = sigma(T) x sigma(S) for normal T, S
  int tensor_ok = 0;
  for (int k = 0; k < property_count; ++k) {
    int dt = 2 + static_cast<int>(gen() % 3ull), ds = 2 + static_cast<int>(gen() % 3ull);
    Eigen::MatrixXcd t = rng::random_normal(dt, gen), s = rng::random_normal(ds, gen);
    Eigen::MatrixXcd it = Eigen::MatrixXcd::Identity(dt, dt);
    Eigen::MatrixXcd is = Eigen::MatrixXcd::Identity(ds, ds);
    auto spec = koszul::joint_spectrum_finite(kron(t, is), kron(it, s), tol);
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> et(t, false), es(s, false);
    std::vector<std::pair<Cplx, Cplx>> want;
    for (Eigen::Index i = 0; i < dt; ++i)
      for (Eigen::Index j = 0; j < ds; ++j)
        want.emplace_back(et.eigenvalues()(i), es.eigenvalues()(j));
    if (set_hausdorff(spec, want) <= 1e-6) ++tensor_ok;
  }
  check_flag(r, "tensor_product_" + std::to_string(tensor_ok) + "/" +
                    std::to_string(property_count),
             tensor_ok == property_count);
  return r;
}

SuiteResult stage2_suite(Cplx l1, Cplx l2, int series_cap, int generators) {
  SuiteResult r{"stage2-neg", {}};
  koszul::Stage2Report rep =
      koszul::stage2_certificate_neg(l1, l2, series_cap, generators, 1e-12);
  check_flag(r, "tail_within_threshold", rep.tail_ok);
  check(r, "witness_pattern", rep.pattern_deviation, 0.0);
  check(r, "max_pairing", rep.max_pairing, 1e-10);
  check(r, "pairing_within_certified_bound", rep.max_pairing, rep.pairing_bound);
  check(r, "residue_closed_form", rep.residue_deviation, 1e-12);
  return r;
}

SuiteResult embedding_suite(int grade) {
  SuiteResult r{"embedding", {}};
  LazyOp j = models::invariant_embedding();
  models::ModelPair neg = models::neg_pair();
  models::ModelPair pos = models::pos_pair();
  std::vector<BasisIndex> win = IndexScheme::hardy_bidisc().window(grade);
  std::vector<SparseVec> images;
  for (const auto& i : win) images.push_back(j.forward(i));
  Eigen::MatrixXcd g = gram_matrix(images);
  double gram_dev = (g - Eigen::MatrixXcd::Identity(g.rows(), g.cols())).cwiseAbs().maxCoeff();
  check(r, "image_orthonormal", gram_dev, 0.0);

  // J* tau_i J = M_zi entrywise on the window
  double comp_dev = 0.0;
  for (size_t a = 0; a < win.size(); ++a) {
    SparseVec t1 = apply(neg.V1, images[a]);
    SparseVec t2 = apply(neg.V2, images[a]);
    for (size_t b = 0; b < win.size(); ++b) {
      Cplx c1 = inner(t1, images[b]);
      Cplx c2 = inner(t2, images[b]);
      Cplx w1 = pos.V1.forward(win[a]).coeff(win[b]);
      Cplx w2 = pos.V2.forward(win[a]).coeff(win[b]);
      comp_dev = std::max(comp_dev, std::max(std::abs(c1 - w1), std::abs(c2 - w2)));
    }
  }
  check(r, "compression_is_coordinate_pair", comp_dev, 0.0);

  // ran J is jointly invariant: tau_i J e_a stays inside the embedded family
  std::vector<BasisIndex> outer = IndexScheme::hardy_bidisc().window(grade + 2);
  std::vector<SparseVec> img_outer;
  for (const auto& i : outer) img_outer.push_back(j.forward(i));
  double invariance_dev = 0.0;
  for (const auto& i : IndexScheme::hardy_bidisc().window(grade + 1)) {
    invariance_dev = std::max(
        invariance_dev, orthogonal_residual(apply(neg.V1, j.forward(i)), img_outer).norm());
    invariance_dev = std::max(
        invariance_dev, orthogonal_residual(apply(neg.V2, j.forward(i)), img_outer).norm());
  }
  check(r, "embedded_subspace_invariant", invariance_dev, 0.0);

  // defect of the restricted pair, in the embedded basis: adjoints compress
  // to the subspace, so build it from the matrices of tau_i on ran J
  const auto n = static_cast<Eigen::Index>(outer.size());
  Eigen::MatrixXcd t1(n, n), t2(n, n);
  for (Eigen::Index a = 0; a < n; ++a) {
    SparseVec i1 = apply(neg.V1, img_outer[static_cast<size_t>(a)]);
    SparseVec i2 = apply(neg.V2, img_outer[static_cast<size_t>(a)]);
    for (Eigen::Index b = 0; b < n; ++b) {
      t1(b, a) = inner(i1, img_outer[static_cast<size_t>(b)]);
      t2(b, a) = inner(i2, img_outer[static_cast<size_t>(b)]);
    }
  }
  Eigen::MatrixXcd prod = t1 * t2;
  Eigen::MatrixXcd c = Eigen::MatrixXcd::Identity(n, n) - t1 * t1.adjoint() -
                       t2 * t2.adjoint() + prod * prod.adjoint();
  double defect_dev = 0.0;
  for (size_t a = 0; a < win.size(); ++a) {
    for (size_t b = 0; b < win.size(); ++b) {
      Cplx want = (win[a] == BasisIndex({0, 0}) && win[b] == BasisIndex({0, 0}))
                      ? Cplx(1.0, 0.0)
                      : Cplx(0.0, 0.0);
      defect_dev = std::max(defect_dev, std::abs(c(static_cast<Eigen::Index>(b),
                                                   static_cast<Eigen::Index>(a)) -
                                                 want));
    }
  }
  check(r, "restricted_defect_positive_rank_one", defect_dev, 0.0);
  return r;
}

}  // namespace isopair::verify

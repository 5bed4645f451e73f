#include "isopair/models.hpp"

#include <stdexcept>

namespace isopair::models {

namespace {

using bcl::DefectTag;

void require_unitary(const Eigen::MatrixXcd& W) {
  if (W.rows() != W.cols() || W.rows() == 0)
    throw std::invalid_argument("W must be a nonempty square matrix");
  Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(W.rows(), W.cols());
  double dev = std::max((W.adjoint() * W - id).cwiseAbs().maxCoeff(),
                        (W * W.adjoint() - id).cwiseAbs().maxCoeff());
  if (dev > 1e-10)
    throw std::invalid_argument("W is not unitary (deviation " + std::to_string(dev) + ")");
}

LazyOp bidisc_coordinate_shift(int which) {
  IndexScheme s = IndexScheme::hardy_bidisc();
  auto fwd = [s, which](const BasisIndex& i) {
    BasisIndex j = i;
    j[which] += 1;
    return SparseVec::basis(s, j);
  };
  auto adj = [s, which](const BasisIndex& i) {
    if (i[which] == 0) return SparseVec(s);
    BasisIndex j = i;
    j[which] -= 1;
    return SparseVec::basis(s, j);
  };
  return LazyOp(s, s, fwd, adj, 1.0, 1, which == 0 ? "M_z1" : "M_z2");
}

// M_z^power (x) A on H^2(D) (x) C^d
LazyOp hardy_shift_tensor(const Eigen::MatrixXcd& A, int power, const std::string& label) {
  const int d = static_cast<int>(A.rows());
  IndexScheme s = IndexScheme::vector_hardy(d);
  Eigen::MatrixXcd Ah = A.adjoint();
  auto fwd = [s, A, d, power](const BasisIndex& i) {
    auto [in, t] = s.split_mult(i);
    SparseVec out(s);
    for (int r = 0; r < d; ++r) {
      if (A(r, t) != Cplx(0.0, 0.0))
        out.add_term(s.join_mult(BasisIndex({in[0] + power}), r), A(r, t));
    }
    return out;
  };
  auto adj = [s, Ah, d, power](const BasisIndex& i) {
    auto [in, t] = s.split_mult(i);
    SparseVec out(s);
    if (in[0] < power) return out;
    for (int r = 0; r < d; ++r) {
      if (Ah(r, t) != Cplx(0.0, 0.0))
        out.add_term(s.join_mult(BasisIndex({in[0] - power}), r), Ah(r, t));
    }
    return out;
  };
  return LazyOp(s, s, fwd, adj, 1.0, power, label);
}

// forward action of the diagonal-pairing unitary on monomial exponents
std::pair<int, int> neg_unitary_map(int a, int b) {
  if (a >= b) return {a + 2, b};
  if (b == a + 1) return {a + 1, b - 1};
  return {a, b - 2};
}

std::pair<int, int> neg_unitary_inverse_map(int a, int b) {
  if (a >= b + 2) return {a - 2, b};
  if (a == b + 1) return {a - 1, b + 1};
  return {a, b + 2};
}

}  // namespace

LazyOp neg_model_unitary() {
  IndexScheme s = IndexScheme::hardy_bidisc();
  auto fwd = [s](const BasisIndex& i) {
    auto [a, b] = neg_unitary_map(i[0], i[1]);
    return SparseVec::basis(s, BasisIndex({a, b}));
  };
  auto adj = [s](const BasisIndex& i) {
    auto [a, b] = neg_unitary_inverse_map(i[0], i[1]);
    return SparseVec::basis(s, BasisIndex({a, b}));
  };
  return LazyOp(s, s, fwd, adj, 1.0, 2, "U");
}

ModelPair pos_pair() {
  ModelPair p{bidisc_coordinate_shift(0),
              bidisc_coordinate_shift(1),
              DefectTag::Positive,
              IndexScheme::hardy_bidisc(),
              "pos",
              "coordinate multiplications (M_z1, M_z2) on the Hardy space of the bidisc",
              bcl::BclTriple::preset("bilateral_p_zero_plus")};
  return p;
}

ModelPair neg_pair() {
  LazyOp U = neg_model_unitary();
  LazyOp tau1 = compose(adjoint(U), bidisc_coordinate_shift(0));
  LazyOp tau2 = compose(bidisc_coordinate_shift(1), U);
  ModelPair p{tau1,
              tau2,
              DefectTag::Negative,
              IndexScheme::hardy_bidisc(),
              "neg",
              "(U* M_z1, M_z2 U) on the Hardy space of the bidisc, U the "
              "diagonal-pairing unitary; rank-one negative defect",
              bcl::BclTriple::preset("bilateral_p_minus")};
  return p;
}

ModelPair zero_pair(const Eigen::MatrixXcd& W) {
  require_unitary(W);
  const int d = static_cast<int>(W.rows());
  Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(d, d);
  ModelPair p{hardy_shift_tensor(id, 1, "Mz(x)I"),
              hardy_shift_tensor(W, 0, "I(x)W"),
              DefectTag::Zero,
              IndexScheme::vector_hardy(d),
              "zero",
              "(M_z (x) I, I (x) W) on H2(D) (x) C^" + std::to_string(d) +
                  " with W unitary; V2 unitary, zero defect",
              bcl::BclTriple::finite(W, id)};
  return p;
}

ModelPair zero_pair_twisted(const Eigen::MatrixXcd& W) {
  require_unitary(W);
  const int d = static_cast<int>(W.rows());
  Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(d, d);
  ModelPair p{hardy_shift_tensor(W.adjoint(), 1, "Mz(x)W*"),
              hardy_shift_tensor(W, 0, "I(x)W"),
              DefectTag::Zero,
              IndexScheme::vector_hardy(d),
              "zero_twisted",
              "(M_z (x) W*, I (x) W); jointly equivalent to the untwisted pair",
              bcl::BclTriple::finite(W, id)};
  return p;
}

ModelPair offdiag_pair(const Eigen::MatrixXcd& W) {
  require_unitary(W);
  const int d = static_cast<int>(W.rows());
  Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(d, d);
  Eigen::MatrixXcd U = Eigen::MatrixXcd::Zero(2 * d, 2 * d);
  U.block(0, d, d, d) = id;
  U.block(d, 0, d, d) = W;
  Eigen::MatrixXcd P = Eigen::MatrixXcd::Zero(2 * d, 2 * d);
  P.block(0, 0, d, d) = id;
  ModelPair p{hardy_shift_tensor(id, 1, "Mz(x)I"),
              hardy_shift_tensor(W, 1, "Mz(x)W"),
              DefectTag::OffDiagonal,
              IndexScheme::vector_hardy(d),
              "offdiag",
              "(M_z (x) I, M_z (x) W) on H2(D) (x) C^" + std::to_string(d) +
                  "; equal ranges, defect E0 (x) I - E1 (x) I",
              bcl::BclTriple::finite(U, P)};
  return p;
}

ModelPair psi_pair() {
  bcl::BclTriple t = bcl::BclTriple::preset("bilateral_p_minus");
  auto [m1, m2] = bcl::multiplier_pair(t);
  ModelPair p{m1,
              m2,
              DefectTag::Negative,
              t.multiplier_scheme(),
              "psi",
              "multiplier pair of the (l2(Z), p_-, shift) triple on H2(D) (x) l2(Z); "
              "rank-one negative defect",
              t};
  return p;
}

ModelPair eta_pair() {
  bcl::BclTriple t = bcl::BclTriple::preset("bilateral_p_zero_plus");
  auto [m1, m2] = bcl::multiplier_pair(t);
  ModelPair p{m1,
              m2,
              DefectTag::Positive,
              t.multiplier_scheme(),
              "eta",
              "multiplier pair of the (l2(Z), p_0+, shift) triple on H2(D) (x) l2(Z); "
              "rank-one positive defect",
              t};
  return p;
}

LazyOp intertwiner_neg() {
  IndexScheme dom = IndexScheme::hardy_bidisc();
  IndexScheme cod = IndexScheme::vector_hardy_bilateral();
  auto fwd = [cod](const BasisIndex& i) {
    int p = i[0], q = i[1];
    return SparseVec::basis(cod, BasisIndex({std::min(p, q), p - q}));
  };
  auto adj = [dom](const BasisIndex& i) {
    int h = i[0], f = i[1];
    if (f >= 0) return SparseVec::basis(dom, BasisIndex({h + f, h}));
    return SparseVec::basis(dom, BasisIndex({h, h - f}));
  };
  return LazyOp(dom, cod, fwd, adj, 1.0, std::nullopt, "Lambda_neg");
}

LazyOp intertwiner_pos() {
  IndexScheme dom = IndexScheme::hardy_bidisc();
  IndexScheme cod = IndexScheme::vector_hardy_bilateral();
  auto fwd = [cod](const BasisIndex& i) {
    int p = i[0], q = i[1];
    if (p >= q) return SparseVec::basis(cod, BasisIndex({q, -(p - q) - 1}));
    return SparseVec::basis(cod, BasisIndex({p, (q - p) - 1}));
  };
  auto adj = [dom](const BasisIndex& i) {
    int h = i[0], f = i[1];
    if (f <= -1) return SparseVec::basis(dom, BasisIndex({h + (-f - 1), h}));
    return SparseVec::basis(dom, BasisIndex({h, h + f + 1}));
  };
  return LazyOp(dom, cod, fwd, adj, 1.0, std::nullopt, "Lambda_pos");
}

namespace {

Eigen::MatrixXcd matrix_power(const Eigen::MatrixXcd& W, int n) {
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Identity(W.rows(), W.cols());
  for (int k = 0; k < n; ++k) out = W * out;
  return out;
}

}  // namespace

LazyOp intertwiner_zero(const Eigen::MatrixXcd& W) {
  require_unitary(W);
  const int d = static_cast<int>(W.rows());
  IndexScheme s = IndexScheme::vector_hardy(d);
  auto fwd = [s, W, d](const BasisIndex& i) {
    auto [in, t] = s.split_mult(i);
    Eigen::MatrixXcd Wn = matrix_power(W, in[0]);
    SparseVec out(s);
    for (int r = 0; r < d; ++r) {
      if (Wn(r, t) != Cplx(0.0, 0.0)) out.add_term(s.join_mult(in, r), Wn(r, t));
    }
    return out;
  };
  auto adj = [s, W, d](const BasisIndex& i) {
    auto [in, t] = s.split_mult(i);
    Eigen::MatrixXcd Wn = matrix_power(W, in[0]).adjoint();
    SparseVec out(s);
    for (int r = 0; r < d; ++r) {
      if (Wn(r, t) != Cplx(0.0, 0.0)) out.add_term(s.join_mult(in, r), Wn(r, t));
    }
    return out;
  };
  return LazyOp(s, s, fwd, adj, 1.0, 0, "Lambda_zero");
}

LazyOp intertwiner_off(const Eigen::MatrixXcd& W) {
  require_unitary(W);
  const int d = static_cast<int>(W.rows());
  // domain: the triple's multiplier space H2(D) (x) C^{2d}, slots 0..d-1 the
  // block mapped onto odd degrees (factor W^{n+1}), slots d..2d-1 the block
  // mapped onto even degrees (factor W^n)
  IndexScheme dom = IndexScheme::vector_hardy(2 * d);
  IndexScheme cod = IndexScheme::vector_hardy(d);
  auto fwd = [dom, cod, W, d](const BasisIndex& i) {
    auto [in, t] = dom.split_mult(i);
    int n = in[0];
    bool odd_block = t < d;
    int deg = odd_block ? 2 * n + 1 : 2 * n;
    Eigen::MatrixXcd Wn = matrix_power(W, odd_block ? n + 1 : n);
    int col = odd_block ? t : t - d;
    SparseVec out(cod);
    for (int r = 0; r < d; ++r) {
      if (Wn(r, col) != Cplx(0.0, 0.0))
        out.add_term(cod.join_mult(BasisIndex({deg}), r), Wn(r, col));
    }
    return out;
  };
  auto adj = [dom, cod, W, d](const BasisIndex& i) {
    auto [in, t] = cod.split_mult(i);
    int m = in[0];
    bool odd_block = m % 2 == 1;
    int n = odd_block ? (m - 1) / 2 : m / 2;
    Eigen::MatrixXcd Wn = matrix_power(W, odd_block ? n + 1 : n).adjoint();
    SparseVec out(dom);
    for (int r = 0; r < d; ++r) {
      if (Wn(r, t) != Cplx(0.0, 0.0))
        out.add_term(dom.join_mult(BasisIndex({n}), odd_block ? r : r + d), Wn(r, t));
    }
    return out;
  };
  return LazyOp(dom, cod, fwd, adj, 1.0, std::nullopt, "Lambda_off");
}

LazyOp invariant_embedding() {
  IndexScheme s = IndexScheme::hardy_bidisc();
  // tau_1^m tau_2^n (1) in the fiber/degree coordinates (k, j) of the psi
  // presentation: k = n - m, j = n + max(0, m - n - 1); back as a monomial:
  // (j + k, j) for k >= 0, (j, j - k) for k < 0.
  auto fwd = [s](const BasisIndex& i) {
    int m = i[0], n = i[1];
    int k = n - m;
    int j = n + std::max(0, m - n - 1);
    if (k >= 0) return SparseVec::basis(s, BasisIndex({j + k, j}));
    return SparseVec::basis(s, BasisIndex({j, j - k}));
  };
  auto adj = [s](const BasisIndex& i) {
    int a = i[0], b = i[1];
    int k = a - b, j = std::min(a, b);
    if (k >= 0) {
      if (j < k) return SparseVec(s);  // outside the invariant subspace
      return SparseVec::basis(s, BasisIndex({j - k, j}));
    }
    if (k == -1) return SparseVec::basis(s, BasisIndex({j + 1, j}));
    if (j < -k - 1) return SparseVec(s);
    return SparseVec::basis(s, BasisIndex({j + 1, j + 1 + k}));
  };
  return LazyOp(s, s, fwd, adj, 1.0, std::nullopt, "J");
}

ModelPair tensor_multiplicity(const ModelPair& p, int d) {
  if (d < 1) throw std::invalid_argument("tensor_multiplicity: d must be >= 1");
  IndexScheme big = p.scheme.tensor(d);
  IndexScheme small = p.scheme;
  auto lift_op = [big, small, d](const LazyOp& op, bool adjoint_side) {
    auto act = [big, small, d, op, adjoint_side](const BasisIndex& i) {
      auto [inner, slot] = big.split_mult(i);
      int t_old = slot / d, t_new = slot % d;
      BasisIndex old_index = small.join_mult(inner, t_old);
      SparseVec img =
          adjoint_side ? op.adjoint_action(old_index) : op.forward(old_index);
      SparseVec out(big);
      for (const auto& [oi, c] : img.entries()) {
        auto [o_inner, o_slot] = small.split_mult(oi);
        out.add_term(big.join_mult(o_inner, o_slot * d + t_new), c);
      }
      return out;
    };
    return act;
  };
  auto wrap = [&](const LazyOp& op) {
    return LazyOp(big, big, lift_op(op, false), lift_op(op, true), op.norm_bound(),
                  op.band_radius(), op.label() + "(x)I" + std::to_string(d));
  };
  ModelPair out{wrap(p.V1),
                wrap(p.V2),
                p.declared_class,
                big,
                "tensor:" + p.name + ":" + std::to_string(d),
                p.description + "; multiplicity " + std::to_string(d),
                std::nullopt};
  return out;
}

ModelPair direct_sum(const ModelPair& a, const ModelPair& b) {
  IndexScheme s = IndexScheme::direct_sum(a.scheme, b.scheme);
  auto embed = [s](const LazyOp& left, const LazyOp& right) {
    auto act_of = [s, left, right](bool adjoint_side) {
      return [s, left, right, adjoint_side](const BasisIndex& i) {
        int side = i[0];
        const LazyOp& op = side == 0 ? left : right;
        SparseVec img = adjoint_side ? op.adjoint_action(i.tail()) : op.forward(i.tail());
        SparseVec out(s);
        for (const auto& [oi, c] : img.entries()) {
          BasisIndex tagged({side});
          for (int k = 0; k < oi.size(); ++k) tagged.push_back(oi[k]);
          out.add_term(tagged, c);
        }
        return out;
      };
    };
    std::optional<int> band;
    if (left.band_radius() && right.band_radius())
      band = std::max(*left.band_radius(), *right.band_radius());
    return LazyOp(s, s, act_of(false), act_of(true),
                  std::max(left.norm_bound(), right.norm_bound()), band, "(+)");
  };
  using bcl::DefectTag;
  DefectTag tag;
  if (a.declared_class == b.declared_class) {
    tag = a.declared_class;
  } else if (a.declared_class == DefectTag::Zero) {
    tag = b.declared_class;
  } else if (b.declared_class == DefectTag::Zero) {
    tag = a.declared_class;
  } else {
    tag = DefectTag::Mixed;
  }
  ModelPair out{embed(a.V1, b.V1),
                embed(a.V2, b.V2),
                tag,
                s,
                "sum:" + a.name + ":" + b.name,
                a.description + " (+) " + b.description,
                std::nullopt};
  return out;
}

Eigen::MatrixXcd default_unitary() {
  Eigen::MatrixXcd w = Eigen::MatrixXcd::Zero(2, 2);
  w(0, 0) = Cplx(1.0, 0.0);
  w(1, 1) = Cplx(0.0, 1.0);
  return w;
}

std::vector<std::string> shipped_model_names() {
  return {"pos", "neg", "zero", "offdiag", "psi", "eta"};
}

ModelPair lookup(const std::string& spec, const MatrixLoader& load_matrix) {
  auto load = [&](const std::string& path) {
    if (!load_matrix) throw std::invalid_argument("model '" + spec + "' needs a matrix loader");
    return load_matrix(path);
  };
  if (spec == "pos") return pos_pair();
  if (spec == "neg") return neg_pair();
  if (spec == "psi") return psi_pair();
  if (spec == "eta") return eta_pair();
  if (spec == "zero") return zero_pair(default_unitary());
  if (spec == "zero_twisted") return zero_pair_twisted(default_unitary());
  if (spec == "offdiag") return offdiag_pair(default_unitary());
  if (spec.rfind("zero:", 0) == 0) return zero_pair(load(spec.substr(5)));
  if (spec.rfind("zero_twisted:", 0) == 0) return zero_pair_twisted(load(spec.substr(13)));
  if (spec.rfind("offdiag:", 0) == 0) return offdiag_pair(load(spec.substr(8)));
  if (spec.rfind("tensor:", 0) == 0) {
    std::string rest = spec.substr(7);
    auto cut = rest.rfind(':');
    if (cut == std::string::npos) throw std::invalid_argument("tensor spec needs :<d>");
    int d = std::stoi(rest.substr(cut + 1));
    return tensor_multiplicity(lookup(rest.substr(0, cut), load_matrix), d);
  }
  if (spec.rfind("sum:", 0) == 0) {
    std::string rest = spec.substr(4);
    for (size_t p = rest.find(':'); p != std::string::npos; p = rest.find(':', p + 1)) {
      try {
        ModelPair a = lookup(rest.substr(0, p), load_matrix);
        ModelPair b = lookup(rest.substr(p + 1), load_matrix);
        return direct_sum(a, b);
      } catch (const std::exception&) {
        continue;  // try the next split point
      }
    }
    throw std::invalid_argument("cannot parse sum spec: " + spec);
  }
  throw std::invalid_argument("unknown model: " + spec);
}

}  // namespace isopair::models

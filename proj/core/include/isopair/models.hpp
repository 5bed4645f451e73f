#pragma once

#include <functional>
#include <optional>

#include "isopair/bcl.hpp"

namespace isopair::models {

/// A named commuting isometric pair with its declared defect class and, when
/// known exactly, its BCL triple.
struct ModelPair {
  LazyOp V1, V2;
  bcl::DefectTag declared_class = bcl::DefectTag::Mixed;
  IndexScheme scheme;
  std::string name;
  std::string description;
  std::optional<bcl::BclTriple> triple;
};

/// (M_z1, M_z2) on H^2(D^2); defect is the projection onto the constants.
ModelPair pos_pair();

/// (U* M_z1, M_z2 U) on H^2(D^2) with U the diagonal-pairing unitary below;
/// defect is minus the projection onto span{z2}.
ModelPair neg_pair();

/// The unitary U(z1^a z2^b) = z1^(a+2) z2^b for a >= b, z1^(a+1) z2^(b-1)
/// for b = a+1, z1^a z2^(b-2) for b >= a+2.
LazyOp neg_model_unitary();

/// (M_z (x) I, I (x) W) on H^2(D) (x) C^d for unitary W; zero defect.
ModelPair zero_pair(const Eigen::MatrixXcd& W);
/// (M_z (x) W*, I (x) W); jointly equivalent to zero_pair(W).
ModelPair zero_pair_twisted(const Eigen::MatrixXcd& W);

/// (M_z (x) I, M_z (x) W); equal ranges, defect E0 (x) I - E1 (x) I.
ModelPair offdiag_pair(const Eigen::MatrixXcd& W);

/// Multiplier pairs of the bilateral presets.
ModelPair psi_pair();
ModelPair eta_pair();

/// Unitary H^2(D^2) -> H^2_D(l2(Z)) carrying (tau_1, tau_2) to the psi pair:
/// z1^p z2^q -> e_{p-q} (x) z^min(p,q).
LazyOp intertwiner_neg();
/// Unitary carrying (M_z1, M_z2) to the eta pair:
/// z1^(m+k) z2^k -> e_{-(m+1)} (x) z^k,  z1^k z2^(m+k) -> e_{m-1} (x) z^k.
LazyOp intertwiner_pos();
/// Unitary sum a_m z^m -> sum W^m(a_m) z^m on H^2(D) (x) C^d, carrying
/// (M_z (x) W*, I (x) W) to (M_z (x) I, I (x) W).
LazyOp intertwiner_zero(const Eigen::MatrixXcd& W);
/// Unitary from the two-block multiplier presentation of the equal-range
/// triple onto H^2(D) (x) C^d, interleaving blocks into even/odd degrees.
LazyOp intertwiner_off(const Eigen::MatrixXcd& W);

/// Isometry J: z1^m z2^n -> tau_1^m tau_2^n (1).  Its range is a joint
/// invariant subspace on which the negative pair restricts to (M_z1, M_z2).
LazyOp invariant_embedding();

/// (V1 (x) I_d, V2 (x) I_d); same defect class with multiplicity d.
ModelPair tensor_multiplicity(const ModelPair& p, int d);
/// Block-diagonal direct sum; class combines pointwise (Mixed when the
/// summands' signs genuinely differ).
ModelPair direct_sum(const ModelPair& a, const ModelPair& b);

/// Registry grammar: "pos", "neg", "psi", "eta", "zero[:<matrix-file>]",
/// "offdiag[:<matrix-file>]", "tensor:<model>:<d>", "sum:<a>:<b>".
using MatrixLoader = std::function<Eigen::MatrixXcd(const std::string&)>;
ModelPair lookup(const std::string& spec, const MatrixLoader& load_matrix = {});

/// diag(1, i): the default W for zero/offdiag when no file is given.
Eigen::MatrixXcd default_unitary();

/// The six shipped models with their default parameters.
std::vector<std::string> shipped_model_names();

}  // namespace isopair::models

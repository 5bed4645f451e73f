#include "isopair/window_checks.hpp"

#include <cmath>
#include <stdexcept>

namespace isopair {

double isometry_deviation(const LazyOp& v, std::span<const BasisIndex> window) {
  double dev = 0.0;
  std::vector<SparseVec> images;
  images.reserve(window.size());
  for (const auto& i : window) images.push_back(v.forward(i));
  for (size_t a = 0; a < window.size(); ++a) {
    for (size_t b = a; b < window.size(); ++b) {
      Cplx g = inner(images[a], images[b]);
      Cplx want = a == b ? Cplx(1.0, 0.0) : Cplx(0.0, 0.0);
      dev = std::max(dev, std::abs(g - want));
    }
  }
  return dev;
}

double coisometry_deviation(const LazyOp& v, std::span<const BasisIndex> window) {
  return isometry_deviation(adjoint(v), window);
}

double adjoint_consistency_deviation(const LazyOp& v, std::span<const BasisIndex> window) {
  // coeff_j(V e_i) must equal conj(coeff_i(V* e_j)); checked on every entry
  // of each image with the partner index ranging over the image support.
  double dev = 0.0;
  for (const auto& i : window) {
    SparseVec img = v.forward(i);
    for (const auto& [j, c] : img.entries()) {
      Cplx back = v.adjoint_action(j).coeff(i);
      dev = std::max(dev, std::abs(c - std::conj(back)));
    }
    SparseVec adj = v.adjoint_action(i);
    for (const auto& [j, c] : adj.entries()) {
      Cplx back = v.forward(j).coeff(i);
      dev = std::max(dev, std::abs(c - std::conj(back)));
    }
  }
  return dev;
}

double commutation_deviation(const LazyOp& a, const LazyOp& b,
                             std::span<const BasisIndex> window) {
  double dev = 0.0;
  for (const auto& i : window) {
    SparseVec ab = apply(a, b.forward(i));
    SparseVec ba = apply(b, a.forward(i));
    dev = std::max(dev, deviation(ab, ba));
  }
  return dev;
}

double double_commutation_deviation(const LazyOp& a, const LazyOp& b,
                                    std::span<const BasisIndex> window) {
  double dev = 0.0;
  for (const auto& i : window) {
    SparseVec ab = apply(a, b.adjoint_action(i));
    SparseVec ba = apply_adjoint(b, a.forward(i));
    dev = std::max(dev, deviation(ab, ba));
  }
  return dev;
}

std::vector<WindowCheck> window_checks(const LazyOp& v, std::span<const BasisIndex> window) {
  bool cert = v.band_radius().has_value();
  std::vector<WindowCheck> out;
  out.push_back({"isometry", isometry_deviation(v, window), cert});
  double uni = std::max(out.back().max_deviation, coisometry_deviation(v, window));
  out.push_back({"unitarity", uni, cert});
  out.push_back({"adjoint_consistency", adjoint_consistency_deviation(v, window), cert});
  return out;
}

std::vector<WindowCheck> window_checks(const LazyOp& v1, const LazyOp& v2,
                                       std::span<const BasisIndex> window) {
  bool cert = v1.band_radius().has_value() && v2.band_radius().has_value();
  std::vector<WindowCheck> out;
  out.push_back({"isometry_1", isometry_deviation(v1, window), cert});
  out.push_back({"isometry_2", isometry_deviation(v2, window), cert});
  out.push_back({"commutation", commutation_deviation(v1, v2, window), cert});
  out.push_back({"double_commutation", double_commutation_deviation(v1, v2, window), cert});
  out.push_back({"adjoint_consistency_1", adjoint_consistency_deviation(v1, window), cert});
  out.push_back({"adjoint_consistency_2", adjoint_consistency_deviation(v2, window), cert});
  return out;
}

double max_check_deviation(const std::vector<WindowCheck>& checks) {
  double m = 0.0;
  for (const auto& c : checks) m = std::max(m, c.max_deviation);
  return m;
}

const WindowCheck& find_check(const std::vector<WindowCheck>& checks, const std::string& name) {
  for (const auto& c : checks)
    if (c.name == name) return c;
  throw std::invalid_argument("no check named " + name);
}

}  // namespace isopair

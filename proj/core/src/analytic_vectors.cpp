#include "isopair/analytic_vectors.hpp"

#include <cmath>
#include <stdexcept>

namespace isopair {

namespace {

constexpr int kMaxTerms = 200000;

void require_in_disc(Cplx l, const char* what) {
  require_finite(l);
  if (std::abs(l) >= 1.0)
    throw std::invalid_argument(std::string(what) + ": parameter outside the open unit disc");
}

// sqrt(sum_{n > N} r^(2n)) = r^(N+1) / sqrt(1 - r^2)
double geometric_tail(double r, int kept_through) {
  if (r == 0.0) return 0.0;
  return std::pow(r, kept_through + 1) / std::sqrt(1.0 - r * r);
}

int grade_for_eps(double r, double eps, const char* what) {
  for (int n = 0; n <= kMaxTerms; ++n) {
    if (geometric_tail(r, n) <= eps) return n;
  }
  throw std::runtime_error(std::string(what) + ": insufficient truncation for target eps");
}

}  // namespace

SparseVec hardy_kernel_truncated(Cplx lambda, int max_grade) {
  require_in_disc(lambda, "hardy_kernel");
  SparseVec v(IndexScheme::hardy_disc());
  Cplx c(1.0, 0.0);
  Cplx r = std::conj(lambda);
  for (int n = 0; n <= max_grade; ++n) {
    v.set(BasisIndex({n}), c);
    if (r == Cplx(0.0, 0.0)) break;
    c *= r;
  }
  v.set_tail_bound(geometric_tail(std::abs(lambda), max_grade));
  return v;
}

SparseVec hardy_kernel(Cplx lambda, double eps) {
  require_in_disc(lambda, "hardy_kernel");
  return hardy_kernel_truncated(lambda, grade_for_eps(std::abs(lambda), eps, "hardy_kernel"));
}

SparseVec bidisc_kernel(Cplx w1, Cplx w2, double eps) {
  require_in_disc(w1, "bidisc_kernel");
  require_in_disc(w2, "bidisc_kernel");
  double r1 = std::abs(w1), r2 = std::abs(w2);
  // union tail bound over the kept box {m, n <= cap}
  auto tail = [&](int cap) {
    double t2 = (std::pow(r1, 2 * (cap + 1)) + std::pow(r2, 2 * (cap + 1))) /
                ((1.0 - r1 * r1) * (1.0 - r2 * r2));
    return std::sqrt(t2);
  };
  int cap = 0;
  while (tail(cap) > eps) {
    if (++cap > kMaxTerms) throw std::runtime_error("bidisc_kernel: insufficient truncation");
  }
  SparseVec v(IndexScheme::hardy_bidisc());
  Cplx cm(1.0, 0.0);
  for (int m = 0; m <= cap; ++m) {
    Cplx c = cm;
    for (int n = 0; n <= cap; ++n) {
      if (c != Cplx(0.0, 0.0)) v.set(BasisIndex({m, n}), c);
      c *= std::conj(w2);
      if (c == Cplx(0.0, 0.0)) break;
    }
    cm *= std::conj(w1);
    if (cm == Cplx(0.0, 0.0)) break;
  }
  v.set_tail_bound(tail(cap));
  return v;
}

SparseVec x_neg_vector_truncated(Cplx l1, Cplx l2, int max_grade) {
  require_in_disc(l1, "x_neg_vector");
  require_in_disc(l2, "x_neg_vector");
  SparseVec v(IndexScheme::bilateral_z());
  bool z1 = l1 == Cplx(0.0, 0.0), z2 = l2 == Cplx(0.0, 0.0);
  double tail = 0.0;
  if (z1 && z2) {
    v.set(BasisIndex({-1}), Cplx(1.0, 0.0));
  } else if (z1) {
    // sum_{n>=1} l2^(n-1) e_{-n}
    Cplx c(1.0, 0.0);
    for (int n = 1; n <= max_grade; ++n) {
      v.set(BasisIndex({-n}), c);
      c *= l2;
    }
    tail = geometric_tail(std::abs(l2), max_grade - 1);
  } else {
    Cplx c(1.0, 0.0);
    for (int n = 0; n <= max_grade; ++n) {
      v.set(BasisIndex({n}), c);
      c *= l1;
    }
    double tp = geometric_tail(std::abs(l1), max_grade);
    double tm = 0.0;
    if (!z2) {
      Cplx inv = Cplx(1.0, 0.0) / l1;
      c = inv;
      for (int n = 1; n <= max_grade; ++n) {
        v.set(BasisIndex({-n}), c);
        c *= l2;
      }
      tm = std::abs(inv) * geometric_tail(std::abs(l2), max_grade - 1);
    } else {
      v.set(BasisIndex({-1}), Cplx(1.0, 0.0) / l1);
    }
    tail = std::sqrt(tp * tp + tm * tm);
  }
  v.set_tail_bound(tail);
  return v;
}

SparseVec x_neg_vector(Cplx l1, Cplx l2, double eps) {
  require_in_disc(l1, "x_neg_vector");
  require_in_disc(l2, "x_neg_vector");
  double r = std::max(std::abs(l1), std::abs(l2));
  double scale = l1 == Cplx(0.0, 0.0) ? 1.0 : std::max(1.0, 1.0 / std::abs(l1));
  int n = grade_for_eps(r, eps / (2.0 * scale), "x_neg_vector");
  return x_neg_vector_truncated(l1, l2, n + 1);
}

SparseVec x_pos_vector_truncated(Cplx l1, Cplx l2, int max_grade) {
  require_in_disc(l1, "x_pos_vector");
  require_in_disc(l2, "x_pos_vector");
  SparseVec v(IndexScheme::bilateral_z());
  bool z1 = l1 == Cplx(0.0, 0.0), z2 = l2 == Cplx(0.0, 0.0);
  double tail = 0.0;
  if (z1 && z2) {
    v.set(BasisIndex({-1}), Cplx(1.0, 0.0));
  } else if (z2) {
    // sum_{n>=1} conj(l1)^(n-1) e_{-n}
    Cplx c(1.0, 0.0);
    for (int n = 1; n <= max_grade; ++n) {
      v.set(BasisIndex({-n}), c);
      c *= std::conj(l1);
    }
    tail = geometric_tail(std::abs(l1), max_grade - 1);
  } else {
    Cplx c(1.0, 0.0);
    for (int n = 0; n <= max_grade; ++n) {
      v.set(BasisIndex({n}), c);
      c *= std::conj(l2);
    }
    double tp = geometric_tail(std::abs(l2), max_grade);
    double tm = 0.0;
    if (!z1) {
      Cplx inv = Cplx(1.0, 0.0) / std::conj(l2);
      c = inv;
      for (int n = 1; n <= max_grade; ++n) {
        v.set(BasisIndex({-n}), c);
        c *= std::conj(l1);
      }
      tm = std::abs(inv) * geometric_tail(std::abs(l1), max_grade - 1);
    } else {
      v.set(BasisIndex({-1}), Cplx(1.0, 0.0) / std::conj(l2));
    }
    tail = std::sqrt(tp * tp + tm * tm);
  }
  v.set_tail_bound(tail);
  return v;
}

SparseVec x_pos_vector(Cplx l1, Cplx l2, double eps) {
  require_in_disc(l1, "x_pos_vector");
  require_in_disc(l2, "x_pos_vector");
  double r = std::max(std::abs(l1), std::abs(l2));
  double scale = l2 == Cplx(0.0, 0.0) ? 1.0 : std::max(1.0, 1.0 / std::abs(l2));
  int n = grade_for_eps(r, eps / (2.0 * scale), "x_pos_vector");
  return x_pos_vector_truncated(l1, l2, n + 1);
}

double stage2_witness_tail(Cplx l1, Cplx l2, int series_cap) {
  double r1 = std::abs(l1), r2 = std::abs(l2);
  double t2 = (std::pow(r1, 2 * (series_cap + 1)) + std::pow(r2, 2 * (series_cap + 1))) /
              ((1.0 - r1 * r1) * (1.0 - r2 * r2));
  return std::sqrt(t2);
}

SparseVec stage2_witness(Cplx l1, Cplx l2, int series_cap) {
  require_in_disc(l1, "stage2_witness");
  require_in_disc(l2, "stage2_witness");
  if (series_cap < 0) throw std::invalid_argument("stage2_witness: negative cap");
  SparseVec v(IndexScheme::hardy_bidisc());
  Cplx cm(1.0, 0.0);
  for (int m = 0; m <= series_cap; ++m) {
    Cplx c = cm;
    for (int n = 0; n <= series_cap; ++n) {
      if (c != Cplx(0.0, 0.0)) v.set(BasisIndex({m + 2 * n, n}), c);
      c *= std::conj(l2);
      if (c == Cplx(0.0, 0.0)) break;
    }
    cm *= l1;
    if (cm == Cplx(0.0, 0.0)) break;
  }
  v.set_tail_bound(stage2_witness_tail(l1, l2, series_cap));
  return v;
}

SparseVec stage2_witness_eps(Cplx l1, Cplx l2, double eps) {
  require_in_disc(l1, "stage2_witness");
  require_in_disc(l2, "stage2_witness");
  int cap = 0;
  while (stage2_witness_tail(l1, l2, cap) > eps) {
    if (++cap > kMaxTerms) throw std::runtime_error("stage2_witness: insufficient truncation");
  }
  return stage2_witness(l1, l2, cap);
}

SparseVec range_orthogonal_generator(Cplx l2, int m, double eps) {
  require_in_disc(l2, "range_orthogonal_generator");
  if (m < 0) throw std::invalid_argument("range_orthogonal_generator: m must be >= 0");
  int cap = grade_for_eps(std::abs(l2), eps, "range_orthogonal_generator");
  SparseVec v(IndexScheme::hardy_bidisc());
  Cplx c(1.0, 0.0);
  for (int n = 0; n <= cap; ++n) {
    v.set(BasisIndex({m + 2 * n, n}), c);
    c *= std::conj(l2);
    if (c == Cplx(0.0, 0.0)) break;
  }
  v.set_tail_bound(geometric_tail(std::abs(l2), cap));
  return v;
}

SparseVec analytic_vector(const AnalyticVectorSpec& spec) {
  if (!(spec.target_eps > 0.0))
    throw std::invalid_argument("analytic_vector: target_eps must be positive");
  switch (spec.name) {
    case AnalyticVectorSpec::Name::KernelK:
      return hardy_kernel(spec.l1, spec.target_eps);
    case AnalyticVectorSpec::Name::XNeg:
      return x_neg_vector(spec.l1, spec.l2, spec.target_eps);
    case AnalyticVectorSpec::Name::XPos:
      return x_pos_vector(spec.l1, spec.l2, spec.target_eps);
    case AnalyticVectorSpec::Name::H2:
      return stage2_witness_eps(spec.l1, spec.l2, spec.target_eps);
    case AnalyticVectorSpec::Name::OrthoGenG:
      return range_orthogonal_generator(spec.l2, spec.m, spec.target_eps);
  }
  throw std::invalid_argument("analytic_vector: unknown name");
}

}  // namespace isopair

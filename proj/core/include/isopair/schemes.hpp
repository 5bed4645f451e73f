#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

namespace isopair {

using Cplx = std::complex<double>;

enum class BaseKind { HardyDisc, HardyBidisc, BilateralZ };

/// Label of one orthonormal basis vector: a short integer tuple whose
/// interpretation is owned by an IndexScheme.  Comparison is plain
/// lexicographic (length first) so the type can key ordered containers on
/// its own; the scheme-graded order lives in IndexScheme::before.
class BasisIndex {
 public:
  BasisIndex() = default;
  BasisIndex(std::initializer_list<int32_t> coords);

  void push_back(int32_t c);
  int size() const { return size_; }
  int32_t operator[](int i) const { return c_[static_cast<size_t>(i)]; }
  int32_t& operator[](int i) { return c_[static_cast<size_t>(i)]; }

  /// Inner tuple with the first coordinate stripped (direct-sum side tag).
  BasisIndex tail() const;
  /// Tuple extended by one trailing coordinate.
  BasisIndex with_suffix(int32_t c) const;
  /// Tuple with the last coordinate removed.
  BasisIndex drop_suffix() const;

  bool operator==(const BasisIndex& o) const;
  bool operator!=(const BasisIndex& o) const { return !(*this == o); }
  bool operator<(const BasisIndex& o) const;

  std::string str() const;

  static constexpr int kMaxArity = 6;

 private:
  std::array<int32_t, kMaxArity> c_{};
  int8_t size_ = 0;
};

struct BasisIndexHash {
  size_t operator()(const BasisIndex& i) const {
    size_t h = 0x9e3779b97f4a7c15ull;
    for (int k = 0; k < i.size(); ++k) {
      h ^= static_cast<size_t>(static_cast<uint32_t>(i[k])) + 0x9e3779b9ull +
           (h << 6) + (h >> 2);
    }
    return h;
  }
};

/// One of the countable orthonormal bases the library computes over.
///
/// Atoms are a base family (H^2 of the disc, H^2 of the bidisc, l^2(Z))
/// optionally tensored with an l^2(Z) fiber and/or a finite multiplicity
/// space C^mult.  Two schemes can be combined into an orthogonal direct sum.
///
/// Coordinate layout of an atom index, in order:
///   HardyDisc    [n]          n >= 0
///   HardyBidisc  [m1, m2]     m1, m2 >= 0
///   BilateralZ   [n]          n in Z
/// followed by [j] (j in Z) when there is a bilateral fiber, followed by
/// [t] (0 <= t < mult) when mult > 1.  A direct-sum index is [side] ++ inner.
class IndexScheme {
 public:
  static IndexScheme hardy_disc(int mult = 1);
  static IndexScheme hardy_bidisc(int mult = 1);
  static IndexScheme bilateral_z(int mult = 1);
  /// H^2(D) tensor C^mult (grade = Hardy degree n).
  static IndexScheme vector_hardy(int mult);
  /// H^2(D) tensor l^2(Z) (tensor C^mult); grade = n + |j|.
  static IndexScheme vector_hardy_bilateral(int mult = 1);
  static IndexScheme direct_sum(const IndexScheme& a, const IndexScheme& b);

  /// Same scheme with multiplicity multiplied by d.
  IndexScheme tensor(int d) const;

  bool is_sum() const { return static_cast<bool>(left_); }
  const IndexScheme& part(int side) const;
  BaseKind base() const { return base_; }
  bool bilateral_fiber() const { return bilateral_fiber_; }
  int mult() const { return mult_; }

  bool valid(const BasisIndex& i) const;
  long grade(const BasisIndex& i) const;
  /// Strict graded total order used by window().
  bool before(const BasisIndex& a, const BasisIndex& b) const;
  /// All indices of grade <= max_grade, in scheme order.  Deterministic.
  std::vector<BasisIndex> window(int max_grade) const;

  bool operator==(const IndexScheme& o) const;
  bool operator!=(const IndexScheme& o) const { return !(*this == o); }

  std::string name() const;

  // Atom helpers for multiplicity-extended indices.
  int arity() const;
  /// Splits an index of this scheme (mult > 1) into (inner index of the
  /// mult-1 scheme variant, multiplicity slot t).
  std::pair<BasisIndex, int> split_mult(const BasisIndex& i) const;
  /// Attaches a multiplicity slot to an index of the mult-1 variant.
  BasisIndex join_mult(const BasisIndex& inner, int t) const;
  /// The same scheme with mult = 1.
  IndexScheme drop_mult() const;

 private:
  IndexScheme() = default;
  void append_grade_layer(int g, std::vector<BasisIndex>& out) const;
  void tie_key(const BasisIndex& i, std::vector<int32_t>& out) const;

  BaseKind base_ = BaseKind::HardyDisc;
  bool bilateral_fiber_ = false;
  int mult_ = 1;
  std::shared_ptr<const IndexScheme> left_, right_;
};

/// Throws std::invalid_argument unless i is valid for s.
void require_valid(const IndexScheme& s, const BasisIndex& i);

}  // namespace isopair

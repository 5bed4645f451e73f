#include "isopair/schemes.hpp"

#include <algorithm>
#include <cstdlib>
#include <sstream>
#include <stdexcept>

namespace isopair {

BasisIndex::BasisIndex(std::initializer_list<int32_t> coords) {
  if (coords.size() > kMaxArity) throw std::invalid_argument("BasisIndex: too many coordinates");
  for (int32_t c : coords) push_back(c);
}

void BasisIndex::push_back(int32_t c) {
  if (size_ >= kMaxArity) throw std::invalid_argument("BasisIndex: arity overflow");
  c_[static_cast<size_t>(size_++)] = c;
}

BasisIndex BasisIndex::tail() const {
  BasisIndex out;
  for (int k = 1; k < size_; ++k) out.push_back(c_[static_cast<size_t>(k)]);
  return out;
}

BasisIndex BasisIndex::with_suffix(int32_t c) const {
  BasisIndex out = *this;
  out.push_back(c);
  return out;
}

BasisIndex BasisIndex::drop_suffix() const {
  BasisIndex out;
  for (int k = 0; k + 1 < size_; ++k) out.push_back(c_[static_cast<size_t>(k)]);
  return out;
}

bool BasisIndex::operator==(const BasisIndex& o) const {
  if (size_ != o.size_) return false;
  for (int k = 0; k < size_; ++k)
    if (c_[static_cast<size_t>(k)] != o.c_[static_cast<size_t>(k)]) return false;
  return true;
}

bool BasisIndex::operator<(const BasisIndex& o) const {
  if (size_ != o.size_) return size_ < o.size_;
  for (int k = 0; k < size_; ++k) {
    if (c_[static_cast<size_t>(k)] != o.c_[static_cast<size_t>(k)])
      return c_[static_cast<size_t>(k)] < o.c_[static_cast<size_t>(k)];
  }
  return false;
}

std::string BasisIndex::str() const {
  std::ostringstream os;
  os << '(';
  for (int k = 0; k < size_; ++k) {
    if (k) os << ',';
    os << c_[static_cast<size_t>(k)];
  }
  os << ')';
  return os.str();
}

IndexScheme IndexScheme::hardy_disc(int mult) {
  if (mult < 1) throw std::invalid_argument("IndexScheme: mult must be >= 1");
  IndexScheme s;
  s.base_ = BaseKind::HardyDisc;
  s.mult_ = mult;
  return s;
}

IndexScheme IndexScheme::hardy_bidisc(int mult) {
  IndexScheme s = hardy_disc(mult);
  s.base_ = BaseKind::HardyBidisc;
  return s;
}

IndexScheme IndexScheme::bilateral_z(int mult) {
  IndexScheme s = hardy_disc(mult);
  s.base_ = BaseKind::BilateralZ;
  return s;
}

IndexScheme IndexScheme::vector_hardy(int mult) { return hardy_disc(mult); }

IndexScheme IndexScheme::vector_hardy_bilateral(int mult) {
  IndexScheme s = hardy_disc(mult);
  s.bilateral_fiber_ = true;
  return s;
}

IndexScheme IndexScheme::direct_sum(const IndexScheme& a, const IndexScheme& b) {
  IndexScheme s;
  s.left_ = std::make_shared<IndexScheme>(a);
  s.right_ = std::make_shared<IndexScheme>(b);
  return s;
}

IndexScheme IndexScheme::tensor(int d) const {
  if (d < 1) throw std::invalid_argument("IndexScheme::tensor: d must be >= 1");
  if (is_sum()) return direct_sum(left_->tensor(d), right_->tensor(d));
  IndexScheme s = *this;
  s.mult_ *= d;
  return s;
}

const IndexScheme& IndexScheme::part(int side) const {
  if (!is_sum()) throw std::invalid_argument("IndexScheme::part: not a direct sum");
  return side == 0 ? *left_ : *right_;
}

int IndexScheme::arity() const {
  if (is_sum()) throw std::invalid_argument("IndexScheme::arity: defined for atoms only");
  int a = base_ == BaseKind::HardyBidisc ? 2 : 1;
  if (bilateral_fiber_) ++a;
  if (mult_ > 1) ++a;
  return a;
}

bool IndexScheme::valid(const BasisIndex& i) const {
  if (is_sum()) {
    if (i.size() < 1) return false;
    int side = i[0];
    if (side != 0 && side != 1) return false;
    return part(side).valid(i.tail());
  }
  if (i.size() != arity()) return false;
  int p = 0;
  switch (base_) {
    case BaseKind::HardyDisc:
      if (i[p++] < 0) return false;
      break;
    case BaseKind::HardyBidisc:
      if (i[p] < 0 || i[p + 1] < 0) return false;
      p += 2;
      break;
    case BaseKind::BilateralZ:
      ++p;
      break;
  }
  if (bilateral_fiber_) ++p;
  if (mult_ > 1 && (i[p] < 0 || i[p] >= mult_)) return false;
  return true;
}

long IndexScheme::grade(const BasisIndex& i) const {
  if (is_sum()) return part(i[0]).grade(i.tail());
  int p = 0;
  long g = 0;
  switch (base_) {
    case BaseKind::HardyDisc:
      g = i[p++];
      break;
    case BaseKind::HardyBidisc:
      g = static_cast<long>(i[p]) + i[p + 1];
      p += 2;
      break;
    case BaseKind::BilateralZ:
      g = std::abs(static_cast<long>(i[p++]));
      break;
  }
  if (bilateral_fiber_) g += std::abs(static_cast<long>(i[p]));
  return g;
}

// Total order key within a grade layer.  Base degree first, then the base
// tie-break, then fiber sign (negative first), then multiplicity slot.
void IndexScheme::tie_key(const BasisIndex& i, std::vector<int32_t>& out) const {
  if (is_sum()) {
    out.push_back(i[0]);
    part(i[0]).tie_key(i.tail(), out);
    return;
  }
  int p = 0;
  switch (base_) {
    case BaseKind::HardyDisc:
      out.push_back(i[p]);
      p = 1;
      break;
    case BaseKind::HardyBidisc:
      out.push_back(i[p] + i[p + 1]);
      out.push_back(i[p + 1]);  // m2 ascending: z1^g, z1^{g-1} z2, ...
      p = 2;
      break;
    case BaseKind::BilateralZ:
      out.push_back(std::abs(i[p]));
      out.push_back(i[p] < 0 ? 0 : 1);  // e_{-g} before e_{+g}
      p = 1;
      break;
  }
  if (bilateral_fiber_) {
    out.push_back(std::abs(i[p]));
    out.push_back(i[p] < 0 ? 0 : 1);
    ++p;
  }
  if (mult_ > 1) out.push_back(i[p]);
}

bool IndexScheme::before(const BasisIndex& a, const BasisIndex& b) const {
  long ga = grade(a), gb = grade(b);
  if (ga != gb) return ga < gb;
  std::vector<int32_t> ka, kb;
  tie_key(a, ka);
  tie_key(b, kb);
  return ka < kb;
}

namespace {

// Base-part tuples of exact base grade b, in tie-break order.
void base_layer(BaseKind base, int b, std::vector<BasisIndex>& out) {
  switch (base) {
    case BaseKind::HardyDisc:
      out.push_back(BasisIndex({b}));
      break;
    case BaseKind::HardyBidisc:
      for (int m2 = 0; m2 <= b; ++m2) out.push_back(BasisIndex({b - m2, m2}));
      break;
    case BaseKind::BilateralZ:
      if (b == 0) {
        out.push_back(BasisIndex({0}));
      } else {
        out.push_back(BasisIndex({-b}));
        out.push_back(BasisIndex({b}));
      }
      break;
  }
}

}  // namespace

void IndexScheme::append_grade_layer(int g, std::vector<BasisIndex>& out) const {
  if (is_sum()) {
    for (int side = 0; side < 2; ++side) {
      std::vector<BasisIndex> inner;
      part(side).append_grade_layer(g, inner);
      for (const BasisIndex& i : inner) {
        BasisIndex tagged({side});
        for (int c = 0; c < i.size(); ++c) tagged.push_back(i[c]);
        out.push_back(tagged);
      }
    }
    return;
  }
  auto emit = [&](const BasisIndex& i) {
    if (mult_ > 1) {
      for (int t = 0; t < mult_; ++t) out.push_back(i.with_suffix(t));
    } else {
      out.push_back(i);
    }
  };
  if (!bilateral_fiber_) {
    std::vector<BasisIndex> bases;
    base_layer(base_, g, bases);
    for (const BasisIndex& b : bases) emit(b);
    return;
  }
  for (int bg = 0; bg <= g; ++bg) {
    std::vector<BasisIndex> bases;
    base_layer(base_, bg, bases);
    int f = g - bg;
    for (const BasisIndex& b : bases) {
      if (f == 0) {
        emit(b.with_suffix(0));
      } else {
        emit(b.with_suffix(-f));
        emit(b.with_suffix(f));
      }
    }
  }
}

std::vector<BasisIndex> IndexScheme::window(int max_grade) const {
  if (max_grade < 0) throw std::invalid_argument("window: negative grade bound");
  std::vector<BasisIndex> out;
  for (int g = 0; g <= max_grade; ++g) append_grade_layer(g, out);
  return out;
}

bool IndexScheme::operator==(const IndexScheme& o) const {
  if (is_sum() != o.is_sum()) return false;
  if (is_sum()) return *left_ == *o.left_ && *right_ == *o.right_;
  return base_ == o.base_ && bilateral_fiber_ == o.bilateral_fiber_ && mult_ == o.mult_;
}

std::string IndexScheme::name() const {
  if (is_sum()) return left_->name() + " (+) " + right_->name();
  std::string b;
  switch (base_) {
    case BaseKind::HardyDisc: b = "H2(D)"; break;
    case BaseKind::HardyBidisc: b = "H2(D^2)"; break;
    case BaseKind::BilateralZ: b = "l2(Z)"; break;
  }
  if (bilateral_fiber_) b += " (x) l2(Z)";
  if (mult_ > 1) b += " (x) C^" + std::to_string(mult_);
  return b;
}

std::pair<BasisIndex, int> IndexScheme::split_mult(const BasisIndex& i) const {
  if (is_sum()) {
    auto [inner, t] = part(i[0]).split_mult(i.tail());
    BasisIndex tagged({i[0]});
    for (int c = 0; c < inner.size(); ++c) tagged.push_back(inner[c]);
    return {tagged, t};
  }
  if (mult_ == 1) return {i, 0};
  return {i.drop_suffix(), i[i.size() - 1]};
}

BasisIndex IndexScheme::join_mult(const BasisIndex& inner, int t) const {
  if (is_sum()) {
    BasisIndex joined = part(inner[0]).join_mult(inner.tail(), t);
    BasisIndex tagged({inner[0]});
    for (int c = 0; c < joined.size(); ++c) tagged.push_back(joined[c]);
    return tagged;
  }
  if (t < 0 || t >= mult_) throw std::invalid_argument("join_mult: slot out of range");
  if (mult_ == 1) return inner;
  return inner.with_suffix(t);
}

IndexScheme IndexScheme::drop_mult() const {
  if (is_sum()) return direct_sum(left_->drop_mult(), right_->drop_mult());
  IndexScheme s = *this;
  s.mult_ = 1;
  return s;
}

void require_valid(const IndexScheme& s, const BasisIndex& i) {
  if (!s.valid(i))
    throw std::invalid_argument("basis index " + i.str() + " not valid for scheme " + s.name());
}

}  // namespace isopair

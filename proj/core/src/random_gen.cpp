#include "isopair/random_gen.hpp"

#include <cmath>
#include <numbers>

namespace isopair::rng {

Cplx gaussian(std::mt19937_64& gen) {
  // Box-Muller; uniform in (0, 1]
  auto u01 = [&gen]() {
    return (static_cast<double>(gen() >> 11) + 1.0) / 9007199254740993.0;
  };
  double u = u01(), v = u01();
  double r = std::sqrt(-2.0 * std::log(u));
  return Cplx(r * std::cos(2.0 * std::numbers::pi * v), r * std::sin(2.0 * std::numbers::pi * v));
}

Eigen::MatrixXcd haar_unitary(int d, std::mt19937_64& gen) {
  Eigen::MatrixXcd g(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) g(i, j) = gaussian(gen);
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(g);
  Eigen::MatrixXcd q = qr.householderQ();
  Eigen::MatrixXcd r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < d; ++j) {
    Cplx rd = r(j, j);
    Cplx phase = rd == Cplx(0.0, 0.0) ? Cplx(1.0, 0.0) : rd / std::abs(rd);
    q.col(j) *= phase;
  }
  return q;
}

Eigen::MatrixXcd random_projection(int d, int rank, std::mt19937_64& gen) {
  if (rank < 0 || rank > d) throw std::invalid_argument("random_projection: bad rank");
  Eigen::MatrixXcd u = haar_unitary(d, gen);
  Eigen::MatrixXcd p = Eigen::MatrixXcd::Zero(d, d);
  for (int k = 0; k < rank; ++k) p += u.col(k) * u.col(k).adjoint();
  return p;
}

Eigen::MatrixXcd random_normal(int d, std::mt19937_64& gen) {
  Eigen::MatrixXcd u = haar_unitary(d, gen);
  Eigen::VectorXcd diag(d);
  for (int k = 0; k < d; ++k) diag(k) = gaussian(gen);
  return u * diag.asDiagonal() * u.adjoint();
}

bcl::BclTriple random_triple(int d, std::mt19937_64& gen) {
  if (d < 2) throw std::invalid_argument("random_triple: need d >= 2");
  Eigen::MatrixXcd u = haar_unitary(d, gen);
  int rank = 1 + static_cast<int>(gen() % static_cast<uint64_t>(d - 1));
  Eigen::MatrixXcd p = random_projection(d, rank, gen);
  return bcl::BclTriple::finite(u, p);
}

bcl::BclTriple random_triple_zero(int d, std::mt19937_64& gen) {
  if (d < 2) throw std::invalid_argument("random_triple_zero: need d >= 2");
  int k = 1 + static_cast<int>(gen() % static_cast<uint64_t>(d - 1));
  Eigen::MatrixXcd basis = haar_unitary(d, gen);
  Eigen::MatrixXcd u1 = haar_unitary(k, gen);
  Eigen::MatrixXcd u2 = haar_unitary(d - k, gen);
  Eigen::MatrixXcd blocks = Eigen::MatrixXcd::Zero(d, d);
  blocks.topLeftCorner(k, k) = u1;
  blocks.bottomRightCorner(d - k, d - k) = u2;
  Eigen::MatrixXcd p0 = Eigen::MatrixXcd::Zero(d, d);
  p0.topLeftCorner(k, k) = Eigen::MatrixXcd::Identity(k, k);
  return bcl::BclTriple::finite(basis * blocks * basis.adjoint(), basis * p0 * basis.adjoint());
}

bcl::BclTriple random_triple_offdiag(int k, std::mt19937_64& gen) {
  if (k < 1) throw std::invalid_argument("random_triple_offdiag: need k >= 1");
  int d = 2 * k;
  Eigen::MatrixXcd basis = haar_unitary(d, gen);
  Eigen::MatrixXcd a = haar_unitary(k, gen);
  Eigen::MatrixXcd b = haar_unitary(k, gen);
  Eigen::MatrixXcd u = Eigen::MatrixXcd::Zero(d, d);
  u.topRightCorner(k, k) = a;
  u.bottomLeftCorner(k, k) = b;
  Eigen::MatrixXcd p = Eigen::MatrixXcd::Zero(d, d);
  p.topLeftCorner(k, k) = Eigen::MatrixXcd::Identity(k, k);
  return bcl::BclTriple::finite(basis * u * basis.adjoint(), basis * p * basis.adjoint());
}

std::pair<Eigen::MatrixXcd, Eigen::MatrixXcd> random_commuting_pair(int d,
                                                                    std::mt19937_64& gen) {
  Eigen::MatrixXcd m(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) m(i, j) = gaussian(gen);
  m /= std::max(1.0, m.norm());
  Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(d, d);
  auto poly = [&](const Eigen::MatrixXcd& x) {
    Cplx c0 = gaussian(gen), c1 = gaussian(gen), c2 = gaussian(gen), c3 = gaussian(gen);
    Eigen::MatrixXcd out = c0 * id + c1 * x + c2 * x * x + c3 * x * x * x;
    double n = out.norm();
    if (n > 1.0) out /= n;
    return out;
  };
  return {poly(m), poly(m)};
}

}  // namespace isopair::rng

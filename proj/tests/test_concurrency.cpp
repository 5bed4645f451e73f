#include <doctest.h>

#include <atomic>
#include <thread>

#include "isopair/defect.hpp"
#include "isopair/models.hpp"

using namespace isopair;

TEST_CASE("memoized lazy operators evaluate safely from multiple threads") {
  models::ModelPair neg = models::neg_pair();
  LazyOp d = defect::defect_op(neg.V1, neg.V2);
  auto win = neg.scheme.window(10);

  // reference images computed single-threaded on a fresh copy of the ops
  models::ModelPair ref = models::neg_pair();
  LazyOp dref = defect::defect_op(ref.V1, ref.V2);
  std::vector<SparseVec> want;
  want.reserve(win.size());
  for (const auto& i : win) want.push_back(dref.forward(i));

  std::atomic<int> mismatches{0};
  auto worker = [&](size_t offset) {
    for (size_t k = 0; k < win.size(); ++k) {
      size_t at = (k + offset) % win.size();
      if (deviation(d.forward(win[at]), want[at]) != 0.0) ++mismatches;
      if (deviation(apply_adjoint(d, SparseVec::basis(neg.scheme, win[at])),
                    apply_adjoint(dref, SparseVec::basis(neg.scheme, win[at]))) != 0.0)
        ++mismatches;
    }
  };
  std::vector<std::thread> pool;
  for (size_t t = 0; t < 8; ++t) pool.emplace_back(worker, t * 7);
  for (auto& th : pool) th.join();
  CHECK(mismatches.load() == 0);
}

TEST_CASE("concurrent clients of one model agree with sequential reports") {
  models::ModelPair eta = models::eta_pair();
  defect::DefectReport base = defect::defect_window_matrix(eta.V1, eta.V2, 5);
  std::atomic<int> bad{0};
  std::vector<std::thread> pool;
  for (int t = 0; t < 4; ++t) {
    pool.emplace_back([&]() {
      defect::DefectReport rep = defect::defect_window_matrix(eta.V1, eta.V2, 5);
      if (rep.tag != base.tag) ++bad;
      if ((rep.matrix - base.matrix).cwiseAbs().maxCoeff() != 0.0) ++bad;
    });
  }
  for (auto& th : pool) th.join();
  CHECK(bad.load() == 0);
}

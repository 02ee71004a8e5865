#include <doctest.h>

#include <random>

#include "npsac/error.hpp"
#include "npsac/wgcca.hpp"
#include "oracles/oracles.hpp"
#include "support.hpp"

using namespace npsac;
using testing::id;

namespace {

std::vector<AccountId> make_order(int n) {
  std::vector<AccountId> order;
  for (int i = 0; i < n; ++i) order.push_back(id("r" + std::to_string(1000 + i)));
  return order;
}

std::vector<ViewMatrix> random_views(int n, std::vector<int> dims, unsigned seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> normal;
  const auto order = make_order(n);
  std::vector<ViewMatrix> views;
  for (std::size_t v = 0; v < dims.size(); ++v) {
    Eigen::MatrixXd x(n, dims[v]);
    for (Eigen::Index i = 0; i < x.size(); ++i) x.data()[i] = normal(gen);
    views.push_back({"v" + std::to_string(v), order, x});
  }
  return views;
}

std::vector<Eigen::MatrixXd> raw(const std::vector<ViewMatrix>& views) {
  std::vector<Eigen::MatrixXd> out;
  for (const auto& v : views) out.push_back(v.data);
  return out;
}

Errc code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error thrown");
  return Errc::IoError;
}

}  // namespace

TEST_CASE("fit agrees with the brute-force eigensolver on the assembled matrix") {
  const auto views = random_views(50, {5, 7, 3}, 17);
  const std::vector<double> w{0.25, 0.5, 0.25};
  WgccaOptions opt;
  opt.weights = w;
  opt.k = 3;
  opt.ridge = 1e-8;
  const FusedEmbedding f = wgcca_fit(views, opt);

  const Eigen::MatrixXd m = oracle::wgcca_matrix(raw(views), w, {1e-8, 1e-8, 1e-8});
  CHECK((wgcca_matrix(views, w, std::vector<double>{1e-8, 1e-8, 1e-8}) - m).cwiseAbs().maxCoeff() <= 1e-10);
  const auto [values, vectors] = oracle::jacobi_eigen(m);
  for (int i = 0; i < 3; ++i) CHECK(std::abs(f.eigenvalues(i) - values(i)) <= 1e-8 * std::abs(values(i)));
  CHECK(oracle::max_principal_sine(vectors.leftCols(3), f.G) <= 1e-6);
  CHECK((f.G.transpose() * f.G - Eigen::MatrixXd::Identity(3, 3)).cwiseAbs().maxCoeff() <= 1e-8);
}

TEST_CASE("fit invariants") {
  const auto views = random_views(40, {6, 4, 9, 2}, 3);
  WgccaOptions opt;
  opt.k = 5;
  const FusedEmbedding f = wgcca_fit(views, opt);
  CHECK(f.k == 5);
  CHECK(f.U.size() == 4);
  CHECK(f.order == views[0].order);
  CHECK((f.G.transpose() * f.G - Eigen::MatrixXd::Identity(5, 5)).cwiseAbs().maxCoeff() <= 1e-8);
  for (std::size_t i = 0; i < views.size(); ++i) {
    const Eigen::MatrixXd& x = views[i].data;
    const Eigen::MatrixXd lhs =
        (x.transpose() * x + f.ridges[i] * Eigen::MatrixXd::Identity(x.cols(), x.cols())) * f.U[i];
    CHECK((lhs - x.transpose() * f.G).cwiseAbs().maxCoeff() <= 1e-8);
    const double expected_ridge = 1e-8 * (x.transpose() * x).trace() / static_cast<double>(x.cols());
    CHECK(f.ridges[i] == doctest::Approx(expected_ridge).epsilon(1e-12));
  }
  for (Eigen::Index c = 0; c < f.G.cols(); ++c) {
    Eigen::Index first = 0;
    while (std::abs(f.G(first, c)) < 1e-10) ++first;
    CHECK(f.G(first, c) > 0.0);
  }
  const Eigen::MatrixXd m = wgcca_matrix(views, opt.weights, f.ridges);
  CHECK((m - m.transpose()).cwiseAbs().maxCoeff() <= 1e-12);
  CHECK(oracle::jacobi_eigen(m).first.minCoeff() >= -1e-10);
}

TEST_CASE("weights scale their view's contribution linearly") {
  const auto views = random_views(20, {3, 4}, 8);
  const std::vector<double> ridges{1e-6, 1e-6};
  const Eigen::MatrixXd base = wgcca_matrix(views, std::vector<double>{1.0, 0.0}, ridges);
  const Eigen::MatrixXd other = wgcca_matrix(views, std::vector<double>{0.0, 1.0}, ridges);
  const Eigen::MatrixXd mixed = wgcca_matrix(views, std::vector<double>{2.5, 0.5}, ridges);
  CHECK((mixed - (2.5 * base + 0.5 * other)).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("single orthonormal view is reproduced exactly") {
  auto views = random_views(30, {4}, 5);
  views[0].data = oracle::orthonormalize(views[0].data);
  WgccaOptions opt;
  opt.weights = {1.0};
  opt.k = 4;
  opt.ridge = 0.0;
  const FusedEmbedding f = wgcca_fit(views, opt);
  CHECK(wgcca_objective(views, opt.weights, f) <= 1e-10);
}

TEST_CASE("single view recovers the top left singular subspace") {
  auto views = random_views(40, {6}, 12);
  // distinct singular values so the top-k subspace is well separated
  for (int c = 0; c < 6; ++c) views[0].data.col(c) *= (c + 1.0);
  WgccaOptions opt;
  opt.weights = {1.0};
  opt.k = 6;
  opt.ridge = 0.0;
  const FusedEmbedding f = wgcca_fit(views, opt);
  const auto [values, vectors] = oracle::jacobi_eigen(views[0].data * views[0].data.transpose());
  CHECK(oracle::max_principal_sine(vectors.leftCols(6), f.G) <= 1e-6);
}

TEST_CASE("fitted objective beats random orthonormal bases") {
  const auto views = random_views(30, {4, 5, 3}, 44);
  WgccaOptions opt;
  opt.weights = {0.5, 1.0, 0.25};
  opt.k = 3;
  const FusedEmbedding f = wgcca_fit(views, opt);
  const double fitted = wgcca_objective(views, opt.weights, f);
  std::mt19937_64 gen(2);
  std::normal_distribution<double> normal;
  for (int trial = 0; trial < 20; ++trial) {
    Eigen::MatrixXd g(30, 3);
    for (Eigen::Index i = 0; i < g.size(); ++i) g.data()[i] = normal(gen);
    FusedEmbedding r = f;
    r.G = oracle::orthonormalize(g);
    for (std::size_t i = 0; i < views.size(); ++i) r.U[i] = optimal_maps(views[i].data, r.G, f.ridges[i]);
    CHECK(fitted <= wgcca_objective(views, opt.weights, r) + 1e-12);
  }
}

TEST_CASE("objective examples") {
  const auto views = random_views(25, {3, 3}, 9);
  WgccaOptions opt;
  opt.weights = {1.0, 2.0};
  opt.k = 2;
  const FusedEmbedding f = wgcca_fit(views, opt);
  const double once = wgcca_objective(views, std::vector<double>{1.0, 2.0}, f);
  const double twice = wgcca_objective(views, std::vector<double>{2.0, 4.0}, f);
  CHECK(twice == doctest::Approx(2.0 * once).epsilon(1e-12));

  FusedEmbedding exact = f;
  exact.G = views[0].data;
  exact.U = {Eigen::MatrixXd::Identity(3, 3), Eigen::MatrixXd::Zero(3, 3)};
  std::vector<ViewMatrix> pair{views[0], views[0]};
  exact.U[1] = Eigen::MatrixXd::Identity(3, 3);
  CHECK(wgcca_objective(pair, std::vector<double>{1.0, 1.0}, exact) == 0.0);
}

TEST_CASE("fit errors") {
  const auto views = random_views(10, {2, 3}, 1);
  WgccaOptions zero;
  zero.weights = {0.0, 0.0};
  zero.k = 2;
  CHECK(code_of([&] { wgcca_fit(views, zero); }) == Errc::InvalidWeights);
  WgccaOptions wrong_count;
  wrong_count.k = 2;  // default has four weights
  CHECK(code_of([&] { wgcca_fit(views, wrong_count); }) == Errc::InvalidWeights);
  WgccaOptions too_big;
  too_big.weights = {1.0, 1.0};
  too_big.k = 11;
  CHECK(code_of([&] { wgcca_fit(views, too_big); }) == Errc::RankError);
  auto shuffled = views;
  std::reverse(shuffled[1].order.begin(), shuffled[1].order.end());
  WgccaOptions ok;
  ok.weights = {1.0, 1.0};
  ok.k = 2;
  CHECK(code_of([&] { wgcca_fit(shuffled, ok); }) == Errc::OrderMismatch);
}

TEST_CASE("rank-deficient views with zero rows still fit") {
  auto views = random_views(30, {5, 40}, 6);
  views[0].data.topRows(10).setZero();
  WgccaOptions opt;
  opt.weights = {0.5, 0.5};
  opt.k = 8;
  const FusedEmbedding f = wgcca_fit(views, opt);
  CHECK(f.G.allFinite());
  CHECK((f.G.transpose() * f.G - Eigen::MatrixXd::Identity(8, 8)).cwiseAbs().maxCoeff() <= 1e-8);
}

TEST_CASE("subspace solver matches the dense path") {
  const auto views = random_views(80, {6, 5, 7}, 31);
  WgccaOptions dense;
  dense.weights = {0.25, 0.5, 0.5};
  dense.k = 4;
  WgccaOptions iterative = dense;
  iterative.solver = EigenSolverKind::Subspace;
  iterative.seed = 3;
  const FusedEmbedding a = wgcca_fit(views, dense);
  const FusedEmbedding b = wgcca_fit(views, iterative);
  for (int i = 0; i < 4; ++i) CHECK(b.eigenvalues(i) == doctest::Approx(a.eigenvalues(i)).epsilon(1e-8));
  CHECK(oracle::max_principal_sine(a.G, b.G) <= 1e-6);
}

TEST_CASE("fused vectors and centering") {
  const auto views = random_views(12, {3, 2}, 2);
  WgccaOptions opt;
  opt.weights = {1.0, 1.0};
  opt.k = 2;
  const FusedEmbedding f = wgcca_fit(views, opt);
  CHECK(fused_vector(f, f.order.front()) == f.G.row(0).transpose());
  CHECK(fused_vector(f, f.order[3]) == fused_vector(f, f.order[3]));
  CHECK(code_of([&] { fused_vector(f, id("zzz")); }) == Errc::UnknownAccount);

  const ViewMatrix c = center_columns(views[0]);
  CHECK(c.data.colwise().sum().cwiseAbs().maxCoeff() <= 1e-12);
  CHECK(c.order == views[0].order);
}

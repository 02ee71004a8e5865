#include "npsac/wgcca.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "npsac/error.hpp"
#include "npsac/rng.hpp"

namespace npsac {

namespace {

// Factor of one view's operator: P = B B' with B = X V diag(1/sqrt(lambda)).
struct ViewFactor {
  Eigen::MatrixXd basis;        // n x d
  Eigen::MatrixXd gram_inverse; // d x d
};

ViewFactor factor_view(const Eigen::MatrixXd& X, double ridge) {
  const Eigen::MatrixXd A = X.transpose() * X + ridge * Eigen::MatrixXd::Identity(X.cols(), X.cols());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A);
  const Eigen::VectorXd& lambda = es.eigenvalues();
  const double top = lambda.size() ? std::max(0.0, lambda.maxCoeff()) : 0.0;
  const double cutoff = static_cast<double>(X.cols()) * std::numeric_limits<double>::epsilon() * top;
  Eigen::VectorXd inv(lambda.size());
  for (Eigen::Index i = 0; i < lambda.size(); ++i) inv[i] = lambda[i] > cutoff && lambda[i] > 0.0 ? 1.0 / lambda[i] : 0.0;
  ViewFactor f;
  const Eigen::MatrixXd& V = es.eigenvectors();
  f.gram_inverse = V * inv.asDiagonal() * V.transpose();
  f.basis = X * V * inv.cwiseSqrt().asDiagonal();
  return f;
}

void check_views(std::span<const ViewMatrix> views, std::span<const double> weights) {
  if (views.empty()) throw Error(Errc::InvalidConfig, "no views to fuse");
  require_same_order(views);
  if (weights.size() != views.size())
    throw Error(Errc::InvalidWeights, std::to_string(weights.size()) + " weights for " + std::to_string(views.size()) + " views");
  bool any = false;
  for (double w : weights) {
    if (!(w >= 0.0) || !std::isfinite(w)) throw Error(Errc::InvalidWeights, "weights must be finite and nonnegative");
    any = any || w > 0.0;
  }
  if (!any) throw Error(Errc::InvalidWeights, "all weights are zero");
  for (const auto& v : views) validate(v);
}

// Lexicographic order on vectors, used only to order exactly tied eigenvalues.
bool lex_greater(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    if (a[i] != b[i]) return a[i] > b[i];
  }
  return false;
}

void fix_sign(Eigen::Ref<Eigen::VectorXd> v) {
  const double scale = v.cwiseAbs().maxCoeff();
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (std::abs(v[i]) > 1e-10 * scale) {
      if (v[i] < 0.0) v = -v;
      return;
    }
  }
}

struct EigenPairs {
  Eigen::VectorXd values;
  Eigen::MatrixXd vectors;
};

// Sorts descending, sign-fixes, and keeps the leading k pairs.
EigenPairs select_top(const Eigen::VectorXd& values, Eigen::MatrixXd vectors, std::size_t k) {
  for (Eigen::Index c = 0; c < vectors.cols(); ++c) fix_sign(vectors.col(c));
  std::vector<Eigen::Index> idx(static_cast<std::size_t>(values.size()));
  std::iota(idx.begin(), idx.end(), Eigen::Index{0});
  const double scale = std::max(1.0, values.cwiseAbs().maxCoeff());
  std::stable_sort(idx.begin(), idx.end(), [&](Eigen::Index a, Eigen::Index b) {
    if (std::abs(values[a] - values[b]) <= 1e-12 * scale) return lex_greater(vectors.col(a), vectors.col(b));
    return values[a] > values[b];
  });
  EigenPairs out;
  out.values.resize(static_cast<Eigen::Index>(k));
  out.vectors.resize(vectors.rows(), static_cast<Eigen::Index>(k));
  for (std::size_t j = 0; j < k; ++j) {
    out.values[static_cast<Eigen::Index>(j)] = values[idx[j]];
    out.vectors.col(static_cast<Eigen::Index>(j)) = vectors.col(idx[j]);
  }
  return out;
}

EigenPairs dense_top(const std::vector<ViewFactor>& factors, std::span<const double> weights, Eigen::Index n, std::size_t k) {
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t i = 0; i < factors.size(); ++i)
    if (weights[i] > 0.0) M.selfadjointView<Eigen::Lower>().rankUpdate(factors[i].basis, weights[i]);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.compute(M.selfadjointView<Eigen::Lower>());
  if (es.info() != Eigen::Success) throw Error(Errc::RankError, "symmetric eigensolver did not converge");
  return select_top(es.eigenvalues(), es.eigenvectors(), k);
}

Eigen::MatrixXd apply_operator(const std::vector<ViewFactor>& factors, std::span<const double> weights,
                               const Eigen::MatrixXd& Q) {
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(Q.rows(), Q.cols());
  for (std::size_t i = 0; i < factors.size(); ++i)
    if (weights[i] > 0.0) out.noalias() += weights[i] * (factors[i].basis * (factors[i].basis.transpose() * Q));
  return out;
}

Eigen::MatrixXd orthonormalize(const Eigen::MatrixXd& Z) {
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(Z);
  return qr.householderQ() * Eigen::MatrixXd::Identity(Z.rows(), Z.cols());
}

EigenPairs subspace_top(const std::vector<ViewFactor>& factors, std::span<const double> weights, Eigen::Index n,
                        std::size_t k, const WgccaOptions& options) {
  const Eigen::Index block = std::min<Eigen::Index>(n, static_cast<Eigen::Index>(k + std::max<std::size_t>(8, k / 2)));
  Rng rng(derive_seed(options.seed, 0x5EED));
  Eigen::MatrixXd Q(n, block);
  for (Eigen::Index c = 0; c < block; ++c)
    for (Eigen::Index r = 0; r < n; ++r) Q(r, c) = rng.normal();
  Q = orthonormalize(Q);

  Eigen::VectorXd theta;
  Eigen::MatrixXd ritz;
  for (std::size_t it = 0; it < options.max_iterations; ++it) {
    const Eigen::MatrixXd Z = apply_operator(factors, weights, Q);
    // Rayleigh-Ritz on the current block.
    const Eigen::MatrixXd H = Q.transpose() * Z;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (H + H.transpose()));
    theta = es.eigenvalues().reverse();
    ritz = Q * es.eigenvectors().rowwise().reverse();
    const Eigen::MatrixXd Zr = Z * es.eigenvectors().rowwise().reverse();
    const double scale = std::max(std::abs(theta[0]), 1e-300);
    double worst = 0.0;
    for (std::size_t j = 0; j < k; ++j) {
      const auto jj = static_cast<Eigen::Index>(j);
      worst = std::max(worst, (Zr.col(jj) - theta[jj] * ritz.col(jj)).norm() / scale);
    }
    if (worst <= options.tolerance) break;
    Q = orthonormalize(Zr);
  }
  return select_top(theta, ritz, k);
}

}  // namespace

double default_ridge(const Eigen::MatrixXd& X, double relative) {
  if (X.cols() == 0) return 0.0;
  return relative * X.squaredNorm() / static_cast<double>(X.cols());
}

Eigen::MatrixXd regularized_gram_inverse(const Eigen::MatrixXd& X, double ridge) {
  return factor_view(X, ridge).gram_inverse;
}

Eigen::MatrixXd view_projection(const Eigen::MatrixXd& X, double ridge) {
  const ViewFactor f = factor_view(X, ridge);
  return f.basis * f.basis.transpose();
}

std::vector<double> resolve_ridges(std::span<const ViewMatrix> views, const WgccaOptions& options) {
  std::vector<double> ridges;
  for (const auto& v : views) {
    const double r = options.ridge ? *options.ridge : default_ridge(v.data, options.relative_ridge);
    if (!(r >= 0.0) || !std::isfinite(r)) throw Error(Errc::InvalidConfig, "ridge must be finite and nonnegative");
    ridges.push_back(r);
  }
  return ridges;
}

Eigen::MatrixXd wgcca_matrix(std::span<const ViewMatrix> views, std::span<const double> weights,
                             std::span<const double> ridges) {
  check_views(views, weights);
  const Eigen::Index n = views.front().data.rows();
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t i = 0; i < views.size(); ++i) M += weights[i] * view_projection(views[i].data, ridges[i]);
  return M;
}

Eigen::MatrixXd optimal_maps(const Eigen::MatrixXd& X, const Eigen::MatrixXd& G, double ridge) {
  return regularized_gram_inverse(X, ridge) * (X.transpose() * G);
}

FusedEmbedding wgcca_fit(std::span<const ViewMatrix> views, const WgccaOptions& options) {
  check_views(views, options.weights);
  const Eigen::Index n = views.front().data.rows();
  if (options.k == 0) throw Error(Errc::InvalidConfig, "k must be positive");
  if (static_cast<Eigen::Index>(options.k) > n)
    throw Error(Errc::RankError, "k = " + std::to_string(options.k) + " exceeds n = " + std::to_string(n));

  const std::vector<double> ridges = resolve_ridges(views, options);
  std::vector<ViewFactor> factors;
  factors.reserve(views.size());
  for (std::size_t i = 0; i < views.size(); ++i) factors.push_back(factor_view(views[i].data, ridges[i]));

  const EigenPairs top = options.solver == EigenSolverKind::Dense
                             ? dense_top(factors, options.weights, n, options.k)
                             : subspace_top(factors, options.weights, n, options.k, options);

  FusedEmbedding fused;
  fused.order = views.front().order;
  fused.G = top.vectors;
  fused.eigenvalues = top.values;
  fused.k = static_cast<Eigen::Index>(options.k);
  fused.weights = options.weights;
  fused.ridges = ridges;
  for (std::size_t i = 0; i < views.size(); ++i)
    fused.U.push_back(factors[i].gram_inverse * (views[i].data.transpose() * fused.G));
  return fused;
}

Eigen::VectorXd fused_vector(const FusedEmbedding& fused, const AccountId& id) {
  const auto it = std::find(fused.order.begin(), fused.order.end(), id);
  if (it == fused.order.end()) throw Error(Errc::UnknownAccount, "account '" + id.str() + "' is not embedded");
  return fused.G.row(it - fused.order.begin()).transpose();
}

double wgcca_objective(std::span<const ViewMatrix> views, std::span<const double> weights, const FusedEmbedding& fused) {
  if (views.size() != weights.size() || views.size() != fused.U.size())
    throw Error(Errc::OrderMismatch, "views, weights and maps differ in count");
  double total = 0.0;
  for (std::size_t i = 0; i < views.size(); ++i) {
    const auto& X = views[i].data;
    const auto& U = fused.U[i];
    if (X.rows() != fused.G.rows() || X.cols() != U.rows() || U.cols() != fused.G.cols())
      throw Error(Errc::OrderMismatch, "shape mismatch for view '" + views[i].view_name + "'");
    if (views[i].order != fused.order)
      throw Error(Errc::OrderMismatch, "view '" + views[i].view_name + "' order differs from the embedding");
    total += weights[i] * (fused.G - X * U).squaredNorm();
  }
  return total;
}

ViewMatrix center_columns(const ViewMatrix& view) {
  ViewMatrix out = view;
  if (out.data.rows() > 0) out.data.rowwise() -= out.data.colwise().mean();
  return out;
}

}  // namespace npsac

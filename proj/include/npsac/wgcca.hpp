#pragma once

#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "npsac/model.hpp"

namespace npsac {

enum class EigenSolverKind {
  Dense,     // full symmetric eigendecomposition of the n x n matrix, O(n^3)
  Subspace,  // block subspace iteration on the implicit operator, top-k only
};

struct WgccaOptions {
  /// Aligned with the view list, default order [posts, net_friend, net_follower, profile].
  std::vector<double> weights{0.25, 0.5, 0.5, 0.25};
  std::size_t k = 32;
  /// Absolute ridge applied to every X'X. When unset each view gets
  /// relative_ridge * trace(X'X) / d.
  std::optional<double> ridge;
  double relative_ridge = 1e-8;
  EigenSolverKind solver = EigenSolverKind::Dense;
  std::size_t max_iterations = 5000;
  double tolerance = 1e-11;
  std::uint64_t seed = 0;  // start block for the subspace solver
};

/// relative * trace(X'X) / d, the default ridge for one view.
double default_ridge(const Eigen::MatrixXd& X, double relative);

/// (X'X + ridge I)^-1 with eigenvalues at or below round-off treated as zero
/// (pseudo-inverse), which only matters when ridge == 0.
Eigen::MatrixXd regularized_gram_inverse(const Eigen::MatrixXd& X, double ridge);

/// X (X'X + ridge I)^-1 X', the contribution of one view before weighting.
Eigen::MatrixXd view_projection(const Eigen::MatrixXd& X, double ridge);

/// M = sum_i w_i X_i (X_i'X_i + r_i I)^-1 X_i'.
Eigen::MatrixXd wgcca_matrix(std::span<const ViewMatrix> views, std::span<const double> weights,
                             std::span<const double> ridges);

/// Ridges that wgcca_fit would apply to each view under `options`.
std::vector<double> resolve_ridges(std::span<const ViewMatrix> views, const WgccaOptions& options);

/// U = (X'X + ridge I)^-1 X' G.
Eigen::MatrixXd optimal_maps(const Eigen::MatrixXd& X, const Eigen::MatrixXd& G, double ridge);

/// G = top-k eigenvectors of M (descending eigenvalue, sign-fixed so the first
/// nonzero entry of each column is positive) and the per-view maps U_i.
FusedEmbedding wgcca_fit(std::span<const ViewMatrix> views, const WgccaOptions& options = {});

/// Row of G for id; UnknownAccount if absent.
Eigen::VectorXd fused_vector(const FusedEmbedding& fused, const AccountId& id);

/// sum_i w_i ||G - X_i U_i||_F^2.
double wgcca_objective(std::span<const ViewMatrix> views, std::span<const double> weights, const FusedEmbedding& fused);

/// Subtracts each column's mean.
ViewMatrix center_columns(const ViewMatrix& view);

}  // namespace npsac

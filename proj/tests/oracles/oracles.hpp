#pragma once

// Independent reference implementations used only by tests. None of these
// call into the library's numeric code; Eigen types serve as containers.

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

/// Full-table Wagner-Fischer over bytes, ASCII case-folded.
inline std::size_t levenshtein(const std::string& a, const std::string& b) {
  auto lower = [](char c) { return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c; };
  std::vector<std::vector<std::size_t>> t(a.size() + 1, std::vector<std::size_t>(b.size() + 1));
  for (std::size_t i = 0; i <= a.size(); ++i) t[i][0] = i;
  for (std::size_t j = 0; j <= b.size(); ++j) t[0][j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i)
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t sub = t[i - 1][j - 1] + (lower(a[i - 1]) == lower(b[j - 1]) ? 0 : 1);
      t[i][j] = std::min({t[i - 1][j] + 1, t[i][j - 1] + 1, sub});
    }
  return t[a.size()][b.size()];
}

inline double similarity(const std::string& a, const std::string& b) {
  const std::size_t m = std::max(a.size(), b.size());
  return m == 0 ? 1.0 : 1.0 - static_cast<double>(levenshtein(a, b)) / static_cast<double>(m);
}

/// node2vec second-order step straight from an adjacency matrix.
/// Returns (neighbor, probability) in ascending neighbor order.
inline std::vector<std::pair<int, double>> transition(const std::vector<std::vector<bool>>& adj, int prev, int cur,
                                                      double p, double q) {
  std::vector<std::pair<int, double>> out;
  double total = 0.0;
  for (int x = 0; x < static_cast<int>(adj.size()); ++x) {
    if (!adj[cur][x]) continue;
    double w;
    if (x == prev) w = 1.0 / p;
    else if (adj[prev][x]) w = 1.0;
    else w = 1.0 / q;
    out.emplace_back(x, w);
    total += w;
  }
  for (auto& [x, w] : out) w /= total;
  return out;
}

/// Cyclic Jacobi eigensolver for a symmetric matrix. Eigenvalues descending,
/// eigenvectors as matching columns.
inline std::pair<Eigen::VectorXd, Eigen::MatrixXd> jacobi_eigen(Eigen::MatrixXd a) {
  const int n = static_cast<int>(a.rows());
  Eigen::MatrixXd v = Eigen::MatrixXd::Identity(n, n);
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0, diag = 0.0;
    for (int i = 0; i < n; ++i) {
      diag += a(i, i) * a(i, i);
      for (int j = i + 1; j < n; ++j) off += a(i, j) * a(i, j);
    }
    if (off <= 1e-30 * std::max(diag, 1e-300)) break;
    for (int p = 0; p < n - 1; ++p)
      for (int q = p + 1; q < n; ++q) {
        if (std::abs(a(p, q)) < 1e-300) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * a(p, q));
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0), s = t * c;
        for (int k = 0; k < n; ++k) {
          const double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (int k = 0; k < n; ++k) {
          const double apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        for (int k = 0; k < n; ++k) {
          const double vkp = v(k, p), vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
  }
  std::vector<int> idx(n);
  for (int i = 0; i < n; ++i) idx[i] = i;
  std::sort(idx.begin(), idx.end(), [&](int x, int y) { return a(x, x) > a(y, y); });
  Eigen::VectorXd values(n);
  Eigen::MatrixXd vectors(n, n);
  for (int i = 0; i < n; ++i) {
    values(i) = a(idx[i], idx[i]);
    vectors.col(i) = v.col(idx[i]);
  }
  return {values, vectors};
}

/// Gauss-Jordan inverse with partial pivoting.
inline Eigen::MatrixXd gauss_jordan_inverse(const Eigen::MatrixXd& m) {
  const int n = static_cast<int>(m.rows());
  Eigen::MatrixXd a = m, inv = Eigen::MatrixXd::Identity(n, n);
  for (int col = 0; col < n; ++col) {
    int piv = col;
    for (int r = col + 1; r < n; ++r)
      if (std::abs(a(r, col)) > std::abs(a(piv, col))) piv = r;
    a.row(col).swap(a.row(piv));
    inv.row(col).swap(inv.row(piv));
    const double d = a(col, col);
    for (int c = 0; c < n; ++c) {
      a(col, c) /= d;
      inv(col, c) /= d;
    }
    for (int r = 0; r < n; ++r) {
      if (r == col) continue;
      const double f = a(r, col);
      if (f == 0.0) continue;
      for (int c = 0; c < n; ++c) {
        a(r, c) -= f * a(col, c);
        inv(r, c) -= f * inv(col, c);
      }
    }
  }
  return inv;
}

/// sum_i w_i X_i (X_i'X_i + r_i I)^-1 X_i' assembled with explicit loops.
inline Eigen::MatrixXd wgcca_matrix(const std::vector<Eigen::MatrixXd>& xs, const std::vector<double>& w,
                                    const std::vector<double>& ridges) {
  const int n = static_cast<int>(xs.front().rows());
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t v = 0; v < xs.size(); ++v) {
    const Eigen::MatrixXd& x = xs[v];
    const int d = static_cast<int>(x.cols());
    Eigen::MatrixXd gram(d, d);
    for (int a = 0; a < d; ++a)
      for (int b = 0; b < d; ++b) {
        double s = 0.0;
        for (int r = 0; r < n; ++r) s += x(r, a) * x(r, b);
        gram(a, b) = s + (a == b ? ridges[v] : 0.0);
      }
    const Eigen::MatrixXd inv = gauss_jordan_inverse(gram);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double s = 0.0;
        for (int a = 0; a < d; ++a)
          for (int b = 0; b < d; ++b) s += x(i, a) * inv(a, b) * x(j, b);
        m(i, j) += w[v] * s;
      }
  }
  return m;
}

/// Orthonormal basis of the columns of a (modified Gram-Schmidt, twice).
inline Eigen::MatrixXd orthonormalize(Eigen::MatrixXd a) {
  for (int pass = 0; pass < 2; ++pass)
    for (int j = 0; j < a.cols(); ++j) {
      for (int i = 0; i < j; ++i) a.col(j) -= a.col(i).dot(a.col(j)) * a.col(i);
      a.col(j) /= a.col(j).norm();
    }
  return a;
}

/// Sine of the largest principal angle between span(a) and span(b); both
/// inputs orthonormal with equal column counts.
inline double max_principal_sine(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  const Eigen::MatrixXd residual = b - a * (a.transpose() * b);
  const auto [values, vectors] = jacobi_eigen(residual.transpose() * residual);
  return std::sqrt(std::max(0.0, values(0)));
}

inline double log_sigmoid(double x) { return x >= 0 ? -std::log1p(std::exp(-x)) : x - std::log1p(std::exp(x)); }

/// Negative-sampling loss written out term by term.
inline double sgns_loss(const Eigen::VectorXd& c, const Eigen::VectorXd& ctx, const std::vector<Eigen::VectorXd>& neg) {
  double loss = -log_sigmoid(c.dot(ctx));
  for (const auto& u : neg) loss -= log_sigmoid(-c.dot(u));
  return loss;
}

}  // namespace oracle

#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/QR>

#include "smcone/bench/rng.hpp"
#include "smcone/cones.hpp"
#include "smcone/problem.hpp"

namespace smcone::bench {

/// min 1/2 ||A x - b||^2 + mu ||x||_1 with A of size m x n.
struct LassoSpec {
  Index n = 20;
  Index m = 4;
  double cond = 10.0;
  double mu = 0.1;
};

/// max tr(S Z) - lambda ||Z||_1  s.t.  tr Z = 1, Z psd, Z of order d.
struct L1PcaSpec {
  Index d = 5;
  double lambda = 0.1;
};

/// min lambda ||w||_1 + sum_i log(1 + exp(a_i' w + offset)), w in R^p, q samples.
struct LogRegSpec {
  Index p = 5;
  Index q = 10;
  double lambda = 1.0;
  double offset = 0.0;
};

struct GeneratorSpec {
  std::variant<LassoSpec, L1PcaSpec, LogRegSpec> family;
  std::uint64_t seed = 0;
};

inline void validate(const GeneratorSpec& spec) {
  auto fail = [](const std::string& what) { throw Error(ErrorCode::InvalidParameter, what); };
  if (auto* s = std::get_if<LassoSpec>(&spec.family)) {
    if (s->n < 1 || s->m < 1) fail("lasso sizes must be positive");
    if (!(s->cond >= 1.0)) fail("lasso condition number must be >= 1");
    if (!(s->mu > 0.0)) fail("lasso mu must be positive");
  } else if (auto* s = std::get_if<L1PcaSpec>(&spec.family)) {
    if (s->d < 1) fail("pca order must be positive");
    if (!(s->lambda >= 0.0)) fail("pca lambda must be nonnegative");
  } else if (auto* s = std::get_if<LogRegSpec>(&spec.family)) {
    if (s->p < 1 || s->q < 1) fail("logreg sizes must be positive");
    if (!(s->lambda > 0.0)) fail("logreg lambda must be positive");
  }
}

namespace detail {

using Triplets = std::vector<Eigen::Triplet<double, int>>;

inline Eigen::MatrixXd gaussian(Rng& rng, Index rows, Index cols) {
  Eigen::MatrixXd M(rows, cols);
  for (Index j = 0; j < cols; ++j) {
    for (Index i = 0; i < rows; ++i) M(i, j) = rng.normal();
  }
  return M;
}

inline Eigen::MatrixXd orthonormal_columns(Rng& rng, Index rows, Index cols) {
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(gaussian(rng, rows, cols));
  return qr.householderQ() * Eigen::MatrixXd::Identity(rows, cols);
}

inline void add(Triplets& t, Index row, Index col, double v) {
  if (v != 0.0) t.emplace_back(int(row), int(col), v);
}

}  // namespace detail

// ---------------------------------------------------------------------------
// LASSO
// ---------------------------------------------------------------------------

struct LassoData {
  Eigen::MatrixXd A;  // m x n
  Vector b;           // m
  double mu = 0.0;
};

/// A = U diag(sv) V' with sv spanning [1/cond, 1] log-uniformly (both ends hit).
inline LassoData make_lasso_data(const LassoSpec& spec, std::uint64_t seed) {
  validate(GeneratorSpec{spec, seed});
  Rng rng(seed);
  const Index k = std::min(spec.m, spec.n);
  const Eigen::MatrixXd U = detail::orthonormal_columns(rng, spec.m, k);
  const Eigen::MatrixXd V = detail::orthonormal_columns(rng, spec.n, k);
  Vector sv(k);
  const double log_cond = std::log(spec.cond);
  for (Index i = 0; i < k; ++i) {
    double frac = (i == 0) ? 0.0 : (i == k - 1) ? 1.0 : rng.uniform();
    sv[i] = std::exp(-frac * log_cond);
  }
  LassoData data;
  data.A = U * sv.asDiagonal() * V.transpose();
  data.b.resize(spec.m);
  for (Index i = 0; i < spec.m; ++i) data.b[i] = rng.normal();
  data.mu = spec.mu;
  return data;
}

inline double lasso_objective(const LassoData& d, const Eigen::Ref<const Vector>& x) {
  return 0.5 * (d.A * x - d.b).squaredNorm() + d.mu * x.lpNorm<1>();
}

/// Variables (x, u, t): |x_i| <= u_i via 2n nonnegative rows and
/// ||A x - b||^2 <= t as the second-order row group (2(Ax - b), t - 1, t + 1).
/// Objective mu * sum(u) + t / 2.
inline ConicProblem lasso_problem(const LassoData& d) {
  const Index m = d.A.rows(), n = d.A.cols();
  const Index nv = 2 * n + 1;
  const Index rows = 2 * n + m + 2;
  detail::Triplets t;
  ConicProblem p;
  p.b = Vector::Zero(rows);
  p.c = Vector::Zero(nv);
  p.c.segment(n, n).setConstant(d.mu);
  p.c[2 * n] = 0.5;
  for (Index i = 0; i < n; ++i) {
    detail::add(t, i, i, 1.0);  // u - x >= 0
    detail::add(t, i, n + i, -1.0);
    detail::add(t, n + i, i, -1.0);  // u + x >= 0
    detail::add(t, n + i, n + i, -1.0);
  }
  const Index r0 = 2 * n;
  for (Index i = 0; i < m; ++i) {
    for (Index j = 0; j < n; ++j) detail::add(t, r0 + i, j, -2.0 * d.A(i, j));
    p.b[r0 + i] = -2.0 * d.b[i];
  }
  detail::add(t, r0 + m, 2 * n, -1.0);
  p.b[r0 + m] = -1.0;
  detail::add(t, r0 + m + 1, 2 * n, -1.0);
  p.b[r0 + m + 1] = 1.0;
  p.A = make_sparse(rows, nv, t);
  p.cones.l = 2 * n;
  p.cones.q = {m + 2};
  return p;
}

inline ConicProblem gen_lasso(const LassoSpec& spec, std::uint64_t seed) {
  return lasso_problem(make_lasso_data(spec, seed));
}

// ---------------------------------------------------------------------------
// l1-regularised sparse PCA
// ---------------------------------------------------------------------------

struct L1PcaData {
  Eigen::MatrixXd S;  // d x d sample covariance
  double lambda = 0.0;
};

/// S = G'G / k with k = 2d standard normal samples g_i (rows of G).
inline L1PcaData make_l1_pca_data(const L1PcaSpec& spec, std::uint64_t seed) {
  validate(GeneratorSpec{spec, seed});
  Rng rng(seed);
  const Index k = 2 * spec.d;
  const Eigen::MatrixXd G = detail::gaussian(rng, k, spec.d);
  L1PcaData data;
  data.S = (G.transpose() * G) / double(k);
  data.lambda = spec.lambda;
  return data;
}

/// Variables (z, w) with z = vec(Z) and |z_k| <= w_k. Since vec scales
/// off-diagonals by sqrt(2), ||Z||_1 = sum_k weight_k |z_k| with weight 1 on
/// the diagonal and sqrt(2) elsewhere. Rows: tr Z = 1 (zero cone), 2D
/// nonnegative rows, D PSD rows holding z. Minimises -(tr(SZ) - lambda ||Z||_1).
inline ConicProblem l1_pca_problem(const L1PcaData& data) {
  const Index d = data.S.rows();
  const Index D = psd_rows(d);
  const Vector svec = vec(data.S);
  Vector weight(D);
  std::vector<Index> diag_pos;
  {
    Index k = 0;
    for (Index j = 0; j < d; ++j) {
      diag_pos.push_back(k);
      weight[k++] = 1.0;
      for (Index i = j + 1; i < d; ++i) weight[k++] = std::sqrt(2.0);
    }
  }
  detail::Triplets t;
  ConicProblem p;
  const Index rows = 1 + 2 * D + D;
  p.b = Vector::Zero(rows);
  p.c.resize(2 * D);
  p.c << -svec, data.lambda * weight;
  for (Index k : diag_pos) detail::add(t, 0, k, 1.0);
  p.b[0] = 1.0;
  for (Index k = 0; k < D; ++k) {
    detail::add(t, 1 + k, k, 1.0);  // w - z >= 0
    detail::add(t, 1 + k, D + k, -1.0);
    detail::add(t, 1 + D + k, k, -1.0);  // w + z >= 0
    detail::add(t, 1 + D + k, D + k, -1.0);
    detail::add(t, 1 + 2 * D + k, k, -1.0);  // z in PSD
  }
  p.A = make_sparse(rows, 2 * D, t);
  p.cones.f = 1;
  p.cones.l = 2 * D;
  p.cones.s = {d};
  return p;
}

inline ConicProblem gen_l1_pca(const L1PcaSpec& spec, std::uint64_t seed) {
  return l1_pca_problem(make_l1_pca_data(spec, seed));
}

// ---------------------------------------------------------------------------
// l1-regularised logistic regression
// ---------------------------------------------------------------------------

struct LogRegData {
  Eigen::MatrixXd features;  // q x p, row i is a_i' (label sign folded in)
  double offset = 0.0;
  double lambda = 0.0;
};

inline LogRegData make_logreg_data(const LogRegSpec& spec, std::uint64_t seed) {
  validate(GeneratorSpec{spec, seed});
  Rng rng(seed);
  LogRegData data;
  data.features.resize(spec.q, spec.p);
  for (Index i = 0; i < spec.q; ++i) {
    const double label = rng.uniform() < 0.5 ? -1.0 : 1.0;
    for (Index j = 0; j < spec.p; ++j) data.features(i, j) = -label * rng.normal();
  }
  data.offset = spec.offset;
  data.lambda = spec.lambda;
  return data;
}

inline double softplus(double z) { return z > 0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z)); }

inline double logreg_objective(const LogRegData& d, const Eigen::Ref<const Vector>& w) {
  const Vector z = d.features * w;
  double loss = 0.0;
  for (Index i = 0; i < z.size(); ++i) loss += softplus(z[i] + d.offset);
  return d.lambda * w.lpNorm<1>() + loss;
}

/// Variables (w, r, t, u1, u2). softplus(z_i) <= t_i is written as
/// u1 >= exp(z_i - t_i), u2 >= exp(-t_i), u1 + u2 <= 1, with the two
/// exponentials as primal exponential-cone triples (u, 1, exponent).
inline ConicProblem logreg_problem(const LogRegData& d) {
  const Index q = d.features.rows(), p = d.features.cols();
  const Index W = 0, R = p, T = 2 * p, U1 = 2 * p + q, U2 = 2 * p + 2 * q;
  const Index nv = 2 * p + 3 * q;
  const Index lrows = 2 * p + q;
  const Index rows = lrows + 6 * q;
  detail::Triplets t;
  ConicProblem prob;
  prob.b = Vector::Zero(rows);
  prob.c = Vector::Zero(nv);
  prob.c.segment(R, p).setConstant(d.lambda);
  prob.c.segment(T, q).setConstant(1.0);
  for (Index j = 0; j < p; ++j) {
    detail::add(t, j, W + j, 1.0);  // r - w >= 0
    detail::add(t, j, R + j, -1.0);
    detail::add(t, p + j, W + j, -1.0);  // r + w >= 0
    detail::add(t, p + j, R + j, -1.0);
  }
  for (Index i = 0; i < q; ++i) {
    prob.b[2 * p + i] = 1.0;  // 1 - u1 - u2 >= 0
    detail::add(t, 2 * p + i, U1 + i, 1.0);
    detail::add(t, 2 * p + i, U2 + i, 1.0);
  }
  for (Index i = 0; i < q; ++i) {
    const Index r1 = lrows + 6 * i;
    // (u1_i, 1, a_i'w + offset - t_i)
    detail::add(t, r1, U1 + i, -1.0);
    prob.b[r1 + 1] = 1.0;
    for (Index j = 0; j < p; ++j) detail::add(t, r1 + 2, W + j, -d.features(i, j));
    detail::add(t, r1 + 2, T + i, 1.0);
    prob.b[r1 + 2] = d.offset;
    // (u2_i, 1, -t_i)
    const Index r2 = r1 + 3;
    detail::add(t, r2, U2 + i, -1.0);
    prob.b[r2 + 1] = 1.0;
    detail::add(t, r2 + 2, T + i, 1.0);
  }
  prob.A = make_sparse(rows, nv, t);
  prob.cones.l = lrows;
  prob.cones.ep = 2 * q;
  return prob;
}

inline ConicProblem gen_logreg(const LogRegSpec& spec, std::uint64_t seed) {
  return logreg_problem(make_logreg_data(spec, seed));
}

inline ConicProblem generate(const GeneratorSpec& spec) {
  validate(spec);
  return std::visit(
      [&](const auto& s) -> ConicProblem {
        using S = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<S, LassoSpec>) return gen_lasso(s, spec.seed);
        else if constexpr (std::is_same_v<S, L1PcaSpec>) return gen_l1_pca(s, spec.seed);
        else return gen_logreg(s, spec.seed);
      },
      spec.family);
}

}  // namespace smcone::bench

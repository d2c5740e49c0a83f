#include "duhamel/block_system.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "duhamel/simd.hpp"

namespace duhamel {

namespace {

using Blocks = std::vector<ModeVector>;  // index 1..N, slot 0 unused

Blocks zero_blocks(const BlockSystem& s) { return Blocks(s.degree + 1, ModeVector(s.modes)); }

double max_abs_diff(const Blocks& a, const Blocks& b) {
  double d = 0.0;
  for (std::size_t k = 1; k < a.size(); ++k) {
    for (std::size_t n = 0; n < a[k].size(); ++n) d = std::max(d, std::fabs(a[k][n] - b[k][n]));
  }
  return d;
}

// z = S^{-1} r
Blocks apply_s_inverse(const BlockSystem& s, Blocks r) {
  for (int k = 2; k <= s.degree; ++k) simd::multiply_add(s.subdiagonal(k).span(), r[k - 1].span(), r[k].span());
  return r;
}

// S x
Blocks apply_s(const BlockSystem& s, const Blocks& x) {
  Blocks out = x;
  for (int k = 2; k <= s.degree; ++k) {
    for (std::size_t n = 0; n < s.modes; ++n) out[k][n] -= s.subdiagonal(k)[n] * x[k - 1][n];
  }
  return out;
}

// C x (j = 1..N)
Blocks apply_c(const BlockSystem& s, const Blocks& x) {
  Blocks out = zero_blocks(s);
  if (s.coeffs.alpha_zero) return out;
  for (int k = 1; k <= s.degree; ++k) {
    for (int j = 1; j <= s.degree; ++j) simd::multiply_add(s.coeffs.alpha[k][j].span(), x[j].span(), out[k].span());
  }
  return out;
}

// D q (j = 1..N); q indexed 0..N-1
Blocks apply_d(const BlockSystem& s, const Eigen::VectorXd& q) {
  Blocks out = zero_blocks(s);
  for (int k = 1; k <= s.degree; ++k) {
    for (int j = 1; j <= s.degree; ++j) simd::axpy(q[j - 1], s.coeffs.beta[k][j].span(), out[k].span());
  }
  return out;
}

Eigen::VectorXd apply_lambda(const BlockSystem& s, const Blocks& x) {
  Eigen::VectorXd q(s.degree);
  for (int k = 1; k <= s.degree; ++k) q[k - 1] = s.boundary_unknown(k, x[k]);
  return q;
}

Blocks add(Blocks a, const Blocks& b, double scale = 1.0) {
  for (std::size_t k = 1; k < a.size(); ++k) simd::axpy(scale, b[k].span(), a[k].span());
  return a;
}

// H = S - C, solved per mode. Constant families reduce to forward substitution.
class HSolver {
 public:
  explicit HSolver(const BlockSystem& s) : s_(s) {
    if (s.coeffs.alpha_zero) return;
    const int nd = s.degree;
    lu_.reserve(s.modes);
    for (std::size_t n = 0; n < s.modes; ++n) {
      Eigen::MatrixXd h = Eigen::MatrixXd::Identity(nd, nd);
      for (int k = 1; k <= nd; ++k) {
        if (k >= 2) h(k - 1, k - 2) -= s.subdiagonal(k)[n];
        for (int j = 1; j <= nd; ++j) h(k - 1, j - 1) -= s.coeffs.alpha[k][j][n];
      }
      lu_.emplace_back(h);
      if (!std::isfinite(lu_.back().rcond()) || lu_.back().rcond() < 1e-300) {
        throw SolverError("singular modal block S - C");
      }
    }
  }

  Blocks solve(Blocks r) const {
    if (s_.coeffs.alpha_zero) return apply_s_inverse(s_, std::move(r));
    const int nd = s_.degree;
    Eigen::VectorXd rhs(nd);
    for (std::size_t n = 0; n < s_.modes; ++n) {
      for (int k = 1; k <= nd; ++k) rhs[k - 1] = r[k][n];
      const Eigen::VectorXd z = lu_[n].solve(rhs);
      for (int k = 1; k <= nd; ++k) r[k][n] = z[k - 1];
    }
    return r;
  }

 private:
  const BlockSystem& s_;
  std::vector<Eigen::PartialPivLU<Eigen::MatrixXd>> lu_;
};

Eigen::MatrixXd lambda_d_matrix(const BlockSystem& s) {
  const auto v = s.lambda_d();
  Eigen::MatrixXd m(s.degree, s.degree);
  for (int k = 0; k < s.degree; ++k) {
    for (int j = 0; j < s.degree; ++j) m(k, j) = v[k * s.degree + j];
  }
  return m;
}

Eigen::PartialPivLU<Eigen::MatrixXd> factor_w(const BlockSystem& s) {
  const Eigen::MatrixXd iw = Eigen::MatrixXd::Identity(s.degree, s.degree) - lambda_d_matrix(s);
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(iw);
  if (!(lu.rcond() > 1e-14)) throw SolverError("I - Lambda D is singular");
  return lu;
}

StageSolution make_stage(const BlockSystem& s, const Blocks& x, const Eigen::VectorXd& q) {
  StageSolution st;
  st.slab = s.slab;
  st.times = s.times;
  st.x.resize(s.degree + 1);
  st.trace.resize(s.degree + 1);
  st.y.resize(s.degree + 1);
  st.x[0] = s.x0;
  for (int k = 1; k <= s.degree; ++k) st.x[k] = x[k];
  for (int k = 0; k <= s.degree; ++k) {
    const double tr = simd::dot(s.trace_row.span(), st.x[k].span());
    st.trace[k] = tr;
    st.y[k] = s.multiplier[k] * tr;
  }
  // Boundary values from the reduced relation overwrite the recomputed ones
  // (they agree to solver precision).
  for (int k = 0; k <= s.degree; ++k) {
    const double qk = k == 0 ? s.q0 : q[k - 1];
    if (s.coupling == BoundaryCoupling::kExactMultiplier) {
      st.trace[k] = qk;
      st.y[k] = s.multiplier[k] * qk;
    } else {
      st.y[k] = qk;
    }
  }
  return st;
}

// q = W Lambda [(I - S + C) x + Phi]
Eigen::VectorXd recover_q(const BlockSystem& s, const Eigen::PartialPivLU<Eigen::MatrixXd>& w,
                          const Blocks& x, const Blocks& phi) {
  Blocks z = add(add(x, apply_s(s, x), -1.0), apply_c(s, x));
  z = add(z, phi);
  return w.solve(apply_lambda(s, z));
}

}  // namespace

std::vector<ModeVector> BlockSystem::phi_total() const {
  std::vector<ModeVector> phi(degree + 1, ModeVector(modes));
  for (int k = 1; k <= degree; ++k) {
    phi[k] = coeffs.phi[k];
    simd::multiply_add(coeffs.alpha[k][0].span(), x0.span(), phi[k].span());
    simd::axpy(q0, coeffs.beta[k][0].span(), phi[k].span());
  }
  simd::multiply_add(coeffs.decay[1].span(), x0.span(), phi[1].span());
  return phi;
}

std::vector<double> BlockSystem::lambda_d() const {
  std::vector<double> out(degree * degree);
  for (int k = 1; k <= degree; ++k) {
    for (int j = 1; j <= degree; ++j) out[(k - 1) * degree + (j - 1)] = simd::dot(lambda[k].span(), coeffs.beta[k][j].span());
  }
  return out;
}

double BlockSystem::contraction() const {
  const auto ld = lambda_d();
  double norm = 0.0;
  for (int k = 0; k < degree; ++k) {
    double row = 0.0;
    for (int j = 0; j < degree; ++j) row += std::fabs(ld[k * degree + j]);
    norm = std::max(norm, row);
  }
  return norm;
}

double BlockSystem::boundary_unknown(int k, const ModeVector& x) const {
  return simd::dot(lambda[k].span(), x.span());
}

BlockSystem assemble_block_system(const CollocationCoefficients& coeffs, const EvolutionProblem& problem,
                                  const CglGrid& grid, const TimePartition& part, const ModeVector& x0) {
  BlockSystem s;
  s.slab = coeffs.slab;
  s.degree = coeffs.degree;
  s.modes = problem.modes();
  s.coupling = coeffs.coupling;
  s.coeffs = coeffs;
  s.x0 = x0;
  const auto& basis = problem.family.basis();
  s.trace_row = ModeVector(std::vector<double>(basis.boundary_trace().begin(), basis.boundary_trace().end()));
  s.times.resize(s.degree + 1);
  s.multiplier.resize(s.degree + 1);
  s.lambda.resize(s.degree + 1);
  for (int k = 0; k <= s.degree; ++k) {
    s.times[k] = part.map_to_slab(coeffs.slab, grid.node(k));
    s.multiplier[k] = problem.b(s.times[k]);
    s.lambda[k] = s.coupling == BoundaryCoupling::kExactMultiplier ? s.trace_row
                                                                    : s.multiplier[k] * s.trace_row;
  }
  s.q0 = s.boundary_unknown(0, x0);
  return s;
}

StageSolution solve_stage_direct(const BlockSystem& s) {
  const int nd = s.degree;
  const auto w = factor_w(s);
  const HSolver h(s);
  const Blocks phi = s.phi_total();

  // rhs = Q Phi = D W Lambda Phi + Phi
  const Blocks rhs = add(apply_d(s, w.solve(apply_lambda(s, phi))), phi);

  // G = H - D V with V z = W Lambda (I - H) z; Woodbury with rank N.
  const Blocks z0 = h.solve(rhs);
  std::vector<Blocks> y(nd);
  Eigen::MatrixXd cap = Eigen::MatrixXd::Identity(nd, nd);
  for (int j = 0; j < nd; ++j) {
    Eigen::VectorXd e = Eigen::VectorXd::Zero(nd);
    e[j] = 1.0;
    const Blocks dj = apply_d(s, e);
    y[j] = h.solve(dj);
    // V y_j = W Lambda (y_j - D e_j)
    cap.col(j) -= w.solve(apply_lambda(s, add(y[j], dj, -1.0)));
  }
  const Eigen::VectorXd vz0 = w.solve(apply_lambda(s, add(z0, rhs, -1.0)));
  Eigen::PartialPivLU<Eigen::MatrixXd> cap_lu(cap);
  if (!(cap_lu.rcond() > 1e-14)) throw SolverError("reduced boundary system is singular");
  const Eigen::VectorXd coef = cap_lu.solve(vz0);

  Blocks x = z0;
  for (int j = 0; j < nd; ++j) x = add(x, y[j], coef[j]);
  return make_stage(s, x, recover_q(s, w, x, phi));
}

StageSolution solve_stage_fixed_point(const BlockSystem& s, const SolverConfig& config) {
  const auto w = factor_w(s);
  const Blocks phi = s.phi_total();
  const Blocks q_phi = add(apply_d(s, w.solve(apply_lambda(s, phi))), phi);
  const Blocks r = apply_s_inverse(s, q_phi);

  FixedPointHistory hist;
  Blocks x(s.degree + 1, s.x0);
  for (int it = 1; it <= config.fp_max_iter; ++it) {
    // G_1 x = S^{-1} [C x + D W Lambda (I - S + C) x]
    const Blocks cx = apply_c(s, x);
    const Blocks z = add(add(x, apply_s(s, x), -1.0), cx);
    const Blocks t = add(cx, apply_d(s, w.solve(apply_lambda(s, z))));
    Blocks next = add(apply_s_inverse(s, t), r);
    const double diff = max_abs_diff(next, x);
    x = std::move(next);
    hist.iterations = it;
    if (!hist.differences.empty() && hist.differences.back() > 0.0) {
      hist.ratios.push_back(diff / hist.differences.back());
    }
    hist.differences.push_back(diff);
    if (!std::isfinite(diff) || (it > 3 && diff > 1e6 * std::max(1.0, hist.differences.front()))) {
      std::ostringstream msg;
      msg << "fixed-point iteration diverged (ratio "
          << (hist.ratios.empty() ? std::numeric_limits<double>::infinity() : hist.ratios.back()) << ")";
      throw SolverError(msg.str());
    }
    if (diff < config.fp_tol) {
      hist.converged = true;
      break;
    }
  }

  double log_sum = 0.0;
  int used = 0;
  for (std::size_t i = 0; i < hist.ratios.size(); ++i) {
    if (hist.differences[i] > 1e3 * config.fp_tol && hist.ratios[i] > 0.0) {
      log_sum += std::log(hist.ratios[i]);
      ++used;
    }
  }
  hist.contraction_estimate = used > 0 ? std::exp(log_sum / used) : (hist.ratios.empty() ? 0.0 : hist.ratios.back());

  if (!hist.converged) {
    std::ostringstream msg;
    msg << "fixed-point iteration did not converge in " << config.fp_max_iter
        << " iterations (estimated ratio " << hist.contraction_estimate << ")";
    throw SolverError(msg.str());
  }
  StageSolution st = make_stage(s, x, recover_q(s, w, x, phi));
  st.history = std::move(hist);
  return st;
}

double stage_residual(const BlockSystem& s, const StageSolution& st) {
  const int nd = s.degree;
  std::vector<double> q(nd + 1);
  double res = 0.0;
  for (int k = 0; k <= nd; ++k) {
    q[k] = s.boundary_unknown(k, st.x[k]);
    if (k == 0) continue;
    const double stored = s.coupling == BoundaryCoupling::kExactMultiplier ? st.trace[k] : st.y[k];
    res = std::max(res, std::fabs(stored - q[k]));
  }
  for (int k = 1; k <= nd; ++k) {
    ModeVector rhs = s.coeffs.phi[k];
    simd::multiply_add(s.coeffs.decay[k].span(), st.x[k - 1].span(), rhs.span());
    for (int j = 0; j <= nd; ++j) {
      if (!s.coeffs.alpha_zero) simd::multiply_add(s.coeffs.alpha[k][j].span(), st.x[j].span(), rhs.span());
      simd::axpy(q[j], s.coeffs.beta[k][j].span(), rhs.span());
    }
    rhs -= st.x[k];
    res = std::max(res, rhs.max_abs());
  }
  return res;
}

double BlockLowerTriangular::norm() const {
  double out = 0.0;
  for (int i = 1; i <= degree; ++i) {
    double row = 0.0;
    for (int k = 1; k <= i; ++k) row += blocks[i][k].max_abs();
    out = std::max(out, row);
  }
  return out;
}

BlockLowerTriangular scaled_s(const BlockSystem& s, double gamma) {
  BlockLowerTriangular m;
  m.degree = s.degree;
  m.modes = s.modes;
  m.blocks.assign(s.degree + 1, std::vector<ModeVector>(s.degree + 1, ModeVector(s.modes)));
  for (int i = 1; i <= s.degree; ++i) {
    m.blocks[i][i] = ModeVector(s.modes, 1.0);
    if (i < 2) continue;
    for (std::size_t n = 0; n < s.modes; ++n) {
      const double ratio = gamma == 0.0 ? 1.0 : std::pow(s.coeffs.frozen[i][n] / s.coeffs.frozen[i - 1][n], gamma);
      m.blocks[i][i - 1][n] = -s.subdiagonal(i)[n] * ratio;
    }
  }
  return m;
}

BlockLowerTriangular explicit_inverse(const BlockLowerTriangular& s) {
  BlockLowerTriangular inv;
  inv.degree = s.degree;
  inv.modes = s.modes;
  inv.blocks.assign(s.degree + 1, std::vector<ModeVector>(s.degree + 1, ModeVector(s.modes)));
  for (int k = 1; k <= s.degree; ++k) {
    ModeVector prod(s.modes, 1.0);
    inv.blocks[k][k] = prod;
    for (int i = k + 1; i <= s.degree; ++i) {
      for (std::size_t n = 0; n < s.modes; ++n) prod[n] *= -s.blocks[i][i - 1][n];
      inv.blocks[i][k] = prod;
    }
  }
  return inv;
}

double inverse_defect(const BlockLowerTriangular& s, const BlockLowerTriangular& s_inv) {
  double out = 0.0;
  for (int i = 1; i <= s.degree; ++i) {
    double row = 0.0;
    for (int k = 1; k <= i; ++k) {
      ModeVector p(s.modes);
      for (int m = k; m <= i; ++m) simd::multiply_add(s_inv.blocks[i][m].span(), s.blocks[m][k].span(), p.span());
      if (i == k) {
        for (double& v : p) v -= 1.0;
      }
      row += p.max_abs();
    }
    out = std::max(out, row);
  }
  return out;
}

ScaledDiagnostics scaled_diagnostics(const BlockSystem& s, double gamma) {
  ScaledDiagnostics d;
  d.gamma = gamma;
  const auto st = scaled_s(s, gamma);
  const auto inv = explicit_inverse(st);
  d.s_inverse_norm = inv.norm();
  d.inverse_defect = inverse_defect(st, inv);
  d.lambda_d_norm = s.contraction();

  const auto w = factor_w(s);
  Blocks x(s.degree + 1, ModeVector(s.modes, 1.0));
  double radius = 0.0;
  for (int it = 0; it < 60; ++it) {
    const Blocks cx = apply_c(s, x);
    const Blocks z = add(add(x, apply_s(s, x), -1.0), cx);
    Blocks next = apply_s_inverse(s, add(cx, apply_d(s, w.solve(apply_lambda(s, z)))));
    double norm = 0.0;
    for (int k = 1; k <= s.degree; ++k) norm = std::max(norm, next[k].max_abs());
    if (norm == 0.0) {
      radius = 0.0;
      break;
    }
    radius = norm;  // x is normalized to unit infinity norm
    for (int k = 1; k <= s.degree; ++k) next[k] *= 1.0 / norm;
    x = std::move(next);
  }
  d.fixed_point_radius = radius;
  return d;
}

}  // namespace duhamel

#pragma once

#include <span>
#include <vector>

namespace duhamel {

/// Chebyshev-Gauss-Lobatto grid of degree N on [-1, 1], nodes in increasing
/// order: s_k = cos((N - k) pi / N), k = 0..N.
class CglGrid {
 public:
  /// Throws std::invalid_argument for degree < 1.
  explicit CglGrid(int degree);

  int degree() const { return degree_; }
  int size() const { return degree_ + 1; }

  std::span<const double> nodes() const { return nodes_; }
  double node(int k) const { return nodes_[k]; }

  /// theta_k = s_k - s_{k-1}, k = 1..N.
  double spacing(int k) const { return nodes_[k] - nodes_[k - 1]; }
  double max_spacing() const;

  /// Second-form barycentric weights: alternating signs, endpoints halved.
  std::span<const double> barycentric_weights() const { return weights_; }

  /// L_{j,N}(s). Exactly delta_ij at the nodes.
  double lagrange(int j, double s) const;

  /// All L_{j,N}(s), j = 0..N, written to out (size N+1).
  void lagrange_all(double s, std::span<double> out) const;

  /// Monomial coefficients c_m of L_{j,N}(s_{k-1} + theta_k u) in the local
  /// variable u in [0, 1] on subinterval k (1..N).
  std::vector<double> local_lagrange(int j, int k) const;

 private:
  int degree_;
  std::vector<double> nodes_;
  std::vector<double> weights_;
};

CglGrid build_grid(int degree);

double lagrange_eval(const CglGrid& grid, int j, double s);

/// P_N(s; v) for scalar nodal data.
double interpolate(const CglGrid& grid, std::span<const double> values, double s);

/// P_N(s; v) applied componentwise to vector-valued nodal data. Every entry of
/// values must have the same length.
std::vector<double> interpolate(const CglGrid& grid, std::span<const std::vector<double>> values,
                                double s);

/// Max of sum_j |L_{j,N}(s)| over `samples` equispaced points plus the
/// Chebyshev extrema; a lower bound on the true Lebesgue constant.
double lebesgue_constant(const CglGrid& grid, int samples = 4001);

/// Uniform partition of [0, T] into K slabs [t_{l-1}, t_l], t_l = l * tau.
class TimePartition {
 public:
  TimePartition(double final_time, int slabs);

  double final_time() const { return final_time_; }
  int slabs() const { return slabs_; }
  double tau() const { return tau_; }

  /// t_l = l * tau, l = 0..K.
  double knot(int l) const;

  /// psi_l(s) = (tau / 2)(s + 2l - 1); throws for l outside 1..K.
  double map_to_slab(int l, double s) const;

 private:
  double final_time_;
  int slabs_;
  double tau_;
};

}  // namespace duhamel

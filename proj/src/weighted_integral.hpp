#pragma once

#include <span>
#include <vector>

#include "duhamel/cgl_mesh.hpp"
#include "duhamel/time_function.hpp"

namespace duhamel::detail {

/// Integrals over one collocation subinterval [s_{k-1}, s_k] of slab l:
///
///   int exp(-nu (s_k - eta)) L_j(eta) q(psi_l(eta)) d eta,   j = 0..N
///
/// (or with L_j replaced by 1). Data q is localized once; per call only the
/// unit moments for the given nu are evaluated.
class SubintervalIntegrator {
 public:
  SubintervalIntegrator(const CglGrid& grid, const TimePartition& part, int l, int k,
                        const ExpPoly& q, bool with_lagrange);

  /// Number of outputs: N + 1 with Lagrange factors, else 1.
  int outputs() const { return outputs_; }
  bool empty() const { return groups_.empty(); }

  void integrate(double nu, std::span<double> out) const;

 private:
  struct Group {
    double rate;
    double scale;                              // theta * exp(-rate * t_k)
    std::vector<std::vector<double>> products;  // per output, monomials in u
    int degree;
  };
  double theta_ = 0.0;
  double h_t_ = 0.0;
  int outputs_ = 1;
  std::vector<Group> groups_;
};

}  // namespace duhamel::detail

#include "weighted_integral.hpp"

#include <algorithm>
#include <cmath>

#include "duhamel/kernels.hpp"

namespace duhamel::detail {

SubintervalIntegrator::SubintervalIntegrator(const CglGrid& grid, const TimePartition& part, int l,
                                             int k, const ExpPoly& q, bool with_lagrange) {
  theta_ = grid.spacing(k);
  h_t_ = 0.5 * part.tau() * theta_;
  const double t_start = part.map_to_slab(l, grid.node(k - 1));
  const double t_end = t_start + h_t_;
  outputs_ = with_lagrange ? grid.size() : 1;

  std::vector<std::vector<double>> lagrange;
  if (with_lagrange) {
    lagrange.reserve(grid.size());
    for (int j = 0; j < grid.size(); ++j) lagrange.push_back(grid.local_lagrange(j, k));
  }
  for (const auto& g : q.localize(t_start, h_t_)) {
    Group out;
    out.rate = g.rate;
    out.scale = theta_ * std::exp(-g.rate * t_end);
    out.degree = 0;
    if (with_lagrange) {
      for (const auto& lj : lagrange) out.products.push_back(poly_multiply(lj, g.poly));
    } else {
      out.products.push_back(g.poly);
    }
    for (const auto& p : out.products) out.degree = std::max(out.degree, static_cast<int>(p.size()) - 1);
    groups_.push_back(std::move(out));
  }
}

void SubintervalIntegrator::integrate(double nu, std::span<double> out) const {
  std::fill(out.begin(), out.end(), 0.0);
  for (const auto& g : groups_) {
    // exp(-nu theta (1-u)) exp(-r h u) = exp(-r h) exp(-(nu theta - r h)(1-u))
    const auto j = unit_moments(nu * theta_ - g.rate * h_t_, g.degree);
    for (int o = 0; o < outputs_; ++o) {
      const auto& p = g.products[o];
      double sum = 0.0;
      for (std::size_t m = 0; m < p.size(); ++m) sum += p[m] * j[m];
      out[o] += g.scale * sum;
    }
  }
}

}  // namespace duhamel::detail

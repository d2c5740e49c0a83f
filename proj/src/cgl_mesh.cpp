#include "duhamel/cgl_mesh.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace duhamel {

CglGrid::CglGrid(int degree) : degree_(degree) {
  if (degree < 1) {
    throw std::invalid_argument("CGL grid needs degree >= 1, got " + std::to_string(degree));
  }
  const int n = degree;
  nodes_.resize(n + 1);
  weights_.resize(n + 1);
  // sin form of cos((N - k) pi / N): exactly antisymmetric, exact endpoints.
  for (int k = 0; k <= n; ++k) {
    nodes_[k] = std::sin(std::numbers::pi * (2 * k - n) / (2.0 * n));
    double w = ((n - k) % 2 == 0) ? 1.0 : -1.0;
    if (k == 0 || k == n) w *= 0.5;
    weights_[k] = w;
  }
}

double CglGrid::max_spacing() const {
  double m = 0.0;
  for (int k = 1; k <= degree_; ++k) m = std::max(m, spacing(k));
  return m;
}

double CglGrid::lagrange(int j, double s) const {
  if (j < 0 || j > degree_) throw std::out_of_range("Lagrange index out of range");
  for (int i = 0; i <= degree_; ++i) {
    if (s == nodes_[i]) return i == j ? 1.0 : 0.0;
  }
  double denom = 0.0;
  for (int i = 0; i <= degree_; ++i) denom += weights_[i] / (s - nodes_[i]);
  return weights_[j] / (s - nodes_[j]) / denom;
}

void CglGrid::lagrange_all(double s, std::span<double> out) const {
  if (static_cast<int>(out.size()) != size()) throw std::invalid_argument("lagrange_all: bad output size");
  for (int i = 0; i <= degree_; ++i) {
    if (s == nodes_[i]) {
      std::fill(out.begin(), out.end(), 0.0);
      out[i] = 1.0;
      return;
    }
  }
  double denom = 0.0;
  for (int i = 0; i <= degree_; ++i) {
    out[i] = weights_[i] / (s - nodes_[i]);
    denom += out[i];
  }
  for (double& v : out) v /= denom;
}

std::vector<double> CglGrid::local_lagrange(int j, int k) const {
  if (j < 0 || j > degree_ || k < 1 || k > degree_) {
    throw std::out_of_range("local_lagrange index out of range");
  }
  // L_j(s_{k-1} + theta u) = prod_{i != j} (theta u + s_{k-1} - s_i) / (s_j - s_i)
  const double theta = spacing(k);
  const double origin = nodes_[k - 1];
  std::vector<double> c{1.0};
  c.reserve(degree_ + 1);
  for (int i = 0; i <= degree_; ++i) {
    if (i == j) continue;
    const double den = nodes_[j] - nodes_[i];
    const double a = theta / den;
    const double b = (origin - nodes_[i]) / den;
    c.push_back(0.0);
    for (std::size_t m = c.size() - 1; m > 0; --m) c[m] = c[m] * b + c[m - 1] * a;
    c[0] *= b;
  }
  return c;
}

CglGrid build_grid(int degree) { return CglGrid(degree); }

double lagrange_eval(const CglGrid& grid, int j, double s) { return grid.lagrange(j, s); }

double interpolate(const CglGrid& grid, std::span<const double> values, double s) {
  if (static_cast<int>(values.size()) != grid.size()) {
    throw std::invalid_argument("interpolate: expected " + std::to_string(grid.size()) + " values, got " +
                                std::to_string(values.size()));
  }
  std::vector<double> basis(grid.size());
  grid.lagrange_all(s, basis);
  double r = 0.0;
  for (int j = 0; j < grid.size(); ++j) r += values[j] * basis[j];
  return r;
}

std::vector<double> interpolate(const CglGrid& grid, std::span<const std::vector<double>> values,
                                double s) {
  if (static_cast<int>(values.size()) != grid.size()) {
    throw std::invalid_argument("interpolate: expected " + std::to_string(grid.size()) + " values, got " +
                                std::to_string(values.size()));
  }
  const std::size_t dim = values[0].size();
  for (const auto& v : values) {
    if (v.size() != dim) throw std::invalid_argument("interpolate: ragged vector data");
  }
  std::vector<double> basis(grid.size());
  grid.lagrange_all(s, basis);
  std::vector<double> r(dim, 0.0);
  for (int j = 0; j < grid.size(); ++j) {
    for (std::size_t i = 0; i < dim; ++i) r[i] += values[j][i] * basis[j];
  }
  return r;
}

double lebesgue_constant(const CglGrid& grid, int samples) {
  samples = std::max(samples, 2);
  std::vector<double> basis(grid.size());
  auto lebesgue_fn = [&](double s) {
    grid.lagrange_all(s, basis);
    double sum = 0.0;
    for (double v : basis) sum += std::fabs(v);
    return sum;
  };
  double best = 0.0;
  for (int i = 0; i < samples; ++i) {
    best = std::max(best, lebesgue_fn(-1.0 + 2.0 * i / (samples - 1)));
  }
  // The Lebesgue function peaks roughly midway between nodes; probe there too.
  for (int k = 1; k <= grid.degree(); ++k) {
    best = std::max(best, lebesgue_fn(0.5 * (grid.node(k - 1) + grid.node(k))));
  }
  return best;
}

TimePartition::TimePartition(double final_time, int slabs)
    : final_time_(final_time), slabs_(slabs), tau_(final_time / slabs) {
  if (!(final_time > 0.0)) throw std::invalid_argument("final time must be positive");
  if (slabs < 1) throw std::invalid_argument("slab count must be >= 1");
}

double TimePartition::knot(int l) const {
  if (l < 0 || l > slabs_) throw std::out_of_range("knot index out of range");
  return 0.5 * tau_ * (2 * l);
}

double TimePartition::map_to_slab(int l, double s) const {
  if (l < 1 || l > slabs_) {
    throw std::out_of_range("slab index " + std::to_string(l) + " outside 1.." + std::to_string(slabs_));
  }
  return 0.5 * tau_ * (s + 2 * l - 1);
}

}  // namespace duhamel

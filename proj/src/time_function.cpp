#include "duhamel/time_function.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace duhamel {
namespace {

// Binomial expansion of (t0 + h u)^p, coefficients of u^i.
std::vector<double> shifted_power(int p, double t0, double h) {
  std::vector<double> c(p + 1, 0.0);
  double binom = 1.0;
  for (int i = 0; i <= p; ++i) {
    c[i] = binom * std::pow(t0, p - i) * std::pow(h, i);
    binom = binom * (p - i) / (i + 1);
  }
  return c;
}

}  // namespace

Polynomial::Polynomial(std::vector<double> coefficients) : coeffs_(std::move(coefficients)) {
  if (coeffs_.empty()) coeffs_.push_back(0.0);
}

double Polynomial::operator()(double t) const { return poly_eval(coeffs_, t); }

bool Polynomial::is_constant() const {
  return std::all_of(coeffs_.begin() + 1, coeffs_.end(), [](double c) { return c == 0.0; });
}

std::vector<double> Polynomial::shifted(double t0, double h) const {
  std::vector<double> out(coeffs_.size(), 0.0);
  for (std::size_t p = 0; p < coeffs_.size(); ++p) {
    if (coeffs_[p] == 0.0) continue;
    auto sp = shifted_power(static_cast<int>(p), t0, h);
    for (std::size_t i = 0; i < sp.size(); ++i) out[i] += coeffs_[p] * sp[i];
  }
  return out;
}

ExpPoly::ExpPoly(std::vector<ExpTerm> terms) : terms_(std::move(terms)) { normalize(); }

ExpPoly ExpPoly::constant(double c) { return ExpPoly({ExpTerm{c, 0, 0.0}}); }

ExpPoly ExpPoly::exponential(double c, double rate) { return ExpPoly({ExpTerm{c, 0, rate}}); }

ExpPoly ExpPoly::polynomial(const Polynomial& p) {
  std::vector<ExpTerm> terms;
  auto c = p.coefficients();
  for (std::size_t i = 0; i < c.size(); ++i) terms.push_back({c[i], static_cast<int>(i), 0.0});
  return ExpPoly(std::move(terms));
}

void ExpPoly::normalize() {
  // Merge identical (power, rate) pairs and drop exact zeros.
  std::map<std::pair<double, int>, double> merged;
  for (const auto& t : terms_) merged[{t.rate, t.power}] += t.coefficient;
  terms_.clear();
  for (const auto& [key, c] : merged) {
    if (c != 0.0) terms_.push_back({c, key.second, key.first});
  }
}

double ExpPoly::operator()(double t) const {
  double s = 0.0;
  for (const auto& term : terms_) {
    s += term.coefficient * std::pow(t, term.power) * std::exp(-term.rate * t);
  }
  return s;
}

ExpPoly ExpPoly::operator*(const ExpPoly& other) const {
  std::vector<ExpTerm> out;
  out.reserve(terms_.size() * other.terms_.size());
  for (const auto& a : terms_) {
    for (const auto& b : other.terms_) {
      out.push_back({a.coefficient * b.coefficient, a.power + b.power, a.rate + b.rate});
    }
  }
  return ExpPoly(std::move(out));
}

ExpPoly ExpPoly::operator+(const ExpPoly& other) const {
  std::vector<ExpTerm> out = terms_;
  out.insert(out.end(), other.terms_.begin(), other.terms_.end());
  return ExpPoly(std::move(out));
}

ExpPoly ExpPoly::scaled(double s) const {
  std::vector<ExpTerm> out = terms_;
  for (auto& t : out) t.coefficient *= s;
  return ExpPoly(std::move(out));
}

ExpPoly ExpPoly::derivative() const {
  std::vector<ExpTerm> out;
  for (const auto& t : terms_) {
    if (t.power > 0) out.push_back({t.coefficient * t.power, t.power - 1, t.rate});
    if (t.rate != 0.0) out.push_back({-t.coefficient * t.rate, t.power, t.rate});
  }
  return ExpPoly(std::move(out));
}

std::vector<LocalGroup> ExpPoly::localize(double t0, double h) const {
  std::vector<LocalGroup> groups;
  for (const auto& term : terms_) {
    auto it = std::find_if(groups.begin(), groups.end(),
                           [&](const LocalGroup& g) { return g.rate == term.rate; });
    if (it == groups.end()) {
      groups.push_back({term.rate, {}});
      it = groups.end() - 1;
    }
    auto sp = shifted_power(term.power, t0, h);
    if (it->poly.size() < sp.size()) it->poly.resize(sp.size(), 0.0);
    for (std::size_t i = 0; i < sp.size(); ++i) it->poly[i] += term.coefficient * sp[i];
  }
  return groups;
}

std::vector<double> poly_multiply(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) return {};
  std::vector<double> c(a.size() + b.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0.0) continue;
    for (std::size_t j = 0; j < b.size(); ++j) c[i + j] += a[i] * b[j];
  }
  return c;
}

double poly_eval(std::span<const double> c, double u) {
  double r = 0.0;
  for (std::size_t i = c.size(); i-- > 0;) r = r * u + c[i];
  return r;
}

}  // namespace duhamel

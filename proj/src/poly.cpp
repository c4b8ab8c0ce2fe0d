#include "gjet/poly.hpp"

#include <cmath>

namespace gjet {

void Polynomial::add_term(const std::array<int, 3>& exps, double coeff) {
  if (coeff == 0.0) return;
  for (auto& t : terms_) {
    if (t.exps == exps) {
      t.coeff += coeff;
      return;
    }
  }
  terms_.push_back(Monomial{exps, coeff});
}

TaylorScalar Polynomial::eval(const TaylorVector& x) const {
  if (static_cast<int>(x.size()) < nvars_)
    throw DimensionMismatch("polynomial eval arity");
  const int nv = x.empty() ? 0 : x[0].nvars();
  TaylorScalar acc(0.0, nv);
  for (const auto& t : terms_) {
    TaylorScalar term(t.coeff, nv);
    for (int v = 0; v < nvars_; ++v)
      for (int e = 0; e < t.exps[static_cast<size_t>(v)]; ++e)
        term = term * x[static_cast<size_t>(v)];
    acc = acc + term;
  }
  return acc;
}

double Polynomial::eval_value(const Eigen::VectorXd& x) const {
  double acc = 0.0;
  for (const auto& t : terms_) {
    double term = t.coeff;
    for (int v = 0; v < nvars_; ++v)
      term *= std::pow(x(v), t.exps[static_cast<size_t>(v)]);
    acc += term;
  }
  return acc;
}

Polynomial Polynomial::derivative(int k) const {
  Polynomial d(nvars_);
  for (const auto& t : terms_) {
    const int e = t.exps[static_cast<size_t>(k)];
    if (e == 0) continue;
    auto exps = t.exps;
    exps[static_cast<size_t>(k)] = e - 1;
    d.add_term(exps, t.coeff * e);
  }
  return d;
}

Polynomial Polynomial::constant(int nvars, double c) {
  Polynomial p(nvars);
  p.add_term({0, 0, 0}, c);
  return p;
}

std::vector<std::array<int, 3>> monomials_up_to(int nvars, int deg) {
  std::vector<std::array<int, 3>> out;
  for (int a = 0; a <= deg; ++a)
    for (int b = 0; b <= (nvars > 1 ? deg - a : 0); ++b)
      for (int c = 0; c <= (nvars > 2 ? deg - a - b : 0); ++c)
        out.push_back({a, b, c});
  return out;
}

uint64_t splitmix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

uint64_t Rng::next_u64() {
  state = splitmix64(state);
  return state;
}

double Rng::uniform() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Rng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

double Rng::normal() {
  // Box-Muller; regenerate until the log argument is safe
  double u1 = uniform();
  while (u1 <= 1e-300) u1 = uniform();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
}

Eigen::VectorXd Rng::uniform_vec(int n, double lo, double hi) {
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) v(i) = uniform(lo, hi);
  return v;
}

Polynomial random_polynomial(Rng& rng, int nvars, int deg, double scale) {
  Polynomial p(nvars);
  for (const auto& exps : monomials_up_to(nvars, deg))
    p.add_term(exps, scale * rng.uniform(-1.0, 1.0));
  return p;
}

}  // namespace gjet

#pragma once

#include "berger/polynomial.hpp"
#include "berger/types.hpp"

#include <functional>
#include <optional>
#include <vector>

namespace berger {

/// Re (x + i y)^{2s} in the pair x = x_j, y = x_{m+1+j} (axis j is 1-based).
Polynomial f2s(int s, int axis, int m);

/// V(f)(x) = df_x(Jx), as a polynomial.
Polynomial vertical_derivative(const Polynomial& f);

/// True when Hess f(u, Jv) = Hess f(Ju, v) holds identically, i.e. the
/// polynomial matrix H J + J H vanishes.
bool check_jhess(const Polynomial& f);

/// True when f is homogeneous, harmonic and satisfies check_jhess: the class
/// on which Delta^mu and Delta^mu_v act by the constants below.
bool in_hopf_eigen_class(const Polynomial& f);

struct ProportionalityReport {
  double constant = 0.0;          // least-squares fit of Op(f) = c f at the samples
  std::optional<double> expected; // closed-form constant when f is in the class
  std::optional<Rational> exact_ratio;  // set when the identity holds as polynomials
  double max_residual = 0.0;      // max |Op(f) - c f| over samples, c = expected if known
  double relative_residual = 0.0; // max_residual / (max(|c|, 1) max |f|)
  bool in_hypothesis_class = false;
};

/// Berger Laplacian -tr Hess^mu f at p, assembled in an adapted frame with the
/// eps_mu sign on the vertical slot.
double berger_laplacian_at(const Polynomial& f, const BergerContext& ctx, const Vec& p);

ProportionalityReport laplacian_berger(const Polynomial& f, const BergerContext& ctx, const std::vector<Vec>& points);
ProportionalityReport vertical_laplacian(const Polynomial& f, const BergerContext& ctx, const std::vector<Vec>& points);

/// lambda^mu_{k,l} = k(k+2m) - l^2 + l^2/mu, k >= l >= 0.
double mixed_eigenvalue(int k, int l, double mu, int m);

/// Level indices of a simultaneous eigenfunction: Delta f = k(k+2m) f and
/// V(V(f)) = -l^2 f.
struct EigenRecord {
  int k = 0;
  int l = 0;
  EigenRecord(int k, int l);
  double laplace_eigenvalue(int m) const { return k * (k + 2.0 * m); }
  double vertical_eigenvalue() const { return static_cast<double>(l) * l; }
  double berger_eigenvalue(double mu, int m) const { return mixed_eigenvalue(k, l, mu, m); }
};

/// Component of f along V-flow frequency l at p, from the Fourier series of
/// t -> f(cos t p + sin t Jp) on 4(deg f + 1) samples.
double tanno_project(const Polynomial& f, int l, const Vec& p);

/// -d^2/dt^2 of t -> g(cos t p + sin t Jp) at t = 0, by spectral
/// differentiation on n samples; this is -V(V(g)) at p for unit p.
double vertical_second_derivative(const std::function<double(const Vec&)>& g, const Vec& p, int n);

}  // namespace berger

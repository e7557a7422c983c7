#pragma once

#include "berger/polynomial.hpp"
#include "berger/types.hpp"

#include <json.hpp>

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace berger {

enum class RuleKind {
  ExactMoments,   // closed-form monomial moments; polynomial integrands only
  HopfProductS3,  // z1 = cos(eta) e^{i xi1}, z2 = sin(eta) e^{i xi2}; m = 1 only
  TorusProduct,   // z_j = r_j e^{i theta_j} with (r_j^2) on the simplex; any m
  MonteCarlo,
};

std::string to_string(RuleKind kind);

/// Nodes and weights for the round measure on S^{2m+1}. Weights are positive
/// and sum to vol(S^{2m+1}) for the node-based kinds.
struct QuadratureRule {
  RuleKind kind = RuleKind::ExactMoments;
  int m = 1;
  int n_angle = 0;   // equispaced nodes per circle
  int n_radial = 0;  // Gauss-Legendre nodes per simplex coordinate
  std::size_t samples = 0;
  std::uint64_t seed = 0;
  std::vector<Vec> nodes;
  std::vector<double> weights;

  bool has_nodes() const { return kind != RuleKind::ExactMoments; }
  nlohmann::json descriptor() const;
};

struct Estimate {
  double value = 0.0;
  double std_error = 0.0;  // zero for deterministic rules
};

QuadratureRule exact_moment_rule(int m);
/// Exact for polynomials of degree < n_xi when n_eta > degree / 4.
QuadratureRule hopf_product_rule(int n_eta, int n_xi);
QuadratureRule torus_product_rule(int m, int n_angle, int n_radial);
/// Smallest product rule that integrates every polynomial of the given
/// degree exactly (Hopf coordinates for m = 1).
QuadratureRule product_rule_for_degree(int m, int degree);
QuadratureRule monte_carlo_rule(int m, std::size_t n, std::uint64_t seed);
/// {"rule":"exact|hopf|torus|mc","n":...,"seed":...}; missing node counts
/// are derived from degree_hint.
QuadratureRule rule_from_json(const nlohmann::json& j, int m, int degree_hint);

/// Gauss-Legendre nodes and weights on [0, 1].
void gauss_legendre_unit(int n, std::vector<double>& nodes, std::vector<double>& weights);

double sphere_volume(int m);
/// Integral of prod x_i^{a_i} over S^{2m+1} divided by pi^{m+1}; zero when
/// any exponent is odd. Throws on negative exponents.
Rational sphere_moment_exact(const std::vector<int>& exponents);
double sphere_moment(const std::vector<int>& exponents);
/// Same over the unit ball B^{2m+2}.
Rational ball_moment_exact(const std::vector<int>& exponents);
double ball_moment(const std::vector<int>& exponents);

/// Round-measure integral of f over S^{2m+1} divided by pi^{m+1}.
Rational sphere_integral_exact(const Polynomial& f);
double sphere_integral(const Polynomial& f);
double pi_power(int k);

/// Integral over (S^{2m+1}, g_mu): sqrt|mu| times the round integral.
Estimate integrate_sphere(const std::function<double(const Vec&)>& f, const QuadratureRule& rule,
                          const BergerContext& ctx);
Estimate integrate_sphere(const Polynomial& f, const QuadratureRule& rule, const BergerContext& ctx);

/// Round-measure integrals of k integrands at once. For Monte Carlo rules the
/// standard errors are written to std_errors when it is non-null.
std::vector<double> integrate_round(const std::function<void(const Vec& p, double* out)>& f, int k,
                                    const QuadratureRule& rule, std::vector<double>* std_errors = nullptr);
/// Same, passing the node index so callers can reuse per-node caches.
std::vector<double> integrate_round_indexed(const std::function<void(std::size_t i, const Vec& p, double* out)>& f,
                                            int k, const QuadratureRule& rule,
                                            std::vector<double>* std_errors = nullptr);

}  // namespace berger

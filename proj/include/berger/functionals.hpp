#pragma once

#include "berger/fields.hpp"
#include "berger/quadrature.hpp"

#include <json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace berger {

enum class FunctionalKind { Energy, Volume, GeneralizedEnergy };

struct FunctionalId {
  FunctionalKind kind = FunctionalKind::Energy;
  double lambda = 0.0;  // GeneralizedEnergy only

  static FunctionalId energy() { return {FunctionalKind::Energy, 0.0}; }
  static FunctionalId volume() { return {FunctionalKind::Volume, 0.0}; }
  /// Throws InvalidArgument for lambda == 0.
  static FunctionalId generalized(double lambda);
  /// "energy", "volume" or "egl".
  std::string name() const;
  nlohmann::json to_json() const;
};

/// Parses "energy" | "volume" | "egl"; lambda is required for "egl".
FunctionalId functional_from_name(const std::string& name, std::optional<double> lambda);

/// Round-measure integrals of a horizontal field A:
///   ia  = int |A|^2,  ib = int sum_{ij} <nabla_{E_i} A, E_j>^2 (horizontal block),
///   ivv = int |nabla_V A|^2,  ivj = int <nabla_V A, JA>.
struct FieldMoments {
  double ia = 0.0, ib = 0.0, ivv = 0.0, ivj = 0.0;
};

/// Exact values divided by pi^{m+1}.
struct ExactFieldMoments {
  int m = 1;
  Rational ia, ib, ivv, ivj;
  FieldMoments values() const;
};

ExactFieldMoments field_moments_exact(const TangentField& a);

/// Hopf Hessian assembled from the four moments (any sign of mu, lambda).
double hess_hopf_from_moments(const FieldMoments& mom, const FunctionalId& id, const BergerContext& ctx);

/// Closed-form Hopf Hessian. ExactMoments rules use field_moments_exact; node
/// rules integrate the pointwise integrand, with |nabla^mu A|^2 taken as the
/// signed trace over an adapted frame.
double hess_hopf_closed(const TangentField& a, const FunctionalId& id, const BergerContext& ctx,
                        const QuadratureRule& rule);

/// Coefficients of int |C_{2s}|^2 dv_mu. s may be any positive real; s = 1/2
/// reproduces the A_a directions (f linear).
struct C2sCoefficients {
  std::optional<double> e_lambda;
  double energy = 0.0;  // (2/mu)(mu^2(1-m) + mu(2s-1)(m+1) + 2s^2)
  double f_vol = 0.0;   // f(s, m, mu)
  double volume = 0.0;  // (2/mu)(1+|mu|)^{m-2} f_vol
  std::optional<double> generalized;  // sqrt|lambda/mu| e_lambda
};

C2sCoefficients hess_c2s_coefficients(double s, int m, double mu, std::optional<double> lambda);

/// Lorentzian A_a Hessians per unit of int |A_a|^2 dv_mu (mu < 0).
struct AaLorentzCoefficients {
  double energy = 0.0;  // (1-2m)mu + 2 + (mu-1)^2/mu
  double volume = 0.0;  // (1-mu)^{m-2} f(m, mu)
};
AaLorentzCoefficients aa_lorentz_coefficients(int m, double mu);

/// sqrt|lambda/mu| (2L - mu + (mu-L-2)^2/lambda): coefficient of
/// int |A|^2 dv_mu for A = a_1 E_1 + a_2 E_2 with nabla_V A = -(L+1) JA on S^3
/// (L = 0 is the frame field E_1).
double s3_coefficient(int level, double mu, double lambda);

/// Published coefficient of int |A|^2 dv_mu for the direction family, when
/// one exists for the functional.
std::optional<double> published_coefficient(const TangentField& a, const FunctionalId& id, const BergerContext& ctx);

/// Exact D^C energy for A = a_1 E_1 + a_2 E_2 on S^3, B_i^j = E_i(a_j).
struct DbarCReport {
  int level = 0;
  Rational sum_b2;       // int sum (B_i^j)^2 dv / pi^2
  Rational cross;        // int (B_2^1 B_1^2 - B_2^2 B_1^1) dv / pi^2
  Rational norm_a2;      // int (a_1^2 + a_2^2) dv / pi^2
  Rational dbarc_round;  // sum_b2 - 2 cross = int 1/2 |D^C A|^2 dv / pi^2
  double dbarc = 0.0;    // int 1/2 |D^C A|^2 dv_mu
  double hessian = 0.0;  // sqrt|lambda/mu| int ((coefficient) |A|^2 + 1/2 |D^C A|^2) dv_mu
};

DbarCReport hess_s3_dbarC(const S3EigenPair& pair, double mu, double lambda);
DbarCReport hess_s3_dbarC(const TangentField& a, int level, const Polynomial& a1, const Polynomial& a2, double mu,
                          double lambda);

/// Functional value at a g_mu-unit field W (timelike when mu < 0).
double evaluate_functional(const AmbientField& w, const FunctionalId& id, const BergerContext& ctx,
                           const QuadratureRule& rule);

/// A, DA sampled at the nodes of a rule; reused across mu and functionals.
class FieldSamples {
 public:
  FieldSamples(const TangentField& a, QuadratureRule rule);
  const QuadratureRule& rule() const noexcept { return rule_; }
  const std::vector<Vec>& values() const noexcept { return values_; }
  const std::vector<Mat>& jacobians() const noexcept { return jacobians_; }
  double max_norm() const noexcept { return max_norm_; }
  int m() const noexcept { return rule_.m; }

 private:
  QuadratureRule rule_;
  std::vector<Vec> values_;
  std::vector<Mat> jacobians_;
  double max_norm_ = 0.0;
};

/// Smallest node rule that integrates the second-variation integrand of a
/// field of this ambient degree exactly.
QuadratureRule fd_rule_for(const TangentField& a);

struct SecondVariation {
  double second = 0.0;  // Richardson (4 D(h) - D(2h)) / 3
  double first = 0.0;   // fourth-order central first derivative
  double d_h = 0.0;
  double d_2h = 0.0;
  double h = 0.0;
};

/// d/dt and d^2/dt^2 at t = 0 of the functional along
/// W_t = (V^mu + tA)/sqrt(1 + eps_mu t^2 |A|^2). h <= 0 selects 0.005/max|A|.
SecondVariation second_variation_fd(const FieldSamples& samples, const FunctionalId& id, const BergerContext& ctx,
                                    double h = 0.0);
SecondVariation second_variation_fd(const TangentField& a, const FunctionalId& id, const BergerContext& ctx,
                                    const QuadratureRule& rule, double h = 0.0);

/// omega(X) = C^1_1 nabla K (X) at p, by central differences (step 1e-5)
/// of K along the geodesics of the frame directions. K is
/// sqrt|det P| P^{-1} (nabla V^mu)^t for the energies and
/// sqrt(det L) L^{-1} (nabla V^mu)^t for the volume.
double omega_fd(const Vec& p, const Vec& x, const FunctionalId& id, const BergerContext& ctx);

/// Second elementary symmetric function sum_{i<j} k_i k_j.
double sigma2(const Mat& m);

/// Hessian from the general second-variation formulas, assembled pointwise
/// in adapted frames. The omega term is evaluated by omega_fd; its sign
/// flips on Lorentzian spheres.
double hess_general_forms(const TangentField& a, const FunctionalId& id, const BergerContext& ctx,
                          const QuadratureRule& rule);

/// |a - b| / max(|b|, scale).
double relative_error(double a, double b, double scale);

struct HessianOptions {
  bool finite_differences = true;
  bool general_forms = true;
  std::optional<QuadratureRule> node_rule;  // defaults to fd_rule_for(a)
};

struct HessianReport {
  FunctionalId functional;
  int m = 1;
  double mu = 0.0;
  double lambda = 0.0;
  FieldDescriptor direction;
  std::optional<double> coefficient;  // published coefficient, when one exists
  double norm_sq = 0.0;               // int |A|^2 dv_mu
  double closed_form = 0.0;           // coefficient * norm_sq, else the exact Hopf Hessian
  double exact = 0.0;                 // Hopf Hessian integrand under exact moments
  std::optional<double> general;      // general formulas
  std::optional<double> fd;
  std::optional<double> fd_first;
  double rel_err = 0.0;               // worst relative discrepancy against closed_form
  std::string verdict;                // negative | positive | zero | inconsistent | error
  std::string error;

  nlohmann::json to_json() const;
  static std::string csv_header();
  std::string csv_row() const;
};

HessianReport hessian_report(const TangentField& a, const FunctionalId& id, const BergerContext& ctx,
                             const HessianOptions& options = {});
/// Same, reusing precomputed node samples for the finite-difference and
/// general-form oracles.
HessianReport hessian_report(const TangentField& a, const ExactFieldMoments& moments, const FieldSamples* samples,
                             const FunctionalId& id, const BergerContext& ctx, const HessianOptions& options = {});

}  // namespace berger

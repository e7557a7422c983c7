#pragma once

#include "berger/functionals.hpp"

#include <optional>
#include <string>
#include <vector>

namespace berger {

enum class Region { Stable, Unstable, Unknown };

std::string to_string(Region region);

/// Direction with a negative Hessian. family "C2s" carries the half degree s;
/// family "s3" carries the level (0 for the frame field E_1).
struct Witness {
  std::string family;
  int s = 0;
  double coefficient = 0.0;  // Hessian per unit of int |A|^2 dv_mu
  bool revalidated = false;  // exact-moment Hopf Hessian confirmed negative
};

struct StabilityClassification {
  Region region = Region::Unknown;
  std::string predicate;
  std::optional<Witness> witness;
  std::vector<std::string> flags;  // further predicates that also apply
  bool doubly_classified = false;
};

/// m = 1, mu > 0, lambda > 0, generalized energy E_{g_lambda}.
StabilityClassification classify_s3(double mu, double lambda);

/// Strongest applicable predicate for (m, mu) and the functional; lambda is
/// read from id for the generalized energy.
StabilityClassification classify_general(int m, double mu, const FunctionalId& id, int s_max = 64);

/// Coefficient of the C_{2s} Hessian for the functional.
double c2s_witness_coefficient(int m, double mu, const FunctionalId& id, int s);

/// Smallest s <= s_max whose C_{2s} coefficient is strictly negative,
/// re-validated against the exact-moment Hopf Hessian.
std::optional<Witness> instability_witness(int m, double mu, const FunctionalId& id, int s_max);

/// Sign of the exact Hopf Hessian on the witness direction.
double revalidate_witness(const Witness& w, int m, double mu, const FunctionalId& id);

struct Polyline {
  std::string name;
  std::vector<std::pair<double, double>> points;
};

struct PhaseGrid {
  int m = 1;
  std::vector<double> mu;
  std::vector<double> lambda;
  std::vector<StabilityClassification> cells;  // row-major: index = i_mu * lambda.size() + i_lambda
  std::vector<Polyline> boundaries;
  std::size_t stable = 0, unstable = 0, unknown = 0, doubly = 0;

  const StabilityClassification& at(std::size_t i_mu, std::size_t i_lambda) const {
    return cells[i_mu * lambda.size() + i_lambda];
  }
};

/// Classifies the inclusive linspace grid of E_{g_lambda} over the two ranges.
PhaseGrid figure1_grid(int m, double mu_lo, double mu_hi, double lambda_lo, double lambda_hi, int resolution);

/// The three boundary curves, sampled on n points of [mu_lo, mu_hi].
std::vector<Polyline> boundary_curves(double mu_lo, double mu_hi, double lambda_hi, int n);

/// Meeting point of lambda = (mu-2)^2/mu and lambda = (mu-3)^2/(mu-2), by bisection.
std::pair<double, double> boundary_intersection();

std::string grid_csv(const PhaseGrid& grid);
std::string grid_svg(const PhaseGrid& grid);

}  // namespace berger

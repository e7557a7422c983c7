#pragma once

#include "berger/types.hpp"

#include <gmpxx.h>
#include <json.hpp>

#include <map>
#include <vector>

namespace berger {

using Rational = mpq_class;

/// Multivariate polynomial on R^n with exact rational coefficients.
/// Zero coefficients are never stored.
class Polynomial {
 public:
  using Exponents = std::vector<int>;
  using Terms = std::map<Exponents, Rational>;

  explicit Polynomial(int nvars = 0) : nvars_(nvars) {}

  static Polynomial constant(int nvars, const Rational& c);
  static Polynomial variable(int nvars, int index);
  static Polynomial monomial(int nvars, Exponents e, const Rational& c);

  int nvars() const noexcept { return nvars_; }
  const Terms& terms() const noexcept { return terms_; }
  std::size_t size() const noexcept { return terms_.size(); }
  bool is_zero() const noexcept { return terms_.empty(); }
  /// Total degree; -1 for the zero polynomial.
  int degree() const;
  bool is_homogeneous() const;
  Rational coefficient(const Exponents& e) const;

  void add_term(const Exponents& e, const Rational& c);

  Polynomial derivative(int i) const;
  double evaluate(const Vec& x) const;
  Polynomial pow(int k) const;

  Polynomial& operator+=(const Polynomial& o);
  Polynomial& operator-=(const Polynomial& o);
  Polynomial& operator*=(const Rational& c);
  Polynomial operator-() const;

  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator*(Polynomial a, const Rational& c) { return a *= c; }
  friend Polynomial operator*(const Rational& c, Polynomial a) { return a *= c; }
  friend bool operator==(const Polynomial& a, const Polynomial& b) {
    return a.nvars_ == b.nvars_ && a.terms_ == b.terms_;
  }

 private:
  void check_same_space(const Polynomial& o) const;

  int nvars_;
  Terms terms_;
};

using PolyVector = std::vector<Polynomial>;
using PolyMatrix = std::vector<PolyVector>;

std::vector<Polynomial> gradient(const Polynomial& f);
PolyMatrix hessian(const Polynomial& f);
PolyMatrix jacobian(const PolyVector& field);
Polynomial laplacian(const Polynomial& f);
Polynomial dot(const PolyVector& a, const PolyVector& b);
/// Matrix-vector product for polynomial matrices and vectors.
PolyVector apply(const PolyMatrix& a, const PolyVector& v);
PolyVector scale(const PolyVector& v, const Polynomial& s);
PolyVector add(const PolyVector& a, const PolyVector& b);
PolyVector subtract(const PolyVector& a, const PolyVector& b);
/// The coordinate vector field x -> x.
PolyVector position_field(int nvars);

/// Binomial coefficient as an exact integer.
mpz_class binomial(int n, int k);

/// Serialized as a list of {"exponents": [...], "coeff": "p/q"} terms.
nlohmann::json to_json(const Polynomial& p);
Polynomial polynomial_from_json(const nlohmann::json& j, int nvars);
std::string to_string(const Polynomial& p);

/// Double-precision evaluator for a set of polynomials sharing a variable
/// space. Values and first derivatives are evaluated together from one power
/// table.
class CompiledPolyVector {
 public:
  CompiledPolyVector() = default;
  explicit CompiledPolyVector(const PolyVector& components);

  int nvars() const noexcept { return nvars_; }
  int size() const noexcept { return static_cast<int>(components_.size()); }

  Vec value(const Vec& x) const;
  /// Row i holds the gradient of component i.
  Mat jacobian(const Vec& x) const;
  void value_and_jacobian(const Vec& x, Vec& value, Mat& jac) const;

 private:
  struct Term {
    std::vector<int> exps;
    double coeff;
  };
  void fill_powers(const Vec& x, std::vector<double>& powers) const;

  int nvars_ = 0;
  int max_degree_ = 0;
  std::vector<std::vector<Term>> components_;
};

}  // namespace berger

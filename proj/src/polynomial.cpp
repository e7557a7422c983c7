#include "berger/polynomial.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace berger {

Polynomial Polynomial::constant(int nvars, const Rational& c) {
  Polynomial p(nvars);
  p.add_term(Exponents(nvars, 0), c);
  return p;
}

Polynomial Polynomial::variable(int nvars, int index) {
  if (index < 0 || index >= nvars)
    throw Error(ErrorCode::InvalidArgument, "variable index out of range");
  Exponents e(nvars, 0);
  e[index] = 1;
  Polynomial p(nvars);
  p.add_term(e, Rational(1));
  return p;
}

Polynomial Polynomial::monomial(int nvars, Exponents e, const Rational& c) {
  if (static_cast<int>(e.size()) != nvars)
    throw Error(ErrorCode::DimensionMismatch, "monomial exponent length mismatch");
  Polynomial p(nvars);
  p.add_term(e, c);
  return p;
}

int Polynomial::degree() const {
  int d = -1;
  for (const auto& [e, c] : terms_)
    d = std::max(d, std::accumulate(e.begin(), e.end(), 0));
  return d;
}

bool Polynomial::is_homogeneous() const {
  int d = -1;
  for (const auto& [e, c] : terms_) {
    int de = std::accumulate(e.begin(), e.end(), 0);
    if (d >= 0 && de != d) return false;
    d = de;
  }
  return true;
}

Rational Polynomial::coefficient(const Exponents& e) const {
  auto it = terms_.find(e);
  return it == terms_.end() ? Rational(0) : it->second;
}

void Polynomial::add_term(const Exponents& e, const Rational& c) {
  if (static_cast<int>(e.size()) != nvars_)
    throw Error(ErrorCode::DimensionMismatch, "term exponent length mismatch");
  if (sgn(c) == 0) return;
  auto [it, inserted] = terms_.try_emplace(e, c);
  if (!inserted) {
    it->second += c;
    if (sgn(it->second) == 0) terms_.erase(it);
  }
}

void Polynomial::check_same_space(const Polynomial& o) const {
  if (o.nvars_ != nvars_)
    throw Error(ErrorCode::DimensionMismatch, "polynomials live in different spaces");
}

Polynomial Polynomial::derivative(int i) const {
  if (i < 0 || i >= nvars_) throw Error(ErrorCode::InvalidArgument, "derivative index out of range");
  Polynomial d(nvars_);
  for (const auto& [e, c] : terms_) {
    if (e[i] == 0) continue;
    Exponents de = e;
    de[i] -= 1;
    d.add_term(de, c * e[i]);
  }
  return d;
}

double Polynomial::evaluate(const Vec& x) const {
  if (x.size() != nvars_) throw Error(ErrorCode::DimensionMismatch, "evaluation point has wrong dimension");
  double sum = 0.0;
  for (const auto& [e, c] : terms_) {
    double t = c.get_d();
    for (int i = 0; i < nvars_; ++i)
      for (int k = 0; k < e[i]; ++k) t *= x[i];
    sum += t;
  }
  return sum;
}

Polynomial Polynomial::pow(int k) const {
  if (k < 0) throw Error(ErrorCode::InvalidArgument, "negative polynomial power");
  Polynomial result = constant(nvars_, 1);
  Polynomial base = *this;
  while (k > 0) {
    if (k & 1) result = result * base;
    k >>= 1;
    if (k) base = base * base;
  }
  return result;
}

Polynomial& Polynomial::operator+=(const Polynomial& o) {
  check_same_space(o);
  for (const auto& [e, c] : o.terms_) add_term(e, c);
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& o) {
  check_same_space(o);
  for (const auto& [e, c] : o.terms_) add_term(e, -c);
  return *this;
}

Polynomial& Polynomial::operator*=(const Rational& c) {
  if (sgn(c) == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& [e, v] : terms_) v *= c;
  return *this;
}

Polynomial Polynomial::operator-() const {
  Polynomial r = *this;
  for (auto& [e, v] : r.terms_) v = -v;
  return r;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  a.check_same_space(b);
  Polynomial r(a.nvars_);
  Polynomial::Exponents e(a.nvars_);
  for (const auto& [ea, ca] : a.terms_) {
    for (const auto& [eb, cb] : b.terms_) {
      for (int i = 0; i < a.nvars_; ++i) e[i] = ea[i] + eb[i];
      auto [it, inserted] = r.terms_.try_emplace(e, ca * cb);
      if (!inserted) it->second += ca * cb;
    }
  }
  std::erase_if(r.terms_, [](const auto& kv) { return sgn(kv.second) == 0; });
  return r;
}

std::vector<Polynomial> gradient(const Polynomial& f) {
  std::vector<Polynomial> g;
  g.reserve(f.nvars());
  for (int i = 0; i < f.nvars(); ++i) g.push_back(f.derivative(i));
  return g;
}

PolyMatrix hessian(const Polynomial& f) {
  PolyMatrix h;
  for (int i = 0; i < f.nvars(); ++i) {
    Polynomial di = f.derivative(i);
    PolyVector row;
    for (int j = 0; j < f.nvars(); ++j) row.push_back(di.derivative(j));
    h.push_back(std::move(row));
  }
  return h;
}

PolyMatrix jacobian(const PolyVector& field) {
  PolyMatrix jac;
  for (const auto& c : field) jac.push_back(gradient(c));
  return jac;
}

Polynomial laplacian(const Polynomial& f) {
  Polynomial l(f.nvars());
  for (int i = 0; i < f.nvars(); ++i) l += f.derivative(i).derivative(i);
  return l;
}

Polynomial dot(const PolyVector& a, const PolyVector& b) {
  if (a.size() != b.size() || a.empty())
    throw Error(ErrorCode::DimensionMismatch, "dot product of mismatched polynomial vectors");
  Polynomial s(a.front().nvars());
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

PolyVector apply(const PolyMatrix& a, const PolyVector& v) {
  PolyVector r;
  for (const auto& row : a) r.push_back(dot(row, v));
  return r;
}

PolyVector scale(const PolyVector& v, const Polynomial& s) {
  PolyVector r;
  for (const auto& c : v) r.push_back(c * s);
  return r;
}

PolyVector add(const PolyVector& a, const PolyVector& b) {
  if (a.size() != b.size()) throw Error(ErrorCode::DimensionMismatch, "vector length mismatch");
  PolyVector r = a;
  for (std::size_t i = 0; i < a.size(); ++i) r[i] += b[i];
  return r;
}

PolyVector subtract(const PolyVector& a, const PolyVector& b) {
  if (a.size() != b.size()) throw Error(ErrorCode::DimensionMismatch, "vector length mismatch");
  PolyVector r = a;
  for (std::size_t i = 0; i < a.size(); ++i) r[i] -= b[i];
  return r;
}

PolyVector position_field(int nvars) {
  PolyVector x;
  for (int i = 0; i < nvars; ++i) x.push_back(Polynomial::variable(nvars, i));
  return x;
}

mpz_class binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  mpz_class r;
  mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
  return r;
}

nlohmann::json to_json(const Polynomial& p) {
  nlohmann::json terms = nlohmann::json::array();
  for (const auto& [e, c] : p.terms())
    terms.push_back({{"exponents", e}, {"coeff", c.get_str()}});
  return terms;
}

Polynomial polynomial_from_json(const nlohmann::json& j, int nvars) {
  Polynomial p(nvars);
  for (const auto& t : j) {
    Rational c(t.at("coeff").get<std::string>());
    c.canonicalize();
    p.add_term(t.at("exponents").get<Polynomial::Exponents>(), c);
  }
  return p;
}

std::string to_string(const Polynomial& p) {
  if (p.is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  // Highest degree first reads more naturally.
  for (auto it = p.terms().rbegin(); it != p.terms().rend(); ++it) {
    const auto& [e, c] = *it;
    Rational a = abs(c);
    os << (sgn(c) < 0 ? (first ? "-" : " - ") : (first ? "" : " + "));
    bool unit = a == 1;
    bool any = false;
    if (!unit) os << a.get_str();
    for (int i = 0; i < p.nvars(); ++i) {
      if (e[i] == 0) continue;
      os << (unit && !any ? "" : "*") << "x" << (i + 1);
      if (e[i] > 1) os << "^" << e[i];
      any = true;
    }
    if (unit && !any) os << "1";
    first = false;
  }
  return os.str();
}

CompiledPolyVector::CompiledPolyVector(const PolyVector& components) {
  if (components.empty()) return;
  nvars_ = components.front().nvars();
  for (const auto& c : components) {
    if (c.nvars() != nvars_) throw Error(ErrorCode::DimensionMismatch, "mixed variable spaces");
    std::vector<Term> terms;
    for (const auto& [e, coeff] : c.terms()) {
      terms.push_back({e, coeff.get_d()});
      max_degree_ = std::max(max_degree_, *std::max_element(e.begin(), e.end()));
    }
    components_.push_back(std::move(terms));
  }
}

void CompiledPolyVector::fill_powers(const Vec& x, std::vector<double>& powers) const {
  const int stride = max_degree_ + 1;
  powers.assign(static_cast<std::size_t>(nvars_) * stride, 1.0);
  for (int i = 0; i < nvars_; ++i)
    for (int k = 1; k <= max_degree_; ++k) powers[i * stride + k] = powers[i * stride + k - 1] * x[i];
}

Vec CompiledPolyVector::value(const Vec& x) const {
  Vec v;
  Mat j;
  value_and_jacobian(x, v, j);
  return v;
}

Mat CompiledPolyVector::jacobian(const Vec& x) const {
  Vec v;
  Mat j;
  value_and_jacobian(x, v, j);
  return j;
}

void CompiledPolyVector::value_and_jacobian(const Vec& x, Vec& value, Mat& jac) const {
  if (x.size() != nvars_) throw Error(ErrorCode::DimensionMismatch, "evaluation point has wrong dimension");
  thread_local std::vector<double> powers;
  fill_powers(x, powers);
  const int stride = max_degree_ + 1;
  value = Vec::Zero(size());
  jac = Mat::Zero(size(), nvars_);
  for (int c = 0; c < size(); ++c) {
    for (const auto& t : components_[c]) {
      double mono = t.coeff;
      for (int i = 0; i < nvars_; ++i) mono *= powers[i * stride + t.exps[i]];
      value[c] += mono;
      for (int i = 0; i < nvars_; ++i) {
        const int e = t.exps[i];
        if (e == 0) continue;
        double d = t.coeff * e * powers[i * stride + e - 1];
        for (int k = 0; k < nvars_; ++k)
          if (k != i) d *= powers[k * stride + t.exps[k]];
        jac(c, i) += d;
      }
    }
  }
}

}  // namespace berger

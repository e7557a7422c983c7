#include "berger/fields.hpp"

#include "berger/harmonics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace berger {

namespace {

Rational to_rational(double v) {
  if (!std::isfinite(v)) throw Error(ErrorCode::InvalidArgument, "non-finite coefficient");
  return Rational(v);
}

// J applied to a polynomial vector field: (Ju)_k = -u_{k+h}, (Ju)_{k+h} = u_k.
PolyVector complex_structure(const PolyVector& u) {
  const int h = static_cast<int>(u.size()) / 2;
  PolyVector out(u.size(), Polynomial(u.front().nvars()));
  for (int k = 0; k < h; ++k) {
    out[k] = -u[k + h];
    out[k + h] = u[k];
  }
  return out;
}

// E_1 = (-x2, x1, x4, -x3) and E_2 = (-x4, x3, -x2, x1) in zero-based order
// (x1, x2, x3, x4) = (Re z1, Re z2, Im z1, Im z2).
PolyVector quaternion_field(int which) {
  auto x = [](int i) { return Polynomial::variable(4, i); };
  if (which == 1) return {-x(1), x(0), x(3), -x(2)};
  return {-x(3), x(2), -x(1), x(0)};
}

void require_s3(const BergerContext& ctx) {
  if (ctx.m() != 1) throw Error(ErrorCode::Incompatible, "quaternion-frame fields exist on S^3 only (m = 1)");
}

}  // namespace

std::string to_string(FieldFamily family) {
  switch (family) {
    case FieldFamily::Aa: return "Aa";
    case FieldFamily::C2s: return "C2s";
    case FieldFamily::S3: return "s3";
    case FieldFamily::Custom: return "custom";
  }
  return "custom";
}

nlohmann::json FieldDescriptor::to_json() const {
  nlohmann::json j;
  j["family"] = to_string(family);
  switch (family) {
    case FieldFamily::Aa: j["a"] = a; break;
    case FieldFamily::C2s:
      j["s"] = s;
      j["axis"] = axis;
      j["degree"] = 2 * s;
      break;
    case FieldFamily::S3:
      j["level"] = level;
      j["a1"] = a1;
      break;
    case FieldFamily::Custom: break;
  }
  return j;
}

std::string FieldDescriptor::label() const {
  std::ostringstream os;
  switch (family) {
    case FieldFamily::Aa: {
      os << "Aa(";
      for (std::size_t i = 0; i < a.size(); ++i) os << (i ? " " : "") << a[i];
      os << ")";
      break;
    }
    case FieldFamily::C2s: os << "C2s(s=" << s << ",axis=" << axis << ")"; break;
    case FieldFamily::S3:
      if (level == 0)
        os << "s3(E1)";
      else
        os << "s3(level=" << level << ")";
      break;
    case FieldFamily::Custom: os << "custom"; break;
  }
  return os.str();
}

TangentField::TangentField(FieldDescriptor descriptor, PolyVector components)
    : descriptor_(std::move(descriptor)), components_(std::move(components)), compiled_(components_) {
  const int n = static_cast<int>(components_.size());
  if (n < 4 || n % 2) throw Error(ErrorCode::DimensionMismatch, "field must live on R^{2m+2}");
  for (const auto& c : components_)
    if (c.nvars() != n) throw Error(ErrorCode::DimensionMismatch, "component polynomials must have 2m+2 variables");
}

Vec TangentField::value(const Vec& x) const { return compiled_.value(x); }
Mat TangentField::jacobian(const Vec& x) const { return compiled_.jacobian(x); }
void TangentField::value_and_jacobian(const Vec& x, Vec& value, Mat& jac) const {
  compiled_.value_and_jacobian(x, value, jac);
}

int TangentField::degree() const {
  int d = -1;
  for (const auto& c : components_) d = std::max(d, c.degree());
  return d;
}

TangentField horizontal_gradient_field(const Polynomial& f, FieldDescriptor descriptor) {
  const int n = f.nvars();
  PolyVector g = gradient(f);
  PolyVector x = position_field(n);
  PolyVector jx = complex_structure(x);
  PolyVector out = subtract(subtract(g, scale(x, dot(g, x))), scale(jx, dot(g, jx)));
  return TangentField(std::move(descriptor), std::move(out));
}

TangentField field_Aa(const Vec& a, const BergerContext& ctx) {
  if (a.size() != ctx.dim()) throw Error(ErrorCode::DimensionMismatch, "a must have 2m+2 components");
  if (a.norm() == 0.0) throw Error(ErrorCode::InvalidArgument, "A_a needs a nonzero vector a");
  const int n = ctx.dim();
  Polynomial f(n);
  for (int i = 0; i < n; ++i)
    if (a[i] != 0.0) f += Polynomial::variable(n, i) * to_rational(a[i]);
  FieldDescriptor d;
  d.family = FieldFamily::Aa;
  d.a.assign(a.data(), a.data() + a.size());
  return horizontal_gradient_field(f, std::move(d));
}

TangentField field_C2s(int s, int axis, const BergerContext& ctx) {
  FieldDescriptor d;
  d.family = FieldFamily::C2s;
  d.s = s;
  d.axis = axis;
  return horizontal_gradient_field(f2s(s, axis, ctx.m()), std::move(d));
}

S3EigenPair s3_eigenpair(int level) {
  if (level == 1) return s3_eigenpair_from(Polynomial::variable(4, 0), 1);
  if (level == 2) return s3_eigenpair_from(f2s(1, 1, 1), 2);
  throw Error(ErrorCode::InvalidArgument, "S^3 eigenpair level must be 1 or 2");
}

S3EigenPair s3_eigenpair_from(const Polynomial& a1, int level) {
  if (level < 1 || level > 2) throw Error(ErrorCode::InvalidArgument, "S^3 eigenpair level must be 1 or 2");
  if (a1.nvars() != 4) throw Error(ErrorCode::DimensionMismatch, "S^3 eigenpairs live on R^4");
  if (a1.degree() != level || !a1.is_homogeneous() || !laplacian(a1).is_zero())
    throw Error(ErrorCode::NotInHypothesisClass, "a_1 must be a harmonic homogeneous polynomial of degree level");
  const Polynomial va = vertical_derivative(a1);
  if (!(vertical_derivative(va) == a1 * Rational(-level * level)))
    throw Error(ErrorCode::NotInHypothesisClass, "a_1 must satisfy V(V(a_1)) = -level^2 a_1");
  S3EigenPair pair;
  pair.a1 = a1;
  pair.a2 = va * Rational(1, level);
  pair.level = level;
  return pair;
}

TangentField field_s3(const S3EigenPair& pair, const BergerContext& ctx) {
  require_s3(ctx);
  PolyVector out = add(scale(quaternion_field(1), pair.a1), scale(quaternion_field(2), pair.a2));
  FieldDescriptor d;
  d.family = FieldFamily::S3;
  d.level = pair.level;
  d.a1 = to_string(pair.a1);
  return TangentField(std::move(d), std::move(out));
}

TangentField field_s3_frame(const BergerContext& ctx) {
  require_s3(ctx);
  FieldDescriptor d;
  d.family = FieldFamily::S3;
  d.level = 0;
  d.a1 = "1";
  return TangentField(std::move(d), quaternion_field(1));
}

double max_vertical_component(const TangentField& field, const BergerContext& ctx, const std::vector<Vec>& points) {
  double worst = 0.0;
  for (const auto& p : points) {
    const Vec a = field.value(p);
    const Vec v = complex_structure(p) / ctx.sqrt_abs_mu();
    worst = std::max(worst, std::abs(detail::g_mu(p, a, v, ctx.mu())));
  }
  return worst;
}

}  // namespace berger

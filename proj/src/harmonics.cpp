#include "berger/harmonics.hpp"

#include "berger/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

namespace berger {

namespace {

struct GradHess {
  Vec grad;
  Mat hess;
};

class GradientEvaluator {
 public:
  explicit GradientEvaluator(const Polynomial& f) : grad_(gradient(f)) {}
  GradHess at(const Vec& p) const {
    GradHess gh;
    grad_.value_and_jacobian(p, gh.grad, gh.hess);
    return gh;
  }

 private:
  CompiledPolyVector grad_;
};

// Hess^mu f(X, Y) = X(Y f) - (nabla^mu_X Y) f, reduced with the ambient
// gradient and Hessian at p.
double berger_hessian_form(const GradHess& gh, const Vec& p, const Vec& x, const Vec& y, double mu) {
  const double nf = gh.grad.dot(p);
  return x.dot(gh.hess * y) - x.dot(y) * nf - gh.grad.dot(detail::berger_correction(p, x, y, mu));
}

void fill_residuals(ProportionalityReport& r, const std::vector<double>& op, const std::vector<double>& fv) {
  double num = 0.0, den = 0.0, fmax = 0.0;
  for (std::size_t i = 0; i < fv.size(); ++i) {
    num += op[i] * fv[i];
    den += fv[i] * fv[i];
    fmax = std::max(fmax, std::abs(fv[i]));
  }
  r.constant = den > 0 ? num / den : 0.0;
  const double c = r.expected.value_or(r.constant);
  r.max_residual = 0.0;
  for (std::size_t i = 0; i < fv.size(); ++i) r.max_residual = std::max(r.max_residual, std::abs(op[i] - c * fv[i]));
  const double scale = std::max(std::abs(c), 1.0) * fmax;
  r.relative_residual = scale > 0 ? r.max_residual / scale : r.max_residual;
}

}  // namespace

Polynomial f2s(int s, int axis, int m) {
  if (s < 1) throw Error(ErrorCode::InvalidArgument, "f2s needs s >= 1");
  if (m < 1) throw Error(ErrorCode::InvalidArgument, "m must be positive");
  if (axis < 1 || axis > m + 1) throw Error(ErrorCode::InvalidArgument, "axis must lie in 1..m+1");
  const int n = 2 * m + 2;
  const int ix = axis - 1, iy = axis + m;
  Polynomial f(n);
  for (int i = 0; i <= s; ++i) {
    Polynomial::Exponents e(n, 0);
    e[ix] = 2 * (s - i);
    e[iy] = 2 * i;
    f.add_term(e, Rational((i % 2 ? -1 : 1) * binomial(2 * s, 2 * i)));
  }
  return f;
}

Polynomial vertical_derivative(const Polynomial& f) {
  const int n = f.nvars();
  if (n < 4 || n % 2) throw Error(ErrorCode::DimensionMismatch, "polynomial does not live on R^{2m+2}");
  const int h = n / 2;
  Polynomial v(n);
  for (int k = 0; k < h; ++k) {
    // (Jx)_k = -x_{k+h}, (Jx)_{k+h} = x_k
    v -= f.derivative(k) * Polynomial::variable(n, k + h);
    v += f.derivative(k + h) * Polynomial::variable(n, k);
  }
  return v;
}

bool check_jhess(const Polynomial& f) {
  const int n = f.nvars();
  if (n % 2) throw Error(ErrorCode::DimensionMismatch, "odd ambient dimension");
  const int h = n / 2;
  PolyMatrix hs = hessian(f);
  // (H J)_{uv} = sum_w H_{uw} J_{wv}; J_{w,v} = 1 for w = v+h (v < h), -1 for w = v-h.
  auto hj = [&](int u, int v) { return v < h ? hs[u][v + h] : -hs[u][v - h]; };
  auto jh = [&](int u, int v) { return u < h ? -hs[u + h][v] : hs[u - h][v]; };
  for (int u = 0; u < n; ++u)
    for (int v = 0; v < n; ++v)
      if (!(hj(u, v) + jh(u, v)).is_zero()) return false;
  return true;
}

bool in_hopf_eigen_class(const Polynomial& f) {
  return f.is_homogeneous() && laplacian(f).is_zero() && check_jhess(f);
}

double berger_laplacian_at(const Polynomial& f, const BergerContext& ctx, const Vec& p) {
  if (f.nvars() != ctx.dim()) throw Error(ErrorCode::DimensionMismatch, "polynomial does not match the context");
  GradientEvaluator ev(f);
  const GradHess gh = ev.at(p);
  const Mat frame = detail::adapted_frame_matrix(p, ctx);
  const Vec sig = detail::frame_signature(ctx);
  double tr = 0.0;
  for (int a = 0; a < frame.cols(); ++a)
    tr += sig[a] * berger_hessian_form(gh, p, frame.col(a), frame.col(a), ctx.mu());
  return -tr;
}

ProportionalityReport laplacian_berger(const Polynomial& f, const BergerContext& ctx, const std::vector<Vec>& points) {
  if (f.nvars() != ctx.dim()) throw Error(ErrorCode::DimensionMismatch, "polynomial does not match the context");
  ProportionalityReport r;
  r.in_hypothesis_class = in_hopf_eigen_class(f);
  if (r.in_hypothesis_class) {
    const double s = f.degree();
    r.expected = 2.0 * ctx.m() * s + s * s / ctx.mu();
  }
  GradientEvaluator ev(f);
  const Vec sig = detail::frame_signature(ctx);
  std::vector<double> op, fv;
  for (const auto& p : points) {
    const GradHess gh = ev.at(p);
    const Mat frame = detail::adapted_frame_matrix(p, ctx);
    double tr = 0.0;
    for (int a = 0; a < frame.cols(); ++a)
      tr += sig[a] * berger_hessian_form(gh, p, frame.col(a), frame.col(a), ctx.mu());
    op.push_back(-tr);
    fv.push_back(f.evaluate(p));
  }
  fill_residuals(r, op, fv);
  return r;
}

ProportionalityReport vertical_laplacian(const Polynomial& f, const BergerContext& ctx, const std::vector<Vec>& points) {
  if (f.nvars() != ctx.dim()) throw Error(ErrorCode::DimensionMismatch, "polynomial does not match the context");
  ProportionalityReport r;
  r.in_hypothesis_class = in_hopf_eigen_class(f);
  const Polynomial vvf = vertical_derivative(vertical_derivative(f));
  // -eps V^mu(V^mu f) = -(1/mu) V(V f)
  if (!f.is_zero()) {
    const auto& [e0, c0] = *f.terms().begin();
    Rational ratio = -vvf.coefficient(e0) / c0;
    if (vvf == f * (-ratio)) {
      r.exact_ratio = ratio;
      r.expected = ratio.get_d() / ctx.mu();
    }
  }
  if (!r.expected && r.in_hypothesis_class) {
    const double s = f.degree();
    r.expected = s * s / ctx.mu();
  }
  std::vector<double> op, fv;
  for (const auto& p : points) {
    op.push_back(-vvf.evaluate(p) / ctx.mu());
    fv.push_back(f.evaluate(p));
  }
  fill_residuals(r, op, fv);
  return r;
}

double mixed_eigenvalue(int k, int l, double mu, int m) {
  if (l < 0 || k < l) throw Error(ErrorCode::InvalidArgument, "mixed eigenvalue needs k >= l >= 0");
  if (mu == 0.0) throw Error(ErrorCode::InvalidArgument, "mu must be nonzero");
  const double ll = static_cast<double>(l) * l;
  return k * (k + 2.0 * m) - ll + ll / mu;
}

EigenRecord::EigenRecord(int k_, int l_) : k(k_), l(l_) {
  if (l < 0 || k < l || (k - l) % 2 != 0)
    throw Error(ErrorCode::InvalidArgument, "eigen levels need k >= l >= 0 with k - l even");
}

double tanno_project(const Polynomial& f, int l, const Vec& p) {
  const int deg = f.degree();
  if (deg < 0) return 0.0;
  if (l < 0 || l > deg || (deg - l) % 2 != 0)
    throw Error(ErrorCode::InvalidArgument, "component index must satisfy 0 <= l <= deg f with matching parity");
  const int n = 4 * (deg + 1);
  const Vec jp = complex_structure(p);
  std::complex<double> c{0.0, 0.0};
  for (int k = 0; k < n; ++k) {
    const double t = 2.0 * std::numbers::pi * k / n;
    c += f.evaluate(std::cos(t) * p + std::sin(t) * jp) * std::polar(1.0, -l * t);
  }
  c /= static_cast<double>(n);
  return l == 0 ? c.real() : 2.0 * c.real();
}

double vertical_second_derivative(const std::function<double(const Vec&)>& g, const Vec& p, int n) {
  const Vec jp = complex_structure(p);
  std::vector<double> samples(n);
  for (int k = 0; k < n; ++k) {
    const double t = 2.0 * std::numbers::pi * k / n;
    samples[k] = g(std::cos(t) * p + std::sin(t) * jp);
  }
  // -g''(0) = sum_q q^2 c_q over the resolved frequencies.
  double result = 0.0;
  for (int q = -(n / 2 - 1); q <= n / 2 - 1; ++q) {
    std::complex<double> c{0.0, 0.0};
    for (int k = 0; k < n; ++k) c += samples[k] * std::polar(1.0, -2.0 * std::numbers::pi * q * k / n);
    result += static_cast<double>(q) * q * (c.real() / n);
  }
  return result;
}

}  // namespace berger

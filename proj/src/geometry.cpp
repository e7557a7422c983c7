#include "berger/geometry.hpp"

#include <cmath>

namespace berger {

BergerContext::BergerContext(int m, double mu) : m_(m), mu_(mu) {
  if (m < 1) throw Error(ErrorCode::InvalidArgument, "m must be a positive integer");
  if (!(mu != 0.0) || !std::isfinite(mu)) throw Error(ErrorCode::InvalidArgument, "mu must be finite and nonzero");
  eps_ = sign_of(mu);
  sqrt_abs_mu_ = std::sqrt(std::abs(mu));
}

SpherePoint::SpherePoint(Vec position) : position_(std::move(position)) {
  if (position_.size() < 4 || position_.size() % 2 != 0)
    throw Error(ErrorCode::DimensionMismatch, "sphere points live in R^{2m+2}, m >= 1");
  if (std::abs(position_.squaredNorm() - 1.0) > kSphereTol)
    throw Error(ErrorCode::NotOnSphere, "point is not on the unit sphere");
}

SpherePoint SpherePoint::normalized(const Vec& v) {
  const double n = v.norm();
  if (n == 0.0) throw Error(ErrorCode::InvalidArgument, "cannot normalize the zero vector");
  return SpherePoint(v / n);
}

TangentVector::TangentVector(SpherePoint base, Vec vec) : base_(std::move(base)), vec_(std::move(vec)) {
  if (vec_.size() != base_.dim()) throw Error(ErrorCode::DimensionMismatch, "tangent vector dimension mismatch");
  if (std::abs(vec_.dot(base_.position())) > kTangentTol)
    throw Error(ErrorCode::NotTangent, "vector is not tangent to the sphere");
}

Mat AmbientField::jacobian(const Vec& x) const {
  const int n = dim();
  Mat jac(n, n);
  for (int i = 0; i < n; ++i) {
    Vec xp = x, xm = x;
    xp[i] += kFdStep;
    xm[i] -= kFdStep;
    jac.col(i) = (value(xp) - value(xm)) / (2.0 * kFdStep);
  }
  return jac;
}

Vec HopfAmbientField::value(const Vec& x) const { return complex_structure(x) / ctx_.sqrt_abs_mu(); }

Mat HopfAmbientField::jacobian(const Vec&) const {
  return complex_structure_matrix(ctx_.m()) / ctx_.sqrt_abs_mu();
}

Vec complex_structure(const Vec& u) {
  const auto n = u.size();
  if (n < 2 || n % 2 != 0) throw Error(ErrorCode::DimensionMismatch, "J needs an even dimension");
  const auto h = n / 2;
  Vec r(n);
  r.head(h) = -u.tail(h);
  r.tail(h) = u.head(h);
  return r;
}

Vec complex_structure(const Vec& u, int m) {
  if (u.size() != 2 * m + 2) throw Error(ErrorCode::DimensionMismatch, "vector dimension is not 2m+2");
  return complex_structure(u);
}

Mat complex_structure_matrix(int m) {
  const int h = m + 1;
  Mat j = Mat::Zero(2 * h, 2 * h);
  for (int k = 0; k < h; ++k) {
    j(k + h, k) = 1.0;
    j(k, k + h) = -1.0;
  }
  return j;
}

TangentVector hopf_field(const SpherePoint& p, const BergerContext& ctx) {
  if (p.dim() != ctx.dim()) throw Error(ErrorCode::DimensionMismatch, "point does not match context dimension");
  return TangentVector(p, complex_structure(p.position()) / ctx.sqrt_abs_mu());
}

TangentVector project_tangent(const SpherePoint& p, const Vec& u) {
  if (u.size() != p.dim()) throw Error(ErrorCode::DimensionMismatch, "vector dimension mismatch");
  return TangentVector(p, detail::tangent_part(p.position(), u));
}

TangentVector nabla(const TangentVector& x, const AmbientField& y) {
  const Vec& p = x.base().position();
  if (y.dim() != p.size()) throw Error(ErrorCode::DimensionMismatch, "field dimension mismatch");
  return TangentVector(x.base(), detail::tangent_part(p, y.jacobian(p) * x.vec()));
}

TangentVector nabla_mu(const TangentVector& x, const AmbientField& y, const BergerContext& ctx) {
  const Vec& p = x.base().position();
  if (y.dim() != ctx.dim()) throw Error(ErrorCode::DimensionMismatch, "field dimension mismatch");
  Vec yp = y.value(p);
  if (std::abs(yp.dot(p)) > kTangentTol) throw Error(ErrorCode::NotTangent, "field is not tangent at the base point");
  return TangentVector(x.base(), detail::nabla_mu_from_directional(p, x.vec(), yp, y.jacobian(p) * x.vec(), ctx.mu()));
}

double g_mu(const TangentVector& x, const TangentVector& y, const BergerContext& ctx) {
  if ((x.base().position() - y.base().position()).norm() > kSphereTol)
    throw Error(ErrorCode::InvalidArgument, "g_mu needs vectors at the same base point");
  if (x.base().dim() != ctx.dim()) throw Error(ErrorCode::DimensionMismatch, "context dimension mismatch");
  return detail::g_mu(x.base().position(), x.vec(), y.vec(), ctx.mu());
}

AdaptedFrame adapted_frame(const SpherePoint& p, const BergerContext& ctx) {
  if (p.dim() != ctx.dim()) throw Error(ErrorCode::DimensionMismatch, "point does not match context dimension");
  Mat f = detail::adapted_frame_matrix(p.position(), ctx);
  AdaptedFrame frame{p, TangentVector(p, f.col(0)), {}};
  for (int c = 1; c < f.cols(); ++c) frame.horizontal.emplace_back(p, f.col(c));
  return frame;
}

std::pair<TangentVector, TangentVector> s3_quaternion_frame(const SpherePoint& p) {
  if (p.dim() != 4) throw Error(ErrorCode::Incompatible, "the quaternion frame exists only for m = 1");
  return {TangentVector(p, detail::quaternion_e1(p.position())), TangentVector(p, detail::quaternion_e2(p.position()))};
}

namespace detail {

Vec tangent_part(const Vec& p, const Vec& u) { return u - u.dot(p) * p; }

Vec horizontal_part(const Vec& p, const Vec& u) {
  Vec v = complex_structure(p);
  return u - u.dot(p) * p - u.dot(v) * v;
}

double g_mu(const Vec& p, const Vec& x, const Vec& y, double mu) {
  Vec v = complex_structure(p);
  return x.dot(y) + (mu - 1.0) * x.dot(v) * y.dot(v);
}

Vec berger_correction(const Vec& p, const Vec& x, const Vec& y, double mu) {
  Vec v = complex_structure(p);
  const double xv = x.dot(v), yv = y.dot(v);
  Vec xh = x - xv * v - x.dot(p) * p;
  Vec yh = y - yv * v - y.dot(p) * p;
  return (mu - 1.0) * (yv * complex_structure(xh) + xv * complex_structure(yh));
}

Vec nabla_mu_from_directional(const Vec& p, const Vec& x, const Vec& y, const Vec& dy_x, double mu) {
  return tangent_part(p, dy_x) + berger_correction(p, x, y, mu);
}

Mat adapted_frame_matrix(const Vec& p, const BergerContext& ctx) {
  const int n = ctx.dim();
  if (p.size() != n) throw Error(ErrorCode::DimensionMismatch, "point does not match context dimension");
  Mat frame(n, n - 1);
  Vec v = complex_structure(p);
  frame.col(0) = v / ctx.sqrt_abs_mu();

  // Basis of the span to remove: p, Jp, then each accepted (E_i, JE_i).
  std::vector<Vec> taken{p, v};
  int seed = 0;
  for (int i = 0; i < ctx.m(); ++i) {
    // Cyclic scan over the standard basis. The squared projections sum to the
    // remaining dimension (>= 2), so some seed clears 1/n.
    for (int tries = 0; tries < n; ++tries, seed = (seed + 1) % n) {
      Vec e = Vec::Unit(n, seed);
      for (int pass = 0; pass < 2; ++pass)
        for (const auto& t : taken) e -= e.dot(t) * t;
      if (e.squaredNorm() >= 1.0 / n) {
        e.normalize();
        Vec je = complex_structure(e);
        frame.col(1 + 2 * i) = e;
        frame.col(2 + 2 * i) = je;
        taken.push_back(e);
        taken.push_back(je);
        seed = (seed + 1) % n;
        break;
      }
    }
  }
  return frame;
}

Vec frame_signature(const BergerContext& ctx) {
  Vec s = Vec::Ones(ctx.dim() - 1);
  s[0] = ctx.eps();
  return s;
}

Vec quaternion_e1(const Vec& p) {
  // jq = (-conj z2, conj z1) with z1 = x1 + i x3, z2 = x2 + i x4.
  Vec e(4);
  e << -p[1], p[0], p[3], -p[2];
  return e;
}

Vec quaternion_e2(const Vec& p) {
  // kq = (-i conj z2, i conj z1).
  Vec e(4);
  e << -p[3], p[2], -p[1], p[0];
  return e;
}

}  // namespace detail

}  // namespace berger

#include "berger/functionals.hpp"

#include "berger/geometry.hpp"
#include "berger/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

namespace berger {

namespace {

using Diag = Eigen::DiagonalMatrix<double, Eigen::Dynamic>;

PolyVector j_apply(const PolyVector& u) {
  const int h = static_cast<int>(u.size()) / 2;
  PolyVector out(u.size(), Polynomial(u.front().nvars()));
  for (int k = 0; k < h; ++k) {
    out[k] = -u[k + h];
    out[k + h] = u[k];
  }
  return out;
}

PolyMatrix transpose(const PolyMatrix& a) {
  PolyMatrix t(a.front().size(), PolyVector(a.size(), Polynomial(a.front().front().nvars())));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t k = 0; k < a[i].size(); ++k) t[k][i] = a[i][k];
  return t;
}

Polynomial square(const Polynomial& p) { return p * p; }

double effective_lambda(const FunctionalId& id, const BergerContext& ctx) {
  return id.kind == FunctionalKind::GeneralizedEnergy ? id.lambda : ctx.mu();
}

// Matrix of X -> nabla^mu_X W in the adapted frame: column b holds the frame
// components eta_a g_mu(nabla_{e_b} W, e_a).
Mat nabla_matrix(const Vec& p, const Mat& frame, const Vec& eta, const Vec& w, const Mat& dw, double mu) {
  const int k = static_cast<int>(frame.cols());
  Mat out(k, k);
  for (int b = 0; b < k; ++b) {
    const Vec x = frame.col(b);
    const Vec y = detail::nabla_mu_from_directional(p, x, w, dw * x, mu);
    for (int a = 0; a < k; ++a) out(a, b) = eta[a] * detail::g_mu(p, y, frame.col(a), mu);
  }
  return out;
}

// g_mu-adjoint of a frame matrix.
Mat adjoint(const Mat& m, const Vec& eta) { return Diag(eta) * m.transpose() * Diag(eta); }

double density(const Mat& grad_w, const Vec& eta, const FunctionalId& id, const BergerContext& ctx) {
  const int k = static_cast<int>(grad_w.rows());
  const Mat l = Mat::Identity(k, k) + adjoint(grad_w, eta) * grad_w;
  switch (id.kind) {
    case FunctionalKind::Energy: return 0.5 * l.trace();
    case FunctionalKind::GeneralizedEnergy: {
      const double ratio = id.lambda / ctx.mu();
      return 0.5 * std::sqrt(std::abs(ratio)) * (l.trace() - l(0, 0) + l(0, 0) / ratio);
    }
    case FunctionalKind::Volume: {
      const double det = l.determinant();
      if (!(det > 0.0)) throw Error(ErrorCode::DomainViolation, "det L_W <= 0: the volume is undefined along this field");
      return std::sqrt(det);
    }
  }
  return 0.0;
}

Mat hopf_jacobian(const BergerContext& ctx) { return complex_structure_matrix(ctx.m()) / ctx.sqrt_abs_mu(); }

// K as an ambient linear map at q, acting on tangent vectors.
Mat k_ambient(const Vec& q, const FunctionalId& id, const BergerContext& ctx, const Mat& dv) {
  const Mat frame = detail::adapted_frame_matrix(q, ctx);
  const Vec eta = detail::frame_signature(ctx);
  const Vec v = dv * q;
  const Mat gv = nabla_matrix(q, frame, eta, v, dv, ctx.mu());
  const int k = static_cast<int>(gv.rows());
  Mat kmat;
  if (id.kind == FunctionalKind::Volume) {
    const Mat l = Mat::Identity(k, k) + adjoint(gv, eta) * gv;
    kmat = std::sqrt(l.determinant()) * l.inverse() * adjoint(gv, eta);
  } else {
    const double ratio = effective_lambda(id, ctx) / ctx.mu();
    Vec pinv = Vec::Ones(k);
    pinv[0] = 1.0 / ratio;
    kmat = std::sqrt(std::abs(ratio)) * Diag(pinv) * adjoint(gv, eta);
  }
  const Vec jq = complex_structure(q);
  const Mat g = Mat::Identity(q.size(), q.size()) + (ctx.mu() - 1.0) * jq * jq.transpose();
  return frame * kmat * Diag(eta) * frame.transpose() * g;
}

void check_node_rule(const QuadratureRule& rule, const BergerContext& ctx) {
  if (rule.m != ctx.m()) throw Error(ErrorCode::Incompatible, "rule dimension does not match the context");
  if (!rule.has_nodes()) throw Error(ErrorCode::Incompatible, "this evaluation needs a node-based rule");
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

}  // namespace

FunctionalId FunctionalId::generalized(double lambda) {
  if (lambda == 0.0 || !std::isfinite(lambda))
    throw Error(ErrorCode::InvalidArgument, "the generalized energy needs lambda != 0");
  return {FunctionalKind::GeneralizedEnergy, lambda};
}

std::string FunctionalId::name() const {
  switch (kind) {
    case FunctionalKind::Energy: return "energy";
    case FunctionalKind::Volume: return "volume";
    case FunctionalKind::GeneralizedEnergy: return "egl";
  }
  return "energy";
}

nlohmann::json FunctionalId::to_json() const {
  nlohmann::json j{{"functional", name()}};
  if (kind == FunctionalKind::GeneralizedEnergy) j["lambda"] = lambda;
  return j;
}

FunctionalId functional_from_name(const std::string& name, std::optional<double> lambda) {
  if (name == "energy") return FunctionalId::energy();
  if (name == "volume") return FunctionalId::volume();
  if (name == "egl") {
    if (!lambda) throw Error(ErrorCode::InvalidArgument, "the generalized energy needs a lambda value");
    return FunctionalId::generalized(*lambda);
  }
  throw Error(ErrorCode::InvalidArgument, "unknown functional '" + name + "'");
}

FieldMoments ExactFieldMoments::values() const {
  const double scale = pi_power(m + 1);
  return {ia.get_d() * scale, ib.get_d() * scale, ivv.get_d() * scale, ivj.get_d() * scale};
}

ExactFieldMoments field_moments_exact(const TangentField& a) {
  const PolyVector& c = a.components();
  const int n = a.dim();
  const PolyVector x = position_field(n);
  const PolyVector v = j_apply(x);
  const PolyMatrix da = jacobian(c);
  const PolyMatrix dat = transpose(da);

  const PolyVector da_x = apply(da, x), da_v = apply(da, v);
  const PolyVector dat_x = apply(dat, x), dat_v = apply(dat, v);

  Polynomial frob(n);
  for (const auto& row : da)
    for (const auto& e : row) frob += square(e);
  // tr(DA^t P_h DA P_h) with P_h = I - x x^t - v v^t on the sphere.
  Polynomial bsum = frob - dot(da_x, da_x) - dot(da_v, da_v) - dot(dat_x, dat_x) - dot(dat_v, dat_v) +
                    square(dot(x, da_x)) + square(dot(v, da_v)) + square(dot(x, da_v)) + square(dot(v, da_x));

  ExactFieldMoments mom;
  mom.m = a.m();
  mom.ia = sphere_integral_exact(dot(c, c));
  mom.ib = sphere_integral_exact(bsum);
  mom.ivv = sphere_integral_exact(dot(da_v, da_v));
  mom.ivj = sphere_integral_exact(dot(da_v, j_apply(c)));
  return mom;
}

double hess_hopf_from_moments(const FieldMoments& mom, const FunctionalId& id, const BergerContext& ctx) {
  const double mu = ctx.mu(), amu = ctx.abs_mu(), eps = ctx.eps();
  const int m = ctx.m();
  const double nv = (mom.ivv + 2.0 * (mu - 1.0) * mom.ivj + (mu - 1.0) * (mu - 1.0) * mom.ia) / amu;
  const double n2 = mom.ib + mu * mom.ia + eps * nv;
  double value = 0.0;
  switch (id.kind) {
    case FunctionalKind::Energy: value = -2.0 * m * mu * mom.ia + n2; break;
    case FunctionalKind::GeneralizedEnergy: {
      const double lam = id.lambda, el = lam > 0 ? 1.0 : -1.0;
      const double r = std::sqrt(std::abs(lam / mu));
      value = -2.0 * m * eps * std::sqrt(std::abs(lam * mu)) * mom.ia + r * n2 +
              (el * std::sqrt(std::abs(mu / lam)) - eps * r) * nv;
      break;
    }
    case FunctionalKind::Volume: {
      const double nv2 = (mom.ivv + 2.0 * (2.0 * mu - 1.0) * mom.ivj + (2.0 * mu - 1.0) * (2.0 * mu - 1.0) * mom.ia) / amu;
      value = std::pow(1.0 + amu, m - 2) *
              (n2 + mu * nv2 + mu * (-2.0 * m - 2.0 * m * amu + 2.0 * eps + 2.0 * eps * (m - mu)) * mom.ia);
      break;
    }
  }
  return ctx.sqrt_abs_mu() * value;
}

double hess_hopf_closed(const TangentField& a, const FunctionalId& id, const BergerContext& ctx,
                        const QuadratureRule& rule) {
  if (a.dim() != ctx.dim() || rule.m != ctx.m())
    throw Error(ErrorCode::DimensionMismatch, "field, rule and context dimensions differ");
  if (!rule.has_nodes()) return hess_hopf_from_moments(field_moments_exact(a).values(), id, ctx);

  const double mu = ctx.mu(), amu = ctx.abs_mu(), eps = ctx.eps();
  const int m = ctx.m();
  const Vec eta = detail::frame_signature(ctx);
  // Integrands: |A|^2, |nabla^mu A|^2 (signed), |nabla^mu_{V^mu} A|^2,
  // |nabla^mu_{V^mu} A + eps sqrt|mu| JA|^2.
  auto parts = integrate_round(
      [&](const Vec& p, double* out) {
        Vec av;
        Mat da;
        a.value_and_jacobian(p, av, da);
        const Mat frame = detail::adapted_frame_matrix(p, ctx);
        double total = 0.0;
        Vec yv;
        for (int b = 0; b < frame.cols(); ++b) {
          const Vec x = frame.col(b);
          const Vec y = detail::nabla_mu_from_directional(p, x, av, da * x, mu);
          total += eta[b] * detail::g_mu(p, y, y, mu);
          if (b == 0) yv = y;
        }
        const Vec shifted = yv + eps * ctx.sqrt_abs_mu() * complex_structure(av);
        out[0] = av.squaredNorm();
        out[1] = total;
        out[2] = detail::g_mu(p, yv, yv, mu);
        out[3] = detail::g_mu(p, shifted, shifted, mu);
      },
      4, rule);
  const double ia = parts[0], n2 = parts[1], nv = parts[2], nv2 = parts[3];
  double value = 0.0;
  switch (id.kind) {
    case FunctionalKind::Energy: value = -2.0 * m * mu * ia + n2; break;
    case FunctionalKind::GeneralizedEnergy: {
      const double lam = id.lambda, el = lam > 0 ? 1.0 : -1.0;
      const double r = std::sqrt(std::abs(lam / mu));
      value = -2.0 * m * eps * std::sqrt(std::abs(lam * mu)) * ia + r * n2 + (el * std::sqrt(std::abs(mu / lam)) - eps * r) * nv;
      break;
    }
    case FunctionalKind::Volume:
      value = std::pow(1.0 + amu, m - 2) *
              (n2 + mu * nv2 + mu * (-2.0 * m - 2.0 * m * amu + 2.0 * eps + 2.0 * eps * (m - mu)) * ia);
      break;
  }
  return ctx.sqrt_abs_mu() * value;
}

C2sCoefficients hess_c2s_coefficients(double s, int m, double mu, std::optional<double> lambda) {
  if (mu == 0.0) throw Error(ErrorCode::InvalidArgument, "mu must be nonzero");
  if (m < 1) throw Error(ErrorCode::InvalidArgument, "m must be positive");
  if (lambda && *lambda == 0.0) throw Error(ErrorCode::InvalidArgument, "lambda must be nonzero");
  const double amu = std::abs(mu), eps = mu > 0 ? 1.0 : -1.0;
  C2sCoefficients c;
  c.energy = (2.0 / mu) * (mu * mu * (1.0 - m) + mu * (2.0 * s - 1.0) * (m + 1.0) + 2.0 * s * s);
  c.f_vol = mu * mu * (1.0 - m) * (1.0 + amu) + mu * amu * (1.0 + m - 4.0 * s) +
            mu * ((2.0 * s - 1.0) * (m + 1.0) + 2.0 * eps * s * s) + 2.0 * s * s;
  c.volume = (2.0 / mu) * std::pow(1.0 + amu, m - 2) * c.f_vol;
  if (lambda) {
    const double lam = *lambda;
    c.e_lambda = mu * (1.0 - 2.0 * m) + (2.0 * s - mu) * (2.0 * s - mu) / lam + 2.0 * (2.0 * s - 1.0) * (m + 1.0) + 4.0 * s;
    c.generalized = std::sqrt(std::abs(lam / mu)) * *c.e_lambda;
  }
  return c;
}

AaLorentzCoefficients aa_lorentz_coefficients(int m, double mu) {
  if (!(mu < 0.0)) throw Error(ErrorCode::InvalidArgument, "the Lorentzian A_a formulas need mu < 0");
  AaLorentzCoefficients c;
  c.energy = (1.0 - 2.0 * m) * mu + 2.0 + (mu - 1.0) * (mu - 1.0) / mu;
  const double f = (2.0 * m - 1.0) * mu * mu + (1.0 - 4.0 * m) * mu + 2.0 + (1.0 - mu) * (mu - 1.0) * (mu - 1.0) / mu;
  c.volume = std::pow(1.0 - mu, m - 2) * f;
  return c;
}

double s3_coefficient(int level, double mu, double lambda) {
  if (mu == 0.0 || lambda == 0.0) throw Error(ErrorCode::InvalidArgument, "mu and lambda must be nonzero");
  const double d = mu - level - 2.0;
  return std::sqrt(std::abs(lambda / mu)) * (2.0 * level - mu + d * d / lambda);
}

std::optional<double> published_coefficient(const TangentField& a, const FunctionalId& id, const BergerContext& ctx) {
  const auto& d = a.descriptor();
  const double mu = ctx.mu();
  const std::optional<double> lam =
      id.kind == FunctionalKind::GeneralizedEnergy ? std::optional<double>(id.lambda) : std::nullopt;
  auto from_lemma = [&](double s) -> double {
    const auto c = hess_c2s_coefficients(s, ctx.m(), mu, lam);
    switch (id.kind) {
      case FunctionalKind::Energy: return c.energy;
      case FunctionalKind::Volume: return c.volume;
      case FunctionalKind::GeneralizedEnergy: return *c.generalized;
    }
    return 0.0;
  };
  switch (d.family) {
    case FieldFamily::C2s: return from_lemma(d.s);
    case FieldFamily::Aa:
      if (mu < 0 && id.kind == FunctionalKind::Energy) return aa_lorentz_coefficients(ctx.m(), mu).energy;
      if (mu < 0 && id.kind == FunctionalKind::Volume) return aa_lorentz_coefficients(ctx.m(), mu).volume;
      return from_lemma(0.5);
    case FieldFamily::S3:
      if (id.kind == FunctionalKind::Volume) return std::nullopt;
      return s3_coefficient(d.level, mu, effective_lambda(id, ctx));
    case FieldFamily::Custom: return std::nullopt;
  }
  return std::nullopt;
}

DbarCReport hess_s3_dbarC(const S3EigenPair& pair, double mu, double lambda) {
  const BergerContext ctx(1, mu);
  return hess_s3_dbarC(field_s3(pair, ctx), pair.level, pair.a1, pair.a2, mu, lambda);
}

DbarCReport hess_s3_dbarC(const TangentField& a, int level, const Polynomial& a1, const Polynomial& a2, double mu,
                          double lambda) {
  if (a.m() != 1 || a1.nvars() != 4 || a2.nvars() != 4)
    throw Error(ErrorCode::Incompatible, "the D^C energy is defined on S^3 only");
  const BergerContext ctx(1, mu);
  if (lambda == 0.0) throw Error(ErrorCode::InvalidArgument, "lambda must be nonzero");
  auto x = [](int i) { return Polynomial::variable(4, i); };
  const PolyVector e1{-x(1), x(0), x(3), -x(2)};
  const PolyVector e2{-x(3), x(2), -x(1), x(0)};
  const PolyVector g1 = gradient(a1), g2 = gradient(a2);
  const Polynomial b11 = dot(g1, e1), b12 = dot(g2, e1);  // B_1^j = E_1(a_j)
  const Polynomial b21 = dot(g1, e2), b22 = dot(g2, e2);  // B_2^j = E_2(a_j)

  DbarCReport r;
  r.level = level;
  r.sum_b2 = sphere_integral_exact(square(b11) + square(b12) + square(b21) + square(b22));
  r.cross = sphere_integral_exact(b21 * b12 - b22 * b11);
  r.norm_a2 = sphere_integral_exact(square(a1) + square(a2));
  r.dbarc_round = r.sum_b2 - 2 * r.cross;
  r.dbarc_round.canonicalize();
  const double pi2 = pi_power(2);
  r.dbarc = ctx.sqrt_abs_mu() * r.dbarc_round.get_d() * pi2;
  const double norm = ctx.sqrt_abs_mu() * sphere_integral_exact(dot(a.components(), a.components())).get_d() * pi2;
  r.hessian = s3_coefficient(level, mu, lambda) * norm + std::sqrt(std::abs(lambda / mu)) * r.dbarc;
  return r;
}

double evaluate_functional(const AmbientField& w, const FunctionalId& id, const BergerContext& ctx,
                           const QuadratureRule& rule) {
  check_node_rule(rule, ctx);
  if (w.dim() != ctx.dim()) throw Error(ErrorCode::DimensionMismatch, "field does not match the context");
  const Vec eta = detail::frame_signature(ctx);
  auto v = integrate_round(
      [&](const Vec& p, double* out) {
        const Vec wp = w.value(p);
        if (std::abs(detail::g_mu(p, wp, wp, ctx.mu()) - ctx.eps()) > 1e-8)
          throw Error(ErrorCode::InvalidArgument, "W must be g_mu-unit (timelike unit when mu < 0)");
        const Mat frame = detail::adapted_frame_matrix(p, ctx);
        out[0] = density(nabla_matrix(p, frame, eta, wp, w.jacobian(p), ctx.mu()), eta, id, ctx);
      },
      1, rule);
  return ctx.sqrt_abs_mu() * v[0];
}

FieldSamples::FieldSamples(const TangentField& a, QuadratureRule rule) : rule_(std::move(rule)) {
  if (!rule_.has_nodes()) throw Error(ErrorCode::Incompatible, "field samples need a node-based rule");
  if (rule_.m != a.m()) throw Error(ErrorCode::DimensionMismatch, "rule and field dimensions differ");
  const std::size_t n = rule_.nodes.size();
  values_.resize(n);
  jacobians_.resize(n);
  parallel_chunks(n, 2048, [&](std::size_t, std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) a.value_and_jacobian(rule_.nodes[i], values_[i], jacobians_[i]);
  });
  for (const auto& v : values_) max_norm_ = std::max(max_norm_, v.norm());
}

QuadratureRule fd_rule_for(const TangentField& a) { return product_rule_for_degree(a.m(), 2 * a.degree() + 2); }

SecondVariation second_variation_fd(const FieldSamples& samples, const FunctionalId& id, const BergerContext& ctx,
                                    double h) {
  check_node_rule(samples.rule(), ctx);
  if (samples.max_norm() == 0.0) throw Error(ErrorCode::InvalidArgument, "the direction vanishes at every node");
  if (h <= 0.0) h = 0.005 / samples.max_norm();
  if (ctx.mu() < 0 && h * samples.max_norm() > 0.1)
    throw Error(ErrorCode::InvalidArgument, "step too large: V^mu + tA must stay timelike");
  const double ts[5] = {-2 * h, -h, 0.0, h, 2 * h};
  const Vec eta = detail::frame_signature(ctx);
  const Mat dv = hopf_jacobian(ctx);
  const double eps = ctx.eps();
  auto f = integrate_round_indexed(
      [&](std::size_t i, const Vec& p, double* out) {
        const Vec& a = samples.values()[i];
        const Mat& da = samples.jacobians()[i];
        const Mat frame = detail::adapted_frame_matrix(p, ctx);
        const Vec v = dv * p;
        const double a2 = a.squaredNorm();
        const Vec grad_a2 = da.transpose() * a;  // half the gradient of |A|^2
        for (int q = 0; q < 5; ++q) {
          const double t = ts[q];
          const double rho = std::sqrt(1.0 + eps * t * t * a2);
          const Vec num = v + t * a;
          const Vec w = num / rho;
          const Vec grad_rho = eps * t * t * grad_a2 / rho;
          const Mat dw = (dv + t * da) / rho - num * grad_rho.transpose() / (rho * rho);
          out[q] = density(nabla_matrix(p, frame, eta, w, dw, ctx.mu()), eta, id, ctx);
        }
      },
      5, samples.rule());
  for (double& x : f) x *= ctx.sqrt_abs_mu();
  SecondVariation sv;
  sv.h = h;
  sv.d_h = (f[3] - 2.0 * f[2] + f[1]) / (h * h);
  sv.d_2h = (f[4] - 2.0 * f[2] + f[0]) / (4.0 * h * h);
  sv.second = (4.0 * sv.d_h - sv.d_2h) / 3.0;
  sv.first = (8.0 * (f[3] - f[1]) - (f[4] - f[0])) / (12.0 * h);
  return sv;
}

SecondVariation second_variation_fd(const TangentField& a, const FunctionalId& id, const BergerContext& ctx,
                                    const QuadratureRule& rule, double h) {
  return second_variation_fd(FieldSamples(a, rule.has_nodes() ? rule : fd_rule_for(a)), id, ctx, h);
}

double omega_fd(const Vec& p, const Vec& x, const FunctionalId& id, const BergerContext& ctx) {
  if (p.size() != ctx.dim() || x.size() != ctx.dim())
    throw Error(ErrorCode::DimensionMismatch, "point and vector must have 2m+2 components");
  const Mat dv = hopf_jacobian(ctx);
  const Mat frame = detail::adapted_frame_matrix(p, ctx);
  const Vec eta = detail::frame_signature(ctx);
  const Mat k0 = k_ambient(p, id, ctx, dv);
  const Vec xt = detail::tangent_part(p, x);
  double total = 0.0;
  for (int a = 0; a < frame.cols(); ++a) {
    const Vec e = frame.col(a);
    const double len = e.norm();
    const Vec u = e / len;
    auto kx_at = [&](double t) {
      const Vec q = std::cos(t * len) * p + std::sin(t * len) * u;
      return Vec(k_ambient(q, id, ctx, dv) * detail::tangent_part(q, x));
    };
    const Vec dkx = (kx_at(kFdStep) - kx_at(-kFdStep)) / (2.0 * kFdStep);
    const Vec nabla_kx = detail::nabla_mu_from_directional(p, e, k0 * xt, dkx, ctx.mu());
    const Vec dxt = -x.dot(e) * p - x.dot(p) * e;
    const Vec nabla_x = detail::nabla_mu_from_directional(p, e, xt, dxt, ctx.mu());
    total += eta[a] * detail::g_mu(p, nabla_kx - k0 * nabla_x, e, ctx.mu());
  }
  return total;
}

double sigma2(const Mat& m) {
  const double tr = m.trace();
  return 0.5 * (tr * tr - (m * m).trace());
}

double hess_general_forms(const TangentField& a, const FunctionalId& id, const BergerContext& ctx,
                          const QuadratureRule& rule) {
  const QuadratureRule nodes = rule.has_nodes() ? rule : fd_rule_for(a);
  check_node_rule(nodes, ctx);
  const double mu = ctx.mu();
  const double sign_omega = ctx.eps();
  const Vec eta = detail::frame_signature(ctx);
  const Mat dv = hopf_jacobian(ctx);
  const double lam = effective_lambda(id, ctx);
  auto v = integrate_round(
      [&](const Vec& p, double* out) {
        Vec av;
        Mat da;
        a.value_and_jacobian(p, av, da);
        const Mat frame = detail::adapted_frame_matrix(p, ctx);
        const int k = static_cast<int>(frame.cols());
        const Mat ga = nabla_matrix(p, frame, eta, av, da, mu);
        const Mat gat = adjoint(ga, eta);
        const double omega = omega_fd(p, dv * p, id, ctx);
        double value = sign_omega * av.squaredNorm() * omega;
        if (id.kind == FunctionalKind::Volume) {
          const Mat gv = nabla_matrix(p, frame, eta, dv * p, dv, mu);
          const Mat l = Mat::Identity(k, k) + adjoint(gv, eta) * gv;
          const Mat linv = l.inverse();
          const double sd = std::sqrt(l.determinant());
          const Mat kv = sd * linv * adjoint(gv, eta);
          value += 2.0 / sd * sigma2(kv * ga) - (linv * gat * gv * kv * ga).trace() + sd * (linv * gat * ga).trace();
        } else {
          const double ratio = lam / mu;
          Vec pinv = Vec::Ones(k);
          pinv[0] = 1.0 / ratio;
          value += std::sqrt(std::abs(ratio)) * (Diag(pinv) * gat * ga).trace();
        }
        out[0] = value;
      },
      1, nodes);
  return ctx.sqrt_abs_mu() * v[0];
}

double relative_error(double a, double b, double scale) {
  const double den = std::max(std::abs(b), std::abs(scale));
  return den > 0 ? std::abs(a - b) / den : std::abs(a - b);
}

nlohmann::json HessianReport::to_json() const {
  nlohmann::json j;
  j["functional"] = functional.name();
  j["m"] = m;
  j["mu"] = mu;
  j["lambda"] = lambda;
  j["direction"] = direction.to_json();
  j["coefficient"] = coefficient ? nlohmann::json(*coefficient) : nlohmann::json(nullptr);
  j["norm_sq"] = norm_sq;
  j["closed_form"] = closed_form;
  j["oracles"] = {{"exact_moment", exact},
                  {"general_forms", general ? nlohmann::json(*general) : nlohmann::json(nullptr)},
                  {"finite_difference", fd ? nlohmann::json(*fd) : nlohmann::json(nullptr)}};
  j["first_variation"] = fd_first ? nlohmann::json(*fd_first) : nlohmann::json(nullptr);
  j["rel_err"] = rel_err;
  j["verdict"] = verdict;
  if (!error.empty()) j["error"] = error;
  return j;
}

std::string HessianReport::csv_header() { return "functional,m,mu,lambda,direction,closed_form,fd,exact,rel_err,verdict"; }

std::string HessianReport::csv_row() const {
  std::string row = functional.name() + "," + std::to_string(m) + "," + fmt(mu) + "," + fmt(lambda) + "," +
                    direction.label() + ",";
  if (verdict == "error") return row + ",,,," + verdict;
  row += fmt(closed_form) + "," + (fd ? fmt(*fd) : "") + "," + fmt(exact) + "," + fmt(rel_err) + "," + verdict;
  return row;
}

HessianReport hessian_report(const TangentField& a, const FunctionalId& id, const BergerContext& ctx,
                             const HessianOptions& options) {
  const ExactFieldMoments mom = field_moments_exact(a);
  std::optional<FieldSamples> samples;
  if (options.finite_differences || options.general_forms)
    samples.emplace(a, options.node_rule ? *options.node_rule : fd_rule_for(a));
  return hessian_report(a, mom, samples ? &*samples : nullptr, id, ctx, options);
}

HessianReport hessian_report(const TangentField& a, const ExactFieldMoments& moments, const FieldSamples* samples,
                             const FunctionalId& id, const BergerContext& ctx, const HessianOptions& options) {
  HessianReport r;
  r.functional = id;
  r.m = ctx.m();
  r.mu = ctx.mu();
  r.lambda = effective_lambda(id, ctx);
  r.direction = a.descriptor();
  try {
    r.norm_sq = ctx.sqrt_abs_mu() * moments.values().ia;
    r.exact = hess_hopf_from_moments(moments.values(), id, ctx);
    r.coefficient = published_coefficient(a, id, ctx);
    r.closed_form = r.coefficient ? *r.coefficient * r.norm_sq : r.exact;
    std::vector<double> oracles{r.exact};
    if (samples && options.general_forms) {
      r.general = hess_general_forms(a, id, ctx, samples->rule());
      oracles.push_back(*r.general);
    }
    if (samples && options.finite_differences) {
      const auto sv = second_variation_fd(*samples, id, ctx);
      r.fd = sv.second;
      r.fd_first = sv.first;
      oracles.push_back(sv.second);
    }
    for (double o : oracles) r.rel_err = std::max(r.rel_err, relative_error(o, r.closed_form, r.norm_sq));
    const double zero_tol = 1e-9 * r.norm_sq;
    if (std::abs(r.closed_form) <= zero_tol) {
      r.verdict = "zero";
    } else {
      const bool neg = std::all_of(oracles.begin(), oracles.end(), [](double o) { return o < 0; });
      const bool pos = std::all_of(oracles.begin(), oracles.end(), [](double o) { return o > 0; });
      if (r.closed_form < 0 && neg)
        r.verdict = "negative";
      else if (r.closed_form > 0 && pos)
        r.verdict = "positive";
      else
        r.verdict = "inconsistent";
    }
  } catch (const Error& e) {
    r.verdict = "error";
    r.error = e.what();
  }
  return r;
}

}  // namespace berger

#include "berger/runners.hpp"

#include "berger/functionals.hpp"
#include "berger/harmonics.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <random>
#include <sstream>

namespace berger {

namespace {

using nlohmann::json;

struct Suite {
  const json& cfg;
  std::vector<IdentityCheck> out;

  std::vector<int> ms() const { return cfg.at("m").get<std::vector<int>>(); }
  std::vector<double> mus() const { return cfg.at("mu").get<std::vector<double>>(); }
  std::vector<int> ss() const { return cfg.at("s").get<std::vector<int>>(); }
  std::vector<int> levels() const { return cfg.at("level").get<std::vector<int>>(); }
  int points() const { return cfg.at("points").get<int>(); }
  std::uint64_t seed() const { return cfg.at("seed").get<std::uint64_t>(); }

  double tol(double fallback) const { return cfg.at("tol").is_null() ? fallback : cfg.at("tol").get<double>(); }

  void add(const std::string& name, const std::string& statement, json params, double residual, double tolerance,
           std::string note = {}) {
    IdentityCheck c;
    c.name = name;
    c.statement = statement;
    c.params = std::move(params);
    c.residual = residual;
    c.tolerance = tolerance;
    c.pass = std::isfinite(residual) && residual <= tolerance;
    c.note = std::move(note);
    out.push_back(std::move(c));
  }
  void add_exact(const std::string& name, const std::string& statement, json params, bool holds, std::string note = {}) {
    add(name, statement, std::move(params), holds ? 0.0 : 1.0, 0.0, std::move(note));
  }
};

std::vector<Vec> sphere_points(int m, int count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  std::vector<Vec> pts;
  pts.reserve(count);
  for (int i = 0; i < count; ++i) {
    Vec v(2 * m + 2);
    for (int k = 0; k < v.size(); ++k) v[k] = normal(rng);
    pts.push_back(v / v.norm());
  }
  return pts;
}

Vec gaussian(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  Vec v(n);
  for (int k = 0; k < n; ++k) v[k] = normal(rng);
  return v;
}

PolyVector j_field(int n) {
  PolyVector x = position_field(n);
  const int h = n / 2;
  PolyVector out(n, Polynomial(n));
  for (int k = 0; k < h; ++k) {
    out[k] = -x[k + h];
    out[k + h] = x[k];
  }
  return out;
}

// Tangent field with both horizontal and vertical parts: A_a + (b . x) Jx.
TangentField mixed_field(int m, std::mt19937_64& rng) {
  const BergerContext ctx(m, 1.0);
  const int n = ctx.dim();
  const Vec a = gaussian(n, rng), b = gaussian(n, rng);
  const TangentField aa = field_Aa(a, ctx);
  Polynomial lin(n);
  for (int i = 0; i < n; ++i) lin += Polynomial::variable(n, i) * Rational(std::round(b[i] * 64.0) / 64.0);
  FieldDescriptor d;
  d.family = FieldFamily::Custom;
  return TangentField(d, add(aa.components(), scale(j_field(n), lin)));
}

Vec nabla_mu_at(const TangentField& y, const Vec& p, const Vec& x, double mu) {
  Vec v;
  Mat dy;
  y.value_and_jacobian(p, v, dy);
  return detail::nabla_mu_from_directional(p, x, v, dy * x, mu);
}

// X(f) at p for a function on the sphere, along the great circle through p
// with unit direction x/|x|; fourth-order central stencil.
template <class F>
double sphere_directional(const F& f, const Vec& p, const Vec& x) {
  const double len = x.norm();
  if (len == 0.0) return 0.0;
  const Vec u = x / len;
  const double h = 1e-3;
  auto at = [&](double t) { return f(Vec(std::cos(t) * p + std::sin(t) * u)); };
  return len * (8.0 * (at(h) - at(-h)) - (at(2 * h) - at(-2 * h))) / (12.0 * h);
}

void complex_structure_suite(Suite& s) {
  for (int m : s.ms()) {
    std::mt19937_64 rng(s.seed());
    double worst = 0.0;
    for (int i = 0; i < s.points(); ++i) {
      const Vec u = gaussian(2 * m + 2, rng), v = gaussian(2 * m + 2, rng);
      const Vec ju = complex_structure(u, m), jv = complex_structure(v, m);
      worst = std::max({worst, (complex_structure(ju, m) + u).norm(), std::abs(ju.dot(jv) - u.dot(v)),
                        std::abs(ju.dot(u))});
    }
    s.add("complex-structure", "J^2 = -Id, <Ju,Jv> = <u,v>, <Ju,u> = 0", {{"m", m}}, worst, s.tol(1e-12));
  }
}

void hopf_field_suite(Suite& s) {
  for (int m : s.ms())
    for (double mu : s.mus()) {
      const BergerContext ctx(m, mu);
      double worst = 0.0;
      for (const Vec& p : sphere_points(m, s.points(), s.seed())) {
        const SpherePoint sp(p);
        const TangentVector v = hopf_field(sp, ctx);
        worst = std::max({worst, std::abs(g_mu(v, v, ctx) - ctx.eps()),
                          (v.vec() - complex_structure(p) / ctx.sqrt_abs_mu()).norm()});
      }
      s.add("hopf-field", "V^mu = Jp/sqrt|mu| and g_mu(V^mu, V^mu) = eps_mu", {{"m", m}, {"mu", mu}}, worst,
            s.tol(1e-12));
    }
}

void frame_suite(Suite& s) {
  for (int m : s.ms())
    for (double mu : s.mus()) {
      const BergerContext ctx(m, mu);
      const Vec eta = detail::frame_signature(ctx);
      double worst = 0.0, jpair = 0.0;
      for (const Vec& p : sphere_points(m, s.points(), s.seed())) {
        const Mat f = detail::adapted_frame_matrix(p, ctx);
        Mat gram(f.cols(), f.cols());
        for (int a = 0; a < f.cols(); ++a)
          for (int b = 0; b < f.cols(); ++b) gram(a, b) = detail::g_mu(p, f.col(a), f.col(b), mu);
        worst = std::max(worst, (gram - Mat(eta.asDiagonal())).cwiseAbs().maxCoeff());
        worst = std::max(worst, (f.col(0) - complex_structure(p) / ctx.sqrt_abs_mu()).norm());
        for (int i = 0; i < m; ++i)
          jpair = std::max(jpair, (complex_structure(Vec(f.col(1 + 2 * i))) - f.col(2 + 2 * i)).norm());
      }
      s.add("frame-orthonormality", "Gram matrix of the adapted frame = diag(eps_mu, 1, ..., 1)",
            {{"m", m}, {"mu", mu}}, worst, s.tol(1e-12));
      s.add("frame-j-pairs", "horizontal frame vectors pair as (E_i, JE_i)", {{"m", m}, {"mu", mu}}, jpair,
            s.tol(1e-12));
    }
}

void metric_suite(Suite& s) {
  for (int m : s.ms()) {
    std::mt19937_64 rng(s.seed());
    const TangentField y = mixed_field(m, rng), z = mixed_field(m, rng);
    for (double mu : s.mus()) {
      double worst = 0.0, torsion = 0.0;
      for (const Vec& p : sphere_points(m, s.points(), s.seed() + 1)) {
        const Vec x = detail::tangent_part(p, gaussian(2 * m + 2, rng));
        const Vec yp = y.value(p), zp = z.value(p);
        const double lhs = detail::g_mu(p, nabla_mu_at(y, p, x, mu), zp, mu) +
                           detail::g_mu(p, yp, nabla_mu_at(z, p, x, mu), mu);
        const double rhs =
            sphere_directional([&](const Vec& q) { return detail::g_mu(q, y.value(q), z.value(q), mu); }, p, x);
        worst = std::max(worst, std::abs(lhs - rhs) / std::max(1.0, std::abs(rhs)));
        const Vec bracket = z.jacobian(p) * yp - y.jacobian(p) * zp;
        torsion = std::max(torsion, (nabla_mu_at(z, p, yp, mu) - nabla_mu_at(y, p, zp, mu) - bracket).norm());
      }
      s.add("metric-compatibility", "g_mu(nabla^mu_X Y, Z) + g_mu(Y, nabla^mu_X Z) = X g_mu(Y, Z)",
            {{"m", m}, {"mu", mu}}, worst, s.tol(1e-8));
      s.add("torsion-free", "nabla^mu_Y Z - nabla^mu_Z Y = [Y, Z]", {{"m", m}, {"mu", mu}}, torsion, s.tol(1e-10));
    }
  }
}

void round_limit_suite(Suite& s) {
  for (int m : s.ms()) {
    std::mt19937_64 rng(s.seed());
    const BergerContext ctx(m, 1.0);
    double worst = 0.0;
    const int count = std::max(s.points(), 500);
    for (int i = 0; i < count; ++i) {
      const TangentField y = mixed_field(m, rng);
      Vec p = gaussian(2 * m + 2, rng);
      const SpherePoint sp(p / p.norm());
      const TangentVector x = project_tangent(sp, gaussian(2 * m + 2, rng));
      worst = std::max(worst, (nabla_mu(x, y, ctx).vec() - nabla(x, y).vec()).norm());
    }
    s.add("round-limit", "nabla^mu = nabla at mu = 1", {{"m", m}, {"triples", count}}, worst, s.tol(1e-10));
  }
}

void quaternion_suite(Suite& s) {
  double rel = 0.0, bracket = 0.0, ortho = 0.0;
  for (const Vec& p : sphere_points(1, s.points(), s.seed())) {
    const Vec v = complex_structure(p);
    const Vec e1 = detail::quaternion_e1(p), e2 = detail::quaternion_e2(p);
    // E_1, E_2 are linear, so D E_i (w) = E_i(w).
    const Vec nv_e1 = detail::tangent_part(p, detail::quaternion_e1(v));
    const Vec nv_e2 = detail::tangent_part(p, detail::quaternion_e2(v));
    rel = std::max({rel, (nv_e1 + e2).norm(), (nv_e2 - e1).norm()});
    bracket = std::max(bracket, (detail::quaternion_e2(e1) - detail::quaternion_e1(e2) + 2.0 * v).norm());
    ortho = std::max({ortho, std::abs(e1.dot(e2)), std::abs(e1.norm() - 1.0), std::abs(e1.dot(v)),
                      std::abs(e2.dot(v)), std::abs(e1.dot(p))});
  }
  s.add("quaternion-frame", "nabla_V E_1 = -E_2, nabla_V E_2 = E_1", {{"m", 1}}, rel, s.tol(1e-10));
  s.add("quaternion-bracket", "[E_1, E_2] = -2V", {{"m", 1}}, bracket, s.tol(1e-10));
  s.add("quaternion-orthonormal", "E_1, E_2, V orthonormal and tangent", {{"m", 1}}, ortho, s.tol(1e-12));
}

void eigen_suite(Suite& s, bool vertical) {
  for (int m : s.ms())
    for (int sv : s.ss()) {
      const Polynomial f = f2s(sv, 1, m);
      const std::vector<Vec> pts = sphere_points(m, s.points(), s.seed());
      for (double mu : s.mus()) {
        const BergerContext ctx(m, mu);
        const ProportionalityReport r = vertical ? vertical_laplacian(f, ctx, pts) : laplacian_berger(f, ctx, pts);
        const double k = 2.0 * sv;
        const double formula = vertical ? k * k / mu : 2.0 * m * k + k * k / mu;
        const double mismatch = r.expected ? std::abs(*r.expected - formula) / std::max(1.0, std::abs(formula)) : 1.0;
        const double fit = std::abs(r.constant - formula) / std::max(1.0, std::abs(formula));
        s.add(vertical ? "eigen-vertical" : "eigen-berger",
              vertical ? "Delta^mu_v f_2s = ((2s)^2/mu) f_2s" : "Delta^mu f_2s = (2m(2s) + (2s)^2/mu) f_2s",
              {{"m", m}, {"s", sv}, {"mu", mu}, {"constant", r.constant}},
              std::max({r.relative_residual, mismatch, fit}), s.tol(1e-9));
      }
    }
}

void mixed_eigenvalue_suite(Suite& s) {
  for (int m : s.ms())
    for (int sv : s.ss())
      for (double mu : s.mus()) {
        const int k = 2 * sv;
        const double a = mixed_eigenvalue(k, k, mu, m);
        const double b = k * (2.0 * m + k / mu);
        const BergerContext ctx(m, mu);
        const double c = laplacian_berger(f2s(sv, 1, m), ctx, sphere_points(m, 16, s.seed())).constant;
        s.add("mixed-eigenvalue", "lambda^mu_{k,k} = k(2m + k/mu) = Berger Laplacian constant of f_2s",
              {{"m", m}, {"s", sv}, {"mu", mu}}, std::max(std::abs(a - b), std::abs(a - c)) / std::max(1.0, std::abs(b)),
              s.tol(1e-9));
      }
}

void jhess_suite(Suite& s) {
  for (int m : s.ms()) {
    for (int sv : s.ss())
      s.add_exact("jhess", "Hess f(u, Jv) = Hess f(Ju, v) for f_2s", {{"m", m}, {"s", sv}}, check_jhess(f2s(sv, 1, m)));
    const int n = 2 * m + 2;
    const Polynomial x1 = Polynomial::variable(n, 0);
    s.add_exact("jhess", "x_1^2 violates the J-Hessian condition", {{"m", m}, {"f", "x1^2"}}, !check_jhess(x1 * x1));
  }
}

void hess_ratio_suite(Suite& s) {
  for (int m : s.ms())
    for (int sv : s.ss()) {
      const Polynomial f = f2s(sv, 1, m);
      const PolyMatrix h = hessian(f);
      Polynomial sq(f.nvars());
      for (const auto& row : h)
        for (const auto& e : row) sq += e * e;
      const Rational ratio = sphere_integral_exact(sq) / sphere_integral_exact(f * f);
      const Rational expected(8 * sv * (2 * sv - 1) * (m + 2 * sv - 1) * (m + 2 * sv));
      s.add_exact("hess-ratio", "int |Hess f_2s|^2 / int f_2s^2 = 8s(2s-1)(m+2s-1)(m+2s)",
                  {{"m", m}, {"s", sv}, {"ratio", ratio.get_str()}, {"expected", expected.get_str()}},
                  ratio == expected);
    }
}

void ball_ratio_suite(Suite& s) {
  for (int m : s.ms())
    for (int sv : s.ss()) {
      if (sv < 2) continue;
      const int n = 2 * m + 2;
      auto radial = [&](int power) {
        const Polynomial x = Polynomial::variable(n, 0), y = Polynomial::variable(n, m + 1);
        const Polynomial r2 = (x * x + y * y).pow(power);
        Rational total = 0;
        for (const auto& [e, c] : r2.terms()) total += c * ball_moment_exact(e);
        return total;
      };
      const Rational ratio = radial(2 * sv - 1) / radial(2 * sv - 3);
      const Rational expected(Rational((2 * sv - 1) * (2 * sv - 2)) / Rational((m + 2 * sv - 1) * (m + 2 * sv)));
      s.add_exact("ball-ratio", "int_B (x^2+y^2)^{2s-1} / int_B (x^2+y^2)^{2s-3} = (2s-1)(2s-2)/((m+2s-1)(m+2s))",
                  {{"m", m}, {"s", sv}, {"ratio", ratio.get_str()}}, ratio == expected);
    }
}

void c2s_norm_suite(Suite& s) {
  for (int m : s.ms())
    for (int sv : s.ss()) {
      const BergerContext ctx(m, 1.0);
      const Polynomial f = f2s(sv, 1, m);
      const TangentField c = field_C2s(sv, 1, ctx);
      const Rational ff = sphere_integral_exact(f * f);
      const Rational cc = sphere_integral_exact(dot(c.components(), c.components()));
      const Polynomial vf = vertical_derivative(f);
      const Rational vv = sphere_integral_exact(vf * vf);
      s.add_exact("c2s-norm", "int |C_2s|^2 = 2m(2s) int f_2s^2", {{"m", m}, {"s", sv}},
                  cc == Rational(2 * m * 2 * sv) * ff);
      s.add_exact("c2s-vertical-norm", "int V(f_2s)^2 = (2s)^2 int f_2s^2", {{"m", m}, {"s", sv}},
                  vv == Rational(4 * sv * sv) * ff);
    }
}

void c2s_vertical_suite(Suite& s) {
  for (int m : s.ms())
    for (int sv : s.ss())
      for (double mu : s.mus()) {
        const BergerContext ctx(m, mu);
        const TangentField c = field_C2s(sv, 1, ctx);
        const double factor = (mu - 2.0 * sv) / ctx.sqrt_abs_mu();
        const std::vector<Vec> pts = sphere_points(m, s.points(), s.seed());
        double worst = 0.0;
        for (const Vec& p : pts) {
          const Vec vmu = complex_structure(p) / ctx.sqrt_abs_mu();
          const Vec lhs = nabla_mu_at(c, p, vmu, mu);
          worst = std::max(worst, (lhs - factor * complex_structure(c.value(p))).norm());
        }
        s.add("c2s-vertical-derivative", "nabla^mu_{V^mu} C_2s = ((mu - 2s)/sqrt|mu|) J C_2s",
              {{"m", m}, {"s", sv}, {"mu", mu}}, worst, s.tol(1e-8));
        s.add("c2s-horizontal", "g_mu(C_2s, V^mu) = 0", {{"m", m}, {"s", sv}, {"mu", mu}},
              max_vertical_component(c, ctx, pts), s.tol(1e-10));
      }
}

void s3_eigenpair_suite(Suite& s) {
  const BergerContext ctx(1, 1.0);
  const std::vector<Vec> pts = sphere_points(1, s.points(), s.seed());
  for (int level : s.levels()) {
    if (level == 0) continue;
    const S3EigenPair pair = s3_eigenpair(level);
    const Polynomial va = vertical_derivative(pair.a1);
    s.add_exact("s3-eigenpair", "V(V(a_1)) = -level^2 a_1 and a_2 = V(a_1)/level", {{"level", level}},
                vertical_derivative(va) == pair.a1 * Rational(-level * level) &&
                    pair.a2 == va * Rational(1, level));
    double worst = 0.0;
    const double lam = level * (level + 2.0);
    for (const Vec& p : pts)
      worst = std::max(worst, std::abs(berger_laplacian_at(pair.a1, ctx, p) - lam * pair.a1.evaluate(p)));
    s.add("s3-laplacian", "Delta a_1 = level(level+2) a_1", {{"level", level}}, worst, s.tol(1e-10));
  }
}

void s3_vertical_suite(Suite& s) {
  for (int level : s.levels()) {
    const BergerContext round(1, 1.0);
    const TangentField a = level == 0 ? field_s3_frame(round) : field_s3(s3_eigenpair(level), round);
    const std::vector<Vec> pts = sphere_points(1, s.points(), s.seed());
    double worst = 0.0;
    for (const Vec& p : pts)
      worst = std::max(worst, (nabla_mu_at(a, p, complex_structure(p), 1.0) +
                               (level + 1.0) * complex_structure(a.value(p)))
                                  .norm());
    s.add("s3-vertical-derivative", "nabla_V A = -(level+1) J A", {{"level", level}}, worst, s.tol(1e-8));
    for (double mu : s.mus()) {
      const BergerContext ctx(1, mu);
      double w = 0.0;
      for (const Vec& p : pts) {
        const Vec lhs = nabla_mu_at(a, p, complex_structure(p) / ctx.sqrt_abs_mu(), mu);
        w = std::max(w, (lhs - (mu - 2.0 - level) / ctx.sqrt_abs_mu() * complex_structure(a.value(p))).norm());
      }
      s.add("s3-vertical-derivative", "nabla^mu_{V^mu} A = ((mu - 2 - level)/sqrt|mu|) J A",
            {{"level", level}, {"mu", mu}}, w, s.tol(1e-8));
    }
  }
}

void dbarc_suite(Suite& s) {
  for (int level : s.levels()) {
    if (level == 0) continue;
    const int alt = level == 1 ? 1 : 0;
    std::vector<S3EigenPair> pairs{s3_eigenpair(level)};
    if (level == 1) pairs.push_back(s3_eigenpair_from(Polynomial::variable(4, alt), 1));
    for (const auto& pair : pairs) {
      const DbarCReport r = hess_s3_dbarC(pair, 1.0, 1.0);
      const Rational k(level);
      const json params{{"level", level}, {"a1", to_string(pair.a1)}};
      s.add_exact("dbarc-cancellation", "int 1/2 |D^C A|^2 = 0", params, r.dbarc_round == 0);
      s.add_exact("dbarc-components", "int sum (B_i^j)^2 = 2 level int (a_1^2 + a_2^2), cross = level int (a_1^2 + a_2^2)",
                  params, r.sum_b2 == Rational(2) * k * r.norm_a2 && r.cross == k * r.norm_a2);
    }
  }
}

void volume_suite(Suite& s) {
  for (int m : s.ms()) {
    const QuadratureRule rule = product_rule_for_degree(m, 2);
    std::vector<int> zeros(2 * m + 2, 0);
    Rational factorial = 1;
    for (int k = 2; k <= m; ++k) factorial *= k;
    s.add_exact("sphere-volume-exact", "vol(S^{2m+1}) = 2 pi^{m+1}/m!", {{"m", m}},
                sphere_moment_exact(zeros) == Rational(2) / factorial);
    for (double mu : s.mus()) {
      const BergerContext ctx(m, mu);
      const Estimate e = integrate_sphere([](const Vec&) { return 1.0; }, rule, ctx);
      const double expected = ctx.sqrt_abs_mu() * sphere_volume(m);
      s.add("sphere-volume", "vol(S^{2m+1}, g_mu) = sqrt|mu| vol(S^{2m+1})", {{"m", m}, {"mu", mu}},
            std::abs(e.value - expected) / expected, s.tol(1e-12));
    }
  }
}

void monomials(int n, int degree, std::vector<int>& e, int pos, std::vector<std::vector<int>>& out) {
  if (pos == n) {
    out.push_back(e);
    return;
  }
  for (int k = 0; k <= degree; ++k) {
    e[pos] = k;
    monomials(n, degree - k, e, pos + 1, out);
  }
  e[pos] = 0;
}

void quadrature_suite(Suite& s) {
  for (int m : s.ms()) {
    const int n = 2 * m + 2, degree = 8;
    const QuadratureRule rule = product_rule_for_degree(m, degree);
    std::vector<std::vector<int>> all;
    std::vector<int> e(n, 0);
    monomials(n, degree, e, 0, all);
    double worst = 0.0;
    const BergerContext ctx(m, 1.0);
    for (const auto& exps : all) {
      const double num_value = integrate_sphere(
                                   [&](const Vec& p) {
                                     double v = 1.0;
                                     for (int i = 0; i < n; ++i) v *= std::pow(p[i], exps[i]);
                                     return v;
                                   },
                                   rule, ctx)
                                   .value;
      worst = std::max(worst, std::abs(num_value - sphere_moment(exps)));
    }
    s.add("quadrature-exactness", "product rule integrates monomials of degree <= 8 exactly",
          {{"m", m}, {"rule", rule.descriptor()}, {"monomials", all.size()}}, worst, s.tol(1e-12));
  }
}

void tanno_suite(Suite& s) {
  for (int m : s.ms()) {
    const int n = 2 * m + 2;
    auto x = [&](int i) { return Polynomial::variable(n, i); };
    const Polynomial f = x(0) * x(1) + x(m + 1) * x(m + 2);
    double recon = 0.0, eigen = 0.0;
    for (const Vec& p : sphere_points(m, std::min(s.points(), 100), s.seed())) {
      const double f0 = tanno_project(f, 0, p), f2 = tanno_project(f, 2, p);
      recon = std::max(recon, std::abs(f0 + f2 - f.evaluate(p)));
      for (int l : {0, 2}) {
        const double vv = vertical_second_derivative([&](const Vec& q) { return tanno_project(f, l, q); }, p, 16);
        eigen = std::max(eigen, std::abs(vv - l * l * tanno_project(f, l, p)));
      }
    }
    s.add("tanno-reconstruction", "f = f_0 + f_2 for f = x_1 x_2 + x_{m+2} x_{m+3}", {{"m", m}}, recon, s.tol(1e-10));
    s.add("tanno-eigen", "V(V(f_l)) = -l^2 f_l", {{"m", m}}, eigen, s.tol(1e-8));
  }
}

void sigma2_suite(Suite& s) {
  std::mt19937_64 rng(s.seed());
  for (int dim : {3, 5}) {
    double worst = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
      Mat m(dim, dim);
      for (int i = 0; i < dim; ++i) m.col(i) = gaussian(dim, rng);
      const double s2 = sigma2(m);
      const double tr = m.trace();
      const double scale = std::max(1.0, (m * m).cwiseAbs().sum());
      const Eigen::VectorXcd ev = m.eigenvalues();
      std::complex<double> e2 = 0.0;
      for (int i = 0; i < dim; ++i)
        for (int j = i + 1; j < dim; ++j) e2 += ev[i] * ev[j];
      worst = std::max({worst, std::abs(2.0 * s2 - (tr * tr - (m * m).trace())) / scale,
                        std::abs(std::complex<double>(s2) - e2) / scale});
    }
    s.add("sigma2", "2 sigma_2(M) = (tr M)^2 - tr(M^2) and sigma_2 = sum_{i<j} k_i k_j", {{"dim", dim}}, worst,
          s.tol(1e-10));
  }
}

void hopf_functionals_suite(Suite& s) {
  for (int m : s.ms()) {
    const QuadratureRule rule = product_rule_for_degree(m, 4);
    for (double mu : s.mus()) {
      const BergerContext ctx(m, mu);
      const HopfAmbientField v(ctx);
      const double vol = ctx.sqrt_abs_mu() * sphere_volume(m);
      const double e = evaluate_functional(v, FunctionalId::energy(), ctx, rule);
      const double f = evaluate_functional(v, FunctionalId::volume(), ctx, rule);
      const double eg = evaluate_functional(v, FunctionalId::generalized(mu), ctx, rule);
      const double e_expected = 0.5 * (2.0 * m + 1.0 + 2.0 * m * ctx.abs_mu()) * vol;
      const double f_expected = std::pow(1.0 + ctx.abs_mu(), m) * vol;
      const json params{{"m", m}, {"mu", mu}};
      s.add("hopf-energy", "E(V^mu) = 1/2 (2m + 1 + 2m|mu|) vol_mu", params, std::abs(e - e_expected) / e_expected,
            s.tol(1e-10));
      s.add("hopf-volume", "F(V^mu) = (1+|mu|)^m vol_mu", params, std::abs(f - f_expected) / f_expected,
            s.tol(1e-10));
      s.add("egl-at-mu", "E_{g_lambda}(V^mu) = E(V^mu) at lambda = mu", params, std::abs(eg - e) / e, s.tol(1e-12));
      if (mu > 0) {
        const double lam = mu / (1.0 + mu);
        const double el = evaluate_functional(v, FunctionalId::generalized(lam), ctx, rule);
        const double rhs = 2.0 / (2.0 * m + 1.0) * std::pow(1.0 + mu, (2.0 * m - 1.0) / 2.0) * el;
        s.add("volume-egl-relation", "F(V^mu) = (2/n) E_{(V^mu)* g^S}(V^mu), (V^mu)* g^S = (1+|mu|) g_lambda",
              {{"m", m}, {"mu", mu}, {"lambda", lam}}, std::abs(f - rhs) / f, s.tol(1e-10));
      }
    }
  }
}

void pullback_suite(Suite& s) {
  for (int m : s.ms())
    for (double mu : s.mus()) {
      const BergerContext ctx(m, mu);
      const double lam = mu / (1.0 + ctx.abs_mu());
      double worst = 0.0;
      for (const Vec& p : sphere_points(m, s.points(), s.seed())) {
        const Mat f = detail::adapted_frame_matrix(p, ctx);
        const Vec vmu = complex_structure(p) / ctx.sqrt_abs_mu();
        std::vector<Vec> dv;
        for (int a = 0; a < f.cols(); ++a)
          dv.push_back(detail::nabla_mu_from_directional(p, f.col(a), vmu,
                                                         complex_structure(Vec(f.col(a))) / ctx.sqrt_abs_mu(), mu));
        for (int a = 0; a < f.cols(); ++a)
          for (int b = 0; b < f.cols(); ++b) {
            const double pull = detail::g_mu(p, f.col(a), f.col(b), mu) + detail::g_mu(p, dv[a], dv[b], mu);
            const double target = (1.0 + ctx.abs_mu()) * detail::g_mu(p, f.col(a), f.col(b), lam);
            worst = std::max(worst, std::abs(pull - target));
          }
      }
      s.add("pullback-metric", "(V^mu)* g^S = (1+|mu|) g_lambda with lambda = mu/(1+|mu|)",
            {{"m", m}, {"mu", mu}, {"lambda", lam}}, worst, s.tol(1e-12));
    }
}

}  // namespace

const std::vector<std::string>& identity_names() {
  static const std::vector<std::string> names{
      "complex-structure", "hopf-field",     "frame",         "metric",         "round-limit",
      "quaternion-frame",  "eigen-berger",   "eigen-vertical", "mixed-eigenvalue", "jhess",
      "hess-ratio",        "ball-ratio",     "c2s-norm",      "c2s-vertical",   "s3-eigenpair",
      "s3-vertical",       "dbarc",          "sphere-volume", "quadrature",     "tanno",
      "sigma2",            "hopf-functionals", "pullback-metric"};
  return names;
}

std::vector<IdentityCheck> run_identity(const std::string& name, const json& resolved) {
  Suite s{resolved, {}};
  const std::vector<int> ms = s.ms();
  const bool has_s3 = std::find(ms.begin(), ms.end(), 1) != ms.end();
  if (name == "complex-structure") complex_structure_suite(s);
  else if (name == "hopf-field") hopf_field_suite(s);
  else if (name == "frame") frame_suite(s);
  else if (name == "metric") metric_suite(s);
  else if (name == "round-limit") round_limit_suite(s);
  else if (name == "quaternion-frame") { if (has_s3) quaternion_suite(s); }
  else if (name == "eigen-berger") eigen_suite(s, false);
  else if (name == "eigen-vertical") eigen_suite(s, true);
  else if (name == "mixed-eigenvalue") mixed_eigenvalue_suite(s);
  else if (name == "jhess") jhess_suite(s);
  else if (name == "hess-ratio") hess_ratio_suite(s);
  else if (name == "ball-ratio") ball_ratio_suite(s);
  else if (name == "c2s-norm") c2s_norm_suite(s);
  else if (name == "c2s-vertical") c2s_vertical_suite(s);
  else if (name == "s3-eigenpair") { if (has_s3) s3_eigenpair_suite(s); }
  else if (name == "s3-vertical") { if (has_s3) s3_vertical_suite(s); }
  else if (name == "dbarc") { if (has_s3) dbarc_suite(s); }
  else if (name == "sphere-volume") volume_suite(s);
  else if (name == "quadrature") quadrature_suite(s);
  else if (name == "tanno") tanno_suite(s);
  else if (name == "sigma2") sigma2_suite(s);
  else if (name == "hopf-functionals") hopf_functionals_suite(s);
  else if (name == "pullback-metric") pullback_suite(s);
  else throw Error(ErrorCode::InvalidArgument, "unknown identity '" + name + "'");
  return std::move(s.out);
}

RunResult run_verify(const json& config) {
  const json cfg = resolve_config("verify", config);
  const json header{{"schema", kReportSchema}, {"tool", "berger"}, {"version", library_version()},
                    {"command", "verify"}, {"config", cfg}};
  json checks = json::array();
  std::size_t failed = 0;
  std::string csv = "# berger " + std::string(library_version()) + " verify\n# config " + cfg.dump() +
                    "\nidentity,statement,params,residual,tolerance,pass\n";
  for (const auto& name : cfg.at("identity").get<std::vector<std::string>>()) {
    for (const auto& c : run_identity(name, cfg)) {
      if (!c.pass) ++failed;
      checks.push_back(c.to_json());
      std::string params = c.params.dump();
      std::replace(params.begin(), params.end(), ',', ';');
      char buf[64];
      std::snprintf(buf, sizeof buf, "%.3e,%.1e", c.residual, c.tolerance);
      csv += c.name + ",\"" + c.statement + "\"," + params + "," + buf + "," + (c.pass ? "pass" : "fail") + "\n";
    }
  }
  RunResult out;
  out.report = {{"header", header}, {"identities", checks},
                {"summary", {{"checks", checks.size()}, {"failed", failed}}}};
  out.exit_code = failed ? 1 : 0;
  out.output = cfg.at("format") == "csv" ? csv : out.report.dump(2) + "\n";
  return out;
}

}  // namespace berger

#include "berger/quadrature.hpp"

#include "berger/parallel.hpp"

#include <cmath>
#include <numbers>
#include <random>

namespace berger {

namespace {

constexpr std::size_t kChunk = 2048;

mpz_class factorial(int n) {
  mpz_class r;
  mpz_fac_ui(r.get_mpz_t(), static_cast<unsigned long>(n));
  return r;
}

void check_exponents(const std::vector<int>& e) {
  if (e.size() < 4 || e.size() % 2 != 0)
    throw Error(ErrorCode::DimensionMismatch, "moments need 2m+2 exponents with m >= 1");
  for (int a : e)
    if (a < 0) throw Error(ErrorCode::InvalidArgument, "negative exponent");
}

// Appends the torus angles for m+1 circles to every simplex node.
void add_torus_nodes(QuadratureRule& rule, const std::vector<std::vector<double>>& radii,
                     const std::vector<double>& radial_weights) {
  const int h = rule.m + 1;
  const int na = rule.n_angle;
  const double dtheta = 2.0 * std::numbers::pi / na;
  std::size_t ncircle = 1;
  for (int j = 0; j < h; ++j) ncircle *= static_cast<std::size_t>(na);
  const double angle_weight = std::pow(dtheta, h) * std::ldexp(1.0, -rule.m);
  std::vector<int> idx(h);
  for (std::size_t r = 0; r < radii.size(); ++r) {
    for (std::size_t c = 0; c < ncircle; ++c) {
      std::size_t rem = c;
      Vec x(2 * h);
      for (int j = 0; j < h; ++j) {
        idx[j] = static_cast<int>(rem % na);
        rem /= na;
        const double th = dtheta * idx[j];
        x[j] = radii[r][j] * std::cos(th);
        x[j + h] = radii[r][j] * std::sin(th);
      }
      rule.nodes.push_back(x / x.norm());
      rule.weights.push_back(angle_weight * radial_weights[r]);
    }
  }
}

}  // namespace

std::string to_string(RuleKind kind) {
  switch (kind) {
    case RuleKind::ExactMoments: return "exact";
    case RuleKind::HopfProductS3: return "hopf";
    case RuleKind::TorusProduct: return "torus";
    case RuleKind::MonteCarlo: return "mc";
  }
  return "unknown";
}

nlohmann::json QuadratureRule::descriptor() const {
  nlohmann::json j{{"rule", to_string(kind)}, {"m", m}};
  if (kind == RuleKind::HopfProductS3 || kind == RuleKind::TorusProduct) {
    j["n_angle"] = n_angle;
    j["n_radial"] = n_radial;
    j["nodes"] = nodes.size();
  } else if (kind == RuleKind::MonteCarlo) {
    j["n"] = samples;
    j["seed"] = seed;
  }
  return j;
}

void gauss_legendre_unit(int n, std::vector<double>& nodes, std::vector<double>& weights) {
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "Gauss-Legendre needs at least one node");
  nodes.assign(n, 0.0);
  weights.assign(n, 0.0);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1.0;
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // Recompute the derivative at the converged node.
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
      double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    if (n == 1) p0 = 1.0;
    dp = n * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    // Map [-1, 1] -> [0, 1].
    nodes[i] = 0.5 * (1.0 - x);
    nodes[n - 1 - i] = 0.5 * (1.0 + x);
    weights[i] = weights[n - 1 - i] = 0.5 * w;
  }
}

QuadratureRule exact_moment_rule(int m) {
  if (m < 1) throw Error(ErrorCode::InvalidArgument, "m must be positive");
  QuadratureRule r;
  r.kind = RuleKind::ExactMoments;
  r.m = m;
  return r;
}

QuadratureRule torus_product_rule(int m, int n_angle, int n_radial) {
  if (m < 1 || n_angle < 1 || n_radial < 1)
    throw Error(ErrorCode::InvalidArgument, "product rule needs m, n_angle, n_radial >= 1");
  QuadratureRule rule;
  rule.kind = RuleKind::TorusProduct;
  rule.m = m;
  rule.n_angle = n_angle;
  rule.n_radial = n_radial;

  std::vector<double> gx, gw;
  gauss_legendre_unit(n_radial, gx, gw);
  // Conical product over the simplex {u_j >= 0, sum u_j = 1}, u_j = r_j^2.
  std::vector<std::vector<double>> radii;
  std::vector<double> radial_weights;
  std::size_t total = 1;
  for (int k = 0; k < m; ++k) total *= static_cast<std::size_t>(n_radial);
  for (std::size_t c = 0; c < total; ++c) {
    std::size_t rem = c;
    std::vector<double> u(m + 1);
    double left = 1.0, w = 1.0;
    for (int k = 0; k < m; ++k) {
      const int i = static_cast<int>(rem % n_radial);
      rem /= n_radial;
      u[k] = gx[i] * left;
      w *= gw[i] * std::pow(1.0 - gx[i], m - 1 - k);
      left *= 1.0 - gx[i];
    }
    u[m] = left;
    std::vector<double> r(m + 1);
    for (int j = 0; j <= m; ++j) r[j] = std::sqrt(u[j]);
    radii.push_back(std::move(r));
    radial_weights.push_back(w);
  }
  add_torus_nodes(rule, radii, radial_weights);
  return rule;
}

QuadratureRule hopf_product_rule(int n_eta, int n_xi) {
  // u = cos^2(eta) turns sin(eta)cos(eta) d(eta) into du / 2, so the torus
  // construction with m = 1 is exactly the (eta, xi1, xi2) product rule.
  QuadratureRule r = torus_product_rule(1, n_xi, n_eta);
  r.kind = RuleKind::HopfProductS3;
  return r;
}

QuadratureRule product_rule_for_degree(int m, int degree) {
  degree = std::max(degree, 0);
  const int n_angle = degree + 1;
  const int n_radial = (degree / 2 + m) / 2 + 1;
  return m == 1 ? hopf_product_rule(n_radial, n_angle) : torus_product_rule(m, n_angle, n_radial);
}

QuadratureRule monte_carlo_rule(int m, std::size_t n, std::uint64_t seed) {
  if (m < 1) throw Error(ErrorCode::InvalidArgument, "m must be positive");
  if (n == 0) throw Error(ErrorCode::InvalidArgument, "Monte Carlo needs at least one sample");
  QuadratureRule rule;
  rule.kind = RuleKind::MonteCarlo;
  rule.m = m;
  rule.samples = n;
  rule.seed = seed;
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  const int dim = 2 * m + 2;
  const double w = sphere_volume(m) / static_cast<double>(n);
  rule.nodes.reserve(n);
  rule.weights.assign(n, w);
  for (std::size_t i = 0; i < n; ++i) {
    Vec x(dim);
    do {
      for (int k = 0; k < dim; ++k) x[k] = normal(gen);
    } while (x.squaredNorm() == 0.0);
    rule.nodes.push_back(x / x.norm());
  }
  return rule;
}

QuadratureRule rule_from_json(const nlohmann::json& j, int m, int degree_hint) {
  const std::string kind = j.value("rule", std::string("exact"));
  if (kind == "exact") return exact_moment_rule(m);
  if (kind == "hopf" || kind == "torus") {
    if (kind == "hopf" && m != 1) throw Error(ErrorCode::Incompatible, "the Hopf product rule is defined for m = 1 only");
    QuadratureRule base = product_rule_for_degree(m, degree_hint);
    int na = j.value("n", base.n_angle);
    int nr = j.value("n_radial", std::max(base.n_radial, (na + 2 * m) / 4 + 1));
    return kind == "hopf" ? hopf_product_rule(nr, na) : torus_product_rule(m, na, nr);
  }
  if (kind == "mc") {
    const auto n = j.value("n", std::size_t{100000});
    return monte_carlo_rule(m, n, j.value("seed", std::uint64_t{1}));
  }
  throw Error(ErrorCode::InvalidArgument, "unknown quadrature rule '" + kind + "'");
}

double pi_power(int k) { return std::pow(std::numbers::pi, k); }

double sphere_volume(int m) { return 2.0 * pi_power(m + 1) / std::tgamma(m + 1.0); }

Rational sphere_moment_exact(const std::vector<int>& e) {
  check_exponents(e);
  const int m = static_cast<int>(e.size()) / 2 - 1;
  int half_total = 0;
  Rational prod(1);
  for (int a : e) {
    if (a % 2) return 0;
    const int k = a / 2;
    half_total += k;
    // Gamma(k + 1/2) / sqrt(pi) = (2k)! / (4^k k!)
    mpz_class four_k;
    mpz_ui_pow_ui(four_k.get_mpz_t(), 4, static_cast<unsigned long>(k));
    prod *= Rational(factorial(2 * k), four_k * factorial(k));
  }
  Rational r = 2 * prod / Rational(factorial(half_total + m));
  r.canonicalize();
  return r;
}

double sphere_moment(const std::vector<int>& e) {
  const int m = static_cast<int>(e.size()) / 2 - 1;
  return sphere_moment_exact(e).get_d() * pi_power(m + 1);
}

Rational ball_moment_exact(const std::vector<int>& e) {
  Rational s = sphere_moment_exact(e);
  int total = static_cast<int>(e.size());
  for (int a : e) total += a;
  Rational r = s / total;
  r.canonicalize();
  return r;
}

double ball_moment(const std::vector<int>& e) {
  const int m = static_cast<int>(e.size()) / 2 - 1;
  return ball_moment_exact(e).get_d() * pi_power(m + 1);
}

Rational sphere_integral_exact(const Polynomial& f) {
  Rational sum(0);
  for (const auto& [e, c] : f.terms()) sum += c * sphere_moment_exact(e);
  sum.canonicalize();
  return sum;
}

double sphere_integral(const Polynomial& f) {
  const int m = f.nvars() / 2 - 1;
  return sphere_integral_exact(f).get_d() * pi_power(m + 1);
}

std::vector<double> integrate_round(const std::function<void(const Vec&, double*)>& f, int k,
                                    const QuadratureRule& rule, std::vector<double>* std_errors) {
  return integrate_round_indexed([&](std::size_t, const Vec& p, double* out) { f(p, out); }, k, rule, std_errors);
}

std::vector<double> integrate_round_indexed(const std::function<void(std::size_t, const Vec&, double*)>& f, int k,
                                            const QuadratureRule& rule, std::vector<double>* std_errors) {
  if (!rule.has_nodes())
    throw Error(ErrorCode::Incompatible, "the exact-moment rule integrates polynomials only");
  const std::size_t n = rule.nodes.size();
  const std::size_t nchunks = (n + kChunk - 1) / kChunk;
  std::vector<std::vector<CompensatedSum>> partial(nchunks, std::vector<CompensatedSum>(k));
  std::vector<std::vector<CompensatedSum>> partial_sq(nchunks, std::vector<CompensatedSum>(k));
  const bool mc = rule.kind == RuleKind::MonteCarlo;
  parallel_chunks(n, kChunk, [&](std::size_t c, std::size_t begin, std::size_t end) {
    std::vector<double> out(k);
    for (std::size_t i = begin; i < end; ++i) {
      f(i, rule.nodes[i], out.data());
      for (int q = 0; q < k; ++q) {
        partial[c][q].add(rule.weights[i] * out[q]);
        if (mc) partial_sq[c][q].add(out[q] * out[q]);
      }
    }
  });
  std::vector<double> result(k);
  if (std_errors) std_errors->assign(k, 0.0);
  for (int q = 0; q < k; ++q) {
    CompensatedSum s, s2;
    for (std::size_t c = 0; c < nchunks; ++c) {
      s.add(partial[c][q].value());
      s2.add(partial_sq[c][q].value());
    }
    result[q] = s.value();
    if (mc && std_errors) {
      const double nn = static_cast<double>(n);
      const double vol = sphere_volume(rule.m);
      const double mean = result[q] / vol;
      const double var = std::max(0.0, s2.value() / nn - mean * mean);
      (*std_errors)[q] = vol * std::sqrt(var / std::max(1.0, nn - 1.0));
    }
  }
  return result;
}

Estimate integrate_sphere(const std::function<double(const Vec&)>& f, const QuadratureRule& rule,
                          const BergerContext& ctx) {
  if (rule.m != ctx.m()) throw Error(ErrorCode::Incompatible, "rule dimension does not match the context");
  if (!rule.has_nodes())
    throw Error(ErrorCode::Incompatible, "the exact-moment path needs a polynomial integrand");
  std::vector<double> se;
  auto v = integrate_round([&](const Vec& p, double* out) { out[0] = f(p); }, 1, rule, &se);
  return {ctx.sqrt_abs_mu() * v[0], ctx.sqrt_abs_mu() * se[0]};
}

Estimate integrate_sphere(const Polynomial& f, const QuadratureRule& rule, const BergerContext& ctx) {
  if (rule.m != ctx.m() || f.nvars() != ctx.dim())
    throw Error(ErrorCode::Incompatible, "rule dimension does not match the context");
  if (!rule.has_nodes()) return {ctx.sqrt_abs_mu() * sphere_integral(f), 0.0};
  CompiledPolyVector cf(PolyVector{f});
  return integrate_sphere([&](const Vec& p) { return cf.value(p)[0]; }, rule, ctx);
}

}  // namespace berger

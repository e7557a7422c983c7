#include "berger/stability.hpp"

#include "berger/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <memory>
#include <mutex>
#include <sstream>
#include <tuple>

namespace berger {

namespace {

// Exact moments of the witness directions, shared across grid cells.
const FieldMoments& cached_moments(const std::string& family, int m, int s) {
  static std::mutex lock;
  static std::map<std::tuple<std::string, int, int>, std::unique_ptr<FieldMoments>> cache;
  const auto key = std::make_tuple(family, m, s);
  {
    std::lock_guard<std::mutex> guard(lock);
    auto it = cache.find(key);
    if (it != cache.end()) return *it->second;
  }
  const BergerContext ctx(m, 1.0);
  FieldMoments mom;
  if (family == "C2s") {
    mom = field_moments_exact(field_C2s(s, 1, ctx)).values();
  } else if (family == "s3") {
    const TangentField f = s == 0 ? field_s3_frame(ctx) : field_s3(s3_eigenpair(s), ctx);
    mom = field_moments_exact(f).values();
  } else {
    throw Error(ErrorCode::InvalidArgument, "unknown witness family '" + family + "'");
  }
  std::lock_guard<std::mutex> guard(lock);
  auto& slot = cache[key];
  if (!slot) slot = std::make_unique<FieldMoments>(mom);
  return *slot;
}

std::optional<Witness> checked(Witness w, int m, double mu, const FunctionalId& id) {
  w.revalidated = revalidate_witness(w, m, mu, id) < 0.0;
  if (!w.revalidated) return std::nullopt;
  return w;
}

Witness s3_witness(int level, double mu, double lambda) {
  return {"s3", level, s3_coefficient(level, mu, lambda), false};
}

double s3_direct_coefficient(int level, double mu, const FunctionalId& id) {
  const BergerContext ctx(1, mu);
  const FieldMoments& mom = cached_moments("s3", 1, level);
  return hess_hopf_from_moments(mom, id, ctx) / (ctx.sqrt_abs_mu() * mom.ia);
}

std::vector<double> linspace(double lo, double hi, int n) {
  std::vector<double> out(n);
  for (int i = 0; i < n; ++i) out[i] = n == 1 ? lo : lo + (hi - lo) * i / (n - 1);
  return out;
}

std::string num(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

}  // namespace

std::string to_string(Region region) {
  switch (region) {
    case Region::Stable: return "stable";
    case Region::Unstable: return "unstable";
    case Region::Unknown: return "unknown";
  }
  return "unknown";
}

double c2s_witness_coefficient(int m, double mu, const FunctionalId& id, int s) {
  const auto c = hess_c2s_coefficients(s, m, mu,
                                       id.kind == FunctionalKind::GeneralizedEnergy ? std::optional<double>(id.lambda)
                                                                                    : std::nullopt);
  switch (id.kind) {
    case FunctionalKind::Energy: return c.energy;
    case FunctionalKind::Volume: return c.volume;
    case FunctionalKind::GeneralizedEnergy: return *c.generalized;
  }
  return 0.0;
}

double revalidate_witness(const Witness& w, int m, double mu, const FunctionalId& id) {
  const BergerContext ctx(m, mu);
  return hess_hopf_from_moments(cached_moments(w.family, m, w.s), id, ctx);
}

std::optional<Witness> instability_witness(int m, double mu, const FunctionalId& id, int s_max) {
  for (int s = 1; s <= s_max; ++s) {
    const double c = c2s_witness_coefficient(m, mu, id, s);
    if (c < 0.0) return checked({"C2s", s, c, false}, m, mu, id);
  }
  return std::nullopt;
}

StabilityClassification classify_s3(double mu, double lambda) {
  if (!(mu > 0.0 && lambda > 0.0)) throw Error(ErrorCode::InvalidArgument, "classify_s3 needs mu > 0 and lambda > 0");
  const double b_frame = (mu - 2.0) * (mu - 2.0) / mu;
  const bool stable_a = mu <= 8.0 / 3.0 && lambda <= b_frame;
  const bool stable_b = mu > 8.0 / 3.0 && mu <= 4.0 && lambda <= (mu - 3.0) * (mu - 3.0) / (mu - 2.0);
  const bool stable_c = mu > 4.0 && lambda <= mu - 4.0;
  const bool unstable_frame = lambda > b_frame;
  const bool unstable_l1 = mu > 2.0 && lambda > (mu - 3.0) * (mu - 3.0) / (mu - 2.0);
  const bool unstable_l2 = 4.0 - mu + (mu - 4.0) * (mu - 4.0) / lambda < 0.0;

  StabilityClassification out;
  std::vector<std::string> stable, unstable;
  if (stable_a) stable.push_back("stable-a");
  if (stable_b) stable.push_back("stable-b");
  if (stable_c) stable.push_back("stable-c");
  // Higher eigenpair levels take precedence as the reported witness.
  if (unstable_l2) unstable.push_back("unstable-level2");
  if (unstable_l1) unstable.push_back("unstable-level1");
  if (unstable_frame) unstable.push_back("unstable-frame");
  out.doubly_classified = !stable.empty() && !unstable.empty();

  const FunctionalId id = FunctionalId::generalized(lambda);
  if (!unstable.empty()) {
    const int level = unstable_l2 ? 2 : unstable_l1 ? 1 : 0;
    out.region = Region::Unstable;
    out.predicate = unstable.front();
    out.witness = checked(s3_witness(level, mu, lambda), 1, mu, id);
    if (!out.witness) {
      out.region = Region::Unknown;
      out.predicate = "boundary";
      out.flags.push_back("witness-rejected");
    }
    for (std::size_t i = out.witness ? 1 : 0; i < unstable.size(); ++i) out.flags.push_back(unstable[i]);
    for (const auto& s : stable) out.flags.push_back(s);
  } else if (!stable.empty()) {
    out.region = Region::Stable;
    out.predicate = stable.front();
    for (std::size_t i = 1; i < stable.size(); ++i) out.flags.push_back(stable[i]);
  } else {
    out.region = Region::Unknown;
    out.predicate = "boundary";
  }
  return out;
}

StabilityClassification classify_general(int m, double mu, const FunctionalId& id, int s_max) {
  if (m < 1) throw Error(ErrorCode::InvalidArgument, "m must be positive");
  if (mu == 0.0 || !std::isfinite(mu)) throw Error(ErrorCode::InvalidArgument, "mu must be a nonzero real");

  StabilityClassification out;
  auto from_witness = [&](const char* predicate, std::optional<Witness> w) {
    if (w) {
      out.region = Region::Unstable;
      out.predicate = predicate;
      out.witness = w;
    } else {
      out.region = Region::Unknown;
      out.predicate = "no-witness";
    }
  };

  if (id.kind == FunctionalKind::GeneralizedEnergy) {
    const double lambda = id.lambda;
    if (lambda < 0.0) {
      from_witness("negative-lambda-witness", instability_witness(m, mu, id, s_max));
    } else if (mu < 0.0) {
      out.region = Region::Stable;
      out.predicate = "lorentz-positive-lambda";
    } else if (m == 1) {
      out = classify_s3(mu, lambda);
    } else {
      from_witness("riemann-witness", instability_witness(m, mu, id, s_max));
    }
    return out;
  }

  if (mu < 0.0) {
    from_witness("lorentz-witness", instability_witness(m, mu, id, s_max));
    const bool aa = id.kind == FunctionalKind::Energy
                        ? (2.0 * m - 2.0) * mu * mu < 1.0
                        : (2.0 - 2.0 * m) * mu * mu * mu + (4.0 * m - 4.0) * mu * mu + mu < 1.0;
    if (aa) out.flags.push_back("aa-lorentz");
    return out;
  }

  from_witness("riemann-witness", instability_witness(m, mu, id, s_max));
  if (!out.witness && m == 1) {
    for (int level = 0; level <= 2; ++level) {
      const double c = s3_direct_coefficient(level, mu, id);
      if (c < 0.0) {
        from_witness("s3-witness", checked({"s3", level, c, false}, 1, mu, id));
        if (out.witness) break;
      }
    }
  }
  return out;
}

std::vector<Polyline> boundary_curves(double mu_lo, double mu_hi, double lambda_hi, int n) {
  std::vector<Polyline> out;
  auto sample = [&](const char* name, double lo, double hi, double (*f)(double)) {
    lo = std::max(lo, mu_lo);
    hi = std::min(hi, mu_hi);
    if (!(hi > lo)) return;
    Polyline line{name, {}};
    for (double mu : linspace(lo, hi, n)) {
      const double l = f(mu);
      if (l >= 0.0 && l <= lambda_hi) line.points.emplace_back(mu, l);
    }
    if (line.points.size() > 1) out.push_back(std::move(line));
  };
  const double tiny = 1e-9;
  sample("frame", tiny, mu_hi, [](double mu) { return (mu - 2.0) * (mu - 2.0) / mu; });
  sample("level1", 2.0 + tiny, mu_hi, [](double mu) { return (mu - 3.0) * (mu - 3.0) / (mu - 2.0); });
  sample("level2", 4.0, mu_hi, [](double mu) { return mu - 4.0; });
  return out;
}

std::pair<double, double> boundary_intersection() {
  // mu (mu-3)^2 - (mu-2)^3 changes sign on [2.5, 3].
  auto g = [](long double mu) { return mu * (mu - 3) * (mu - 3) - (mu - 2) * (mu - 2) * (mu - 2); };
  long double lo = 2.5L, hi = 3.0L;
  const bool lo_neg = g(lo) < 0;
  for (int i = 0; i < 200; ++i) {
    const long double mid = 0.5L * (lo + hi);
    if ((g(mid) < 0) == lo_neg)
      lo = mid;
    else
      hi = mid;
  }
  const long double mu = 0.5L * (lo + hi);
  return {static_cast<double>(mu), static_cast<double>((mu - 2) * (mu - 2) / mu)};
}

PhaseGrid figure1_grid(int m, double mu_lo, double mu_hi, double lambda_lo, double lambda_hi, int resolution) {
  if (resolution < 2) throw Error(ErrorCode::InvalidArgument, "resolution must be at least 2");
  if (!(mu_hi > mu_lo) || !(lambda_hi > lambda_lo)) throw Error(ErrorCode::InvalidArgument, "empty range");
  PhaseGrid grid;
  grid.m = m;
  grid.mu = linspace(mu_lo, mu_hi, resolution);
  grid.lambda = linspace(lambda_lo, lambda_hi, resolution);
  grid.cells.resize(grid.mu.size() * grid.lambda.size());
  const std::size_t nl = grid.lambda.size();
  parallel_chunks(grid.cells.size(), 1024, [&](std::size_t, std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      const double mu = grid.mu[i / nl], lambda = grid.lambda[i % nl];
      StabilityClassification& cell = grid.cells[i];
      if (mu == 0.0 || lambda == 0.0) {
        cell.region = Region::Unknown;
        cell.predicate = "degenerate";
        continue;
      }
      cell = classify_general(m, mu, FunctionalId::generalized(lambda));
    }
  });
  for (const auto& c : grid.cells) {
    if (c.region == Region::Stable) ++grid.stable;
    if (c.region == Region::Unstable) ++grid.unstable;
    if (c.region == Region::Unknown) ++grid.unknown;
    if (c.doubly_classified) ++grid.doubly;
  }
  if (m == 1 && mu_hi > 0.0 && lambda_hi > 0.0)
    grid.boundaries = boundary_curves(std::max(mu_lo, 0.0), mu_hi, lambda_hi, 4 * resolution);
  return grid;
}

std::string grid_csv(const PhaseGrid& grid) {
  std::ostringstream os;
  os << "mu,lambda,region,predicate,witness_family,witness_s\n";
  for (std::size_t i = 0; i < grid.mu.size(); ++i)
    for (std::size_t j = 0; j < grid.lambda.size(); ++j) {
      const auto& c = grid.at(i, j);
      os << num(grid.mu[i]) << ',' << num(grid.lambda[j]) << ',' << to_string(c.region) << ',' << c.predicate << ',';
      if (c.witness) os << c.witness->family << ',' << c.witness->s;
      else os << ',';
      os << '\n';
    }
  return os.str();
}

std::string grid_svg(const PhaseGrid& grid) {
  const double width = 600.0, height = 300.0, margin = 40.0;
  const double mu_lo = grid.mu.front(), mu_hi = grid.mu.back();
  const double l_lo = grid.lambda.front(), l_hi = grid.lambda.back();
  const std::size_t nm = grid.mu.size(), nl = grid.lambda.size();
  const double cw = width / nm, ch = height / nl;
  auto px = [&](double mu) { return margin + (mu - mu_lo) / (mu_hi - mu_lo) * width * (nm - 1) / nm + 0.5 * cw; };
  auto py = [&](double l) { return margin + height - (l - l_lo) / (l_hi - l_lo) * height * (nl - 1) / nl - 0.5 * ch; };
  auto fill = [](Region r) {
    switch (r) {
      case Region::Stable: return "#555555";
      case Region::Unstable: return "#d3d3d3";
      case Region::Unknown: return "#ffffff";
    }
    return "#ffffff";
  };

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(width + 2 * margin) << "\" height=\""
     << num(height + 2 * margin) << "\" viewBox=\"0 0 " << num(width + 2 * margin) << ' ' << num(height + 2 * margin)
     << "\">\n";
  os << "<rect x=\"0\" y=\"0\" width=\"100%\" height=\"100%\" fill=\"white\"/>\n<g shape-rendering=\"crispEdges\">\n";
  for (std::size_t i = 0; i < nm; ++i) {
    std::size_t j = 0;
    while (j < nl) {
      const Region r = grid.at(i, j).region;
      std::size_t k = j;
      while (k < nl && grid.at(i, k).region == r) ++k;
      const double x = margin + i * cw;
      const double y = margin + height - k * ch;
      os << "<rect x=\"" << num(x) << "\" y=\"" << num(y) << "\" width=\"" << num(cw) << "\" height=\""
         << num((k - j) * ch) << "\" fill=\"" << fill(r) << "\"/>\n";
      j = k;
    }
  }
  os << "</g>\n";
  for (const auto& line : grid.boundaries) {
    os << "<polyline data-curve=\"" << line.name << "\" fill=\"none\" stroke=\"black\" stroke-width=\"1.2\" points=\"";
    for (std::size_t i = 0; i < line.points.size(); ++i)
      os << (i ? " " : "") << num(px(line.points[i].first)) << ',' << num(py(line.points[i].second));
    os << "\"/>\n";
  }
  os << "<rect x=\"" << num(margin) << "\" y=\"" << num(margin) << "\" width=\"" << num(width) << "\" height=\""
     << num(height) << "\" fill=\"none\" stroke=\"black\"/>\n";
  os << "<text x=\"" << num(margin + width / 2) << "\" y=\"" << num(height + 1.7 * margin)
     << "\" text-anchor=\"middle\" font-size=\"14\">mu</text>\n";
  os << "<text x=\"" << num(margin / 3) << "\" y=\"" << num(margin + height / 2)
     << "\" text-anchor=\"middle\" font-size=\"14\">lambda</text>\n";
  os << "<text x=\"" << num(margin) << "\" y=\"" << num(height + 1.4 * margin) << "\" font-size=\"11\">" << num(mu_lo)
     << "</text>\n";
  os << "<text x=\"" << num(margin + width) << "\" y=\"" << num(height + 1.4 * margin)
     << "\" text-anchor=\"end\" font-size=\"11\">" << num(mu_hi) << "</text>\n";
  os << "<text x=\"" << num(margin - 4) << "\" y=\"" << num(margin + height)
     << "\" text-anchor=\"end\" font-size=\"11\">" << num(l_lo) << "</text>\n";
  os << "<text x=\"" << num(margin - 4) << "\" y=\"" << num(margin + 10) << "\" text-anchor=\"end\" font-size=\"11\">"
     << num(l_hi) << "</text>\n";
  os << "</svg>\n";
  return os.str();
}

}  // namespace berger

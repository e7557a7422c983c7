#pragma once

// Embedded model of S^{2m+1} in R^{2m+2}.
//
// Coordinates pair as z_j = x_j + i x_{m+1+j} (j = 1..m+1, zero-based j and
// j+m+1 below), so J e_j = e_{m+1+j} and J e_{m+1+j} = -e_j. The unit normal
// is N(p) = p and the round Hopf field is V(p) = J p.

#include "berger/types.hpp"

#include <utility>
#include <vector>

namespace berger {

inline constexpr double kSphereTol = 1e-12;
inline constexpr double kTangentTol = 1e-10;
inline constexpr double kFdStep = 1e-5;

class SpherePoint {
 public:
  /// Throws NotOnSphere unless |<p,p> - 1| <= 1e-12.
  explicit SpherePoint(Vec position);
  static SpherePoint normalized(const Vec& v);

  const Vec& position() const noexcept { return position_; }
  int dim() const noexcept { return static_cast<int>(position_.size()); }

 private:
  Vec position_;
};

class TangentVector {
 public:
  /// Throws NotTangent unless |<vec, base>| <= 1e-10.
  TangentVector(SpherePoint base, Vec vec);

  const SpherePoint& base() const noexcept { return base_; }
  const Vec& vec() const noexcept { return vec_; }

 private:
  SpherePoint base_;
  Vec vec_;
};

struct AdaptedFrame {
  SpherePoint base;
  TangentVector vertical;                 // V^mu(p)
  std::vector<TangentVector> horizontal;  // E_1, JE_1, E_2, JE_2, ...
};

/// A vector field on R^{2m+2} whose restriction to the sphere is the field of
/// interest. Covariant derivatives only ever use derivatives along tangent
/// directions, so any smooth extension off the sphere is acceptable.
class AmbientField {
 public:
  virtual ~AmbientField() = default;
  virtual int dim() const = 0;
  virtual Vec value(const Vec& x) const = 0;
  /// Ambient Jacobian; the default is a central difference with step 1e-5.
  virtual Mat jacobian(const Vec& x) const;
};

/// V^mu = J x / sqrt|mu|, extended linearly.
class HopfAmbientField final : public AmbientField {
 public:
  explicit HopfAmbientField(const BergerContext& ctx) : ctx_(ctx) {}
  int dim() const override { return ctx_.dim(); }
  Vec value(const Vec& x) const override;
  Mat jacobian(const Vec& x) const override;

 private:
  BergerContext ctx_;
};

Vec complex_structure(const Vec& u);
/// Checked form: dim u must equal 2m+2.
Vec complex_structure(const Vec& u, int m);
/// Matrix of J in the standard basis.
Mat complex_structure_matrix(int m);

TangentVector hopf_field(const SpherePoint& p, const BergerContext& ctx);
TangentVector project_tangent(const SpherePoint& p, const Vec& u);

/// Round-metric Levi-Civita derivative nabla_X Y at the base of X.
TangentVector nabla(const TangentVector& x, const AmbientField& y);
/// Berger Levi-Civita derivative nabla^mu_X Y.
TangentVector nabla_mu(const TangentVector& x, const AmbientField& y, const BergerContext& ctx);

double g_mu(const TangentVector& x, const TangentVector& y, const BergerContext& ctx);

AdaptedFrame adapted_frame(const SpherePoint& p, const BergerContext& ctx);

/// Quaternion frame E_1 = jN, E_2 = kN on S^3 under q = z_1 + z_2 j.
std::pair<TangentVector, TangentVector> s3_quaternion_frame(const SpherePoint& p);

namespace detail {

// Unchecked kernels on raw coordinates, used in quadrature loops. Callers
// guarantee p is a unit vector and the arguments are tangent at p.

Vec tangent_part(const Vec& p, const Vec& u);
/// Projection onto the horizontal space span{p, Jp}^perp.
Vec horizontal_part(const Vec& p, const Vec& u);
double g_mu(const Vec& p, const Vec& x, const Vec& y, double mu);
/// nabla^mu_X Y - nabla_X Y = (mu-1)(<Y,V> J X_h + <X,V> J Y_h).
Vec berger_correction(const Vec& p, const Vec& x, const Vec& y, double mu);
/// nabla^mu_X Y from the ambient directional derivative D_X Y and Y(p).
Vec nabla_mu_from_directional(const Vec& p, const Vec& x, const Vec& y, const Vec& dy_x, double mu);
/// Columns e_0 = V^mu(p), then E_1, JE_1, ..., E_m, JE_m.
Mat adapted_frame_matrix(const Vec& p, const BergerContext& ctx);
/// Signature of the adapted frame: (eps_mu, 1, ..., 1).
Vec frame_signature(const BergerContext& ctx);
Vec quaternion_e1(const Vec& p);
Vec quaternion_e2(const Vec& p);

}  // namespace detail

}  // namespace berger

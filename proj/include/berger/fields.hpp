#pragma once

#include "berger/geometry.hpp"
#include "berger/polynomial.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace berger {

enum class FieldFamily { Aa, C2s, S3, Custom };

std::string to_string(FieldFamily family);

struct FieldDescriptor {
  FieldFamily family = FieldFamily::Custom;
  std::vector<double> a;  // Aa
  int s = 0;              // C2s: f has degree 2s
  int axis = 1;           // C2s
  int level = 0;          // S3: 0 (frame field E_1), 1 or 2
  std::string a1;         // S3: representative a_1, as text

  nlohmann::json to_json() const;
  std::string label() const;
};

/// Tangent vector field on S^{2m+1} with exact polynomial ambient components.
/// All constructed directions are horizontal, hence g_mu-orthogonal to V^mu
/// for every mu.
class TangentField final : public AmbientField {
 public:
  TangentField(FieldDescriptor descriptor, PolyVector components);

  int dim() const override { return static_cast<int>(components_.size()); }
  int m() const { return dim() / 2 - 1; }
  Vec value(const Vec& x) const override;
  Mat jacobian(const Vec& x) const override;
  void value_and_jacobian(const Vec& x, Vec& value, Mat& jac) const;

  const FieldDescriptor& descriptor() const noexcept { return descriptor_; }
  const PolyVector& components() const noexcept { return components_; }
  int degree() const;

 private:
  FieldDescriptor descriptor_;
  PolyVector components_;
  CompiledPolyVector compiled_;
};

/// Horizontal part of the round gradient of f: grad f - <grad f, N> N - V(f) V.
/// For every mu this equals grad^mu f - eps_mu V^mu(f) V^mu.
TangentField horizontal_gradient_field(const Polynomial& f, FieldDescriptor descriptor);

/// A_a = a - <a,V> V - <a,N> N.
TangentField field_Aa(const Vec& a, const BergerContext& ctx);
/// C_{2s} = grad^mu f_{2s} - eps_mu V^mu(f_{2s}) V^mu.
TangentField field_C2s(int s, int axis, const BergerContext& ctx);

/// Eigenfunction pair (a_1, a_2) on S^3 with a_2 = V(a_1)/level.
struct S3EigenPair {
  Polynomial a1;
  Polynomial a2;
  int level = 1;
};

S3EigenPair s3_eigenpair(int level);
/// Pair built from a chosen a_1 in P^level_level; validates the invariants.
S3EigenPair s3_eigenpair_from(const Polynomial& a1, int level);
/// A = a_1 E_1 + a_2 E_2.
TangentField field_s3(const S3EigenPair& pair, const BergerContext& ctx);
/// The quaternion frame field E_1 = jN (a_1 = 1, a_2 = 0).
TangentField field_s3_frame(const BergerContext& ctx);

/// Largest |g_mu(A, V^mu)| over the sample points.
double max_vertical_component(const TangentField& field, const BergerContext& ctx, const std::vector<Vec>& points);

}  // namespace berger

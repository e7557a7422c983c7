#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

namespace berger {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

enum class ErrorCode {
  InvalidArgument,
  DimensionMismatch,
  NotOnSphere,
  NotTangent,
  DomainViolation,  // e.g. det L_W <= 0 on the volume path
  NotInHypothesisClass,
  Incompatible,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// The pair (m, mu) fixing S^{2m+1} with the Berger metric g_mu.
/// mu > 0 gives a Riemannian metric, mu < 0 a Lorentzian one in which the
/// Hopf direction is timelike.
class BergerContext {
 public:
  BergerContext(int m, double mu);

  int m() const noexcept { return m_; }
  double mu() const noexcept { return mu_; }
  int eps() const noexcept { return eps_; }
  double abs_mu() const noexcept { return eps_ * mu_; }
  double sqrt_abs_mu() const noexcept { return sqrt_abs_mu_; }
  /// Ambient dimension 2m+2.
  int dim() const noexcept { return 2 * m_ + 2; }

 private:
  int m_;
  double mu_;
  int eps_;
  double sqrt_abs_mu_;
};

inline int sign_of(double x) { return x > 0 ? 1 : -1; }

}  // namespace berger

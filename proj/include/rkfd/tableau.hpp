#pragma once

#include <Eigen/Dense>

#include <optional>
#include <string>

namespace rkfd {

/// Raw RKFD coefficients before validation.
///
/// The method advances (y, y', y'', y''') for y'''' = f(x, y):
///
///   Y_i      = y + c_i h y' + (c_i h)^2/2 y'' + (c_i h)^3/6 y''' + h^4 sum_j a_hat_ij f_j
///   y_new    = y + h y' + h^2/2 y'' + h^3/6 y''' + h^4 sum_i b_i    f_i
///   y'_new   = y' + h y'' + h^2/2 y'''          + h^3 sum_i bp_i   f_i
///   y''_new  = y'' + h y'''                     + h^2 sum_i bpp_i  f_i
///   y'''_new = y'''                             + h   sum_i bppp_i f_i
///
/// with f_j = f(x + c_j h, Y_j).  The stage sum runs over j only.
struct RkfdCoefficients {
  std::string name;
  Eigen::VectorXd c;
  Eigen::MatrixXd a_hat;
  Eigen::VectorXd b;
  Eigen::VectorXd bp;
  Eigen::VectorXd bpp;
  Eigen::VectorXd bppp;
  std::optional<int> declared_order;
};

/// Validated, immutable RKFD tableau.
class RkfdTableau {
 public:
  /// Validates `raw`; throws TableauError on dimension mismatch, non-finite
  /// entries, or sum(bppp) != 1 when an order >= 1 is declared.
  static RkfdTableau create(RkfdCoefficients raw);

  const std::string& name() const noexcept { return coeffs_.name; }
  Eigen::Index stages() const noexcept { return coeffs_.c.size(); }
  const Eigen::VectorXd& c() const noexcept { return coeffs_.c; }
  const Eigen::MatrixXd& a_hat() const noexcept { return coeffs_.a_hat; }
  const Eigen::VectorXd& b() const noexcept { return coeffs_.b; }
  const Eigen::VectorXd& bp() const noexcept { return coeffs_.bp; }
  const Eigen::VectorXd& bpp() const noexcept { return coeffs_.bpp; }
  const Eigen::VectorXd& bppp() const noexcept { return coeffs_.bppp; }
  std::optional<int> declared_order() const noexcept { return coeffs_.declared_order; }
  /// True iff a_hat is strictly lower triangular.
  bool is_explicit() const noexcept { return explicit_; }

  const RkfdCoefficients& coefficients() const noexcept { return coeffs_; }

  friend bool operator==(const RkfdTableau& lhs, const RkfdTableau& rhs);

 private:
  RkfdTableau(RkfdCoefficients coeffs, bool is_explicit)
      : coeffs_(std::move(coeffs)), explicit_(is_explicit) {}

  RkfdCoefficients coeffs_;
  bool explicit_;
};

struct RkCoefficients {
  std::string name;
  Eigen::MatrixXd a;
  Eigen::VectorXd b;
  Eigen::VectorXd c;
};

/// Validated explicit Runge-Kutta tableau (A, b, c).
class RkTableau {
 public:
  /// Throws TableauError unless dimensions agree, entries are finite, A is
  /// strictly lower triangular and every row of A sums to c_i.
  static RkTableau create(RkCoefficients raw);

  const std::string& name() const noexcept { return coeffs_.name; }
  Eigen::Index stages() const noexcept { return coeffs_.c.size(); }
  const Eigen::MatrixXd& a() const noexcept { return coeffs_.a; }
  const Eigen::VectorXd& b() const noexcept { return coeffs_.b; }
  const Eigen::VectorXd& c() const noexcept { return coeffs_.c; }

  const RkCoefficients& coefficients() const noexcept { return coeffs_; }

  friend bool operator==(const RkTableau& lhs, const RkTableau& rhs);

 private:
  explicit RkTableau(RkCoefficients coeffs) : coeffs_(std::move(coeffs)) {}

  RkCoefficients coeffs_;
};

/// Absolute tolerance for consistency checks (sum(bppp) = 1, row sums = c).
inline constexpr double kConsistencyTolerance = 1e-12;

RkfdTableau make_rkfd_tableau(RkfdCoefficients raw);
RkTableau make_rk_tableau(RkCoefficients raw);

/// Three-stage RKFD4 keeping the defective weight bp_3 = 6/1926.  It breaks
/// bp^T e = 1/6 by 1/1926, so this variant only attains order 2.
RkfdTableau builtin_rkfd4_printed();

/// RKFD4 with bp_3 = 5/1926; satisfies every condition through order 4.
RkfdTableau builtin_rkfd4_corrected();

/// Three-stage fifth-order RKFD5.  Stage weights are the exact surd values
///   a_21 = 11/1000 + 13 sqrt6/3000,
///   a_31 = 21/5000 - 43 sqrt6/15000,
///   a_32 = 17/2500 - 11 sqrt6/7500,
/// obtained from bppp^T A e = 1/120, bppp^T A c = 1/720, bppp^T (c.A e) = 1/144.
RkfdTableau builtin_rkfd5();

/// RKFD5 with the rounded rational stage weights 4059/187793,
/// -1502/532215, 1826/569317.  These approximate the surd values to ~3e-7,
/// which leaves bppp^T A e - 1/120 = -2.7e-7.
RkfdTableau builtin_rkfd5_printed();

/// Classic four-stage, fourth-order Runge-Kutta.
RkTableau builtin_rk4();

/// Maps an RK tableau applied to the first-order reduction onto RKFD form:
/// bppp = b, bpp^T = b^T A, bp^T = b^T A^2, b^T = b^T A^3, a_hat = A^4, c kept.
RkfdTableau convert_rk_to_rkfd(const RkTableau& rk);

}  // namespace rkfd

#include "rkfd/tableau.hpp"

#include "rkfd/error.hpp"

#include <cmath>
#include <sstream>

namespace rkfd {

namespace {

void require_length(const Eigen::VectorXd& v, Eigen::Index s, const char* field) {
  if (v.size() != s) {
    std::ostringstream msg;
    msg << "field '" << field << "': expected length " << s << ", got " << v.size();
    throw TableauError(msg.str());
  }
}

void require_square(const Eigen::MatrixXd& m, Eigen::Index s, const char* field) {
  if (m.rows() != s || m.cols() != s) {
    std::ostringstream msg;
    msg << "field '" << field << "': expected " << s << "x" << s << ", got " << m.rows() << "x"
        << m.cols();
    throw TableauError(msg.str());
  }
}

template <typename Derived>
void require_finite(const Eigen::DenseBase<Derived>& m, const char* field) {
  if (!m.allFinite()) {
    throw TableauError(std::string("field '") + field + "': non-finite coefficient");
  }
}

bool strictly_lower(const Eigen::MatrixXd& m) {
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = i; j < m.cols(); ++j) {
      if (m(i, j) != 0.0) return false;
    }
  }
  return true;
}

Eigen::VectorXd vec(std::initializer_list<double> xs) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v(i++) = x;
  return v;
}

// Coefficients shared by both RKFD4 variants; only bp_3 differs.
RkfdCoefficients rkfd4_base(std::string name, double bp3) {
  RkfdCoefficients k;
  k.name = std::move(name);
  k.c = vec({0.0, 4.0 / 11.0, 17.0 / 20.0});
  k.a_hat = Eigen::MatrixXd::Zero(3, 3);
  k.a_hat(1, 0) = -1.0 / 5.0;
  k.a_hat(2, 0) = 19.0 / 125.0;
  k.a_hat(2, 1) = 19.0 / 125.0;
  k.b = vec({17.0 / 200.0, -7.0 / 75.0, 1.0 / 20.0});
  k.bp = vec({1.0 / 18.0, 209.0 / 1926.0, bp3});
  k.bpp = vec({47.0 / 408.0, 847.0 / 2568.0, 100.0 / 1819.0});
  k.bppp = vec({47.0 / 408.0, 1331.0 / 2568.0, 2000.0 / 5457.0});
  k.declared_order = 4;
  return k;
}

RkfdCoefficients rkfd5_base(std::string name) {
  const double r6 = std::sqrt(6.0);
  RkfdCoefficients k;
  k.name = std::move(name);
  k.c = vec({0.0, 3.0 / 5.0 + r6 / 10.0, 3.0 / 5.0 - r6 / 10.0});
  k.a_hat = Eigen::MatrixXd::Zero(3, 3);
  k.b = vec({19.0 / 1080.0, 13.0 / 1080.0 - 11.0 * r6 / 2160.0, 13.0 / 1080.0 + 11.0 * r6 / 2160.0});
  k.bp = vec({1.0 / 18.0, 1.0 / 18.0 - r6 / 48.0, 1.0 / 18.0 + r6 / 48.0});
  k.bpp = vec({1.0 / 9.0, 7.0 / 36.0 - r6 / 18.0, 7.0 / 36.0 + r6 / 18.0});
  k.bppp = vec({1.0 / 9.0, 4.0 / 9.0 - r6 / 36.0, 4.0 / 9.0 + r6 / 36.0});
  k.declared_order = 5;
  return k;
}

}  // namespace

RkfdTableau RkfdTableau::create(RkfdCoefficients raw) {
  const Eigen::Index s = raw.c.size();
  if (s < 1) throw TableauError("tableau must have at least one stage");
  require_square(raw.a_hat, s, "a_hat");
  require_length(raw.b, s, "b");
  require_length(raw.bp, s, "bp");
  require_length(raw.bpp, s, "bpp");
  require_length(raw.bppp, s, "bppp");

  require_finite(raw.c, "c");
  require_finite(raw.a_hat, "a_hat");
  require_finite(raw.b, "b");
  require_finite(raw.bp, "bp");
  require_finite(raw.bpp, "bpp");
  require_finite(raw.bppp, "bppp");

  if (raw.declared_order) {
    if (*raw.declared_order < 1) throw TableauError("declared_order must be positive");
    const double sum = raw.bppp.sum();
    if (std::abs(sum - 1.0) > kConsistencyTolerance) {
      std::ostringstream msg;
      msg.precision(17);
      msg << "first-order consistency violated: sum(bppp) = " << sum << " != 1";
      throw TableauError(msg.str());
    }
  }
  const bool is_explicit = strictly_lower(raw.a_hat);
  return RkfdTableau(std::move(raw), is_explicit);
}

bool operator==(const RkfdTableau& lhs, const RkfdTableau& rhs) {
  const auto& l = lhs.coeffs_;
  const auto& r = rhs.coeffs_;
  if (l.c.size() != r.c.size()) return false;
  return l.name == r.name && l.declared_order == r.declared_order && l.c == r.c &&
         l.a_hat == r.a_hat && l.b == r.b && l.bp == r.bp && l.bpp == r.bpp && l.bppp == r.bppp;
}

RkTableau RkTableau::create(RkCoefficients raw) {
  const Eigen::Index s = raw.c.size();
  if (s < 1) throw TableauError("tableau must have at least one stage");
  require_square(raw.a, s, "A");
  require_length(raw.b, s, "b");
  require_finite(raw.a, "A");
  require_finite(raw.b, "b");
  require_finite(raw.c, "c");
  if (!strictly_lower(raw.a)) {
    throw TableauError("only explicit RK tableaus are supported (A must be strictly lower triangular)");
  }
  for (Eigen::Index i = 0; i < s; ++i) {
    const double row = raw.a.row(i).sum();
    if (std::abs(row - raw.c(i)) > kConsistencyTolerance) {
      std::ostringstream msg;
      msg.precision(17);
      msg << "row-sum consistency violated at stage " << i + 1 << ": sum_j a_ij = " << row
          << ", c_i = " << raw.c(i);
      throw TableauError(msg.str());
    }
  }
  return RkTableau(std::move(raw));
}

bool operator==(const RkTableau& lhs, const RkTableau& rhs) {
  const auto& l = lhs.coeffs_;
  const auto& r = rhs.coeffs_;
  if (l.c.size() != r.c.size()) return false;
  return l.name == r.name && l.a == r.a && l.b == r.b && l.c == r.c;
}

RkfdTableau make_rkfd_tableau(RkfdCoefficients raw) { return RkfdTableau::create(std::move(raw)); }

RkTableau make_rk_tableau(RkCoefficients raw) { return RkTableau::create(std::move(raw)); }

RkfdTableau builtin_rkfd4_printed() {
  return RkfdTableau::create(rkfd4_base("rkfd4-printed", 6.0 / 1926.0));
}

RkfdTableau builtin_rkfd4_corrected() {
  return RkfdTableau::create(rkfd4_base("rkfd4", 5.0 / 1926.0));
}

RkfdTableau builtin_rkfd5() {
  const double r6 = std::sqrt(6.0);
  auto k = rkfd5_base("rkfd5");
  k.a_hat(1, 0) = 11.0 / 1000.0 + 13.0 * r6 / 3000.0;
  k.a_hat(2, 0) = 21.0 / 5000.0 - 43.0 * r6 / 15000.0;
  k.a_hat(2, 1) = 17.0 / 2500.0 - 11.0 * r6 / 7500.0;
  return RkfdTableau::create(std::move(k));
}

RkfdTableau builtin_rkfd5_printed() {
  auto k = rkfd5_base("rkfd5-printed");
  k.a_hat(1, 0) = 4059.0 / 187793.0;
  k.a_hat(2, 0) = -1502.0 / 532215.0;
  k.a_hat(2, 1) = 1826.0 / 569317.0;
  return RkfdTableau::create(std::move(k));
}

RkTableau builtin_rk4() {
  RkCoefficients k;
  k.name = "rk4";
  k.a = Eigen::MatrixXd::Zero(4, 4);
  k.a(1, 0) = 0.5;
  k.a(2, 1) = 0.5;
  k.a(3, 2) = 1.0;
  k.b = vec({1.0 / 6.0, 1.0 / 3.0, 1.0 / 3.0, 1.0 / 6.0});
  k.c = vec({0.0, 0.5, 0.5, 1.0});
  return RkTableau::create(std::move(k));
}

RkfdTableau convert_rk_to_rkfd(const RkTableau& rk) {
  const Eigen::MatrixXd& a = rk.a();
  const Eigen::MatrixXd a2 = a * a;
  const Eigen::MatrixXd a3 = a2 * a;

  RkfdCoefficients k;
  k.name = rk.name() + "-rkfd";
  k.c = rk.c();
  k.a_hat = a3 * a;
  k.bppp = rk.b();
  k.bpp = a.transpose() * rk.b();
  k.bp = a2.transpose() * rk.b();
  k.b = a3.transpose() * rk.b();
  return RkfdTableau::create(std::move(k));
}

}  // namespace rkfd

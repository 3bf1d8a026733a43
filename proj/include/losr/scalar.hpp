#pragma once

// Exact scalar arithmetic for certified runs: arbitrary-precision rationals
// extended by sqrt(2). Every probability produced by the rectilinear /
// Hadamard / pi-4-angle measurement strategies lies in Q(sqrt 2), so the
// whole pipeline (oracle -> constraints -> simplex -> certificate) can run
// without rounding.

#include <Eigen/Core>
#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace losr {

using Rational = boost::multiprecision::cpp_rational;

inline double to_double(const Rational& q) { return q.convert_to<double>(); }

/// Element of the field Q(sqrt 2), stored as rat + irr*sqrt(2).
///
/// Q(sqrt 2) is an ordered field, so the simplex method runs on it unchanged;
/// comparisons reduce to exact sign tests on the rational coefficients.
class RootTwo {
 public:
  RootTwo() = default;
  RootTwo(int v) : rat_(v) {}  // NOLINT(google-explicit-constructor)
  RootTwo(Rational r) : rat_(std::move(r)) {}  // NOLINT
  RootTwo(Rational r, Rational i) : rat_(std::move(r)), irr_(std::move(i)) {}

  static RootTwo sqrt2() { return RootTwo(Rational(0), Rational(1)); }

  const Rational& rational_part() const { return rat_; }
  const Rational& sqrt2_part() const { return irr_; }
  bool is_rational() const { return irr_ == 0; }

  // sign of rat + irr*sqrt(2), computed exactly
  int sign() const {
    const int sr = rat_.sign();
    const int si = irr_.sign();
    if (si == 0) return sr;
    if (sr == 0) return si;
    if (sr == si) return sr;
    // opposite signs: compare rat^2 against 2*irr^2
    const Rational r2 = rat_ * rat_;
    const Rational i2 = 2 * irr_ * irr_;
    if (r2 == i2) return 0;
    return (r2 > i2) ? sr : si;
  }

  RootTwo operator-() const { return RootTwo(-rat_, -irr_); }
  RootTwo& operator+=(const RootTwo& o) {
    rat_ += o.rat_;
    irr_ += o.irr_;
    return *this;
  }
  RootTwo& operator-=(const RootTwo& o) {
    rat_ -= o.rat_;
    irr_ -= o.irr_;
    return *this;
  }
  RootTwo& operator*=(const RootTwo& o) {
    const Rational r = rat_ * o.rat_ + 2 * irr_ * o.irr_;
    irr_ = rat_ * o.irr_ + irr_ * o.rat_;
    rat_ = r;
    return *this;
  }
  RootTwo& operator/=(const RootTwo& o) {
    // 1/(a+b*sqrt2) = (a-b*sqrt2)/(a^2-2b^2); the norm vanishes only at 0
    const Rational norm = o.rat_ * o.rat_ - 2 * o.irr_ * o.irr_;
    if (norm == 0) throw std::domain_error("RootTwo: division by zero");
    return *this *= RootTwo(o.rat_ / norm, -o.irr_ / norm);
  }

  friend RootTwo operator+(RootTwo a, const RootTwo& b) { return a += b; }
  friend RootTwo operator-(RootTwo a, const RootTwo& b) { return a -= b; }
  friend RootTwo operator*(RootTwo a, const RootTwo& b) { return a *= b; }
  friend RootTwo operator/(RootTwo a, const RootTwo& b) { return a /= b; }

  friend bool operator==(const RootTwo& a, const RootTwo& b) {
    return a.rat_ == b.rat_ && a.irr_ == b.irr_;
  }
  friend bool operator!=(const RootTwo& a, const RootTwo& b) { return !(a == b); }
  friend bool operator<(const RootTwo& a, const RootTwo& b) {
    return (a - b).sign() < 0;
  }
  friend bool operator>(const RootTwo& a, const RootTwo& b) { return b < a; }
  friend bool operator<=(const RootTwo& a, const RootTwo& b) { return !(b < a); }
  friend bool operator>=(const RootTwo& a, const RootTwo& b) { return !(a < b); }

  double to_double() const {
    return losr::to_double(rat_) + losr::to_double(irr_) * 1.4142135623730950488;
  }

  /// Text form: "3/4", "1/2+1/8r2", "1/2-1/8r2", "1/8r2", "0".
  std::string str() const {
    std::ostringstream os;
    if (irr_ == 0) {
      os << rat_;
    } else {
      if (rat_ != 0) {
        os << rat_;
        if (irr_ > 0) os << '+';
      }
      os << irr_ << "r2";
    }
    return os.str();
  }

  static RootTwo parse(const std::string& s) {
    const auto r2pos = s.find("r2");
    if (r2pos == std::string::npos) return RootTwo(Rational(s));
    // split off the sqrt2 coefficient: find the sign that separates the terms
    // (skip a leading sign and any '/' digits)
    std::size_t split = std::string::npos;
    for (std::size_t i = 1; i < r2pos; ++i) {
      if (s[i] == '+' || s[i] == '-') split = i;
    }
    if (split == std::string::npos)
      return RootTwo(Rational(0), Rational(s.substr(0, r2pos)));
    Rational rat(s.substr(0, split));
    std::string irr_str = s.substr(split, r2pos - split);
    if (irr_str[0] == '+') irr_str.erase(0, 1);
    return RootTwo(rat, Rational(irr_str));
  }

  friend std::ostream& operator<<(std::ostream& os, const RootTwo& v) {
    return os << v.str();
  }

 private:
  Rational rat_{0};
  Rational irr_{0};
};

inline double to_double(const RootTwo& v) { return v.to_double(); }
inline double to_double(double v) { return v; }

inline RootTwo abs(const RootTwo& v) { return v.sign() < 0 ? -v : v; }

// Scalar traits used by the templated numeric code. Float mode compares with
// a tolerance; exact mode compares exactly and must never be silently wrong.
template <class S>
struct ScalarTraits;

template <>
struct ScalarTraits<double> {
  static constexpr bool exact = false;
  static bool is_zero(double v, double tol) { return std::abs(v) <= tol; }
  static double from_rational(const Rational& q) { return to_double(q); }
  static double from_root_two(const RootTwo& v) { return v.to_double(); }
};

template <>
struct ScalarTraits<Rational> {
  static constexpr bool exact = true;
  static bool is_zero(const Rational& v, double) { return v == 0; }
  static Rational from_rational(const Rational& q) { return q; }
  static Rational from_root_two(const RootTwo& v) {
    if (!v.is_rational())
      throw std::domain_error("irrational value in rational context");
    return v.rational_part();
  }
};

template <>
struct ScalarTraits<RootTwo> {
  static constexpr bool exact = true;
  static bool is_zero(const RootTwo& v, double) { return v.sign() == 0; }
  static RootTwo from_rational(const Rational& q) { return RootTwo(q); }
  static RootTwo from_root_two(const RootTwo& v) { return v; }
};

}  // namespace losr

namespace Eigen {

template <>
struct NumTraits<losr::Rational> {
  using Real = losr::Rational;
  using NonInteger = losr::Rational;
  using Nested = losr::Rational;
  using Literal = int;
  enum {
    IsComplex = 0,
    IsInteger = 0,
    IsSigned = 1,
    RequireInitialization = 1,
    ReadCost = 10,
    AddCost = 40,
    MulCost = 60,
  };
  static Real epsilon() { return Real(0); }
  static Real dummy_precision() { return Real(0); }
  static int digits10() { return 0; }
};

template <>
struct NumTraits<losr::RootTwo> {
  using Real = losr::RootTwo;
  using NonInteger = losr::RootTwo;
  using Nested = losr::RootTwo;
  using Literal = int;
  enum {
    IsComplex = 0,
    IsInteger = 0,
    IsSigned = 1,
    RequireInitialization = 1,
    ReadCost = 10,
    AddCost = 60,
    MulCost = 100,
  };
  static Real epsilon() { return Real(0); }
  static Real dummy_precision() { return Real(0); }
  static int digits10() { return 0; }
};

}  // namespace Eigen

#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <boost/multiprecision/mpfr.hpp>

#include <cstdint>
#include <string>

namespace opuc {

/// Multiprecision real. Precision is taken from the enclosing PrecisionScope
/// at construction time and carried by each value afterwards.
using Real = boost::multiprecision::mpfr_float;

/// Overflow-checked integer used for exponent-set endpoints. Arithmetic that
/// leaves the 128-bit range throws std::overflow_error.
using Index = boost::multiprecision::checked_int128_t;

inline constexpr unsigned kDefaultPrecisionBits = 256;
inline constexpr unsigned kMinPrecisionBits = 53;
inline constexpr unsigned kMaxPrecisionBits = 4096;

/// Sets the working precision (in mantissa bits) for every Real constructed
/// while the scope is alive; restores the previous setting on exit.
/// The MPFR default is process-wide, so scopes must not be interleaved across
/// threads.
class PrecisionScope {
 public:
  explicit PrecisionScope(unsigned bits);
  ~PrecisionScope();
  PrecisionScope(const PrecisionScope&) = delete;
  PrecisionScope& operator=(const PrecisionScope&) = delete;

  unsigned bits() const { return bits_; }

 private:
  unsigned bits_;
  unsigned saved_digits10_;
};

/// Bits requested by the innermost active PrecisionScope (256 when none).
unsigned current_precision_bits();

/// 2^exponent at the current precision.
Real pow2(long exponent);

/// 2^{-(bits/4)}: the residual threshold that triggers precision escalation.
Real escalation_tolerance(unsigned bits);

/// pi at the current precision.
Real pi();

double to_double(const Real& x);

/// Scientific notation with `digits` significant digits; deterministic.
std::string format_real(const Real& x, int digits = 20);

std::string format_index(const Index& x);

/// Exact floor of a nonnegative real as an Index. Throws std::overflow_error
/// when the value is outside the Index range or beyond the exact-integer
/// range of the value's own precision.
Index floor_to_index(const Real& x);

Real to_real(const Index& x);

/// Minimal complex arithmetic over Real. std::complex is unspecified for
/// non-builtin value types, so this stays a plain aggregate.
struct Complex {
  Real re;
  Real im;

  Complex() : re(0), im(0) {}
  Complex(Real r) : re(std::move(r)), im(0) {}  // NOLINT: implicit by design of the algebra
  Complex(Real r, Real i) : re(std::move(r)), im(std::move(i)) {}
  Complex(double r, double i) : re(r), im(i) {}

  static Complex polar(const Real& modulus, const Real& angle);
  /// e^{i angle}
  static Complex unit(const Real& angle);

  Complex& operator+=(const Complex& o) {
    re += o.re;
    im += o.im;
    return *this;
  }
  Complex& operator-=(const Complex& o) {
    re -= o.re;
    im -= o.im;
    return *this;
  }
  Complex& operator*=(const Complex& o);
  Complex& operator*=(const Real& s) {
    re *= s;
    im *= s;
    return *this;
  }
  Complex& operator/=(const Real& s) {
    re /= s;
    im /= s;
    return *this;
  }

  /// *this += a * b without building an intermediate Complex.
  void add_product(const Complex& a, const Complex& b);
  /// *this += a * conj(b)
  void add_product_conj(const Complex& a, const Complex& b);
};

inline Complex conj(const Complex& z) { return {z.re, -z.im}; }
/// |z|^2
inline Real norm(const Complex& z) { return z.re * z.re + z.im * z.im; }
inline Real abs(const Complex& z) { return sqrt(norm(z)); }

inline Complex operator+(Complex a, const Complex& b) { return a += b; }
inline Complex operator-(Complex a, const Complex& b) { return a -= b; }
inline Complex operator-(const Complex& a) { return {-a.re, -a.im}; }
inline Complex operator*(Complex a, const Complex& b) { return a *= b; }
inline Complex operator*(Complex a, const Real& s) { return a *= s; }
inline Complex operator*(const Real& s, Complex a) { return a *= s; }
inline Complex operator/(Complex a, const Real& s) { return a /= s; }
Complex operator/(const Complex& a, const Complex& b);

std::string format_complex(const Complex& z, int digits = 20);

}  // namespace opuc

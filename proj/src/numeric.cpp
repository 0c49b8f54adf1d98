#include "opuc/numeric.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace opuc {

namespace {

// Stack of requested bit counts; the MPFR backend itself only knows digits10.
std::vector<unsigned>& bit_stack() {
  static std::vector<unsigned> stack;
  return stack;
}

unsigned bits_to_digits10(unsigned bits) {
  // Boost converts digits10 back to bits with a slight over-allocation, so
  // ceil(bits * log10 2) + 1 never yields fewer bits than requested.
  return static_cast<unsigned>(std::ceil(bits * 0.30102999566398120)) + 1;
}

}  // namespace

PrecisionScope::PrecisionScope(unsigned bits)
    : bits_(bits), saved_digits10_(Real::default_precision()) {
  if (bits < kMinPrecisionBits || bits > 4 * kMaxPrecisionBits) {
    throw std::invalid_argument("precision out of range: " + std::to_string(bits));
  }
  Real::default_precision(bits_to_digits10(bits));
  bit_stack().push_back(bits);
}

PrecisionScope::~PrecisionScope() {
  bit_stack().pop_back();
  Real::default_precision(saved_digits10_);
}

unsigned current_precision_bits() {
  const auto& stack = bit_stack();
  return stack.empty() ? kDefaultPrecisionBits : stack.back();
}

Real pow2(long exponent) {
  Real one = 1;
  return ldexp(one, static_cast<int>(exponent));
}

Real escalation_tolerance(unsigned bits) { return pow2(-static_cast<long>(bits / 4)); }

Real pi() {
  Real minus_one = -1;
  return acos(minus_one);
}

double to_double(const Real& x) { return x.convert_to<double>(); }

std::string format_real(const Real& x, int digits) {
  if (x == 0) return "0";
  return x.str(digits, std::ios_base::scientific);
}

std::string format_index(const Index& x) { return x.str(); }

Index floor_to_index(const Real& x) {
  if (x < 0) throw std::domain_error("floor_to_index: negative value");
  Real f = floor(x);
  // Exact only while the integer part fits in the mantissa.
  const long exponent = static_cast<long>(mpfr_get_exp(f.backend().data()));
  const long mantissa_bits = static_cast<long>(mpfr_get_prec(f.backend().data()));
  if (f != 0 && exponent > mantissa_bits - 8) {
    throw std::overflow_error("floor_to_index: value exceeds exact-integer range of working precision");
  }
  if (f >= ldexp(Real(1), 126)) throw std::overflow_error("floor_to_index: value exceeds 128-bit range");
  return f.convert_to<Index>();
}

Real to_real(const Index& x) { return Real(x.str()); }

Complex Complex::polar(const Real& modulus, const Real& angle) {
  return {modulus * cos(angle), modulus * sin(angle)};
}

Complex Complex::unit(const Real& angle) { return {cos(angle), sin(angle)}; }

Complex& Complex::operator*=(const Complex& o) {
  Real r = re * o.re - im * o.im;
  im = re * o.im + im * o.re;
  re = std::move(r);
  return *this;
}

void Complex::add_product(const Complex& a, const Complex& b) {
  re += a.re * b.re - a.im * b.im;
  im += a.re * b.im + a.im * b.re;
}

void Complex::add_product_conj(const Complex& a, const Complex& b) {
  re += a.re * b.re + a.im * b.im;
  im += a.im * b.re - a.re * b.im;
}

Complex operator/(const Complex& a, const Complex& b) {
  Real d = norm(b);
  return {(a.re * b.re + a.im * b.im) / d, (a.im * b.re - a.re * b.im) / d};
}

std::string format_complex(const Complex& z, int digits) {
  return format_real(z.re, digits) + (z.im < 0 ? "" : "+") + format_real(z.im, digits) + "i";
}

}  // namespace opuc

#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace klv {

using BigInt = boost::multiprecision::cpp_int;

inline BigInt bigint_pow(BigInt base, unsigned e) {
  BigInt r = 1;
  while (e) {
    if (e & 1u) r *= base;
    base *= base;
    e >>= 1u;
  }
  return r;
}

// Element a + b*sqrt(m) of Z[sqrt(m)] with exact integer components.
// Equality and the is_integer() predicate are componentwise on (a, b),
// never numeric, so they stay meaningful when m is a perfect square
// (p - 1 is one for p = 5, 17, 37, 101, ...).
struct QuadInt {
  BigInt a{0};
  BigInt b{0};
  std::int64_t m{0};  // the radicand, p - 1 throughout this library

  QuadInt() = default;
  QuadInt(BigInt a_, BigInt b_, std::int64_t m_) : a(std::move(a_)), b(std::move(b_)), m(m_) {}
  static QuadInt integer(BigInt v, std::int64_t m_) { return {std::move(v), 0, m_}; }
  static QuadInt sqrt_m(std::int64_t m_) { return {0, 1, m_}; }

  bool is_integer() const { return b == 0; }

  QuadInt& operator+=(const QuadInt& o) {
    check(o);
    a += o.a;
    b += o.b;
    return *this;
  }

  QuadInt& operator-=(const QuadInt& o) {
    check(o);
    a -= o.a;
    b -= o.b;
    return *this;
  }

  friend QuadInt operator+(QuadInt x, const QuadInt& y) { return x += y; }
  friend QuadInt operator-(QuadInt x, const QuadInt& y) { return x -= y; }

  friend QuadInt operator*(const QuadInt& x, const QuadInt& y) {
    x.check(y);
    return {x.a * y.a + x.m * x.b * y.b, x.a * y.b + x.b * y.a, x.m};
  }

  friend bool operator==(const QuadInt& x, const QuadInt& y) {
    return x.a == y.a && x.b == y.b && x.m == y.m;
  }
  friend bool operator!=(const QuadInt& x, const QuadInt& y) { return !(x == y); }

  double to_double() const {
    return a.convert_to<double>() + b.convert_to<double>() * std::sqrt(static_cast<double>(m));
  }

  std::string str() const {
    if (b == 0) return a.str();
    std::string root = "sqrt(" + std::to_string(m) + ")";
    std::string bs = (b == 1) ? root : (b == -1 ? "-" + root : b.str() + "*" + root);
    if (a == 0) return bs;
    return a.str() + (b > 0 ? "+" : "") + bs;
  }

private:
  void check(const QuadInt& o) const {
    if (m != o.m) throw std::invalid_argument("QuadInt: mixed radicands");
  }
};

// dest += src * (c + s*sqrt(m)) for the tiny entry values the class
// matrices are made of (c in {0,1,2}, s in {0,1}); avoids temporaries in
// the row-power hot loop.
inline void add_scaled(QuadInt& dest, const QuadInt& src, int c, int s) {
  switch (c) {
    case 0: break;
    case 1:
      dest.a += src.a;
      dest.b += src.b;
      break;
    case 2:
      dest.a += src.a;
      dest.a += src.a;
      dest.b += src.b;
      dest.b += src.b;
      break;
    default:
      dest.a += c * src.a;
      dest.b += c * src.b;
  }
  if (s) {
    dest.a += src.m * src.b * s;
    dest.b += s * src.a;
  }
}

}  // namespace klv

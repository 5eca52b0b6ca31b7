#ifndef SMOOTHRANK_RATIONAL_HPP
#define SMOOTHRANK_RATIONAL_HPP

#include <boost/multiprecision/cpp_int.hpp>
#include <boost/multiprecision/eigen.hpp>

#include <cmath>
#include <string>
#include <string_view>
#include <type_traits>

namespace smoothrank {

/// Exact rational scalar. Expression templates are off so values compose
/// cleanly inside Eigen expressions.
using Rational = boost::multiprecision::number<boost::multiprecision::cpp_rational_backend,
                                               boost::multiprecision::et_off>;

template <typename Scalar>
inline constexpr bool is_exact_v = !std::is_floating_point_v<Scalar>;

/// Comparison slack for a scalar type: zero for exact types.
template <typename Scalar>
double tolerance() {
  if constexpr (is_exact_v<Scalar>) {
    return 0.0;
  } else {
    return 1e-9;
  }
}

template <typename Scalar>
double to_double(const Scalar& x) {
  if constexpr (std::is_arithmetic_v<Scalar>) {
    return static_cast<double>(x);
  } else {
    return x.template convert_to<double>();
  }
}

template <typename Scalar>
Scalar scalar_abs(const Scalar& x) {
  return x < Scalar(0) ? Scalar(-x) : x;
}

/// Integer power by repeated squaring; works for exact and float scalars.
template <typename Scalar>
Scalar ipow(Scalar base, int exponent) {
  if (exponent < 0) return Scalar(1) / ipow(base, -exponent);
  Scalar result(1);
  while (exponent > 0) {
    if (exponent & 1) result *= base;
    base *= base;
    exponent >>= 1;
  }
  return result;
}

template <typename Scalar>
bool nearly_equal(const Scalar& a, const Scalar& b) {
  if constexpr (is_exact_v<Scalar>) {
    return a == b;
  } else {
    return std::abs(a - b) <= tolerance<Scalar>() * std::max(1.0, std::max(std::abs(a), std::abs(b)));
  }
}

/// Parses "3", "-2/7" or a decimal literal such as "0.35" or "1e-3" into an
/// exact rational. Throws std::invalid_argument on malformed input.
Rational parse_rational(std::string_view text);

template <typename Scalar>
Scalar parse_scalar(std::string_view text) {
  if constexpr (is_exact_v<Scalar>) {
    return Scalar(parse_rational(text));
  } else {
    return static_cast<Scalar>(parse_rational(text).template convert_to<double>());
  }
}

/// Floor of a non-negative scalar as an unsigned integer count.
template <typename Scalar>
unsigned long long floor_count(const Scalar& x) {
  if constexpr (is_exact_v<Scalar>) {
    using boost::multiprecision::cpp_int;
    cpp_int q = boost::multiprecision::numerator(x) / boost::multiprecision::denominator(x);
    return q.template convert_to<unsigned long long>();
  } else {
    return static_cast<unsigned long long>(std::floor(x + 1e-9));
  }
}

}  // namespace smoothrank

#endif  // SMOOTHRANK_RATIONAL_HPP

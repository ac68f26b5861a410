#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace hof {

using Complex = std::complex<double>;
using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

inline constexpr double kPi = 3.14159265358979323846264338327950288;
inline const Complex kI{0.0, 1.0};

// e(z) = exp(2 pi i z)
inline Complex efun(Complex z) { return std::exp(2.0 * kPi * kI * z); }

struct config_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct domain_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline std::string rat_str(const Rational& r) {
    return r.str();
}

}  // namespace hof

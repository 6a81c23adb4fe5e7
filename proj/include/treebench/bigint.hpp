#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <nlohmann/json.hpp>

#include <stdexcept>
#include <string>

namespace treebench {

using BigInt = boost::multiprecision::cpp_int;

// Largest magnitude emitted as a plain JSON number; beyond this the
// canonical encoding is a decimal string (2^53 - 1).
inline const BigInt kJsonNumberMax = (BigInt(1) << 53) - 1;

inline nlohmann::json big_to_json(const BigInt& x) {
  if (x <= kJsonNumberMax && x >= -kJsonNumberMax) {
    return static_cast<std::int64_t>(x);
  }
  return x.str();
}

inline BigInt big_from_json(const nlohmann::json& j, const char* what) {
  if (j.is_number_integer()) return BigInt(j.get<std::int64_t>());
  if (j.is_string()) {
    try {
      return BigInt(j.get<std::string>());
    } catch (const std::exception&) {
      throw std::invalid_argument(std::string(what) + ": malformed integer string");
    }
  }
  throw std::invalid_argument(std::string(what) + ": expected integer or decimal string");
}

// Euclidean split a = q*s + r with 0 <= r < |q|.
struct EuclidSplit {
  BigInt quotient;
  BigInt remainder;
};

inline EuclidSplit euclid_split(const BigInt& a, const BigInt& q) {
  if (q == 0) throw std::invalid_argument("euclid_split: zero modulus");
  BigInt absq = q < 0 ? BigInt(-q) : q;
  BigInt r = a % absq;
  if (r < 0) r += absq;
  return EuclidSplit{(a - r) / q, r};
}

inline bool divides(const BigInt& d, const BigInt& a) {
  if (d == 0) return a == 0;
  return a % d == 0;
}

}  // namespace treebench

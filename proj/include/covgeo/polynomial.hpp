#pragma once

#include "covgeo/types.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace covgeo {

/// Multivariate polynomial in x1..xn, parsed from text such as
/// "2*x1 + 3*x2^2 - 1" or "x1*x2 - 0.5".
class Polynomial {
 public:
  struct Term {
    double coefficient = 0.0;
    std::vector<int> powers;  // powers[i] is the exponent of x_{i+1}
  };

  Polynomial() = default;
  explicit Polynomial(std::vector<Term> terms);

  /// Throws InvalidArgument with the offending position.
  static Polynomial parse(std::string_view text);

  double operator()(const Vector& x) const;
  /// Highest variable index used (1-based), 0 for constants.
  int max_variable() const noexcept;
  bool is_zero() const noexcept;
  const std::vector<Term>& terms() const noexcept { return terms_; }
  std::string to_string() const;

 private:
  std::vector<Term> terms_;
};

}  // namespace covgeo

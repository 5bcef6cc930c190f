#pragma once

#include <cstdint>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>

namespace plink {

/// Exact integer-coefficient Laurent polynomial in one variable A.
/// Stored sparsely as exponent -> coefficient; zero coefficients are never kept.
class LaurentPolynomial {
public:
  using Map = std::map<int, std::int64_t>;

  LaurentPolynomial() = default;
  explicit LaurentPolynomial(std::int64_t constant) {
    if (constant != 0) coeffs_[0] = constant;
  }

  static LaurentPolynomial monomial(std::int64_t coeff, int exponent) {
    LaurentPolynomial p;
    if (coeff != 0) p.coeffs_[exponent] = coeff;
    return p;
  }

  bool is_zero() const { return coeffs_.empty(); }
  const Map& coefficients() const { return coeffs_; }

  std::int64_t coefficient(int exponent) const {
    auto it = coeffs_.find(exponent);
    return it == coeffs_.end() ? 0 : it->second;
  }

  LaurentPolynomial& operator+=(const LaurentPolynomial& o) {
    for (const auto& [e, c] : o.coeffs_) add_term(e, c);
    return *this;
  }
  LaurentPolynomial& operator-=(const LaurentPolynomial& o) {
    for (const auto& [e, c] : o.coeffs_) add_term(e, -c);
    return *this;
  }
  friend LaurentPolynomial operator+(LaurentPolynomial a, const LaurentPolynomial& b) {
    a += b;
    return a;
  }
  friend LaurentPolynomial operator-(LaurentPolynomial a, const LaurentPolynomial& b) {
    a -= b;
    return a;
  }
  friend LaurentPolynomial operator*(const LaurentPolynomial& a, const LaurentPolynomial& b) {
    LaurentPolynomial r;
    for (const auto& [ea, ca] : a.coeffs_)
      for (const auto& [eb, cb] : b.coeffs_) r.add_term(ea + eb, ca * cb);
    return r;
  }
  LaurentPolynomial& operator*=(const LaurentPolynomial& o) { return *this = *this * o; }

  friend bool operator==(const LaurentPolynomial& a, const LaurentPolynomial& b) {
    return a.coeffs_ == b.coeffs_;
  }

  void add_term(int exponent, std::int64_t coeff) {
    if (coeff == 0) return;
    auto it = coeffs_.find(exponent);
    if (it == coeffs_.end()) {
      coeffs_[exponent] = coeff;
    } else {
      it->second += coeff;
      if (it->second == 0) coeffs_.erase(it);
    }
  }

  /// Substitute A -> A^{-1}.
  LaurentPolynomial mirrored() const {
    LaurentPolynomial r;
    for (const auto& [e, c] : coeffs_) r.coeffs_[-e] = c;
    return r;
  }

  /// Integer power of this polynomial; exponent >= 0.
  LaurentPolynomial pow(int k) const {
    if (k < 0) throw std::invalid_argument("LaurentPolynomial::pow: negative exponent");
    LaurentPolynomial r(1);
    for (int i = 0; i < k; ++i) r *= *this;
    return r;
  }

  std::string to_string() const {
    if (coeffs_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    // Highest exponent first.
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
      std::int64_t c = it->second;
      int e = it->first;
      if (first) {
        if (c < 0) os << "-";
      } else {
        os << (c < 0 ? " - " : " + ");
      }
      std::int64_t ac = c < 0 ? -c : c;
      if (ac != 1 || e == 0) os << ac;
      if (e != 0) {
        os << "A";
        if (e != 1) os << "^" << e;
      }
      first = false;
    }
    return os.str();
  }

private:
  Map coeffs_;
};

/// (-A^2 - A^-2), the circle factor of the state sum.
inline LaurentPolynomial bracket_delta() {
  LaurentPolynomial d;
  d.add_term(2, -1);
  d.add_term(-2, -1);
  return d;
}

/// (-A)^k for any integer k (negative allowed).
inline LaurentPolynomial minus_a_power(int k) {
  LaurentPolynomial p;
  p.add_term(k, (k % 2 == 0) ? 1 : -1);
  return p;
}

/// True iff all exponents carrying a nonzero coefficient are pairwise
/// congruent mod 4. The zero polynomial vacuously passes.
inline bool mod4_exponents_congruent(const LaurentPolynomial& p) {
  bool have = false;
  int r = 0;
  for (const auto& [e, c] : p.coefficients()) {
    (void)c;
    int m = ((e % 4) + 4) % 4;
    if (!have) {
      r = m;
      have = true;
    } else if (m != r) {
      return false;
    }
  }
  return true;
}

/// First pair of exponents witnessing a mod-4 violation, or nothing.
inline bool mod4_violating_pair(const LaurentPolynomial& p, int& e1, int& e2) {
  bool have = false;
  int first = 0, r = 0;
  for (const auto& [e, c] : p.coefficients()) {
    (void)c;
    int m = ((e % 4) + 4) % 4;
    if (!have) {
      first = e;
      r = m;
      have = true;
    } else if (m != r) {
      e1 = first;
      e2 = e;
      return true;
    }
  }
  return false;
}

}  // namespace plink

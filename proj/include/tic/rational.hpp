#pragma once

#include <compare>
#include <cstdint>
#include <limits>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>

namespace tic {

namespace detail {

__extension__ typedef __int128 i128;
__extension__ typedef unsigned __int128 u128;

inline u128 gcd_wide(u128 a, u128 b) {
  constexpr u128 narrow = std::numeric_limits<std::uint64_t>::max();
  while (b != 0) {
    if (a <= narrow && b <= narrow) {
      return std::gcd(static_cast<std::uint64_t>(a), static_cast<std::uint64_t>(b));
    }
    u128 r = a % b;
    a = b;
    b = r;
  }
  return a;
}

inline u128 abs_wide(i128 v) { return v < 0 ? static_cast<u128>(-v) : static_cast<u128>(v); }

}  // namespace detail

/// Thrown by Rational::parse. The reason distinguishes the diagnostics the
/// instance reader reports.
class RationalParseError : public std::invalid_argument {
 public:
  enum class Reason { Malformed, ZeroDenominator, Overflow };

  RationalParseError(Reason reason, const std::string& what)
      : std::invalid_argument(what), reason_(reason) {}

  Reason reason() const noexcept { return reason_; }

 private:
  Reason reason_;
};

/**
 * Exact rational number with 64-bit numerator and denominator.
 *
 * Always kept in lowest terms with a positive denominator, so equality is
 * structural. Intermediate products are formed in 128 bits; a result that does
 * not fit back into 64 bits throws std::overflow_error instead of rounding.
 */
class Rational {
 public:
  constexpr Rational() = default;

  // Implicit on purpose: integer literals are coordinates.
  constexpr Rational(std::int64_t value) : num_(value) {}  // NOLINT

  Rational(std::int64_t num, std::int64_t den) {
    if (den == 0) throw std::domain_error("rational with zero denominator");
    *this = from_wide(num, den);
  }

  std::int64_t num() const noexcept { return num_; }
  std::int64_t den() const noexcept { return den_; }

  bool is_integer() const noexcept { return den_ == 1; }

  /// Largest integer not greater than the value.
  std::int64_t floor() const noexcept {
    std::int64_t q = num_ / den_;
    if (num_ % den_ != 0 && num_ < 0) --q;
    return q;
  }

  double to_double() const noexcept {
    return static_cast<double>(num_) / static_cast<double>(den_);
  }

  Rational operator-() const {
    if (num_ == std::numeric_limits<std::int64_t>::min()) throw std::overflow_error("rational overflow");
    Rational r;
    r.num_ = -num_;
    r.den_ = den_;
    return r;
  }

  friend Rational operator+(const Rational& a, const Rational& b) {
    if (a.den_ == b.den_) return from_wide(detail::i128(a.num_) + b.num_, a.den_);
    return from_wide(detail::i128(a.num_) * b.den_ + detail::i128(b.num_) * a.den_,
                     detail::i128(a.den_) * b.den_);
  }
  friend Rational operator-(const Rational& a, const Rational& b) {
    if (a.den_ == b.den_) return from_wide(detail::i128(a.num_) - b.num_, a.den_);
    return from_wide(detail::i128(a.num_) * b.den_ - detail::i128(b.num_) * a.den_,
                     detail::i128(a.den_) * b.den_);
  }
  friend Rational operator*(const Rational& a, const Rational& b) {
    return from_wide(detail::i128(a.num_) * b.num_, detail::i128(a.den_) * b.den_);
  }
  friend Rational operator/(const Rational& a, const Rational& b) {
    if (b.num_ == 0) throw std::domain_error("rational division by zero");
    return from_wide(detail::i128(a.num_) * b.den_, detail::i128(a.den_) * b.num_);
  }

  Rational& operator+=(const Rational& o) { return *this = *this + o; }
  Rational& operator-=(const Rational& o) { return *this = *this - o; }
  Rational& operator*=(const Rational& o) { return *this = *this * o; }
  Rational& operator/=(const Rational& o) { return *this = *this / o; }

  friend bool operator==(const Rational&, const Rational&) = default;

  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    if (a.den_ == b.den_) return a.num_ <=> b.num_;
    detail::i128 lhs = detail::i128(a.num_) * b.den_;
    detail::i128 rhs = detail::i128(b.num_) * a.den_;
    if (lhs < rhs) return std::strong_ordering::less;
    if (lhs > rhs) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }

  /// Canonical text: "p/q" in lowest terms, or "p" when the denominator is 1.
  std::string to_string() const {
    if (den_ == 1) return std::to_string(num_);
    return std::to_string(num_) + "/" + std::to_string(den_);
  }

  /**
   * Decimal rendering for reports, rounded half away from zero.
   *
   * Carries at least 12 significant digits and at least 12 fractional digits,
   * so the rendered value is always within 5e-13 of the exact one. Trailing
   * zeros are trimmed.
   */
  std::string to_decimal(int digits = 12) const {
    std::uint64_t d = static_cast<std::uint64_t>(den_);
    std::uint64_t mag = num_ < 0 ? static_cast<std::uint64_t>(-(num_ + 1)) + 1 : static_cast<std::uint64_t>(num_);
    std::uint64_t whole = mag / d;
    std::uint64_t rem = mag % d;

    std::string frac;
    int leading_zeros = 0;
    bool seen_nonzero = whole != 0;
    // One extra digit past the last kept one decides rounding.
    while (true) {
      int wanted = (whole == 0 ? leading_zeros : 0) + digits;
      if (static_cast<int>(frac.size()) >= wanted + 1) break;
      if (rem == 0 && seen_nonzero) break;
      if (rem == 0) {
        frac.clear();
        break;
      }
      detail::u128 scaled = detail::u128(rem) * 10;
      int digit = static_cast<int>(scaled / d);
      rem = static_cast<std::uint64_t>(scaled % d);
      frac.push_back(static_cast<char>('0' + digit));
      if (!seen_nonzero) {
        if (digit == 0) {
          ++leading_zeros;
        } else {
          seen_nonzero = true;
        }
      }
    }
    int keep = seen_nonzero && whole == 0 ? leading_zeros + digits : digits;
    if (static_cast<int>(frac.size()) > keep) {
      bool round_up = frac[static_cast<std::size_t>(keep)] >= '5';
      frac.resize(static_cast<std::size_t>(keep));
      for (int i = keep - 1; round_up && i >= 0; --i) {
        auto idx = static_cast<std::size_t>(i);
        if (frac[idx] == '9') {
          frac[idx] = '0';
        } else {
          ++frac[idx];
          round_up = false;
        }
      }
      if (round_up) ++whole;
    }
    while (!frac.empty() && frac.back() == '0') frac.pop_back();

    std::string out;
    if (num_ < 0 && (whole != 0 || !frac.empty())) out.push_back('-');
    out += std::to_string(whole);
    if (!frac.empty()) out += "." + frac;
    return out;
  }

  /**
   * Parses "p/q", "-p/q", integers and plain decimals ("0.25", "-1.5").
   * Decimals convert exactly: "0.1" is 1/10.
   */
  static Rational parse(std::string_view text) {
    using Reason = RationalParseError::Reason;
    auto malformed = [&] {
      return RationalParseError(Reason::Malformed, "malformed number-string '" + std::string(text) + "'");
    };
    auto overflow = [&] {
      return RationalParseError(Reason::Overflow, "number-string out of range '" + std::string(text) + "'");
    };

    std::string_view rest = text;
    bool negative = false;
    if (!rest.empty() && (rest.front() == '-' || rest.front() == '+')) {
      negative = rest.front() == '-';
      rest.remove_prefix(1);
    }

    auto read_digits = [&](std::string_view& sv, detail::u128& value, int& count) {
      count = 0;
      while (!sv.empty() && sv.front() >= '0' && sv.front() <= '9') {
        value = value * 10 + static_cast<unsigned>(sv.front() - '0');
        if (value > detail::u128(std::numeric_limits<std::int64_t>::max()) * 10) throw overflow();
        sv.remove_prefix(1);
        ++count;
      }
    };

    detail::u128 num = 0;
    int num_digits = 0;
    read_digits(rest, num, num_digits);
    if (num_digits == 0) throw malformed();

    detail::u128 den = 1;
    if (!rest.empty() && rest.front() == '/') {
      rest.remove_prefix(1);
      den = 0;
      int den_digits = 0;
      read_digits(rest, den, den_digits);
      if (den_digits == 0 || !rest.empty()) throw malformed();
      if (den == 0) {
        throw RationalParseError(Reason::ZeroDenominator,
                                 "zero denominator in number-string '" + std::string(text) + "'");
      }
    } else if (!rest.empty() && rest.front() == '.') {
      rest.remove_prefix(1);
      int frac_digits = 0;
      while (!rest.empty() && rest.front() >= '0' && rest.front() <= '9') {
        if (frac_digits >= 18) throw overflow();
        num = num * 10 + static_cast<unsigned>(rest.front() - '0');
        den *= 10;
        rest.remove_prefix(1);
        ++frac_digits;
      }
      if (frac_digits == 0 || !rest.empty()) throw malformed();
    } else if (!rest.empty()) {
      throw malformed();
    }

    detail::i128 signed_num = static_cast<detail::i128>(num);
    if (negative) signed_num = -signed_num;
    try {
      return from_wide(signed_num, static_cast<detail::i128>(den));
    } catch (const std::overflow_error&) {
      throw overflow();
    }
  }

  friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.to_string(); }

 private:
  static Rational from_wide(detail::i128 num, detail::i128 den) {
    if (den < 0) {
      num = -num;
      den = -den;
    }
    detail::u128 g = detail::gcd_wide(detail::abs_wide(num), static_cast<detail::u128>(den));
    if (g > 1) {
      num /= static_cast<detail::i128>(g);
      den /= static_cast<detail::i128>(g);
    }
    constexpr auto lo = std::numeric_limits<std::int64_t>::min();
    constexpr auto hi = std::numeric_limits<std::int64_t>::max();
    if (num < lo || num > hi || den > hi) throw std::overflow_error("rational overflow");
    Rational r;
    r.num_ = static_cast<std::int64_t>(num);
    r.den_ = static_cast<std::int64_t>(den);
    return r;
  }

  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

inline Rational abs(const Rational& r) { return r < 0 ? -r : r; }

}  // namespace tic

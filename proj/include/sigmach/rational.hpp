#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <ostream>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace sigmach {

/// Exact arbitrary-precision rational, always kept in lowest terms.
///
/// All positions, times and speeds in the model are Rationals; nothing in the
/// simulator touches floating point except SVG coordinates.
class Rational {
public:
    Rational() = default;
    Rational(long value) : v_(value) {}  // NOLINT(google-explicit-constructor)
    Rational(long num, long den);
    explicit Rational(mpq_class value);

    /// Parses `[-]p` or `[-]p/q` with q > 0. Throws std::invalid_argument.
    static Rational parse(std::string_view text);

    /// "p" for integers, "p/q" otherwise (reduced, sign on the numerator).
    std::string str() const;
    double to_double() const { return v_.get_d(); }

    const mpq_class& value() const noexcept { return v_; }
    int sign() const noexcept { return sgn(v_); }
    bool is_zero() const noexcept { return sign() == 0; }
    bool is_integer() const;

    Rational& operator+=(const Rational& o);
    Rational& operator-=(const Rational& o);
    Rational& operator*=(const Rational& o);
    Rational& operator/=(const Rational& o);

    friend Rational operator+(Rational a, const Rational& b) { return a += b; }
    friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
    friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
    friend Rational operator/(Rational a, const Rational& b) { return a /= b; }
    Rational operator-() const;

    friend bool operator==(const Rational& a, const Rational& b) { return a.v_ == b.v_; }
    friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
        const int c = cmp(a.v_, b.v_);
        return c < 0 ? std::strong_ordering::less
                     : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
    }

    std::size_t hash() const;

private:
    mpq_class v_;
};

Rational midpoint(const Rational& a, const Rational& b);

inline std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

}  // namespace sigmach

template <>
struct std::hash<sigmach::Rational> {
    std::size_t operator()(const sigmach::Rational& r) const { return r.hash(); }
};

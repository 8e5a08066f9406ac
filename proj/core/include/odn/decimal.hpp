#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace odn {

/// Fixed-point decimal with nine fractional digits.
///
/// Loss coefficients and lengths are carried in this type so that catalogue
/// values such as 17.13 dB or 0.36 dB/km are represented exactly and sums of
/// them never pick up binary rounding noise. Products are rounded half away
/// from zero at the ninth digit, which is exact for any pair of operands with
/// at most nine fractional digits combined.
class Decimal {
public:
    static constexpr std::int64_t kScale = 1'000'000'000;
    static constexpr int kDigits = 9;

    constexpr Decimal() = default;

    static constexpr Decimal from_raw(std::int64_t raw) {
        Decimal d;
        d.raw_ = raw;
        return d;
    }

    static constexpr Decimal from_int(std::int64_t v) { return from_raw(v * kScale); }

    /// Parses "12", "-0.35", "17.130". Throws std::invalid_argument on junk or
    /// more than nine fractional digits.
    static Decimal parse(std::string_view text);

    /// Nearest representable value.
    static Decimal from_double(double v);

    constexpr std::int64_t raw() const { return raw_; }
    double to_double() const { return static_cast<double>(raw_) / static_cast<double>(kScale); }

    /// Shortest decimal form without trailing zeros ("22.75", "3", "-0.1").
    std::string to_string() const;

    /// Fixed number of fractional digits, rounded half away from zero.
    std::string to_fixed(int digits) const;

    /// Rounded to the given number of fractional digits.
    Decimal rounded(int digits) const;

    constexpr Decimal operator-() const { return from_raw(-raw_); }
    constexpr Decimal& operator+=(Decimal o) {
        raw_ += o.raw_;
        return *this;
    }
    constexpr Decimal& operator-=(Decimal o) {
        raw_ -= o.raw_;
        return *this;
    }
    friend constexpr Decimal operator+(Decimal a, Decimal b) { return a += b; }
    friend constexpr Decimal operator-(Decimal a, Decimal b) { return a -= b; }

    friend Decimal operator*(Decimal a, Decimal b);
    friend constexpr Decimal operator*(Decimal a, std::int64_t k) { return from_raw(a.raw_ * k); }
    friend constexpr Decimal operator*(std::int64_t k, Decimal a) { return from_raw(a.raw_ * k); }

    friend constexpr auto operator<=>(Decimal, Decimal) = default;

private:
    std::int64_t raw_ = 0;
};

inline namespace literals {
/// 17.13_dec; the literal text is parsed, not converted through double.
inline Decimal operator""_dec(const char* text) { return Decimal::parse(text); }
}  // namespace literals

}  // namespace odn

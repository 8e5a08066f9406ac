#include "odn/decimal.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <stdexcept>

namespace odn {

namespace {

std::int64_t pow10(int n) {
    std::int64_t p = 1;
    for (int i = 0; i < n; ++i) p *= 10;
    return p;
}

// Integer division rounding half away from zero.
__int128 div_round(__int128 num, __int128 den) {
    __int128 q = num / den;
    __int128 r = num % den;
    if (r < 0) r = -r;
    if (2 * r >= (den < 0 ? -den : den)) q += ((num < 0) != (den < 0)) ? -1 : 1;
    return q;
}

}  // namespace

Decimal Decimal::parse(std::string_view text) {
    std::string_view s = text;
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    if (s.empty()) throw std::invalid_argument("empty decimal");

    bool negative = false;
    if (s.front() == '-' || s.front() == '+') {
        negative = s.front() == '-';
        s.remove_prefix(1);
    }

    __int128 whole = 0;
    __int128 frac = 0;
    int frac_digits = 0;
    bool seen_dot = false;
    bool any_digit = false;
    for (char c : s) {
        if (c == '.') {
            if (seen_dot) throw std::invalid_argument("malformed decimal: " + std::string(text));
            seen_dot = true;
            continue;
        }
        if (c < '0' || c > '9') throw std::invalid_argument("malformed decimal: " + std::string(text));
        any_digit = true;
        if (seen_dot) {
            if (++frac_digits > kDigits) throw std::invalid_argument("too many fractional digits: " + std::string(text));
            frac = frac * 10 + (c - '0');
        } else {
            whole = whole * 10 + (c - '0');
            if (whole > std::numeric_limits<std::int64_t>::max() / kScale)
                throw std::out_of_range("decimal out of range: " + std::string(text));
        }
    }
    if (!any_digit) throw std::invalid_argument("malformed decimal: " + std::string(text));

    __int128 raw = whole * kScale + frac * pow10(kDigits - frac_digits);
    return from_raw(static_cast<std::int64_t>(negative ? -raw : raw));
}

Decimal Decimal::from_double(double v) {
    if (!std::isfinite(v)) throw std::invalid_argument("non-finite decimal");
    const double scaled = std::round(v * static_cast<double>(kScale));
    if (std::fabs(scaled) > 9.2e18) throw std::out_of_range("decimal out of range");
    // Scaling by 1e9 in binary can land a hair off the intended digit for
    // values such as 0.35; snap through the shortest textual form instead.
    std::string text = std::to_string(v);
    char buf[64];
    for (int prec = 1; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof buf, "%.*g", prec, v);
        if (std::strtod(buf, nullptr) == v) {
            text = buf;
            break;
        }
    }
    if (text.find_first_of("eE") == std::string::npos) {
        auto dot = text.find('.');
        if (dot == std::string::npos || text.size() - dot - 1 <= static_cast<std::size_t>(kDigits)) {
            return parse(text);
        }
    }
    return from_raw(static_cast<std::int64_t>(scaled));
}

std::string Decimal::to_string() const {
    std::string s = to_fixed(kDigits);
    if (auto dot = s.find('.'); dot != std::string::npos) {
        while (s.back() == '0') s.pop_back();
        if (s.back() == '.') s.pop_back();
    }
    if (s == "-0") s = "0";
    return s;
}

std::string Decimal::to_fixed(int digits) const {
    if (digits < 0 || digits > kDigits) throw std::invalid_argument("digits out of range");
    const std::int64_t r = rounded(digits).raw_;
    const bool negative = r < 0;
    const std::uint64_t mag = negative ? static_cast<std::uint64_t>(-(r + 1)) + 1 : static_cast<std::uint64_t>(r);
    const std::uint64_t whole = mag / kScale;
    std::uint64_t frac = mag % kScale;
    std::string out = (negative && mag != 0 ? "-" : "") + std::to_string(whole);
    if (digits > 0) {
        frac /= static_cast<std::uint64_t>(pow10(kDigits - digits));
        std::string f = std::to_string(frac);
        out += '.';
        out += std::string(static_cast<std::size_t>(digits) - f.size(), '0');
        out += f;
    }
    return out;
}

Decimal Decimal::rounded(int digits) const {
    if (digits >= kDigits) return *this;
    const std::int64_t step = pow10(kDigits - digits);
    return from_raw(static_cast<std::int64_t>(div_round(raw_, step) * step));
}

Decimal operator*(Decimal a, Decimal b) {
    const __int128 prod = static_cast<__int128>(a.raw_) * b.raw_;
    const __int128 q = div_round(prod, Decimal::kScale);
    if (q > std::numeric_limits<std::int64_t>::max() || q < std::numeric_limits<std::int64_t>::min())
        throw std::overflow_error("decimal multiplication overflow");
    return Decimal::from_raw(static_cast<std::int64_t>(q));
}

}  // namespace odn

#include "zkcyl/rational.hpp"

#include <charconv>
#include <numeric>

#include "zkcyl/error.hpp"

namespace zkcyl {

Rational::Rational(std::int64_t num, std::int64_t den) {
    if (den == 0) {
        throw ConfigError("rational with zero denominator");
    }
    if (den < 0) {
        num = -num;
        den = -den;
    }
    const std::int64_t g = std::gcd(num, den);
    num_ = num / (g == 0 ? 1 : g);
    den_ = den / (g == 0 ? 1 : g);
}

namespace {

std::int64_t parse_int(std::string_view text, std::string_view whole) {
    while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
    while (!text.empty() && text.back() == ' ') text.remove_suffix(1);
    if (!text.empty() && text.front() == '+') text.remove_prefix(1);
    std::int64_t value = 0;
    const auto* first = text.data();
    const auto* last = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (text.empty() || ec != std::errc{} || ptr != last) {
        throw ConfigError("cannot parse rational '" + std::string(whole) + "'");
    }
    return value;
}

}  // namespace

Rational Rational::parse(std::string_view text) {
    const auto slash = text.find('/');
    if (slash == std::string_view::npos) {
        return Rational{parse_int(text, text), 1};
    }
    return Rational{parse_int(text.substr(0, slash), text), parse_int(text.substr(slash + 1), text)};
}

std::string Rational::str() const {
    if (den_ == 1) return std::to_string(num_);
    return std::to_string(num_) + "/" + std::to_string(den_);
}

}  // namespace zkcyl

#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace zkcyl {

/// Exact rational number num/den with den > 0 and gcd(num, den) = 1.
class Rational {
public:
    constexpr Rational() = default;
    Rational(std::int64_t num, std::int64_t den = 1);

    /// Parses "7/3", "3", or "-2/5". Decimal notation is rejected so that
    /// exponents like 7/3 are never silently rounded.
    static Rational parse(std::string_view text);

    std::int64_t num() const noexcept { return num_; }
    std::int64_t den() const noexcept { return den_; }
    double value() const noexcept { return static_cast<double>(num_) / static_cast<double>(den_); }
    bool has_odd_denominator() const noexcept { return den_ % 2 != 0; }

    std::string str() const;

    friend bool operator==(const Rational&, const Rational&) = default;

private:
    std::int64_t num_ = 0;
    std::int64_t den_ = 1;
};

}  // namespace zkcyl

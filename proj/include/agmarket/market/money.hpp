#pragma once

#include <compare>
#include <cstdint>
#include <string>

namespace agmarket::market {

/// Fixed-point currency amount with two decimal places.
class Money {
 public:
  constexpr Money() = default;

  static constexpr Money from_cents(std::int64_t cents) { return Money(cents); }
  /// Rounds to the nearest cent.
  static Money from_decimal(double value);

  constexpr std::int64_t cents() const { return cents_; }
  double as_decimal() const { return static_cast<double>(cents_) / 100.0; }
  /// "12.50", "-0.05"
  std::string to_string() const;

  constexpr Money& operator+=(Money other) {
    cents_ += other.cents_;
    return *this;
  }
  constexpr Money& operator-=(Money other) {
    cents_ -= other.cents_;
    return *this;
  }
  friend constexpr Money operator+(Money a, Money b) { return a += b; }
  friend constexpr Money operator-(Money a, Money b) { return a -= b; }
  friend constexpr auto operator<=>(Money, Money) = default;

 private:
  constexpr explicit Money(std::int64_t cents) : cents_(cents) {}

  std::int64_t cents_ = 0;
};

}  // namespace agmarket::market

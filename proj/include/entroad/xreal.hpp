#pragma once

// Extended reals [-inf, +inf] used as the codomain of every entropy function.
//
// The convex structure is the non-cancellative one in which a nontrivial
// mixture of -inf with anything is -inf, and addition lets -inf dominate
// +inf. NaN is never representable.

#include <compare>
#include <limits>
#include <ranges>
#include <span>
#include <string>
#include <string_view>

namespace entroad {

class ExtReal {
 public:
  constexpr ExtReal() = default;
  ExtReal(double v);  // NOLINT(google-explicit-constructor): finite values read naturally

  static constexpr ExtReal pos_inf() { return ExtReal(Raw{}, std::numeric_limits<double>::infinity()); }
  static constexpr ExtReal neg_inf() { return ExtReal(Raw{}, -std::numeric_limits<double>::infinity()); }

  constexpr bool is_finite() const { return v_ != pos_inf().v_ && v_ != neg_inf().v_; }
  constexpr bool is_pos_inf() const { return v_ == std::numeric_limits<double>::infinity(); }
  constexpr bool is_neg_inf() const { return v_ == -std::numeric_limits<double>::infinity(); }

  /// Underlying double; +/-inf map to IEEE infinities.
  constexpr double value() const { return v_; }

  friend constexpr bool operator==(ExtReal a, ExtReal b) { return a.v_ == b.v_; }
  friend constexpr std::strong_ordering operator<=>(ExtReal a, ExtReal b) {
    if (a.v_ < b.v_) return std::strong_ordering::less;
    if (a.v_ > b.v_) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }

 private:
  struct Raw {};
  constexpr ExtReal(Raw, double v) : v_(v) {}
  double v_ = 0.0;
};

/// Convex combination c_lambda(a, b). Projections at lambda in {0, 1}; a
/// nontrivial mixture involving -inf is -inf, otherwise +inf absorbs.
ExtReal xr_combine(double lambda, ExtReal a, ExtReal b);

/// Addition in which -inf dominates: inf + (-inf) = -inf.
ExtReal xr_add(ExtReal a, ExtReal b);

/// Least upper bound; the empty supremum is -inf.
ExtReal xr_sup(std::span<const ExtReal> values);

template <std::ranges::input_range R>
  requires std::convertible_to<std::ranges::range_value_t<R>, ExtReal>
ExtReal xr_sup(R&& values) {
  ExtReal best = ExtReal::neg_inf();
  for (auto&& v : values) {
    const ExtReal x = v;
    if (x.is_pos_inf()) return x;
    if (x > best) best = x;
  }
  return best;
}

/// "+inf", "-inf", or the shortest round-trip decimal literal.
std::string to_string(ExtReal x);

/// Inverse of to_string; also accepts any decimal literal. Throws DomainError.
ExtReal parse_ext_real(std::string_view text);

/// Shortest round-trip decimal for a finite double.
std::string format_double(double v);

}  // namespace entroad

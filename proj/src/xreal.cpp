#include "entroad/xreal.hpp"

#include <charconv>
#include <cmath>
#include <system_error>

#include "entroad/errors.hpp"

namespace entroad {

ExtReal::ExtReal(double v) : v_(v) {
  if (std::isnan(v)) throw DomainError("ExtReal: NaN is not an extended real");
}

ExtReal xr_combine(double lambda, ExtReal a, ExtReal b) {
  if (!(lambda >= 0.0 && lambda <= 1.0)) throw DomainError("xr_combine: lambda outside [0, 1]");
  if (lambda == 1.0) return a;
  if (lambda == 0.0 || a == b) return b;
  if (a.is_neg_inf() || b.is_neg_inf()) return ExtReal::neg_inf();
  if (a.is_pos_inf() || b.is_pos_inf()) return ExtReal::pos_inf();
  return ExtReal(lambda * a.value() + (1.0 - lambda) * b.value());
}

ExtReal xr_add(ExtReal a, ExtReal b) {
  if (a.is_neg_inf() || b.is_neg_inf()) return ExtReal::neg_inf();
  if (a.is_pos_inf() || b.is_pos_inf()) return ExtReal::pos_inf();
  return ExtReal(a.value() + b.value());
}

ExtReal xr_sup(std::span<const ExtReal> values) {
  ExtReal best = ExtReal::neg_inf();
  for (ExtReal x : values) {
    if (x.is_pos_inf()) return x;
    if (x > best) best = x;
  }
  return best;
}

std::string format_double(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc{}) throw DomainError("format_double: conversion failed");
  return std::string(buf, end);
}

std::string to_string(ExtReal x) {
  if (x.is_pos_inf()) return "+inf";
  if (x.is_neg_inf()) return "-inf";
  return format_double(x.value());
}

ExtReal parse_ext_real(std::string_view text) {
  if (text == "+inf") return ExtReal::pos_inf();
  if (text == "-inf") return ExtReal::neg_inf();
  double v = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  if (first != last && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc{} || ptr != last || !std::isfinite(v)) {
    throw DomainError("parse_ext_real: not an extended real literal: '" + std::string(text) + "'");
  }
  return ExtReal(v);
}

}  // namespace entroad

#include "dwde/rational.hpp"

#include "dwde/error.hpp"

#include <cctype>

namespace dwde {

std::string_view errc_name(Errc code) noexcept {
  switch (code) {
    case Errc::bad_partition: return "BadPartition";
    case Errc::non_expanding: return "NonExpanding";
    case Errc::non_markov_image: return "NonMarkovImage";
    case Errc::out_of_domain: return "OutOfDomain";
    case Errc::enumeration_too_large: return "EnumerationTooLarge";
    case Errc::invalid_model: return "InvalidModel";
    case Errc::horizon_zero: return "HorizonZero";
    case Errc::budget_exceeded: return "BudgetExceeded";
    case Errc::window_too_small: return "WindowTooSmall";
    case Errc::singular_system: return "SingularSystem";
    case Errc::unsupported_base: return "UnsupportedBase";
    case Errc::unsupported_jumps: return "UnsupportedJumps";
    case Errc::hypothesis_violated: return "HypothesisViolated";
    case Errc::degenerate_alpha: return "DegenerateAlpha";
    case Errc::io_failure: return "IoFailure";
    case Errc::config_error: return "ConfigError";
  }
  return "Unknown";
}

namespace {

bool is_integer_literal(std::string_view s) {
  if (s.empty()) return false;
  std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  if (i == s.size()) return false;
  for (; i < s.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
  }
  return true;
}

BigInt parse_integer(std::string_view s) {
  std::string digits(s);
  if (!digits.empty() && digits[0] == '+') digits.erase(0, 1);
  return BigInt(digits, 10);
}

}  // namespace

Rational parse_rational(std::string_view text) {
  auto fail = [&] { return Error(Errc::config_error, "not a rational: '" + std::string(text) + "'"); };
  std::string_view s = text;
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);

  if (auto slash = s.find('/'); slash != std::string_view::npos) {
    auto num = s.substr(0, slash);
    auto den = s.substr(slash + 1);
    if (!is_integer_literal(num) || !is_integer_literal(den)) throw fail();
    BigInt d = parse_integer(den);
    if (d == 0) throw fail();
    Rational r(parse_integer(num), d);
    r.canonicalize();
    return r;
  }
  if (auto dot = s.find('.'); dot != std::string_view::npos) {
    auto whole = s.substr(0, dot);
    auto frac = s.substr(dot + 1);
    bool negative = !whole.empty() && whole[0] == '-';
    if (whole == "-" || whole == "+" || whole.empty()) {
      whole = "0";
    } else if (!is_integer_literal(whole)) {
      throw fail();
    }
    if (frac.empty() || !is_integer_literal(frac) || frac[0] == '-' || frac[0] == '+') throw fail();
    BigInt scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, frac.size());
    BigInt w = parse_integer(whole);
    if (w < 0) w = -w;
    Rational r(w * scale + parse_integer(frac), scale);
    r.canonicalize();
    return negative ? Rational(-r) : r;
  }
  if (!is_integer_literal(s)) throw fail();
  return Rational(parse_integer(s));
}

std::string to_string(const Rational& value) {
  if (value.get_den() == 1) return value.get_num().get_str();
  return value.get_num().get_str() + "/" + value.get_den().get_str();
}

std::string to_string(const BigInt& value) { return value.get_str(); }

double to_double(const Rational& value) { return value.get_d(); }

}  // namespace dwde

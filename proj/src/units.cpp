#include "capmic/units.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <string>

#include "capmic/errors.hpp"

namespace capmic {
namespace {

struct UnitEntry {
  std::string_view symbol;
  UnitFamily family;
  int exp10;  // power-of-ten factor relative to the SI unit
};

// "um" and the two Unicode micro signs are all accepted for 1e-6.
constexpr std::array<UnitEntry, 28> kUnits{{
    {"m", UnitFamily::length, 0},
    {"mm", UnitFamily::length, -3},
    {"um", UnitFamily::length, -6},
    {"µm", UnitFamily::length, -6},
    {"μm", UnitFamily::length, -6},
    {"nm", UnitFamily::length, -9},
    {"Pa", UnitFamily::pressure, 0},
    {"kPa", UnitFamily::pressure, 3},
    {"MPa", UnitFamily::pressure, 6},
    {"GPa", UnitFamily::pressure, 9},
    {"V", UnitFamily::voltage, 0},
    {"mV", UnitFamily::voltage, -3},
    {"uV", UnitFamily::voltage, -6},
    {"µV", UnitFamily::voltage, -6},
    {"μV", UnitFamily::voltage, -6},
    {"kV", UnitFamily::voltage, 3},
    {"F", UnitFamily::capacitance, 0},
    {"mF", UnitFamily::capacitance, -3},
    {"uF", UnitFamily::capacitance, -6},
    {"µF", UnitFamily::capacitance, -6},
    {"μF", UnitFamily::capacitance, -6},
    {"nF", UnitFamily::capacitance, -9},
    {"pF", UnitFamily::capacitance, -12},
    {"fF", UnitFamily::capacitance, -15},
    {"Hz", UnitFamily::frequency, 0},
    {"kHz", UnitFamily::frequency, 3},
    {"MHz", UnitFamily::frequency, 6},
    {"GHz", UnitFamily::frequency, 9},
}};

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

[[noreturn]] void fail(std::string_view text, std::string_view why) {
  throw ValidationError("cannot parse quantity '" + std::string(text) + "': " + std::string(why));
}

}  // namespace

ParsedQuantity parse_quantity(std::string_view text) {
  std::string_view s = trim(text);
  if (s.empty()) fail(text, "empty string");

  // Split the numeric token into mantissa and decimal exponent.
  std::size_t i = 0;
  auto digits_from = [&](std::size_t start) {
    std::size_t j = start;
    while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
    return j;
  };
  if (s[i] == '+' || s[i] == '-') ++i;
  std::size_t int_end = digits_from(i);
  std::size_t frac_end = int_end;
  if (int_end < s.size() && s[int_end] == '.') frac_end = digits_from(int_end + 1);
  if (int_end == i && frac_end <= int_end + 1) fail(text, "no digits");
  std::string_view mantissa = s.substr(0, frac_end);

  long exp10 = 0;
  std::size_t unit_start = frac_end;
  if (frac_end < s.size() && (s[frac_end] == 'e' || s[frac_end] == 'E')) {
    std::size_t e = frac_end + 1;
    bool negative = false;
    if (e < s.size() && (s[e] == '+' || s[e] == '-')) {
      negative = s[e] == '-';
      ++e;
    }
    std::size_t exp_end = digits_from(e);
    if (exp_end == e) fail(text, "malformed exponent");
    auto [p, ec] = std::from_chars(s.data() + e, s.data() + exp_end, exp10);
    if (ec != std::errc{} || p != s.data() + exp_end) fail(text, "malformed exponent");
    if (negative) exp10 = -exp10;
    unit_start = exp_end;
  }

  std::string_view unit = trim(s.substr(unit_start));
  UnitFamily family = UnitFamily::dimensionless;
  if (!unit.empty()) {
    bool found = false;
    for (const auto& entry : kUnits) {
      if (unit == entry.symbol) {
        family = entry.family;
        exp10 += entry.exp10;
        found = true;
        break;
      }
    }
    if (!found) fail(text, "unknown unit '" + std::string(unit) + "'");
  }

  // One correctly-rounded decimal-to-binary conversion with the unit's power
  // of ten folded into the exponent keeps equal decimal values bit-identical
  // across prefixes ("1.9 mm" == "1900 um").
  if (!mantissa.empty() && mantissa.front() == '+') mantissa.remove_prefix(1);
  std::string normalized = std::string(mantissa) + "e" + std::to_string(exp10);
  double value = 0.0;
  auto [p, ec] = std::from_chars(normalized.data(), normalized.data() + normalized.size(), value);
  if (ec != std::errc{} || p != normalized.data() + normalized.size()) {
    fail(text, "out of range or malformed number");
  }
  if (!std::isfinite(value)) fail(text, "not finite");
  return {value, family};
}

namespace {

double parse_checked(std::string_view text, UnitFamily want, std::string_view what) {
  ParsedQuantity q = parse_quantity(text);
  if (q.family != want && q.family != UnitFamily::dimensionless) {
    fail(text, "unit is not a " + std::string(what) + " unit");
  }
  return q.value_si;
}

}  // namespace

Length parse_length(std::string_view text) { return {parse_checked(text, UnitFamily::length, "length")}; }
Pressure parse_pressure(std::string_view text) { return {parse_checked(text, UnitFamily::pressure, "pressure")}; }
Voltage parse_voltage(std::string_view text) { return {parse_checked(text, UnitFamily::voltage, "voltage")}; }
Capacitance parse_capacitance(std::string_view text) {
  return {parse_checked(text, UnitFamily::capacitance, "capacitance")};
}
Frequency parse_frequency(std::string_view text) {
  return {parse_checked(text, UnitFamily::frequency, "frequency")};
}

double sensitivity_to_db(OpenCircuitSensitivity s) {
  if (!(s.si() > 0.0)) {
    throw ValidationError("sensitivity must be > 0 V/Pa for dB conversion");
  }
  return 20.0 * std::log10(s.si());
}

OpenCircuitSensitivity db_to_sensitivity(double db_re_1v_per_pa) {
  return {std::pow(10.0, db_re_1v_per_pa / 20.0)};
}

}  // namespace capmic

#pragma once

#include <cmath>
#include <compare>
#include <string_view>

namespace capmic {

/// Compile-time dimensional analysis over the SI base dimensions the model
/// needs: length (m), mass (kg), time (s), current (A). Magnitudes are always
/// stored in SI base units; unit prefixes exist only at the parse/format
/// boundary (see parse_quantity).
template <int L, int M, int T, int I>
struct Quantity {
  double value{};

  [[nodiscard]] constexpr double si() const { return value; }

  constexpr Quantity operator-() const { return Quantity{-value}; }
  constexpr Quantity& operator+=(Quantity rhs) {
    value += rhs.value;
    return *this;
  }
  constexpr Quantity& operator-=(Quantity rhs) {
    value -= rhs.value;
    return *this;
  }
  friend constexpr auto operator<=>(Quantity, Quantity) = default;
};

template <int L, int M, int T, int I>
constexpr Quantity<L, M, T, I> operator+(Quantity<L, M, T, I> a, Quantity<L, M, T, I> b) {
  return {a.value + b.value};
}

template <int L, int M, int T, int I>
constexpr Quantity<L, M, T, I> operator-(Quantity<L, M, T, I> a, Quantity<L, M, T, I> b) {
  return {a.value - b.value};
}

template <int L1, int M1, int T1, int I1, int L2, int M2, int T2, int I2>
constexpr Quantity<L1 + L2, M1 + M2, T1 + T2, I1 + I2> operator*(Quantity<L1, M1, T1, I1> a,
                                                                 Quantity<L2, M2, T2, I2> b) {
  return {a.value * b.value};
}

template <int L1, int M1, int T1, int I1, int L2, int M2, int T2, int I2>
constexpr Quantity<L1 - L2, M1 - M2, T1 - T2, I1 - I2> operator/(Quantity<L1, M1, T1, I1> a,
                                                                 Quantity<L2, M2, T2, I2> b) {
  return {a.value / b.value};
}

template <int L, int M, int T, int I>
constexpr Quantity<L, M, T, I> operator*(double s, Quantity<L, M, T, I> q) {
  return {s * q.value};
}

template <int L, int M, int T, int I>
constexpr Quantity<L, M, T, I> operator*(Quantity<L, M, T, I> q, double s) {
  return {q.value * s};
}

template <int L, int M, int T, int I>
constexpr Quantity<L, M, T, I> operator/(Quantity<L, M, T, I> q, double s) {
  return {q.value / s};
}

template <int L, int M, int T, int I>
constexpr Quantity<-L, -M, -T, -I> operator/(double s, Quantity<L, M, T, I> q) {
  return {s / q.value};
}

/// sqrt is only defined where the result has integer dimensions.
template <int L, int M, int T, int I>
Quantity<L / 2, M / 2, T / 2, I / 2> sqrt(Quantity<L, M, T, I> q) {
  static_assert(L % 2 == 0 && M % 2 == 0 && T % 2 == 0 && I % 2 == 0,
                "sqrt of a quantity with odd dimension exponents");
  return {std::sqrt(q.value)};
}

template <int L, int M, int T, int I>
constexpr Quantity<2 * L, 2 * M, 2 * T, 2 * I> square(Quantity<L, M, T, I> q) {
  return {q.value * q.value};
}

template <int L, int M, int T, int I>
constexpr Quantity<3 * L, 3 * M, 3 * T, 3 * I> cube(Quantity<L, M, T, I> q) {
  return {q.value * q.value * q.value};
}

using Dimensionless = Quantity<0, 0, 0, 0>;
using Length = Quantity<1, 0, 0, 0>;
using Area = Quantity<2, 0, 0, 0>;
using Mass = Quantity<0, 1, 0, 0>;
using Frequency = Quantity<0, 0, -1, 0>;
using Pressure = Quantity<-1, 1, -2, 0>;  // also residual stress
using Voltage = Quantity<2, 1, -3, -1>;
using Capacitance = Quantity<-2, -1, 4, 2>;
using Permittivity = Quantity<-3, -1, 4, 2>;              // F/m
using MechSensitivity = Quantity<2, -1, 2, 0>;            // m/Pa
using ElecSensitivity = Quantity<1, 1, -3, -1>;           // V/m
using OpenCircuitSensitivity = Quantity<3, 0, -1, -1>;    // V/Pa
using MechResistance = Quantity<0, 1, -1, 0>;             // N*s/m
using Stiffness = Quantity<0, 1, -2, 0>;                  // N/m
using Viscosity = Quantity<-1, 1, -1, 0>;                 // Pa*s
using Density = Quantity<-3, 1, 0, 0>;                    // kg/m^3
using AreaDensity = Quantity<-2, 0, 0, 0>;                // 1/m^2
using CapacitancePerPressure = Quantity<-1, -2, 6, 2>;    // F/Pa

inline namespace literals {
// clang-format off
constexpr Length operator""_m(long double v)    { return {static_cast<double>(v)}; }
constexpr Length operator""_mm(long double v)   { return {static_cast<double>(v) * 1e-3}; }
constexpr Length operator""_um(long double v)   { return {static_cast<double>(v) * 1e-6}; }
constexpr Length operator""_nm(long double v)   { return {static_cast<double>(v) * 1e-9}; }
constexpr Pressure operator""_Pa(long double v) { return {static_cast<double>(v)}; }
constexpr Pressure operator""_kPa(long double v){ return {static_cast<double>(v) * 1e3}; }
constexpr Pressure operator""_MPa(long double v){ return {static_cast<double>(v) * 1e6}; }
constexpr Voltage operator""_V(long double v)   { return {static_cast<double>(v)}; }
constexpr Frequency operator""_Hz(long double v){ return {static_cast<double>(v)}; }
constexpr Frequency operator""_kHz(long double v){ return {static_cast<double>(v) * 1e3}; }
constexpr Capacitance operator""_pF(long double v){ return {static_cast<double>(v) * 1e-12}; }
// clang-format on
}  // namespace literals

/// Unit family of a parsed quantity string.
enum class UnitFamily { dimensionless, length, pressure, voltage, capacitance, frequency };

struct ParsedQuantity {
  double value_si{};
  UnitFamily family{UnitFamily::dimensionless};
};

/// Parses "<number> [unit]" where the unit is a power-of-ten multiple of an SI
/// unit (mm, um/μm, nm, kPa, MPa, GPa, mV, kV, fF, pF, nF, uF, kHz, MHz, ...).
/// The power of ten is folded into the decimal exponent before the one and
/// only decimal-to-binary conversion, so parse("1.9 mm") == parse("1900 um")
/// bit-exactly. Throws ValidationError on malformed input or unknown units.
ParsedQuantity parse_quantity(std::string_view text);

Length parse_length(std::string_view text);
Pressure parse_pressure(std::string_view text);
Voltage parse_voltage(std::string_view text);
Capacitance parse_capacitance(std::string_view text);
Frequency parse_frequency(std::string_view text);

/// 20*log10(s / 1 V/Pa). Throws ValidationError for s <= 0.
double sensitivity_to_db(OpenCircuitSensitivity s);
OpenCircuitSensitivity db_to_sensitivity(double db_re_1v_per_pa);

}  // namespace capmic

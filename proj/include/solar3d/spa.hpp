#pragma once

// Solar Position Algorithm of Reda & Andreas (NREL), stated uncertainty
// +/- 0.0003 degrees for years -2000..6000. Heliocentric terms are the
// VSOP87-derived periodic series; nutation is the 63-term IAU 1980 model.

#include <array>
#include <cmath>
#include <cstddef>

namespace solar3d::spa {

inline constexpr double kPi = 3.14159265358979323846;

inline double deg2rad(double d) { return d * kPi / 180.0; }
inline double rad2deg(double r) { return r * 180.0 / kPi; }

inline double wrap360(double deg) {
    deg = std::fmod(deg, 360.0);
    if (deg < 0.0) deg += 360.0;
    return deg;
}

struct Term {
    double a, b, c;
};

namespace tables {

inline constexpr std::array<Term, 64> L0{{
    {175347046, 0, 0},          {3341656, 4.6692568, 6283.07585},
    {34894, 4.6261, 12566.1517},{3497, 2.7441, 5753.3849},
    {3418, 2.8289, 3.5231},     {3136, 3.6277, 77713.7715},
    {2676, 4.4181, 7860.4194},  {2343, 6.1352, 3930.2097},
    {1324, 0.7425, 11506.7698}, {1273, 2.0371, 529.691},
    {1199, 1.1096, 1577.3435},  {990, 5.233, 5884.927},
    {902, 2.045, 26.298},       {857, 3.508, 398.149},
    {780, 1.179, 5223.694},     {753, 2.533, 5507.553},
    {505, 4.583, 18849.228},    {492, 4.205, 775.523},
    {357, 2.92, 0.067},         {317, 5.849, 11790.629},
    {284, 1.899, 796.298},      {271, 0.315, 10977.079},
    {243, 0.345, 5486.778},     {206, 4.806, 2544.314},
    {205, 1.869, 5573.143},     {202, 2.458, 6069.777},
    {156, 0.833, 213.299},      {132, 3.411, 2942.463},
    {126, 1.083, 20.775},       {115, 0.645, 0.98},
    {103, 0.636, 4694.003},     {102, 0.976, 15720.839},
    {102, 4.267, 7.114},        {99, 6.21, 2146.17},
    {98, 0.68, 155.42},         {86, 5.98, 161000.69},
    {85, 1.3, 6275.96},         {85, 3.67, 71430.7},
    {80, 1.81, 17260.15},       {79, 3.04, 12036.46},
    {75, 1.76, 5088.63},        {74, 3.5, 3154.69},
    {74, 4.68, 801.82},         {70, 0.83, 9437.76},
    {62, 3.98, 8827.39},        {61, 1.82, 7084.9},
    {57, 2.78, 6286.6},         {56, 4.39, 14143.5},
    {56, 3.47, 6279.55},        {52, 0.19, 12139.55},
    {52, 1.33, 1748.02},        {51, 0.28, 5856.48},
    {49, 0.49, 1194.45},        {41, 5.37, 8429.24},
    {41, 2.4, 19651.05},        {39, 6.17, 10447.39},
    {37, 6.04, 10213.29},       {37, 2.57, 1059.38},
    {36, 1.71, 2352.87},        {36, 1.78, 6812.77},
    {33, 0.59, 17789.85},       {30, 0.44, 83996.85},
    {30, 2.74, 1349.87},        {25, 3.16, 4690.48},
}};

inline constexpr std::array<Term, 34> L1{{
    {628331966747.0, 0, 0},     {206059, 2.678235, 6283.07585},
    {4303, 2.6351, 12566.1517}, {425, 1.59, 3.523},
    {119, 5.796, 26.298},       {109, 2.966, 1577.344},
    {93, 2.59, 18849.23},       {72, 1.14, 529.69},
    {68, 1.87, 398.15},         {67, 4.41, 5507.55},
    {59, 2.89, 5223.69},        {56, 2.17, 155.42},
    {45, 0.4, 796.3},           {36, 0.47, 775.52},
    {29, 2.65, 7.11},           {21, 5.34, 0.98},
    {19, 1.85, 5486.78},        {19, 4.97, 213.3},
    {17, 2.99, 6275.96},        {16, 0.03, 2544.31},
    {16, 1.43, 2146.17},        {15, 1.21, 10977.08},
    {12, 2.83, 1748.02},        {12, 3.26, 5088.63},
    {12, 5.27, 1194.45},        {12, 2.08, 4694},
    {11, 0.77, 553.57},         {10, 1.3, 6286.6},
    {10, 4.24, 1349.87},        {9, 2.7, 242.73},
    {9, 5.64, 951.72},          {8, 5.3, 2352.87},
    {6, 2.65, 9437.76},         {6, 4.67, 4690.48},
}};

inline constexpr std::array<Term, 20> L2{{
    {52919, 0, 0},            {8720, 1.0721, 6283.0758},
    {309, 0.867, 12566.152},  {27, 0.05, 3.52},
    {16, 5.19, 26.3},         {16, 3.68, 155.42},
    {10, 0.76, 18849.23},     {9, 2.06, 77713.77},
    {7, 0.83, 775.52},        {5, 4.66, 1577.34},
    {4, 1.03, 7.11},          {4, 3.44, 5573.14},
    {3, 5.14, 796.3},         {3, 6.05, 5507.55},
    {3, 1.19, 242.73},        {3, 6.12, 529.69},
    {3, 0.31, 398.15},        {3, 2.28, 553.57},
    {2, 4.38, 5223.69},       {2, 3.75, 0.98},
}};

inline constexpr std::array<Term, 7> L3{{
    {289, 5.844, 6283.076}, {35, 0, 0},        {17, 5.49, 12566.15},
    {3, 5.2, 155.42},       {1, 4.72, 3.52},   {1, 5.3, 18849.23},
    {1, 5.97, 242.73},
}};

inline constexpr std::array<Term, 3> L4{{
    {114, 3.142, 0}, {8, 4.13, 6283.08}, {1, 3.84, 12566.15},
}};

inline constexpr std::array<Term, 1> L5{{{1, 3.14, 0}}};

inline constexpr std::array<Term, 5> B0{{
    {280, 3.199, 84334.662}, {102, 5.422, 5507.553}, {80, 3.88, 5223.69},
    {44, 3.7, 2352.87},      {32, 4, 1577.34},
}};

inline constexpr std::array<Term, 2> B1{{
    {9, 3.9, 5507.55}, {6, 1.73, 5223.69},
}};

inline constexpr std::array<Term, 40> R0{{
    {100013989, 0, 0},            {1670700, 3.0984635, 6283.07585},
    {13956, 3.05525, 12566.1517}, {3084, 5.1985, 77713.7715},
    {1628, 1.1739, 5753.3849},    {1576, 2.8469, 7860.4194},
    {925, 5.453, 11506.77},       {542, 4.564, 3930.21},
    {472, 3.661, 5884.927},       {346, 0.964, 5507.553},
    {329, 5.9, 5223.694},         {307, 0.299, 5573.143},
    {243, 4.273, 11790.629},      {212, 5.847, 1577.344},
    {186, 5.022, 10977.079},      {175, 3.012, 18849.228},
    {110, 5.055, 5486.778},       {98, 0.89, 6069.78},
    {86, 5.69, 15720.84},         {86, 1.27, 161000.69},
    {65, 0.27, 17260.15},         {63, 0.92, 529.69},
    {57, 2.01, 83996.85},         {56, 5.24, 71430.7},
    {49, 3.25, 2544.31},          {47, 2.58, 775.52},
    {45, 5.54, 9437.76},          {43, 6.01, 6275.96},
    {39, 5.36, 4694},             {38, 2.39, 8827.39},
    {37, 0.83, 19651.05},         {37, 4.9, 12139.55},
    {36, 1.67, 12036.46},         {35, 1.84, 2942.46},
    {33, 0.24, 7084.9},           {32, 0.18, 5088.63},
    {32, 1.78, 398.15},           {28, 1.21, 6286.6},
    {28, 1.9, 6279.55},           {26, 4.59, 10447.39},
}};

inline constexpr std::array<Term, 10> R1{{
    {103019, 1.10749, 6283.07585}, {1721, 1.0644, 12566.1517},
    {702, 3.142, 0},               {32, 1.02, 18849.23},
    {31, 2.84, 5507.55},           {25, 1.32, 5223.69},
    {18, 1.42, 1577.34},           {10, 5.91, 10977.08},
    {9, 1.42, 6275.96},            {9, 0.27, 5486.78},
}};

inline constexpr std::array<Term, 6> R2{{
    {4359, 5.7846, 6283.0758}, {124, 5.579, 12566.152}, {12, 3.14, 0},
    {9, 3.63, 77713.77},       {6, 1.87, 5573.14},      {3, 5.47, 18849.23},
}};

inline constexpr std::array<Term, 2> R3{{
    {145, 4.273, 6283.076}, {7, 3.92, 12566.15},
}};

inline constexpr std::array<Term, 1> R4{{{4, 2.56, 6283.08}}};

struct NutationRow {
    int y0, y1, y2, y3, y4;     // multipliers of X0..X4
    double a, b;                // longitude, 0.0001"
    double c, d;                // obliquity, 0.0001"
};

inline constexpr std::array<NutationRow, 63> kNutation{{
    {0, 0, 0, 0, 1, -171996, -174.2, 92025, 8.9},
    {-2, 0, 0, 2, 2, -13187, -1.6, 5736, -3.1},
    {0, 0, 0, 2, 2, -2274, -0.2, 977, -0.5},
    {0, 0, 0, 0, 2, 2062, 0.2, -895, 0.5},
    {0, 1, 0, 0, 0, 1426, -3.4, 54, -0.1},
    {0, 0, 1, 0, 0, 712, 0.1, -7, 0},
    {-2, 1, 0, 2, 2, -517, 1.2, 224, -0.6},
    {0, 0, 0, 2, 1, -386, -0.4, 200, 0},
    {0, 0, 1, 2, 2, -301, 0, 129, -0.1},
    {-2, -1, 0, 2, 2, 217, -0.5, -95, 0.3},
    {-2, 0, 1, 0, 0, -158, 0, 0, 0},
    {-2, 0, 0, 2, 1, 129, 0.1, -70, 0},
    {0, 0, -1, 2, 2, 123, 0, -53, 0},
    {2, 0, 0, 0, 0, 63, 0, 0, 0},
    {0, 0, 1, 0, 1, 63, 0.1, -33, 0},
    {2, 0, -1, 2, 2, -59, 0, 26, 0},
    {0, 0, -1, 0, 1, -58, -0.1, 32, 0},
    {0, 0, 1, 2, 1, -51, 0, 27, 0},
    {-2, 0, 2, 0, 0, 48, 0, 0, 0},
    {0, 0, -2, 2, 1, 46, 0, -24, 0},
    {2, 0, 0, 2, 2, -38, 0, 16, 0},
    {0, 0, 2, 2, 2, -31, 0, 13, 0},
    {0, 0, 2, 0, 0, 29, 0, 0, 0},
    {-2, 0, 1, 2, 2, 29, 0, -12, 0},
    {0, 0, 0, 2, 0, 26, 0, 0, 0},
    {-2, 0, 0, 2, 0, -22, 0, 0, 0},
    {0, 0, -1, 2, 1, 21, 0, -10, 0},
    {0, 2, 0, 0, 0, 17, -0.1, 0, 0},
    {2, 0, -1, 0, 1, 16, 0, -8, 0},
    {-2, 2, 0, 2, 2, -16, 0.1, 7, 0},
    {0, 1, 0, 0, 1, -15, 0, 9, 0},
    {-2, 0, 1, 0, 1, -13, 0, 7, 0},
    {0, -1, 0, 0, 1, -12, 0, 6, 0},
    {0, 0, 2, -2, 0, 11, 0, 0, 0},
    {2, 0, -1, 2, 1, -10, 0, 5, 0},
    {2, 0, 1, 2, 2, -8, 0, 3, 0},
    {0, 1, 0, 2, 2, 7, 0, -3, 0},
    {-2, 1, 1, 0, 0, -7, 0, 0, 0},
    {0, -1, 0, 2, 2, -7, 0, 3, 0},
    {2, 0, 0, 2, 1, -7, 0, 3, 0},
    {2, 0, 1, 0, 0, 6, 0, 0, 0},
    {-2, 0, 2, 2, 2, 6, 0, -3, 0},
    {-2, 0, 1, 2, 1, 6, 0, -3, 0},
    {2, 0, -2, 0, 1, -6, 0, 3, 0},
    {2, 0, 0, 0, 1, -6, 0, 3, 0},
    {0, -1, 1, 0, 0, 5, 0, 0, 0},
    {-2, -1, 0, 2, 1, -5, 0, 3, 0},
    {-2, 0, 0, 0, 1, -5, 0, 3, 0},
    {0, 0, 2, 2, 1, -5, 0, 3, 0},
    {-2, 0, 2, 0, 1, 4, 0, 0, 0},
    {-2, 1, 0, 2, 1, 4, 0, 0, 0},
    {0, 0, 1, -2, 0, 4, 0, 0, 0},
    {-1, 0, 1, 0, 0, -4, 0, 0, 0},
    {-2, 1, 0, 0, 0, -4, 0, 0, 0},
    {1, 0, 0, 0, 0, -4, 0, 0, 0},
    {0, 0, 1, 2, 0, 3, 0, 0, 0},
    {0, 0, -2, 2, 2, -3, 0, 0, 0},
    {-1, -1, 1, 0, 0, -3, 0, 0, 0},
    {0, 1, 1, 0, 0, -3, 0, 0, 0},
    {0, -1, 1, 2, 2, -3, 0, 0, 0},
    {2, -1, -1, 2, 2, -3, 0, 0, 0},
    {0, 0, 3, 2, 2, -3, 0, 0, 0},
    {2, -1, 0, 2, 2, -3, 0, 0, 0},
}};

}  // namespace tables

// Gregorian calendar date with fractional UT day.
inline double julian_day(int year, int month, double day_ut) {
    if (month <= 2) {
        year -= 1;
        month += 12;
    }
    const double a = std::floor(year / 100.0);
    const double b = 2.0 - a + std::floor(a / 4.0);
    return std::floor(365.25 * (year + 4716)) + std::floor(30.6001 * (month + 1)) + day_ut + b -
           1524.5;
}

namespace detail {

template <std::size_t N>
double sum_series(const std::array<Term, N>& terms, double jme) {
    double sum = 0.0;
    for (const Term& t : terms) sum += t.a * std::cos(t.b + t.c * jme);
    return sum;
}

inline double third_order(double a, double b, double c, double d, double x) {
    return ((d * x + c) * x + b) * x + a;
}

}  // namespace detail

struct Nutation {
    double psi = 0.0;      // degrees
    double epsilon = 0.0;  // degrees
};

inline Nutation nutation(double jce) {
    const double x0 = detail::third_order(297.85036, 445267.111480, -0.0019142, 1.0 / 189474.0, jce);
    const double x1 = detail::third_order(357.52772, 35999.050340, -0.0001603, -1.0 / 300000.0, jce);
    const double x2 = detail::third_order(134.96298, 477198.867398, 0.0086972, 1.0 / 56250.0, jce);
    const double x3 = detail::third_order(93.27191, 483202.017538, -0.0036825, 1.0 / 327270.0, jce);
    const double x4 = detail::third_order(125.04452, -1934.136261, 0.0020708, 1.0 / 450000.0, jce);
    double dpsi = 0.0;
    double deps = 0.0;
    for (const auto& row : tables::kNutation) {
        const double arg =
            deg2rad(row.y0 * x0 + row.y1 * x1 + row.y2 * x2 + row.y3 * x3 + row.y4 * x4);
        dpsi += (row.a + row.b * jce) * std::sin(arg);
        deps += (row.c + row.d * jce) * std::cos(arg);
    }
    return {dpsi / 36000000.0, deps / 36000000.0};
}

struct SpaInput {
    int year = 2011;
    int month = 6;
    int day = 21;
    double hour_utc = 12.0;         // fractional UT hour
    double latitude = 42.36;        // degrees, +N
    double longitude = -71.09;      // degrees, +E
    double elevation = 0.0;         // meters
    double delta_t = 67.0;          // TT - UT, seconds
    double pressure = 1013.25;      // millibar
    double temperature = 10.0;      // Celsius
    bool apply_refraction = true;
    double atmos_refract = 0.5667;  // degrees, horizon refraction for the cutoff
};

struct SpaResult {
    double zenith = 0.0;        // topocentric, refraction-corrected if enabled
    double azimuth = 0.0;       // degrees clockwise from North
    double zenith_geom = 0.0;   // topocentric, no refraction
};

inline SpaResult solar_position(const SpaInput& in) {
    const double jd = julian_day(in.year, in.month, in.day + in.hour_utc / 24.0);
    const double jde = jd + in.delta_t / 86400.0;
    const double jc = (jd - 2451545.0) / 36525.0;
    const double jce = (jde - 2451545.0) / 36525.0;
    const double jme = jce / 10.0;

    // Heliocentric longitude, latitude, radius vector.
    using namespace tables;
    const double l = wrap360(rad2deg(
        (detail::sum_series(L0, jme) + detail::sum_series(L1, jme) * jme +
         detail::sum_series(L2, jme) * jme * jme +
         detail::sum_series(L3, jme) * std::pow(jme, 3) +
         detail::sum_series(L4, jme) * std::pow(jme, 4) +
         detail::sum_series(L5, jme) * std::pow(jme, 5)) /
        1.0e8));
    const double b_lat = rad2deg((detail::sum_series(B0, jme) + detail::sum_series(B1, jme) * jme) /
                                 1.0e8);
    const double r = (detail::sum_series(R0, jme) + detail::sum_series(R1, jme) * jme +
                      detail::sum_series(R2, jme) * jme * jme +
                      detail::sum_series(R3, jme) * std::pow(jme, 3) +
                      detail::sum_series(R4, jme) * std::pow(jme, 4)) /
                     1.0e8;

    // Geocentric longitude/latitude.
    const double theta = wrap360(l + 180.0);
    const double beta = -b_lat;

    const Nutation nut = nutation(jce);

    // True obliquity.
    const double u = jme / 10.0;
    const double eps0 =
        84381.448 +
        u * (-4680.93 +
             u * (-1.55 +
                  u * (1999.25 +
                       u * (-51.38 +
                            u * (-249.67 +
                                 u * (-39.05 + u * (7.12 + u * (27.87 + u * (5.79 + u * 2.45)))))))));
    const double eps = eps0 / 3600.0 + nut.epsilon;

    // Aberration and apparent sun longitude.
    const double dtau = -20.4898 / (3600.0 * r);
    const double lam = theta + nut.psi + dtau;

    // Apparent sidereal time at Greenwich.
    const double nu0 = wrap360(280.46061837 + 360.98564736629 * (jd - 2451545.0) +
                               0.000387933 * jc * jc - jc * jc * jc / 38710000.0);
    const double nu = nu0 + nut.psi * std::cos(deg2rad(eps));

    // Geocentric right ascension and declination.
    const double lam_r = deg2rad(lam);
    const double eps_r = deg2rad(eps);
    const double beta_r = deg2rad(beta);
    const double alpha = wrap360(rad2deg(std::atan2(
        std::sin(lam_r) * std::cos(eps_r) - std::tan(beta_r) * std::sin(eps_r), std::cos(lam_r))));
    const double delta = rad2deg(std::asin(std::sin(beta_r) * std::cos(eps_r) +
                                           std::cos(beta_r) * std::sin(eps_r) * std::sin(lam_r)));

    // Observer local hour angle.
    const double h = wrap360(nu + in.longitude - alpha);

    // Topocentric corrections (equatorial horizontal parallax).
    const double xi = 8.794 / (3600.0 * r);
    const double lat_r = deg2rad(in.latitude);
    const double u_ang = std::atan(0.99664719 * std::tan(lat_r));
    const double x = std::cos(u_ang) + in.elevation / 6378140.0 * std::cos(lat_r);
    const double y = 0.99664719 * std::sin(u_ang) + in.elevation / 6378140.0 * std::sin(lat_r);
    const double xi_r = deg2rad(xi);
    const double h_r = deg2rad(h);
    const double delta_r = deg2rad(delta);
    const double dalpha_r = std::atan2(-x * std::sin(xi_r) * std::sin(h_r),
                                       std::cos(delta_r) - x * std::sin(xi_r) * std::cos(h_r));
    const double delta_p = std::atan2(
        (std::sin(delta_r) - y * std::sin(xi_r)) * std::cos(dalpha_r),
        std::cos(delta_r) - x * std::sin(xi_r) * std::cos(h_r));
    const double h_p = h_r - dalpha_r;

    // Topocentric elevation, optionally refraction-corrected.
    const double e0_r = std::asin(std::sin(lat_r) * std::sin(delta_p) +
                                  std::cos(lat_r) * std::cos(delta_p) * std::cos(h_p));
    const double e0 = rad2deg(e0_r);
    double e = e0;
    if (in.apply_refraction && e0 >= -(0.26667 + in.atmos_refract)) {
        const double de = (in.pressure / 1010.0) * (283.0 / (273.0 + in.temperature)) * 1.02 /
                          (60.0 * std::tan(deg2rad(e0 + 10.3 / (e0 + 5.11))));
        e = e0 + de;
    }

    SpaResult out;
    out.zenith_geom = 90.0 - e0;
    out.zenith = 90.0 - e;
    const double gamma = std::atan2(std::sin(h_p), std::cos(h_p) * std::sin(lat_r) -
                                                       std::tan(delta_p) * std::cos(lat_r));
    out.azimuth = wrap360(rad2deg(gamma) + 180.0);
    return out;
}

}  // namespace solar3d::spa

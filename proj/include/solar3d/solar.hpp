#pragma once

#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <vector>

#include "solar3d/spa.hpp"
#include "solar3d/vec3.hpp"

namespace solar3d {

struct SolarError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Site {
    double latitude = 42.36;    // degrees, +N
    double longitude = -71.09;  // degrees, +E (Boston is negative)
    int year = 2011;
    int month = 6;
    int day = 21;
    double timezone = -4.0;     // hours east of UTC (EDT on the default date)
    double elevation = 0.0;     // meters
    double delta_t = 67.0;      // TT - UT, seconds
    double pressure = 1013.25;  // millibar, refraction model input
    double temperature = 10.0;  // Celsius
    bool apply_refraction = true;
};

// Timestamp = fractional local clock hours since local midnight of Site's date.
struct SunState {
    double local_hour = 0.0;
    double zenith = 0.0;   // degrees
    double azimuth = 0.0;  // degrees clockwise from North
    Vec3 s_hat;            // unit vector from ground toward the sun; x=E, y=N, z=Up
};

inline std::string format_local_time(double local_hour) {
    long total = std::lround(local_hour * 3600.0);
    if (total < 0) total = 0;
    const long h = total / 3600, m = (total / 60) % 60, s = total % 60;
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%02ld:%02ld:%02ld", h, m, s);
    return buf;
}

inline SunState sun_position(const Site& site, double local_hour) {
    spa::SpaInput in;
    in.year = site.year;
    in.month = site.month;
    in.day = site.day;
    in.hour_utc = local_hour - site.timezone;
    in.latitude = site.latitude;
    in.longitude = site.longitude;
    in.elevation = site.elevation;
    in.delta_t = site.delta_t;
    in.pressure = site.pressure;
    in.temperature = site.temperature;
    in.apply_refraction = site.apply_refraction;
    const spa::SpaResult r = spa::solar_position(in);

    SunState out;
    out.local_hour = local_hour;
    out.zenith = r.zenith;
    out.azimuth = r.azimuth;
    const double tz = spa::deg2rad(r.zenith);
    const double az = spa::deg2rad(r.azimuth);
    out.s_hat = {std::sin(tz) * std::sin(az), std::sin(tz) * std::cos(az), std::cos(tz)};
    return out;
}

// Bisection on zenith(t) = 90 deg, resolved to <= 1 s.
inline std::pair<double, double> sunrise_sunset(const Site& site) {
    const auto zen = [&](double h) { return sun_position(site, h).zenith; };

    // Scan the day on a coarse grid for the two crossings.
    constexpr int kSamples = 24 * 12;  // 5-minute scan
    double prev_h = 0.0;
    double prev_z = zen(0.0);
    double rise_lo = -1.0, rise_hi = -1.0, set_lo = -1.0, set_hi = -1.0;
    for (int i = 1; i <= kSamples; ++i) {
        const double h = 24.0 * i / kSamples;
        const double z = zen(h);
        if (prev_z > 90.0 && z <= 90.0 && rise_lo < 0.0) {
            rise_lo = prev_h;
            rise_hi = h;
        }
        if (prev_z <= 90.0 && z > 90.0 && set_lo < 0.0) {
            set_lo = prev_h;
            set_hi = h;
        }
        prev_h = h;
        prev_z = z;
    }
    if (rise_lo < 0.0 || set_lo < 0.0) {
        throw SolarError("no sunrise/sunset crossing on this date at this latitude");
    }
    const auto bisect = [&](double lo, double hi, bool rising) {
        for (int it = 0; it < 60 && (hi - lo) * 3600.0 > 1.0; ++it) {
            const double mid = 0.5 * (lo + hi);
            const bool above = zen(mid) <= 90.0;  // sun up
            if (above == rising) {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        return 0.5 * (lo + hi);
    };
    const double t_rise = bisect(rise_lo, rise_hi, true);
    const double t_set = bisect(set_lo, set_hi, false);
    return {t_rise, t_set};
}

// First point = t_rise, last point = t_set exactly; final interval may be short.
inline std::vector<double> time_grid(double t_rise, double t_set, double step_minutes) {
    if (step_minutes <= 0.0) throw SolarError("time step must be positive");
    if (t_rise >= t_set) throw SolarError("t_rise must precede t_set");
    const double step = step_minutes / 60.0;
    std::vector<double> grid;
    for (std::size_t i = 0;; ++i) {
        const double t = t_rise + step * static_cast<double>(i);
        if (t >= t_set) break;
        grid.push_back(t);
    }
    grid.push_back(t_set);
    return grid;
}

}  // namespace solar3d

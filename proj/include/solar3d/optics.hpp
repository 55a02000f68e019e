#pragma once

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>

#include "solar3d/spa.hpp"

namespace solar3d {

struct OpticsError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct OpticsConfig {
    double n1 = 1.0;       // air
    double n2 = 2.2;       // cover index
    double eta = 0.12;     // cell efficiency
    double s0 = 1488.0;    // W/m^2
    double k_atm = 0.7;
    double am_exp = 0.678;
    // AM = (1/cos θz)^am_exp as printed; the classical form applies the
    // exponent inside the attenuation base instead. Swappable for
    // sensitivity studies only.
    bool literal_am = true;
};

// AM = (1/cos θz)^0.678
inline double air_mass(double theta_z_deg, const OpticsConfig& cfg = {}) {
    if (theta_z_deg < 0.0 || theta_z_deg >= 90.0) {
        throw OpticsError("air mass undefined for zenith angle " + std::to_string(theta_z_deg));
    }
    const double sec = 1.0 / std::cos(spa::deg2rad(theta_z_deg));
    return cfg.literal_am ? std::pow(sec, cfg.am_exp) : sec;
}

// I = s0 * k_atm^AM
inline double direct_irradiance(double theta_z_deg, const OpticsConfig& cfg = {}) {
    const double am = air_mass(theta_z_deg, cfg);
    const double exponent = cfg.literal_am ? am : std::pow(am, cfg.am_exp);
    return cfg.s0 * std::pow(cfg.k_atm, exponent);
}

// asin(n_from sin θi / n_to); nullopt on total internal reflection.
inline std::optional<double> snell_angle(double theta_i_deg, double n_from, double n_to) {
    if (theta_i_deg < 0.0 || theta_i_deg > 90.0) {
        throw OpticsError("incidence angle out of [0, 90]");
    }
    if (n_from <= 0.0 || n_to <= 0.0) throw OpticsError("refractive indices must be positive");
    const double s = n_from * std::sin(spa::deg2rad(theta_i_deg)) / n_to;
    if (s > 1.0) return std::nullopt;
    return spa::rad2deg(std::asin(s));
}

// Polarization-averaged reflectance, unpolarized incident light.
inline double fresnel_reflectance(double theta_i_deg, const OpticsConfig& cfg = {}) {
    const auto theta_t = snell_angle(theta_i_deg, cfg.n1, cfg.n2);
    if (!theta_t) return 1.0;
    const double ci = std::cos(spa::deg2rad(theta_i_deg));
    const double ct = std::cos(spa::deg2rad(*theta_t));
    const double rs_num = cfg.n1 * ci - cfg.n2 * ct;
    const double rs_den = cfg.n1 * ci + cfg.n2 * ct;
    const double rp_num = cfg.n1 * ct - cfg.n2 * ci;
    const double rp_den = cfg.n1 * ct + cfg.n2 * ci;
    const double rs = (rs_num / rs_den) * (rs_num / rs_den);
    const double rp = (rp_num / rp_den) * (rp_num / rp_den);
    return 0.5 * (rs + rp);
}

inline double transmission(double theta_i_deg, const OpticsConfig& cfg = {}) {
    return 1.0 - fresnel_reflectance(theta_i_deg, cfg);
}

// P = T(θi) · I · cos θi · A · η; back-lit panels absorb nothing.
inline double subcell_power(double theta_i_deg, double irradiance, double area,
                            const OpticsConfig& cfg = {}) {
    if (theta_i_deg >= 90.0) return 0.0;
    if (theta_i_deg < 0.0) throw OpticsError("incidence angle negative");
    if (area < 0.0 || irradiance < 0.0) throw OpticsError("area and irradiance must be >= 0");
    return transmission(theta_i_deg, cfg) * irradiance * std::cos(spa::deg2rad(theta_i_deg)) *
           area * cfg.eta;
}

}  // namespace solar3d

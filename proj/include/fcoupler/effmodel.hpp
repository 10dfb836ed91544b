// Copyright 2026 The fcoupler Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Dispersive two-qubit model obtained by eliminating the coupler: net
// exchange coupling, dressed qubit frequencies, perturbative ZZ, and the
// coupler frequencies at which either vanishes.

#include <cmath>
#include <functional>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "fcoupler/errors.hpp"
#include "fcoupler/roots.hpp"
#include "fcoupler/squid.hpp"
#include "fcoupler/transmon.hpp"

namespace fcoupler {

/// Smallest allowed |denominator| in the perturbative expressions, GHz.
inline constexpr double kResonanceFloor = 1e-3;

/// Above this |g_jc / Delta_j| the dressed frequencies are flagged; at
/// kDispersiveLimit they are refused.
inline constexpr double kDispersiveWarn = 0.3;
inline constexpr double kDispersiveLimit = 0.5;

struct EffectiveCoupling {
    double g = 0.0;
    double g_eff = 0.0;
    double delta1 = 0.0;  // omega_c - omega_1
    double delta2 = 0.0;
    double sigma1 = 0.0;  // omega_c + omega_1
    double sigma2 = 0.0;
};

namespace detail {

inline void require_denominator(double value, const char* name, double floor) {
    if (!(std::abs(value) >= floor)) {
        std::ostringstream os;
        os << "resonance: denominator " << name << " = " << value * 1e3 << " MHz is below the "
           << floor * 1e3 << " MHz floor";
        throw ResonanceError(os.str());
    }
}

}  // namespace detail

/// g = g12 - g_eff with g_eff = (g1c g2c / 2) sum_j (1/Delta_j + 1/Sigma_j).
inline EffectiveCoupling g_net(const SystemModel& m, double floor = kResonanceFloor) {
    EffectiveCoupling c;
    c.delta1 = m.omegac - m.omega1;
    c.delta2 = m.omegac - m.omega2;
    c.sigma1 = m.omegac + m.omega1;
    c.sigma2 = m.omegac + m.omega2;
    detail::require_denominator(c.delta1, "omega_c - omega_1", floor);
    detail::require_denominator(c.delta2, "omega_c - omega_2", floor);
    c.g_eff = 0.5 * m.g1c * m.g2c *
              (1.0 / c.delta1 + 1.0 / c.sigma1 + 1.0 / c.delta2 + 1.0 / c.sigma2);
    c.g = m.g12 - c.g_eff;
    return c;
}

struct DressedFrequencies {
    double omega01_1 = 0.0;
    double omega01_2 = 0.0;
    double omega02_1 = 0.0;  // two-photon frequency before the -eta level offset
    double omega02_2 = 0.0;
    double max_dispersive_ratio = 0.0;  // max_j |g_jc / Delta_j|
    bool weakly_dispersive = false;     // ratio above kDispersiveWarn
};

/// Coupler-dressed qubit transitions to second order in g_jc, including the
/// counter-rotating (Sigma) contributions. The shifts are level repulsion
/// from the coupler: a qubit below the coupler moves down.
inline DressedFrequencies dressed_frequencies(const SystemModel& m,
                                              double floor = kResonanceFloor) {
    DressedFrequencies d;
    auto one = [&](double w, double eta, double g, double& w01, double& w02, const char* dn,
                   const char* dpn, const char* spn) {
        const double delta = m.omegac - w;
        const double sigma = m.omegac + w;
        detail::require_denominator(delta, dn, floor);
        detail::require_denominator(delta + eta, dpn, floor);
        detail::require_denominator(sigma - eta, spn, floor);
        const double ratio = std::abs(g / delta);
        d.max_dispersive_ratio = std::max(d.max_dispersive_ratio, ratio);
        const double g2 = g * g;
        w01 = w - g2 / delta - g2 / sigma;
        w02 = 2.0 * w - 2.0 * g2 / (delta + eta) - 2.0 * g2 / (sigma - eta);
    };
    one(m.omega1, m.eta1, m.g1c, d.omega01_1, d.omega02_1, "Delta_1", "Delta_1 + eta_1",
        "Sigma_1 - eta_1");
    one(m.omega2, m.eta2, m.g2c, d.omega01_2, d.omega02_2, "Delta_2", "Delta_2 + eta_2",
        "Sigma_2 - eta_2");
    if (d.max_dispersive_ratio >= kDispersiveLimit) {
        std::ostringstream os;
        os << "not dispersive: |g_jc / Delta_j| = " << d.max_dispersive_ratio
           << " (limit " << kDispersiveLimit << ")";
        throw ResonanceError(os.str());
    }
    d.weakly_dispersive = d.max_dispersive_ratio > kDispersiveWarn;
    return d;
}

struct ZZBreakdown {
    double zeta2 = 0.0;
    double zeta34 = 0.0;
    double zeta_total = 0.0;
    double delta12 = 0.0;
};

/// Static ZZ to fourth order. The model's g1c, g2c are the zero-flux rates;
/// `upsilon` is the coupler flux factor dividing each of them (1 leaves the
/// model rates as they are).
inline ZZBreakdown zz_perturbative(const SystemModel& m, double upsilon = 1.0,
                                   double floor = kResonanceFloor) {
    ZZBreakdown z;
    const double d12 = m.omega1 - m.omega2;
    z.delta12 = d12;
    const double e1 = m.eta1, e2 = m.eta2;

    if (m.g12 != 0.0) {
        detail::require_denominator(d12 - e1, "Delta_12 - eta_1", floor);
        detail::require_denominator(d12 + e2, "Delta_12 + eta_2", floor);
        z.zeta2 = -2.0 * m.g12 * m.g12 * (e1 + e2) / ((d12 - e1) * (d12 + e2));
    }

    const double p = m.g1c * m.g2c;
    if (p != 0.0) {
        const double d1 = m.omegac - m.omega1;
        const double d2 = m.omegac - m.omega2;
        detail::require_denominator(d1, "Delta_1", floor);
        detail::require_denominator(d2, "Delta_2", floor);
        detail::require_denominator(d12, "Delta_12", floor);
        detail::require_denominator(d12 - e1, "Delta_12 - eta_1", floor);
        detail::require_denominator(d12 + e2, "Delta_12 + eta_2", floor);
        detail::require_denominator(d1 + d2 + m.etac, "Delta_1 + Delta_2 + eta_c", floor);
        const double u2 = upsilon * upsilon;
        const double u4 = u2 * u2;
        const double q = p * p;
        const double inv = 1.0 / d1 + 1.0 / d2;
        const double cubic = -(2.0 * m.g12 * p / u2) *
                             ((1.0 / d2) * (1.0 / d12 + 2.0 / (-d12 + e1)) +
                              (1.0 / d1) * (2.0 / (d12 + e2) - 1.0 / d12));
        const double quartic = -2.0 * q / ((d1 + d2 + m.etac) * u4) * inv * inv +
                               q / (d1 * d1 * u4) * (2.0 / (d12 + e2) - 1.0 / d12 + 1.0 / d2) +
                               q / (d2 * d2 * u4) * (2.0 / (-d12 + e1) + 1.0 / d12 + 1.0 / d1);
        z.zeta34 = cubic + quartic;
    }
    z.zeta_total = z.zeta2 + z.zeta34;
    return z;
}

inline ZZBreakdown zz_perturbative(const SystemModel& m, const SquidParams& coupler_squid,
                                   FluxBias coupler_flux, double floor = kResonanceFloor) {
    return zz_perturbative(m, upsilon(coupler_squid, coupler_flux), floor);
}

/// Maps a sweep coordinate to the system model at that bias point.
using ModelBuilder = std::function<SystemModel(double)>;

/// x = coupler frequency; every other parameter, including the rates, held fixed.
inline ModelBuilder fixed_coupling_builder(const SystemModel& base) {
    return [base](double fc) {
        SystemModel m = base;
        m.omegac = fc;
        return m;
    };
}

/// x = coupler frequency reached by flux. The qubit-coupler rates shrink by
/// the flux factor and the coupler anharmonicity follows its Josephson energy.
/// `base` holds the zero-flux rates.
inline ModelBuilder flux_scaled_builder(const SystemModel& base, const CouplerTuning& tuning) {
    return [base, tuning](double fc) {
        SystemModel m = base;
        const double ej = tuning.ej_at_frequency(fc);
        const double u = std::pow(tuning.squid.ej_sum() / ej, 0.25);
        m.omegac = fc;
        m.etac = anharmonicity(tuning.e_c, ej);
        m.g1c = base.g1c / u;
        m.g2c = base.g2c / u;
        return m;
    };
}

/// x = coupler flux in units of the flux quantum.
inline ModelBuilder coupler_flux_builder(const SystemModel& base, const CouplerTuning& tuning) {
    return [base, tuning](double phi_over_phi0) {
        const auto flux = FluxBias::from_quanta(phi_over_phi0);
        SystemModel m = base;
        const double u = tuning.upsilon_at(flux);
        m.omegac = tuning.frequency(flux);
        m.etac = tuning.anharmonicity_at(flux);
        m.g1c = base.g1c / u;
        m.g2c = base.g2c / u;
        return m;
    };
}

struct ZeroCoupling {
    double root = 0.0;           // lowest root in the band
    std::vector<double> roots;   // all roots, ascending
    int sign_changes = 0;        // prescan sign changes, poles included

    bool multiple_roots() const { return roots.size() > 1; }
};

namespace detail {

inline double value_or_nan(const std::function<double(double)>& f, double x) {
    try {
        return f(x);
    } catch (const Error&) {
        return std::numeric_limits<double>::quiet_NaN();
    }
}

}  // namespace detail

/// Coupler frequency (or flux, per the builder) at which the net coupling vanishes.
inline ZeroCoupling find_zero_g(const ModelBuilder& build, double lo, double hi,
                                const RootSearchOptions& opt = {}) {
    auto g = [&](double x) { return g_net(build(x)).g; };
    RootList r = find_roots(g, lo, hi, opt);
    if (r.roots.empty()) {
        const double glo = detail::value_or_nan(g, lo);
        const double ghi = detail::value_or_nan(g, hi);
        std::ostringstream os;
        os << "net coupling has no zero in [" << lo << ", " << hi << "]: g = " << glo * 1e3
           << " MHz at the low end, " << ghi * 1e3 << " MHz at the high end";
        throw NoSignChangeError(os.str(), glo, ghi);
    }
    return ZeroCoupling{r.roots.front(), r.roots, r.sign_changes};
}

using ZZFunction = std::function<double(const SystemModel&)>;

inline double zz_total_perturbative(const SystemModel& m) { return zz_perturbative(m).zeta_total; }

/// Every zero of the static ZZ in the band, ascending. Empty when there is none.
inline std::vector<double> find_zero_zz(const ModelBuilder& build, double lo, double hi,
                                        const ZZFunction& zz = zz_total_perturbative,
                                        const RootSearchOptions& opt = {}) {
    auto f = [&](double x) { return zz(build(x)); };
    return find_roots(f, lo, hi, opt).roots;
}

}  // namespace fcoupler

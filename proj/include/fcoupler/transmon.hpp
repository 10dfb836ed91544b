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

// Transmon spectra to first order in xi = sqrt(2 E_C / E_J), and the
// conversion of capacitive coupling energies into exchange rates.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <sstream>
#include <utility>

#include <boost/math/tools/roots.hpp>

#include "fcoupler/capnet.hpp"
#include "fcoupler/errors.hpp"
#include "fcoupler/squid.hpp"
#include "fcoupler/units.hpp"

namespace fcoupler {

enum class Role { Qubit1, Qubit2, Coupler };

/// Below this E_J/E_C the transmon expansions are no longer trustworthy.
inline constexpr double kTransmonRegimeRatio = 20.0;

struct TransmonParams {
    double e_c = 0.0;
    SquidParams squid;
    Role role = Role::Qubit1;
};

/// Three Duffing modes and their pairwise exchange rates, all in GHz.
/// Anharmonicities are positive magnitudes.
struct SystemModel {
    double omega1 = 0.0;
    double omega2 = 0.0;
    double omegac = 0.0;
    double eta1 = 0.0;
    double eta2 = 0.0;
    double etac = 0.0;
    double g1c = 0.0;
    double g2c = 0.0;
    double g12 = 0.0;

    /// Same system with qubit labels exchanged.
    SystemModel swapped() const {
        SystemModel m = *this;
        std::swap(m.omega1, m.omega2);
        std::swap(m.eta1, m.eta2);
        std::swap(m.g1c, m.g2c);
        return m;
    }

    void validate() const {
        const bool ok = omega1 > 0 && omega2 > 0 && omegac > 0 && eta1 > 0 && eta2 > 0 &&
                        etac > 0 && std::isfinite(g1c) && std::isfinite(g2c) &&
                        std::isfinite(g12);
        if (!ok) {
            throw DomainError("system model needs positive frequencies and anharmonicities");
        }
    }
};

namespace detail {

inline void require_positive_ej(double e_c, double e_j) {
    if (!(e_j > 0.0) || !(e_c > 0.0)) {
        std::ostringstream os;
        os << "transmon formulas need E_C > 0 and E_J > 0 (got E_C=" << e_c << ", E_J=" << e_j
           << ")";
        throw DomainError(os.str());
    }
}

}  // namespace detail

inline double xi_parameter(double e_c, double e_j) {
    detail::require_positive_ej(e_c, e_j);
    return std::sqrt(2.0 * e_c / e_j);
}

/// omega = sqrt(8 E_J E_C) - E_C (1 + xi / 4).
inline double transmon_frequency(double e_c, double e_j) {
    const double xi = xi_parameter(e_c, e_j);
    return std::sqrt(8.0 * e_j * e_c) - e_c * (1.0 + 0.25 * xi);
}

inline double transmon_frequency(const TransmonParams& p, FluxBias flux = {}) {
    return transmon_frequency(p.e_c, ej_of_flux(p.squid, flux));
}

/// eta = E_C (1 + 9 xi / 16), returned as a positive magnitude.
inline double anharmonicity(double e_c, double e_j) {
    return e_c * (1.0 + 9.0 * xi_parameter(e_c, e_j) / 16.0);
}

inline double anharmonicity(const TransmonParams& p, FluxBias flux = {}) {
    return anharmonicity(p.e_c, ej_of_flux(p.squid, flux));
}

struct ZeroPointFluctuations {
    double n = 0.0;
    double phi = 0.0;
};

inline ZeroPointFluctuations zpf(double e_c, double e_j) {
    detail::require_positive_ej(e_c, e_j);
    const double r = e_j / (8.0 * e_c);
    return {std::pow(r, 0.25) / std::sqrt(2.0), std::pow(r, -0.25) / std::sqrt(2.0)};
}

inline ZeroPointFluctuations zpf(const TransmonParams& p, FluxBias flux = {}) {
    return zpf(p.e_c, ej_of_flux(p.squid, flux));
}

inline bool in_transmon_regime(double e_c, double e_j) {
    return e_j / e_c >= kTransmonRegimeRatio;
}

/// Josephson energy that places a transmon of charging energy e_c at frequency f.
inline double ej_for_frequency(double e_c, double f) {
    if (!(e_c > 0.0) || !(f > 0.0)) {
        throw DomainError("ej_for_frequency needs E_C > 0 and f > 0");
    }
    auto residual = [&](double ej) { return transmon_frequency(e_c, ej) - f; };
    // The frequency is strictly increasing in E_J and negative for E_J << E_C.
    double lo = 1e-3 * e_c;
    double hi = std::max(f * f / (8.0 * e_c), e_c);
    while (residual(hi) < 0.0) hi *= 2.0;
    std::uintmax_t iters = 200;
    auto [a, b] = boost::math::tools::toms748_solve(
        residual, lo, hi, boost::math::tools::eps_tolerance<double>(50), iters);
    return 0.5 * (a + b);
}

/// One coupling rate from its coupling energy and the two participating modes:
/// g = (E_jk / sqrt 2) (E_Jj/E_Cj * E_Jk/E_Ck)^(1/4), times [1 - (xi_j + xi_k)/8]
/// when the first-order transmon correction is requested.
inline double coupling_rate(double e_jk, double e_cj, double e_jj, double e_ck, double e_jkk,
                            bool use_xi_correction) {
    detail::require_positive_ej(e_cj, e_jj);
    detail::require_positive_ej(e_ck, e_jkk);
    double g = e_jk / std::sqrt(2.0) * std::pow((e_jj / e_cj) * (e_jkk / e_ck), 0.25);
    if (use_xi_correction) {
        g *= 1.0 - 0.125 * (xi_parameter(e_cj, e_jj) + xi_parameter(e_ck, e_jkk));
    }
    return g;
}

struct CouplingRates {
    double g1c = 0.0;
    double g2c = 0.0;
    double g12 = 0.0;
};

inline CouplingRates coupling_rates(const ModeEnergies& e, const TransmonParams& q1,
                                    const TransmonParams& q2, const TransmonParams& c,
                                    FluxBias coupler_flux, bool use_xi_correction,
                                    FluxBias q1_flux = {}, FluxBias q2_flux = {}) {
    const double ej1 = ej_of_flux(q1.squid, q1_flux);
    const double ej2 = ej_of_flux(q2.squid, q2_flux);
    const double ejc = ej_of_flux(c.squid, coupler_flux);
    return CouplingRates{
        .g1c = coupling_rate(e.e1c, q1.e_c, ej1, c.e_c, ejc, use_xi_correction),
        .g2c = coupling_rate(e.e2c, q2.e_c, ej2, c.e_c, ejc, use_xi_correction),
        .g12 = coupling_rate(e.e12, q1.e_c, ej1, q2.e_c, ej2, use_xi_correction),
    };
}

/// A flux-tunable coupler: charging energy plus SQUID. Maps flux to
/// frequency, anharmonicity and the coupling flux factor, and back.
struct CouplerTuning {
    double e_c = 0.0;
    SquidParams squid;

    /// Coupler with a symmetric SQUID whose zero-flux frequency is f_max.
    static CouplerTuning from_max_frequency(double e_c, double f_max, double asymmetry = 0.0) {
        return CouplerTuning{e_c,
                             SquidParams::from_sum_asymmetry(ej_for_frequency(e_c, f_max),
                                                             asymmetry)};
    }

    double frequency(FluxBias flux) const { return transmon_frequency(e_c, ej_of_flux(squid, flux)); }
    double anharmonicity_at(FluxBias flux) const {
        return fcoupler::anharmonicity(e_c, ej_of_flux(squid, flux));
    }
    double upsilon_at(FluxBias flux) const { return upsilon(squid, flux); }
    double max_frequency() const { return transmon_frequency(e_c, squid.ej_sum()); }

    /// Josephson energy at the coupler's frequency f; f must lie in the tunable range.
    double ej_at_frequency(double f) const {
        const double ej = ej_for_frequency(e_c, f);
        const double hi = squid.ej_sum();
        const double lo = squid.e_jl - squid.e_js;
        if (ej > hi * (1.0 + 1e-12) || ej < lo * (1.0 - 1e-12)) {
            std::ostringstream os;
            os << "coupler frequency " << f << " GHz is outside the SQUID tuning range";
            throw DomainError(os.str());
        }
        return std::clamp(ej, lo, hi);
    }

    /// Flux in [0, pi] (as reduced phase) that tunes the coupler to f.
    FluxBias flux_for_frequency(double f) const {
        const double ej = ej_at_frequency(f);
        const double a = squid.e_jl, b = squid.e_js;
        const double c = (ej * ej - a * a - b * b) / (2.0 * a * b);
        return FluxBias::from_phase(std::acos(std::clamp(c, -1.0, 1.0)));
    }

    double upsilon_at_frequency(double f) const {
        const double ej = ej_at_frequency(f);
        return std::pow(squid.ej_sum() / ej, 0.25);
    }

    double anharmonicity_at_frequency(double f) const {
        return fcoupler::anharmonicity(e_c, ej_at_frequency(f));
    }
};

/// A three-mode model built from mode energies and target zero-flux
/// frequencies, as done for design values.
struct DesignPoint {
    SystemModel model;
    TransmonParams q1;
    TransmonParams q2;
    TransmonParams coupler;
};

inline DesignPoint design_point(const ModeEnergies& e, double f1, double f2, double fc,
                                bool use_xi_correction = true) {
    DesignPoint d;
    d.q1 = {e.ec1, SquidParams::symmetric(ej_for_frequency(e.ec1, f1)), Role::Qubit1};
    d.q2 = {e.ec2, SquidParams::symmetric(ej_for_frequency(e.ec2, f2)), Role::Qubit2};
    d.coupler = {e.ecc, SquidParams::symmetric(ej_for_frequency(e.ecc, fc)), Role::Coupler};
    const auto rates = coupling_rates(e, d.q1, d.q2, d.coupler, {}, use_xi_correction);
    d.model = SystemModel{
        .omega1 = transmon_frequency(d.q1),
        .omega2 = transmon_frequency(d.q2),
        .omegac = transmon_frequency(d.coupler),
        .eta1 = anharmonicity(d.q1),
        .eta2 = anharmonicity(d.q2),
        .etac = anharmonicity(d.coupler),
        .g1c = rates.g1c,
        .g2c = rates.g2c,
        .g12 = rates.g12,
    };
    return d;
}

}  // namespace fcoupler

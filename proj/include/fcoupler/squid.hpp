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

// Asymmetric two-junction SQUID: flux-dependent Josephson energy and the
// phase offset it induces on the junction term.

#include <algorithm>
#include <cmath>
#include <sstream>

#include "fcoupler/errors.hpp"
#include "fcoupler/units.hpp"

namespace fcoupler {

/// Junction energies E_JL >= E_JS > 0, GHz.
struct SquidParams {
    double e_jl = 0.0;
    double e_js = 0.0;

    SquidParams() = default;
    SquidParams(double large, double small) : e_jl(large), e_js(small) { validate(); }

    /// From E_J,sum = E_JL + E_JS and d = (E_JL - E_JS) / (E_JL + E_JS), d in [0, 1).
    static SquidParams from_sum_asymmetry(double ej_sum, double d) {
        if (!(ej_sum > 0.0) || !(d >= 0.0 && d < 1.0)) {
            std::ostringstream os;
            os << "SQUID needs E_J,sum > 0 and 0 <= d < 1 (got " << ej_sum << ", " << d << ")";
            throw DomainError(os.str());
        }
        return SquidParams(0.5 * ej_sum * (1.0 + d), 0.5 * ej_sum * (1.0 - d));
    }

    static SquidParams symmetric(double ej_sum) { return from_sum_asymmetry(ej_sum, 0.0); }

    double ej_sum() const { return e_jl + e_js; }
    double asymmetry() const { return (e_jl - e_js) / (e_jl + e_js); }

    void validate() const {
        if (!(e_js > 0.0) || !(e_jl >= e_js) || !std::isfinite(e_jl)) {
            std::ostringstream os;
            os << "SQUID needs E_JL >= E_JS > 0 (got E_JL=" << e_jl << ", E_JS=" << e_js << ")";
            throw DomainError(os.str());
        }
    }
};

inline double ej_of_flux(const SquidParams& p, double phi_e) {
    // Half-angle form of E_JS^2 + E_JL^2 + 2 E_JS E_JL cos(phi_e); exact at
    // phi_e = 0 and free of cancellation near a symmetric loop's zero.
    const double c = std::cos(0.5 * phi_e), s = std::sin(0.5 * phi_e);
    const double sum = p.e_jl + p.e_js, diff = p.e_jl - p.e_js;
    return std::hypot(sum * c, diff * s);
}

inline double ej_of_flux(const SquidParams& p, FluxBias flux) { return ej_of_flux(p, flux.phase()); }

/// Phase offset phi_0 = atan(-d tan(phi_e / 2)). Evaluated as an atan2 of the
/// half-angle sine and cosine, which follows the tangent through its poles so
/// the result is continuous in phi_e and vanishes at phi_e = 0.
inline double phi0_of_flux(const SquidParams& p, double phi_e) {
    const double d = p.asymmetry();
    const double half = 0.5 * phi_e;
    if (d == 0.0) return 0.0;
    return std::atan2(-d * std::sin(half), std::cos(half));
}

inline double phi0_of_flux(const SquidParams& p, FluxBias flux) {
    return phi0_of_flux(p, flux.phase());
}

/// Flux factor (E_J(0) / E_J(phi_e))^(1/4) by which qubit-coupler rates shrink.
inline double upsilon(const SquidParams& p, double phi_e) {
    const double ej = ej_of_flux(p, phi_e);
    // Below this the value is rounding noise of an exact zero.
    if (!(ej > 1e-12 * p.ej_sum())) {
        throw DomainError("upsilon undefined: SQUID Josephson energy vanishes at this flux");
    }
    return std::pow(p.ej_sum() / ej, 0.25);
}

inline double upsilon(const SquidParams& p, FluxBias flux) { return upsilon(p, flux.phase()); }

}  // namespace fcoupler

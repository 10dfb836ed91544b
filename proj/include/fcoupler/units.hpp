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

#include <numbers>

namespace fcoupler {

// Unit conventions used throughout the library:
//   capacitance  fF
//   energy       E/h in GHz
//   frequency    nu = omega / 2pi in GHz
//   coupling     g / 2pi in GHz (fitkit works in MHz at its boundary)

/// e^2 / (h * 1 fF) expressed in GHz, from the exact SI values of e and h.
inline constexpr double kChargeEnergyGHzfF = 38.74045865;

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

inline constexpr double kMHzPerGHz = 1.0e3;

/// External flux bias through a SQUID loop. Stores the reduced phase
/// phi_e = 2 pi Phi_e / Phi_0; construct through the named factories so the
/// unit is always explicit at the call site.
class FluxBias {
public:
    constexpr FluxBias() = default;

    static constexpr FluxBias from_phase(double radians) { return FluxBias(radians); }
    static constexpr FluxBias from_quanta(double phi_over_phi0) {
        return FluxBias(kTwoPi * phi_over_phi0);
    }

    constexpr double phase() const { return phase_; }
    constexpr double quanta() const { return phase_ / kTwoPi; }

private:
    constexpr explicit FluxBias(double phase) : phase_(phase) {}
    double phase_ = 0.0;
};

}  // namespace fcoupler

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

// Lumped-element capacitance networks for qubit-coupler-qubit circuits.
//
// Two topologies are supported. Node 0 is ground in both.
//
//   FloatingFloating   1,2 = qubit-1 pads, 3,4 = coupler pads, 5,6 = qubit-2 pads
//   GroundedFloating   1 = qubit-1 node, 2,3 = coupler pads, 4 = qubit-2 node
//
// Charging energies follow H = 4 E_C n^2 and coupling energies follow
// 4 E_jk n_j n_k, with n the Cooper-pair number of each retained mode.

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "fcoupler/errors.hpp"
#include "fcoupler/units.hpp"

namespace fcoupler {

enum class Topology { FloatingFloating, GroundedFloating };

inline const char* to_string(Topology t) {
    return t == Topology::FloatingFloating ? "floating-floating" : "grounded-floating";
}

struct Capacitor {
    int a = 0;
    int b = 0;
    double fF = 0.0;
};

/// Charging and coupling energies of the three retained modes, E/h in GHz.
struct ModeEnergies {
    double ec1 = 0.0;
    double ec2 = 0.0;
    double ecc = 0.0;
    double e12 = 0.0;
    double e1c = 0.0;
    double e2c = 0.0;
};

enum class ConfigurationClass { Symmetric, Asymmetric, Degenerate };

inline const char* to_string(ConfigurationClass c) {
    switch (c) {
        case ConfigurationClass::Symmetric: return "Symmetric";
        case ConfigurationClass::Asymmetric: return "Asymmetric";
        case ConfigurationClass::Degenerate: return "Degenerate";
    }
    return "?";
}

class CapNetwork {
public:
    CapNetwork(Topology topology, std::vector<Capacitor> capacitors)
        : topology_(topology), caps_(std::move(capacitors)) {
        const int max_node = topology_ == Topology::FloatingFloating ? 6 : 4;
        std::map<std::pair<int, int>, double> seen;
        for (auto& c : caps_) {
            if (c.a < 0 || c.b < 0 || c.a > max_node || c.b > max_node) {
                std::ostringstream os;
                os << "capacitor (" << c.a << "," << c.b << ") references a node outside 0.."
                   << max_node << " for " << to_string(topology_);
                throw InvalidNetworkError(os.str());
            }
            if (c.a == c.b) {
                throw InvalidNetworkError("capacitor connects node " + std::to_string(c.a) +
                                          " to itself");
            }
            if (!(c.fF > 0.0) || !std::isfinite(c.fF)) {
                std::ostringstream os;
                os << "capacitor (" << c.a << "," << c.b << ") has non-positive value " << c.fF;
                throw InvalidNetworkError(os.str());
            }
            if (c.a > c.b) std::swap(c.a, c.b);
            if (!seen.emplace(std::make_pair(c.a, c.b), c.fF).second) {
                throw InvalidNetworkError("duplicate capacitor (" + std::to_string(c.a) + "," +
                                          std::to_string(c.b) + ")");
            }
        }
        std::sort(caps_.begin(), caps_.end(), [](const Capacitor& x, const Capacitor& y) {
            return std::pair(x.a, x.b) < std::pair(y.a, y.b);
        });
    }

    Topology topology() const { return topology_; }
    std::span<const Capacitor> capacitors() const { return caps_; }

    /// Number of non-ground nodes.
    int node_count() const { return topology_ == Topology::FloatingFloating ? 6 : 4; }

    /// Capacitance between two nodes in fF; 0 when no capacitor is listed.
    double value(int a, int b) const {
        if (a > b) std::swap(a, b);
        for (const auto& c : caps_) {
            if (c.a == a && c.b == b) return c.fF;
        }
        return 0.0;
    }

    bool is_qubit1_node(int n) const {
        return topology_ == Topology::FloatingFloating ? (n == 1 || n == 2) : n == 1;
    }
    bool is_qubit2_node(int n) const {
        return topology_ == Topology::FloatingFloating ? (n == 5 || n == 6) : n == 4;
    }

    /// Capacitors joining a qubit-1 node directly to a qubit-2 node.
    std::vector<Capacitor> direct_qubit_capacitors() const {
        std::vector<Capacitor> out;
        for (const auto& c : caps_) {
            if ((is_qubit1_node(c.a) && is_qubit2_node(c.b)) ||
                (is_qubit2_node(c.a) && is_qubit1_node(c.b))) {
                out.push_back(c);
            }
        }
        return out;
    }

    /// Human-readable notes on features the closed forms do not model.
    std::vector<std::string> flags() const {
        std::vector<std::string> out;
        for (const auto& c : direct_qubit_capacitors()) {
            std::ostringstream os;
            os << "direct qubit-qubit capacitor C" << c.a << c.b << " = " << c.fF
               << " fF (ignored by closed forms)";
            out.push_back(os.str());
        }
        return out;
    }

    CapNetwork scaled(double factor) const {
        auto caps = caps_;
        for (auto& c : caps) c.fF *= factor;
        return CapNetwork(topology_, std::move(caps));
    }

    /// Relabels qubit 1 <-> qubit 2, keeping each qubit's pad orientation
    /// (1<->5, 2<->6 floating; 1<->4 grounded). Coupler pads are untouched.
    CapNetwork with_qubits_swapped() const {
        auto map = [this](int n) {
            if (topology_ == Topology::FloatingFloating) {
                switch (n) {
                    case 1: return 5;
                    case 2: return 6;
                    case 5: return 1;
                    case 6: return 2;
                    default: return n;
                }
            }
            if (n == 1) return 4;
            if (n == 4) return 1;
            return n;
        };
        auto caps = caps_;
        for (auto& c : caps) {
            c.a = map(c.a);
            c.b = map(c.b);
        }
        return CapNetwork(topology_, std::move(caps));
    }

private:
    Topology topology_;
    std::vector<Capacitor> caps_;
};

namespace detail {

inline void require_positive_definite(const Eigen::MatrixXd& m, const char* what) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) {
        throw SingularNetworkError(std::string(what) + ": eigen-decomposition failed");
    }
    const auto& ev = es.eigenvalues();
    const double hi = ev.cwiseAbs().maxCoeff();
    if (!(hi > 0.0) || ev.minCoeff() <= 1e-12 * hi) {
        std::ostringstream os;
        os << what << " is not positive definite (eigenvalues " << ev.minCoeff() << " .. "
           << ev.maxCoeff() << " fF)";
        throw SingularNetworkError(os.str());
    }
}

/// Maxwell capacitance matrix over the non-ground nodes (index = node - 1).
inline Eigen::MatrixXd node_matrix(const CapNetwork& net) {
    const int n = net.node_count();
    Eigen::MatrixXd c = Eigen::MatrixXd::Zero(n, n);
    for (const auto& cap : net.capacitors()) {
        if (cap.a == 0) {
            c(cap.b - 1, cap.b - 1) += cap.fF;
            continue;
        }
        const int i = cap.a - 1;
        const int j = cap.b - 1;
        c(i, i) += cap.fF;
        c(j, j) += cap.fF;
        c(i, j) -= cap.fF;
        c(j, i) -= cap.fF;
    }
    return c;
}

/// Node fluxes as a linear map of mode coordinates, Phi_node = T Phi_mode.
/// Floating mode order: (1p, 1m, cp, cm, 2p, 2m). Grounded: (1, cp, cm, 2).
/// Each pad pair (lo, hi) uses Phi_p/m = Phi_hi +- Phi_lo.
inline Eigen::MatrixXd mode_transform(Topology t) {
    auto pair = [](Eigen::MatrixXd& m, int lo, int hi, int p, int mm) {
        m(lo, p) = 0.5;
        m(lo, mm) = -0.5;
        m(hi, p) = 0.5;
        m(hi, mm) = 0.5;
    };
    if (t == Topology::FloatingFloating) {
        Eigen::MatrixXd m = Eigen::MatrixXd::Zero(6, 6);
        pair(m, 0, 1, 0, 1);
        pair(m, 2, 3, 2, 3);
        pair(m, 4, 5, 4, 5);
        return m;
    }
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(4, 4);
    m(0, 0) = 1.0;
    m(3, 3) = 1.0;
    pair(m, 1, 2, 1, 2);
    return m;
}

/// Mode indices retained as (qubit 1, qubit 2, coupler).
inline std::array<int, 3> retained_modes(Topology t) {
    return t == Topology::FloatingFloating ? std::array<int, 3>{1, 5, 3}
                                           : std::array<int, 3>{0, 3, 2};
}

inline std::vector<int> free_modes(Topology t) {
    return t == Topology::FloatingFloating ? std::vector<int>{0, 2, 4} : std::vector<int>{1};
}

inline bool same_value(double x, double y) {
    return std::abs(x - y) <= 1e-9 * std::max(std::abs(x), std::abs(y));
}

}  // namespace detail

/// Capacitance matrix in the plus/minus mode coordinates, fF.
/// 6x6 for FloatingFloating, 4x4 for GroundedFloating.
inline Eigen::MatrixXd build_cap_matrix(const CapNetwork& net) {
    const Eigen::MatrixXd t = detail::mode_transform(net.topology());
    Eigen::MatrixXd c = t.transpose() * detail::node_matrix(net) * t;
    // The transform is exact in binary, but the triple product can still leave
    // last-bit asymmetry.
    c = 0.5 * (c + c.transpose()).eval();
    detail::require_positive_definite(c, "capacitance matrix");
    return c;
}

/// Eliminates the free (plus) modes by Schur complement. The result is the
/// 3x3 capacitance matrix over (qubit 1, qubit 2, coupler); its inverse is the
/// retained block of the full inverse.
inline Eigen::Matrix3d reduce_free_modes(const Eigen::MatrixXd& c, Topology topology) {
    const auto keep = detail::retained_modes(topology);
    const auto drop = detail::free_modes(topology);
    const int nf = static_cast<int>(drop.size());
    const int expected = topology == Topology::FloatingFloating ? 6 : 4;
    if (c.rows() != expected || c.cols() != expected) {
        throw SingularNetworkError("capacitance matrix has wrong shape for " +
                                   std::string(to_string(topology)));
    }

    Eigen::Matrix3d crr;
    Eigen::MatrixXd crf(3, nf);
    Eigen::MatrixXd cff(nf, nf);
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) crr(i, j) = c(keep[i], keep[j]);
        for (int j = 0; j < nf; ++j) crf(i, j) = c(keep[i], drop[j]);
    }
    for (int i = 0; i < nf; ++i) {
        for (int j = 0; j < nf; ++j) cff(i, j) = c(drop[i], drop[j]);
    }
    detail::require_positive_definite(cff, "free-mode block");

    Eigen::Matrix3d reduced = crr - crf * cff.llt().solve(crf.transpose());
    reduced = 0.5 * (reduced + reduced.transpose()).eval();
    detail::require_positive_definite(reduced, "reduced capacitance matrix");
    return reduced;
}

/// Energies read from the inverse of a reduced (qubit 1, qubit 2, coupler)
/// capacitance matrix: E_Ck = e^2 Cinv_kk / 2 and E_jk = e^2 Cinv_jk.
inline ModeEnergies energies_from_reduced(const Eigen::Matrix3d& reduced) {
    const Eigen::Matrix3d inv = reduced.inverse();
    const double k = kChargeEnergyGHzfF;
    return ModeEnergies{
        .ec1 = 0.5 * k * inv(0, 0),
        .ec2 = 0.5 * k * inv(1, 1),
        .ecc = 0.5 * k * inv(2, 2),
        .e12 = k * inv(0, 1),
        .e1c = k * inv(0, 2),
        .e2c = k * inv(1, 2),
    };
}

/// Exact charging/coupling energies by matrix inversion. Accepts any valid
/// network, including direct qubit-qubit capacitors.
inline ModeEnergies energies_exact(const CapNetwork& net) {
    return energies_from_reduced(reduce_free_modes(build_cap_matrix(net), net.topology()));
}

/// Leading-order closed forms for floating qubits and a floating coupler.
///
/// Requires common qubit-pad ground capacitance C_g (C01=C02=C05=C06),
/// common coupler-pad ground capacitance C_gc (C03=C04), equal qubit shunts
/// C_q (C12=C56), a coupler shunt C_c (C34), and qubit-coupler couplings only
/// between the inner qubit pads (2, 5) and the coupler (C23, C24, C35, C45).
inline ModeEnergies energies_closed_form_floating(const CapNetwork& net) {
    if (net.topology() != Topology::FloatingFloating) {
        throw AssumptionViolationError("floating closed form needs a floating-floating network");
    }
    std::vector<std::string> problems;
    auto v = [&](int a, int b) { return net.value(a, b); };

    const double cg = v(0, 1);
    if (!(cg > 0) || !detail::same_value(cg, v(0, 2)) || !detail::same_value(cg, v(0, 5)) ||
        !detail::same_value(cg, v(0, 6))) {
        problems.push_back("qubit-pad ground capacitances C01, C02, C05, C06 must be equal and nonzero");
    }
    const double cgc = v(0, 3);
    if (!(cgc > 0) || !detail::same_value(cgc, v(0, 4))) {
        problems.push_back("coupler-pad ground capacitances C03, C04 must be equal and nonzero");
    }
    const double cq = v(1, 2);
    if (!(cq > 0) || !detail::same_value(cq, v(5, 6))) {
        problems.push_back("qubit shunt capacitances C12, C56 must be equal and nonzero");
    }
    const double cc = v(3, 4);
    if (!(cc > 0)) problems.push_back("coupler shunt capacitance C34 must be nonzero");
    for (auto [a, b] : {std::pair{1, 3}, {1, 4}, {3, 6}, {4, 6}}) {
        if (v(a, b) > 0) {
            problems.push_back("outer-pad coupling C" + std::to_string(a) + std::to_string(b) +
                               " must be absent");
        }
    }
    if (!net.direct_qubit_capacitors().empty()) {
        problems.push_back("direct qubit-qubit capacitors must be absent");
    }
    if (!problems.empty()) {
        std::string msg = "closed-form assumptions violated:";
        for (const auto& p : problems) msg += "\n  - " + p;
        throw AssumptionViolationError(msg);
    }

    const double c23 = v(2, 3), c24 = v(2, 4), c35 = v(3, 5), c45 = v(4, 5);
    const double e2 = kChargeEnergyGHzfF;
    const double qsum = 2.0 * cq + cg;
    const double csum = 2.0 * cc + cgc;
    const double ctilde = cgc * qsum * qsum * csum;
    return ModeEnergies{
        .ec1 = e2 / qsum,
        .ec2 = e2 / qsum,
        .ecc = e2 / csum,
        .e12 = -e2 / ctilde * ((c23 + c24) * (c45 + c35) * cc + (c23 * c35 + c45 * c24) * cgc),
        .e1c = -e2 * (c23 - c24) / (qsum * csum),
        .e2c = -e2 * (c45 - c35) / (qsum * csum),
    };
}

/// Leading-order closed forms for grounded qubits and a floating coupler.
/// Requires C02 = C03 = C_gc and no direct qubit-qubit capacitor (C14).
inline ModeEnergies energies_closed_form_grounded(const CapNetwork& net) {
    if (net.topology() != Topology::GroundedFloating) {
        throw AssumptionViolationError("grounded closed form needs a grounded-floating network");
    }
    std::vector<std::string> problems;
    auto v = [&](int a, int b) { return net.value(a, b); };
    const double c1 = v(0, 1), c2 = v(0, 4), cgc = v(0, 2), cc = v(2, 3);
    if (!(cgc > 0) || !detail::same_value(cgc, v(0, 3))) {
        problems.push_back("coupler-pad ground capacitances C02, C03 must be equal and nonzero");
    }
    if (!(c1 > 0)) problems.push_back("qubit-1 ground capacitance C01 must be nonzero");
    if (!(c2 > 0)) problems.push_back("qubit-2 ground capacitance C04 must be nonzero");
    if (!(cc > 0)) problems.push_back("coupler shunt capacitance C23 must be nonzero");
    if (v(1, 4) > 0) problems.push_back("direct qubit-qubit capacitor C14 must be absent");
    if (!problems.empty()) {
        std::string msg = "closed-form assumptions violated:";
        for (const auto& p : problems) msg += "\n  - " + p;
        throw AssumptionViolationError(msg);
    }

    const double c12 = v(1, 2), c13 = v(1, 3), c24 = v(2, 4), c34 = v(3, 4);
    const double s1 = c1 + c12 + c13;
    const double s2 = c2 + c34 + c24;
    const double a1 = c1 + c12;
    const double a2 = c2 + c34;
    const double ctot = c1 * c2 * c12 * c34 + cgc * a1 * a2 * (2.0 * cc + cgc) +
                        (cc + cgc) * (c1 * c12 * a2 + c2 * c34 * a1);
    const double e2 = kChargeEnergyGHzfF;
    const double cross = c12 * c34 - c13 * c24;
    return ModeEnergies{
        .ec1 = e2 / (2.0 * ctot) *
               (c2 * c12 * c34 + cc * cgc * a2 + ((c12 + cgc) * a2 + c2 * c34) * (cc + cgc)),
        .ec2 = e2 / (2.0 * ctot) *
               (c1 * c12 * c34 + cc * cgc * a1 + ((c34 + cgc) * a1 + c1 * c12) * (cc + cgc)),
        .ecc = e2 / (2.0 * ctot) * (c1 * c12 * a2 + c2 * c34 * a1 + 2.0 * a1 * a2 * cgc),
        .e12 = e2 / ctot *
               (c12 * c34 * (c13 + c24 + cc) + c13 * c24 * (c12 + c34 + cc) +
                (cc + cgc) * (c12 * c24 + c13 * c34)),
        .e1c = -e2 / ctot * (c2 * cross + cgc * s2 * (c12 - c13)),
        .e2c = e2 / ctot * (c1 * cross + cgc * s1 * (c34 - c24)),
    };
}

/// Zero-coupling regime implied by the coupling-energy signs. g12 and
/// g1c*g2c share sign -> Asymmetric (zero coupling with the coupler above the
/// qubits); opposite sign -> Symmetric (coupler below).
inline ConfigurationClass classify_configuration(const ModeEnergies& e,
                                                 double degenerate_tolerance = 1e-6) {
    const double product = e.e1c * e.e2c;
    if (std::abs(product) < degenerate_tolerance || e.e12 == 0.0) {
        return ConfigurationClass::Degenerate;
    }
    return (e.e12 > 0) == (product > 0) ? ConfigurationClass::Asymmetric
                                        : ConfigurationClass::Symmetric;
}

}  // namespace fcoupler

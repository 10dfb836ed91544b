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

// Truncated three-mode Hamiltonian (Duffing ladders, exchange couplings with
// counter-rotating terms) and quantities read off its spectrum.

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <boost/math/tools/minima.hpp>

#include "fcoupler/effmodel.hpp"
#include "fcoupler/errors.hpp"
#include "fcoupler/transmon.hpp"

namespace fcoupler {

inline constexpr int kMinLevels = 2;
inline constexpr int kMaxLevels = 12;

/// Fock levels kept per mode.
struct Levels {
    int n1 = 5;
    int nc = 5;
    int n2 = 5;

    int dimension() const { return n1 * nc * n2; }

    void validate() const {
        for (int n : {n1, nc, n2}) {
            if (n < kMinLevels || n > kMaxLevels) {
                std::ostringstream os;
                os << "levels per mode must lie in [" << kMinLevels << ", " << kMaxLevels
                   << "], got (" << n1 << "," << nc << "," << n2 << ")";
                throw DimensionError(os.str());
            }
        }
    }
};

struct FockState {
    int k1 = 0;
    int kc = 0;
    int k2 = 0;

    friend bool operator==(const FockState&, const FockState&) = default;
};

struct TruncatedHamiltonian {
    Levels levels;
    Eigen::MatrixXd matrix;  // GHz

    int index(int k1, int kc, int k2) const { return (k1 * levels.nc + kc) * levels.n2 + k2; }
    int index(const FockState& s) const { return index(s.k1, s.kc, s.k2); }

    FockState state(int i) const {
        const int k2 = i % levels.n2;
        const int kc = (i / levels.n2) % levels.nc;
        return {i / (levels.n2 * levels.nc), kc, k2};
    }
};

/// Builds H in the product Fock basis. Each pair (j, k) with rate g contributes
/// g (a_j a_k^dag + a_j^dag a_k - a_j a_k - a_j^dag a_k^dag); the last two
/// terms are dropped when `counter_rotating` is false.
inline TruncatedHamiltonian build_hamiltonian(const SystemModel& m, const Levels& levels = {},
                                              bool counter_rotating = true) {
    levels.validate();
    TruncatedHamiltonian h{levels, Eigen::MatrixXd::Zero(levels.dimension(), levels.dimension())};
    const double w[3] = {m.omega1, m.omegac, m.omega2};
    const double eta[3] = {m.eta1, m.etac, m.eta2};
    const int n[3] = {levels.n1, levels.nc, levels.n2};
    struct Pair {
        int a;
        int b;
        double g;
    };
    const Pair pairs[3] = {{0, 1, m.g1c}, {2, 1, m.g2c}, {0, 2, m.g12}};

    for (int i = 0; i < levels.dimension(); ++i) {
        const FockState s = h.state(i);
        const int k[3] = {s.k1, s.kc, s.k2};
        double diag = 0.0;
        for (int mode = 0; mode < 3; ++mode) {
            diag += w[mode] * k[mode] - 0.5 * eta[mode] * k[mode] * (k[mode] - 1);
        }
        h.matrix(i, i) = diag;

        // Raising or lowering steps; the amplitude of a step between n and
        // n +- 1 is sqrt(max(n, n +- 1)).
        for (const auto& p : pairs) {
            if (p.g == 0.0) continue;
            for (int da : {-1, 1}) {
                for (int db : {-1, 1}) {
                    const bool exchange = da != db;
                    if (!exchange && !counter_rotating) continue;
                    int kk[3] = {k[0], k[1], k[2]};
                    kk[p.a] += da;
                    kk[p.b] += db;
                    if (kk[p.a] < 0 || kk[p.a] >= n[p.a] || kk[p.b] < 0 || kk[p.b] >= n[p.b]) {
                        continue;
                    }
                    const double amp = std::sqrt(static_cast<double>(std::max(k[p.a], kk[p.a]))) *
                                       std::sqrt(static_cast<double>(std::max(k[p.b], kk[p.b])));
                    const int j = h.index(kk[0], kk[1], kk[2]);
                    h.matrix(j, i) += (exchange ? 1.0 : -1.0) * p.g * amp;
                }
            }
        }
    }
    return h;
}

/// Ambiguity if the dominant overlap is at or below this.
inline constexpr double kLabelOverlapThreshold = 0.5;

struct DressedLabel {
    FockState state;
    int eigen_index = -1;
    double energy = 0.0;
    double overlap = 0.0;  // |<bare|dressed>|^2
    bool ambiguous = false;
};

struct DressedSpectrum {
    TruncatedHamiltonian hamiltonian;
    Eigen::VectorXd energies;  // ascending
    Eigen::MatrixXd vectors;   // columns are eigenvectors

    /// Dressed state that a bare Fock state is adiabatically connected to,
    /// chosen as the eigenvector with the largest weight on it.
    DressedLabel label(const FockState& s) const {
        const int i = hamiltonian.index(s);
        Eigen::Index best = 0;
        const double w = vectors.row(i).cwiseAbs2().maxCoeff(&best);
        return DressedLabel{s, static_cast<int>(best), energies(best), w,
                            w <= kLabelOverlapThreshold};
    }

    /// Labels of the `count` lowest eigenstates by their dominant bare state.
    std::vector<DressedLabel> lowest_labels(int count) const {
        std::vector<DressedLabel> out;
        count = std::min<int>(count, static_cast<int>(energies.size()));
        for (int j = 0; j < count; ++j) {
            Eigen::Index best = 0;
            const double w = vectors.col(j).cwiseAbs2().maxCoeff(&best);
            out.push_back({hamiltonian.state(static_cast<int>(best)), j, energies(j), w,
                           w <= kLabelOverlapThreshold});
        }
        return out;
    }
};

inline DressedSpectrum dressed_spectrum(const TruncatedHamiltonian& h) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h.matrix);
    if (es.info() != Eigen::Success) throw LabelingError("eigen-decomposition failed");
    return DressedSpectrum{h, es.eigenvalues(), es.eigenvectors()};
}

/// zeta = E(1,0,1) - E(1,0,0) - E(0,0,1) + E(0,0,0), coupler in its ground state.
inline double zz_numeric(const SystemModel& m, const Levels& levels = {},
                         bool counter_rotating = true) {
    levels.validate();
    // Uncoupled Duffing ladders add, so the combination vanishes identically.
    if (m.g1c == 0.0 && m.g2c == 0.0 && m.g12 == 0.0) return 0.0;
    const auto spec = dressed_spectrum(build_hamiltonian(m, levels, counter_rotating));
    const FockState want[4] = {{0, 0, 0}, {1, 0, 0}, {0, 0, 1}, {1, 0, 1}};
    DressedLabel got[4];
    for (int i = 0; i < 4; ++i) {
        got[i] = spec.label(want[i]);
        if (got[i].ambiguous) {
            std::ostringstream os;
            os << "ambiguous dressed label for |" << want[i].k1 << want[i].kc << want[i].k2
               << ">: best overlap " << got[i].overlap;
            throw LabelingError(os.str());
        }
        for (int j = 0; j < i; ++j) {
            if (got[j].eigen_index == got[i].eigen_index) {
                throw LabelingError("two bare states map onto the same dressed state");
            }
        }
    }
    return got[3].energy - got[1].energy - got[2].energy + got[0].energy;
}

namespace detail {

/// Splitting of the two single-excitation eigenstates carrying the most
/// weight on |100> and |001>.
inline double qubit_doublet_splitting(const SystemModel& m, const Levels& levels) {
    const auto spec = dressed_spectrum(build_hamiltonian(m, levels));
    const int a = spec.hamiltonian.index(1, 0, 0);
    const int b = spec.hamiltonian.index(0, 0, 1);
    const Eigen::VectorXd weight = spec.vectors.row(a).cwiseAbs2() + spec.vectors.row(b).cwiseAbs2();
    Eigen::Index first = 0;
    weight.maxCoeff(&first);
    Eigen::VectorXd rest = weight;
    rest(first) = -1.0;
    Eigen::Index second = 0;
    const double w2 = rest.maxCoeff(&second);
    if (w2 <= kLabelOverlapThreshold) {
        std::ostringstream os;
        os << "qubit doublet not resolved: second state has qubit weight " << w2
           << " (coupler too close)";
        throw LabelingError(os.str());
    }
    return std::abs(spec.energies(first) - spec.energies(second));
}

}  // namespace detail

/// Net qubit-qubit coupling magnitude from the avoided crossing of the dressed
/// single-excitation qubit states. The model must have omega1 == omega2; qubit 2
/// is then detuned to find the minimum splitting, compensating the unequal
/// coupler dressing of the two qubits.
inline double g_numeric(const SystemModel& m, const Levels& levels = {}) {
    if (std::abs(m.omega1 - m.omega2) > 1e-9) {
        throw DomainError("g_numeric needs the qubits at resonance (omega1 == omega2)");
    }
    const double ratio = std::max(std::abs(m.g1c / (m.omegac - m.omega1)),
                                  std::abs(m.g2c / (m.omegac - m.omega2)));
    if (!(ratio < kDispersiveLimit)) {
        std::ostringstream os;
        os << "coupler too close to the qubits to separate them: |g_jc / Delta_j| = " << ratio;
        throw LabelingError(os.str());
    }
    double center = 0.0;
    double g_scale = std::abs(m.g12);
    try {
        const auto d = dressed_frequencies(m);
        center = (d.omega01_1 - m.omega1) - (d.omega01_2 - m.omega2);
        g_scale = std::abs(g_net(m).g);
    } catch (const ResonanceError&) {
    }
    const double half_width = 2e-3 + 4.0 * g_scale + std::abs(center);
    auto split = [&](double delta) {
        SystemModel t = m;
        t.omega2 = m.omega1 + delta;
        return detail::qubit_doublet_splitting(t, levels);
    };
    const auto best =
        boost::math::tools::brent_find_minima(split, center - half_width, center + half_width, 40);
    // Brent locates the minimum only to about sqrt(eps). Near an avoided
    // crossing the squared splitting is a parabola in the detuning, so a
    // three-point fit recovers its floor to full precision.
    const double x0 = best.first;
    const double h = 0.05 * half_width;
    const double y0 = best.second * best.second;
    const double ym = std::pow(split(x0 - h), 2);
    const double yp = std::pow(split(x0 + h), 2);
    const double curv = ym + yp - 2.0 * y0;
    double floor_sq = y0;
    if (curv > 0.0) floor_sq = y0 - (yp - ym) * (yp - ym) / (8.0 * curv);
    return 0.5 * std::sqrt(std::max(std::min(floor_sq, y0), 0.0));
}

}  // namespace fcoupler

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

#include <cmath>

#include <gtest/gtest.h>

#include "fcoupler/effmodel.hpp"
#include "property.hpp"

using namespace fcoupler;

namespace {

SystemModel design_symmetric() {
    return SystemModel{4.58, 4.64, 3.5, 0.2, 0.2, 0.2, -0.085, -0.085, -0.0058};
}

SystemModel design_asymmetric() {
    return SystemModel{4.58, 4.64, 5.5, 0.2, 0.2, 0.2, -0.079, 0.098, -0.012};
}

// Net coupling evaluated independently of the library, plus a plain bisection.
double hand_g(const SystemModel& m, double wc) {
    const double s = 1 / (wc - m.omega1) + 1 / (wc + m.omega1) + 1 / (wc - m.omega2) + 1 / (wc + m.omega2);
    return m.g12 - m.g1c * m.g2c * s / 2;
}

double hand_bisect(const SystemModel& m, double lo, double hi) {
    double flo = hand_g(m, lo);
    for (int i = 0; i < 100; ++i) {
        const double mid = 0.5 * (lo + hi);
        const double fm = hand_g(m, mid);
        if ((fm < 0) == (flo < 0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

}  // namespace

TEST(GNet, NoQubitCouplerRateLeavesDirectCoupling) {
    auto m = design_symmetric();
    m.g1c = 0.0;
    const auto c = g_net(m);
    EXPECT_EQ(c.g, m.g12);
    EXPECT_EQ(c.g_eff, 0.0);
}

TEST(GNet, DefinitionAndDetunings) {
    const auto m = design_asymmetric();
    const auto c = g_net(m);
    EXPECT_DOUBLE_EQ(c.g, m.g12 - c.g_eff);
    EXPECT_DOUBLE_EQ(c.delta1, m.omegac - m.omega1);
    EXPECT_DOUBLE_EQ(c.sigma2, m.omegac + m.omega2);
    EXPECT_NEAR(c.g, hand_g(m, m.omegac), 1e-15);
}

TEST(GNet, ResonanceFloor) {
    auto m = design_symmetric();
    m.omegac = m.omega1 + 5e-4;
    EXPECT_THROW(g_net(m), ResonanceError);
    EXPECT_NO_THROW(g_net(m, 1e-4));
}

TEST(GNet, QubitExchangeLeavesCouplingUnchanged) {
    prop::Gen g(61);
    for (int i = 0; i < 1000; ++i) {
        const auto m = prop::random_dispersive_model(g, 0.3);
        EXPECT_NEAR(g_net(m).g, g_net(m.swapped()).g, 1e-15);
    }
}

TEST(FindZeroG, SymmetricDesignRootBelowQubits) {
    const auto z = find_zero_g(fixed_coupling_builder(design_symmetric()), 2.8, 4.0);
    EXPECT_NEAR(z.root, hand_bisect(design_symmetric(), 2.8, 4.0), 1e-6);
    EXPECT_NEAR(z.root, 3.53, 0.01);
    EXPECT_FALSE(z.multiple_roots());
}

TEST(FindZeroG, AsymmetricDesignRootAboveQubits) {
    const auto z = find_zero_g(fixed_coupling_builder(design_asymmetric()), 4.8, 6.14);
    EXPECT_NEAR(z.root, hand_bisect(design_asymmetric(), 4.8, 6.14), 1e-6);
    EXPECT_NEAR(z.root, 5.30, 0.01);
}

TEST(FindZeroG, SymmetricBandAboveQubitsHasNoRoot) {
    try {
        find_zero_g(fixed_coupling_builder(design_symmetric()), 4.8, 8.0);
        FAIL() << "expected no sign change";
    } catch (const NoSignChangeError& e) {
        EXPECT_LT(e.lo_value, 0);
        EXPECT_LT(e.hi_value, 0);
    }
}

TEST(FindZeroG, FluxScaledRootDiffersFromFixedRates) {
    const auto base = design_symmetric();
    const auto tuning = CouplerTuning::from_max_frequency(0.18, 6.0);
    const double fixed = find_zero_g(fixed_coupling_builder(base), 2.8, 4.0).root;
    const double scaled = find_zero_g(flux_scaled_builder(base, tuning), 2.8, 4.0).root;
    // Weaker rates away from the sweet spot move the zero toward the qubits.
    EXPECT_GT(scaled, fixed);
}

TEST(FindZeroG, FrequencyAndFluxAxesAgree) {
    const auto base = design_symmetric();
    const auto tuning = CouplerTuning::from_max_frequency(0.18, 6.0);
    const double fc = find_zero_g(flux_scaled_builder(base, tuning), 2.8, 4.0).root;
    // Stay below the qubits, where the flux axis runs monotonically in frequency.
    const double from = tuning.flux_for_frequency(4.4).quanta();
    const double phi = find_zero_g(coupler_flux_builder(base, tuning), from, 0.45).root;
    EXPECT_NEAR(tuning.frequency(FluxBias::from_quanta(phi)), fc, 1e-5);
}

TEST(RegimeProperty, RootSideFollowsSignPattern) {
    prop::Gen g(62);
    int checked_same = 0;
    for (int i = 0; i < 500; ++i) {
        SystemModel m;
        m.omega1 = g.uniform(3.5, 6.0);
        m.omega2 = m.omega1 + g.uniform(-0.3, 0.3);
        m.eta1 = m.eta2 = m.etac = 0.2;
        m.g1c = g.sign() * g.uniform(0.02, 0.15);
        m.g2c = g.sign() * g.uniform(0.02, 0.15);
        m.g12 = g.sign() * g.uniform(0.001, 0.02);
        const double wmin = std::min(m.omega1, m.omega2), wmax = std::max(m.omega1, m.omega2);
        auto gf = [&](double wc) {
            m.omegac = wc;
            return g_net(m).g;
        };
        const auto above = find_roots(gf, wmax + 0.01, 40.0).roots;
        const auto below = find_roots(gf, 0.2, wmin - 0.01).roots;
        const bool same = (m.g12 > 0) == (m.g1c * m.g2c > 0);
        if (same) {
            EXPECT_TRUE(below.empty());
            // Monotone above the band: a root exists iff the sign flips.
            const bool flips = (gf(wmax + 0.01) > 0) != (m.g12 > 0);
            EXPECT_EQ(above.size(), flips ? 1u : 0u);
            ++checked_same;
        } else {
            EXPECT_TRUE(above.empty());
        }
    }
    EXPECT_GT(checked_same, 100);
}

TEST(DressedFrequencies, UncoupledQubitsStayBare) {
    SystemModel m{4.5, 4.7, 6.0, 0.2, 0.21, 0.18, 0.0, 0.0, -0.01};
    const auto d = dressed_frequencies(m);
    EXPECT_EQ(d.omega01_1, 4.5);
    EXPECT_EQ(d.omega01_2, 4.7);
    EXPECT_EQ(d.omega02_1, 9.0);
    EXPECT_EQ(d.max_dispersive_ratio, 0.0);
}

TEST(DressedFrequencies, LevelRepulsionFromCoupler) {
    SystemModel m{4.5, 4.7, 6.0, 0.2, 0.21, 0.18, 0.08, -0.08, 0.0};
    const auto d = dressed_frequencies(m);
    EXPECT_LT(d.omega01_1, 4.5);
    EXPECT_LT(d.omega01_2, 4.7);
    m.omegac = 3.0;
    const auto b = dressed_frequencies(m);
    // Below the qubits the rotating shift dominates and pushes them up.
    EXPECT_GT(b.omega01_1, 4.5);
}

TEST(DressedFrequencies, DispersiveLimitsAndWarning) {
    SystemModel m{4.5, 4.7, 6.0, 0.2, 0.21, 0.18, 0.5, 0.1, 0.0};
    EXPECT_NO_THROW(dressed_frequencies(m));
    EXPECT_TRUE(dressed_frequencies(m).weakly_dispersive);
    m.g1c = 0.8;
    EXPECT_THROW(dressed_frequencies(m), ResonanceError);
    m.g1c = 0.05;
    m.omegac = 4.5 - m.eta1 + 1e-4;
    EXPECT_THROW(dressed_frequencies(m), ResonanceError);
}

TEST(ZZPerturbative, VanishesWithoutCouplings) {
    SystemModel m{4.5, 4.7, 6.0, 0.2, 0.21, 0.18, 0, 0, 0};
    const auto z = zz_perturbative(m);
    EXPECT_EQ(z.zeta_total, 0.0);
    EXPECT_EQ(z.zeta2, 0.0);
    EXPECT_EQ(z.zeta34, 0.0);
}

TEST(ZZPerturbative, SecondOrderExample) {
    SystemModel m{3.632, 3.45, 6.0, 0.219, 0.215, 0.2, 0, 0, -0.0094};
    const auto z = zz_perturbative(m);
    const double d = 0.182;
    const double expect = -2 * 0.0094 * 0.0094 * (0.219 + 0.215) / ((d - 0.219) * (d + 0.215));
    EXPECT_NEAR(z.zeta2, expect, 1e-12);
    EXPECT_NEAR(z.zeta2 * 1e3, 5.2, 0.05);
    EXPECT_NEAR(z.delta12, d, 1e-12);
}

TEST(ZZPerturbative, TotalIsSumOfOrders) {
    prop::Gen g(63);
    for (int i = 0; i < 1000; ++i) {
        const auto m = prop::random_dispersive_model(g, 0.1);
        const auto z = zz_perturbative(m, g.uniform(1.0, 1.5));
        EXPECT_EQ(z.zeta_total, z.zeta2 + z.zeta34);
    }
}

TEST(ZZPerturbative, SecondOrderIsFluxIndependent) {
    const SquidParams sq = SquidParams::from_sum_asymmetry(30, 0.3);
    SystemModel m{3.449, 3.63, 5.5, 0.219, 0.215, 0.2, -0.13, 0.13, -0.0094};
    const double ref = zz_perturbative(m, sq, FluxBias{}).zeta2;
    const double ref34 = zz_perturbative(m, sq, FluxBias{}).zeta34;
    bool moved = false;
    for (double q = 0.0; q <= 0.5; q += 0.025) {
        const auto z = zz_perturbative(m, sq, FluxBias::from_quanta(q));
        EXPECT_EQ(z.zeta2, ref);
        moved |= z.zeta34 != ref34;
    }
    EXPECT_TRUE(moved);
}

TEST(ZZPerturbative, UpsilonDividesEachQubitCouplerRate) {
    SystemModel m{3.449, 3.63, 5.5, 0.219, 0.215, 0.2, -0.13, 0.13, -0.0094};
    const double u = 1.3;
    SystemModel scaled = m;
    scaled.g1c /= u;
    scaled.g2c /= u;
    EXPECT_NEAR(zz_perturbative(m, u).zeta34, zz_perturbative(scaled).zeta34, 1e-15);
}

TEST(ZZPerturbative, QubitExchangeSymmetry) {
    prop::Gen g(64);
    for (int i = 0; i < 1000; ++i) {
        const auto m = prop::random_dispersive_model(g, 0.1);
        const auto a = zz_perturbative(m), b = zz_perturbative(m.swapped());
        EXPECT_NEAR(a.zeta_total, b.zeta_total, 1e-12 + 1e-9 * std::abs(a.zeta_total));
    }
}

TEST(ZZPerturbative, ResonanceNamesDenominator) {
    SystemModel m{4.5, 4.7, 6.0, 0.2, 0.2, 0.18, 0.08, -0.08, -0.005};
    m.omega2 = m.omega1;
    try {
        zz_perturbative(m);
        FAIL();
    } catch (const ResonanceError& e) {
        EXPECT_NE(std::string(e.what()).find("Delta_12"), std::string::npos);
    }
}

TEST(FindRoots, RejectsPoles) {
    auto f = [](double x) { return 1.0 / (x - 1.0); };
    const auto r = find_roots(f, 0.0, 2.05);
    EXPECT_TRUE(r.roots.empty());
    EXPECT_EQ(r.sign_changes, 1);
    auto h = [](double x) { return std::tan(x); };
    const auto t = find_roots(h, 1.0, 5.0);
    ASSERT_EQ(t.roots.size(), 1u);
    EXPECT_NEAR(t.roots[0], std::numbers::pi, 1e-6);
}

TEST(FindRoots, SkipsUnevaluablePoints) {
    auto f = [](double x) {
        if (std::abs(x - 2.0) < 0.1) throw ResonanceError("pole");
        return x - 3.0;
    };
    const auto r = find_roots(f, 0.0, 5.0);
    ASSERT_EQ(r.roots.size(), 1u);
    EXPECT_NEAR(r.roots[0], 3.0, 1e-6);
}

TEST(FindRoots, IdenticallyZeroHasNoRoots) {
    EXPECT_TRUE(find_roots([](double) { return 0.0; }, 0.0, 1.0).roots.empty());
    // A zero that lands exactly on a sample still counts.
    const auto r = find_roots([](double x) { return x - 0.5; }, 0.0, 1.0, {.prescan_points = 201});
    ASSERT_EQ(r.roots.size(), 1u);
    EXPECT_EQ(r.roots[0], 0.5);
}

TEST(FindZeroZZ, UncoupledSystemHasNone) {
    SystemModel m{4.5, 4.7, 6.0, 0.2, 0.21, 0.18, 0, 0, 0};
    EXPECT_TRUE(find_zero_zz(fixed_coupling_builder(m), 5.0, 7.0).empty());
}

TEST(FindZeroZZ, AsymmetricDeviceHasTwoPerturbativeZeros) {
    SystemModel m{3.449, 3.63, 6.0, 0.219, 0.215, 0.2, -0.1316, 0.1316, -0.0094};
    const auto tuning = CouplerTuning::from_max_frequency(0.1767, 6.526);
    const auto roots = find_zero_zz(flux_scaled_builder(m, tuning), 4.0, 6.526);
    ASSERT_EQ(roots.size(), 2u);
    EXPECT_LT(roots[0], roots[1]);
    for (double r : roots) {
        auto b = flux_scaled_builder(m, tuning);
        EXPECT_NEAR(zz_perturbative(b(r)).zeta_total, 0.0, 1e-7);
    }
}

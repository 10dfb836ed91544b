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
#include <random>

#include <Eigen/Dense>
#include <gtest/gtest.h>

#include "fcoupler/capnet.hpp"
#include "fcoupler/transmon.hpp"
#include "property.hpp"

using namespace fcoupler;

namespace {

// Lowest transition of 4 E_C n^2 - E_J cos(phi) at zero offset charge,
// diagonalized in a truncated charge basis.
double charge_basis_frequency(double ec, double ej, int nmax = 30) {
    const int dim = 2 * nmax + 1;
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim, dim);
    for (int i = 0; i < dim; ++i) {
        const double n = i - nmax;
        h(i, i) = 4.0 * ec * n * n;
        if (i + 1 < dim) h(i, i + 1) = h(i + 1, i) = -0.5 * ej;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h);
    return es.eigenvalues()(1) - es.eigenvalues()(0);
}

TransmonParams fixed(double ec, double ej, Role r = Role::Qubit1) {
    return {ec, SquidParams::symmetric(ej), r};
}

}  // namespace

TEST(Transmon, FrequencyExample) {
    const double xi = std::sqrt(2 * 0.192 / 18);
    EXPECT_NEAR(transmon_frequency(0.192, 18), std::sqrt(8 * 18 * 0.192) - 0.192 * (1 + xi / 4), 1e-14);
    EXPECT_NEAR(transmon_frequency(0.192, 18) / 5.0594, 1.0, 1e-4);
}

TEST(Transmon, FrequencyAgreesWithChargeBasisDiagonalization) {
    EXPECT_LT(std::abs(transmon_frequency(0.192, 18) / charge_basis_frequency(0.192, 18) - 1), 0.01);
    for (double ratio : {30.0, 50.0, 100.0, 200.0}) {
        const double ec = 0.2, ej = ratio * ec;
        EXPECT_LT(std::abs(transmon_frequency(ec, ej) / charge_basis_frequency(ec, ej) - 1), 0.01)
            << ratio;
    }
}

TEST(Transmon, AnharmonicityAgreesWithChargeBasisToFewPercent) {
    const double ec = 0.2, ej = 20.0;
    const int nmax = 30, dim = 2 * nmax + 1;
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim, dim);
    for (int i = 0; i < dim; ++i) {
        const double n = i - nmax;
        h(i, i) = 4.0 * ec * n * n;
        if (i + 1 < dim) h(i, i + 1) = h(i + 1, i) = -0.5 * ej;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h);
    const auto& v = es.eigenvalues();
    const double eta = (v(1) - v(0)) - (v(2) - v(1));
    EXPECT_LT(std::abs(anharmonicity(ec, ej) / eta - 1), 0.03);
}

TEST(Transmon, FrequencyMonotoneInJosephsonEnergy) {
    double prev = transmon_frequency(0.2, 1.0);
    for (double ej = 1.5; ej < 80; ej += 0.5) {
        const double f = transmon_frequency(0.2, ej);
        EXPECT_GT(f, prev);
        prev = f;
    }
}

TEST(Transmon, SmallChargingEnergyLimit) {
    const double ej = 10.0;
    for (double ec : {1e-3, 1e-5, 1e-7}) {
        const double w = transmon_frequency(ec, ej);
        EXPECT_NEAR(w / std::sqrt(8 * ej * ec), 1.0, 2 * ec / std::sqrt(8 * ej * ec));
    }
}

TEST(Transmon, DomainErrors) {
    EXPECT_THROW(transmon_frequency(0.2, 0.0), DomainError);
    EXPECT_THROW(zpf(0.2, 0.0), DomainError);
    EXPECT_THROW(coupling_rate(0.01, 0.2, 0.0, 0.2, 10, false), DomainError);
    EXPECT_THROW(ej_for_frequency(0.2, -1.0), DomainError);
}

TEST(Transmon, ZeroPointFluctuationExamples) {
    EXPECT_NEAR(zpf(1.0, 50.0).n, std::pow(50.0 / 8.0, 0.25) / std::sqrt(2.0), 1e-14);
    EXPECT_NEAR(zpf(1.0, 50.0).n, 1.1180, 5e-5);
    EXPECT_NEAR(zpf(0.3, 2.4).n, 1.0 / std::sqrt(2.0), 1e-14);
    std::mt19937_64 rng(51);
    std::uniform_real_distribution<double> u(0.05, 50);
    for (int i = 0; i < 1000; ++i) {
        const auto z = zpf(u(rng), u(rng));
        EXPECT_NEAR(z.n * z.phi, 0.5, 1e-14);
    }
}

TEST(Transmon, RegimeThreshold) {
    EXPECT_TRUE(in_transmon_regime(0.2, 4.0));
    EXPECT_FALSE(in_transmon_regime(0.2, 3.9));
}

TEST(Transmon, EjForFrequencyInvertsFrequency) {
    for (double f : {0.5, 3.0, 4.58, 6.526, 9.0}) {
        const double ej = ej_for_frequency(0.18, f);
        EXPECT_NEAR(transmon_frequency(0.18, ej), f, 1e-9);
    }
}

TEST(CouplingRate, ZeroEnergyGivesZeroRate) {
    EXPECT_EQ(coupling_rate(0.0, 0.2, 15, 0.18, 25, true), 0.0);
}

TEST(CouplingRate, MatchesDefinition) {
    const double g = coupling_rate(0.01, 0.2, 15, 0.18, 25, false);
    EXPECT_NEAR(g, 0.01 / std::sqrt(2.0) * std::pow(15 / 0.2 * 25 / 0.18, 0.25), 1e-15);
    const double gx = coupling_rate(0.01, 0.2, 15, 0.18, 25, true);
    EXPECT_NEAR(gx / g, 1 - (std::sqrt(0.4 / 15) + std::sqrt(0.36 / 25)) / 8, 1e-14);
}

TEST(CouplingRate, SignsFollowCouplingEnergies) {
    prop::Gen g(52);
    for (int i = 0; i < 2000; ++i) {
        const double e = g.uniform(-0.05, 0.05);
        const double r = coupling_rate(e, g.uniform(0.1, 0.4), g.uniform(5, 60), g.uniform(0.1, 0.4),
                                       g.uniform(5, 60), g.coin());
        EXPECT_EQ(std::signbit(r), std::signbit(e));
    }
}

TEST(CouplingRate, FourthRootScalingInCouplerJosephsonEnergy) {
    prop::Gen g(53);
    for (int i = 0; i < 1000; ++i) {
        const double e = g.uniform(-0.05, 0.05), ecj = g.uniform(0.1, 0.4), ejj = g.uniform(5, 60),
                     ecc = g.uniform(0.1, 0.4), ejc = g.uniform(5, 60);
        const double a = coupling_rate(e, ecj, ejj, ecc, ejc, false);
        const double b = coupling_rate(e, ecj, ejj, ecc, 2 * ejc, false);
        EXPECT_NEAR(b / a, std::pow(2.0, 0.25), 1e-12 * std::pow(2.0, 0.25));
    }
}

TEST(CouplingRate, CorrectionSmallDeepInTransmonRegime) {
    prop::Gen g(54);
    for (int i = 0; i < 1000; ++i) {
        const double ecj = g.uniform(0.1, 0.4), ecc = g.uniform(0.1, 0.4);
        const double ejj = ecj * g.uniform(50, 300), ejc = ecc * g.uniform(50, 300);
        const double a = coupling_rate(0.01, ecj, ejj, ecc, ejc, false);
        const double b = coupling_rate(0.01, ecj, ejj, ecc, ejc, true);
        EXPECT_LT(std::abs(b - a) / std::abs(a), 0.05);
    }
}

TEST(CouplingRates, SignsMatchCircuitEnergiesForRandomNetworks) {
    prop::Gen g(55);
    for (int i = 0; i < 300; ++i) {
        const auto e = energies_exact(prop::random_network(g));
        const auto q1 = fixed(e.ec1, 60 * e.ec1), q2 = fixed(e.ec2, 70 * e.ec2, Role::Qubit2);
        const auto c = fixed(e.ecc, 90 * e.ecc, Role::Coupler);
        const auto r = coupling_rates(e, q1, q2, c, FluxBias{}, true);
        EXPECT_EQ(std::signbit(r.g1c), std::signbit(e.e1c));
        EXPECT_EQ(std::signbit(r.g2c), std::signbit(e.e2c));
        EXPECT_EQ(std::signbit(r.g12), std::signbit(e.e12));
    }
}

TEST(CouplingRates, CouplerFluxShrinksQubitCouplerRatesOnly) {
    ModeEnergies e{.ec1 = 0.2, .ec2 = 0.2, .ecc = 0.18, .e12 = -0.001, .e1c = -0.01, .e2c = 0.01};
    const auto q1 = fixed(0.2, 15), q2 = fixed(0.2, 16, Role::Qubit2);
    const TransmonParams c{0.18, SquidParams::from_sum_asymmetry(30, 0.3), Role::Coupler};
    const auto a = coupling_rates(e, q1, q2, c, FluxBias{}, false);
    const auto flux = FluxBias::from_quanta(0.3);
    const auto b = coupling_rates(e, q1, q2, c, flux, false);
    EXPECT_NEAR(a.g1c / b.g1c, upsilon(c.squid, flux), 1e-12);
    EXPECT_NEAR(a.g2c / b.g2c, upsilon(c.squid, flux), 1e-12);
    EXPECT_EQ(a.g12, b.g12);
}

TEST(CouplerTuning, ReproducesMaximumFrequency) {
    const auto t = CouplerTuning::from_max_frequency(0.1767, 6.526);
    EXPECT_NEAR(t.max_frequency(), 6.526, 1e-9);
    EXPECT_NEAR(t.frequency(FluxBias{}), 6.526, 1e-9);
    const auto a = CouplerTuning::from_max_frequency(0.1767, 6.526, 0.4);
    EXPECT_NEAR(a.max_frequency(), 6.526, 1e-9);
    EXPECT_NEAR(a.squid.asymmetry(), 0.4, 1e-12);
}

TEST(CouplerTuning, FluxForFrequencyRoundTrip) {
    for (double d : {0.0, 0.2, 0.5}) {
        const auto t = CouplerTuning::from_max_frequency(0.18, 6.3, d);
        const double fmin = d > 0.0 ? t.frequency(FluxBias::from_quanta(0.5)) : 1.0;
        for (double s : {0.01, 0.3, 0.7, 0.999}) {
            const double f = fmin + s * (t.max_frequency() - fmin);
            const auto flux = t.flux_for_frequency(f);
            EXPECT_NEAR(t.frequency(flux), f, 1e-8);
            EXPECT_NEAR(t.upsilon_at(flux), t.upsilon_at_frequency(f), 1e-9);
            EXPECT_GE(flux.phase(), 0.0);
        }
    }
}

TEST(CouplerTuning, RejectsFrequenciesOutsideRange) {
    const auto t = CouplerTuning::from_max_frequency(0.18, 6.3, 0.5);
    EXPECT_THROW(t.ej_at_frequency(6.5), DomainError);
    EXPECT_THROW(t.ej_at_frequency(1.0), DomainError);
}

TEST(DesignPoint, PlacesModesAtRequestedFrequencies) {
    ModeEnergies e{.ec1 = 0.19, .ec2 = 0.2, .ecc = 0.18, .e12 = -0.0005, .e1c = -0.008, .e2c = 0.009};
    const auto d = design_point(e, 4.58, 4.64, 6.0);
    EXPECT_NEAR(d.model.omega1, 4.58, 1e-9);
    EXPECT_NEAR(d.model.omega2, 4.64, 1e-9);
    EXPECT_NEAR(d.model.omegac, 6.0, 1e-9);
    EXPECT_LT(d.model.g1c, 0);
    EXPECT_GT(d.model.g2c, 0);
    EXPECT_LT(d.model.g12, 0);
    EXPECT_NO_THROW(d.model.validate());
}

TEST(SystemModel, SwapExchangesQubitData) {
    SystemModel m{4.5, 4.6, 6.0, 0.2, 0.21, 0.18, -0.08, 0.09, -0.01};
    const auto s = m.swapped();
    EXPECT_EQ(s.omega1, 4.6);
    EXPECT_EQ(s.eta2, 0.2);
    EXPECT_EQ(s.g1c, 0.09);
    EXPECT_EQ(s.g12, -0.01);
    EXPECT_THROW((SystemModel{4.5, 4.6, 6.0, 0.0, 0.21, 0.18, 0, 0, 0}.validate()), DomainError);
}

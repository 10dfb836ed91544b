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

// Least-squares fit of net coupling versus coupler flux to the effective
// model, plus a synthetic data generator for exercising it.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "fcoupler/errors.hpp"
#include "fcoupler/squid.hpp"
#include "fcoupler/transmon.hpp"
#include "fcoupler/units.hpp"

namespace fcoupler {

struct GFluxRow {
    double phi_over_phi0 = 0.0;
    double g_mhz = 0.0;       // magnitude
    std::optional<int> sign;  // +1 / -1 when the sign is known
    double omega1_ghz = 0.0;
    double omega2_ghz = 0.0;

    /// The measured value the model is compared against.
    double target() const { return sign ? *sign * std::abs(g_mhz) : std::abs(g_mhz); }
};

inline constexpr std::size_t kMinDatasetRows = 6;

struct GFluxDataset {
    std::vector<GFluxRow> rows;

    /// Checks the dataset invariants: enough rows, distinct flux values,
    /// non-negative magnitudes, finite qubit frequencies.
    void validate() const {
        if (rows.size() < kMinDatasetRows) {
            throw FitError("dataset needs at least " + std::to_string(kMinDatasetRows) +
                           " rows, got " + std::to_string(rows.size()));
        }
        std::set<double> seen;
        for (const auto& r : rows) {
            if (!seen.insert(r.phi_over_phi0).second) {
                std::ostringstream os;
                os << "duplicate flux value " << r.phi_over_phi0 << " in dataset";
                throw FitError(os.str());
            }
            if (!(r.g_mhz >= 0.0) || !(r.omega1_ghz > 0.0) || !(r.omega2_ghz > 0.0)) {
                throw FitError("dataset rows need |g| >= 0 and positive qubit frequencies");
            }
            if (r.sign && *r.sign != 1 && *r.sign != -1) {
                throw FitError("sign hints must be +1 or -1");
            }
        }
    }
};

/// Parameters of g(Phi) = g12 - g_eff(omega_c(Phi)). Only the product
/// g1c g2c enters, so it is the fitted quantity.
struct GFluxParams {
    double g12_mhz = 0.0;
    double product_mhz2 = 0.0;  // g1c g2c at zero coupler flux
    double coupler_ec_ghz = 0.2;
    double ej_sum_ghz = 20.0;
    double asymmetry = 0.0;

    static constexpr std::size_t kCount = 5;

    std::array<double, kCount> to_array() const {
        return {g12_mhz, product_mhz2, coupler_ec_ghz, ej_sum_ghz, asymmetry};
    }
    static GFluxParams from_array(const std::array<double, kCount>& a) {
        return {a[0], a[1], a[2], a[3], a[4]};
    }
    static const char* name(std::size_t i) {
        static const char* names[kCount] = {"g12_mhz", "product_mhz2", "coupler_ec_ghz",
                                            "ej_sum_ghz", "asymmetry"};
        return names[i];
    }
};

/// Which parameters the fit may move.
struct FreeMask {
    std::array<bool, GFluxParams::kCount> free = {true, true, false, true, false};

    std::size_t count() const { return static_cast<std::size_t>(std::count(free.begin(), free.end(), true)); }
};

/// Model value of the net coupling at one dataset row, MHz. Non-finite when
/// the parameters are unphysical or the coupler sits on a qubit.
inline double g_model_mhz(const GFluxParams& p, double phi_over_phi0, double omega1,
                          double omega2) {
    if (!(p.coupler_ec_ghz > 0.0) || !(p.ej_sum_ghz > 0.0) || !(p.asymmetry >= 0.0) ||
        !(p.asymmetry < 1.0)) {
        return std::numeric_limits<double>::quiet_NaN();
    }
    const auto squid = SquidParams::from_sum_asymmetry(p.ej_sum_ghz, p.asymmetry);
    const double ej = ej_of_flux(squid, FluxBias::from_quanta(phi_over_phi0));
    if (!(ej > 0.0)) return std::numeric_limits<double>::quiet_NaN();
    const double wc = transmon_frequency(p.coupler_ec_ghz, ej) * kMHzPerGHz;
    const double w1 = omega1 * kMHzPerGHz;
    const double w2 = omega2 * kMHzPerGHz;
    const double u2 = std::sqrt(p.ej_sum_ghz / ej);  // upsilon^2
    const double d1 = wc - w1, d2 = wc - w2;
    if (d1 == 0.0 || d2 == 0.0) return std::numeric_limits<double>::quiet_NaN();
    const double g_eff = 0.5 * (p.product_mhz2 / u2) *
                         (1.0 / d1 + 1.0 / (wc + w1) + 1.0 / d2 + 1.0 / (wc + w2));
    return p.g12_mhz - g_eff;
}

struct FitOptions {
    int max_simplex_iterations = 4000;
    int max_gauss_newton_iterations = 100;
    double fd_relative_step = 1e-6;
};

struct FitResult {
    GFluxParams params;
    FreeMask mask;
    std::array<double, GFluxParams::kCount> standard_errors{};  // 0 for fixed parameters
    Eigen::MatrixXd covariance;  // over free parameters, in mask order
    double rms_residual_mhz = 0.0;
    double objective = 0.0;  // sum of squared residuals, MHz^2
    bool converged = false;
    int iterations = 0;
    std::vector<double> objective_trace;  // after each accepted iteration
    std::size_t rows = 0;

    double sqrt_abs_product_mhz() const { return std::sqrt(std::abs(params.product_mhz2)); }
    double coupler_max_frequency_ghz() const {
        return transmon_frequency(params.coupler_ec_ghz, params.ej_sum_ghz);
    }
};

namespace detail {

class GFluxProblem {
public:
    GFluxProblem(std::vector<GFluxRow> rows, const GFluxParams& init, const FreeMask& mask)
        : rows_(std::move(rows)), base_(init.to_array()), mask_(mask) {
        // Rows are sorted so the residual vector, and hence every floating
        // point sum, is independent of the input order.
        std::sort(rows_.begin(), rows_.end(), [](const GFluxRow& a, const GFluxRow& b) {
            return a.phi_over_phi0 < b.phi_over_phi0;
        });
        static constexpr double floors[GFluxParams::kCount] = {1.0, 100.0, 0.01, 1.0, 0.01};
        for (std::size_t i = 0; i < GFluxParams::kCount; ++i) {
            if (mask_.free[i]) {
                index_.push_back(i);
                scale_.push_back(std::max(std::abs(base_[i]), floors[i]));
            }
        }
    }

    std::size_t dim() const { return index_.size(); }
    std::size_t rows() const { return rows_.size(); }

    /// Free parameters are optimized in units of their scale.
    Eigen::VectorXd initial() const {
        Eigen::VectorXd u(dim());
        for (std::size_t k = 0; k < dim(); ++k) u(k) = base_[index_[k]] / scale_[k];
        return u;
    }

    GFluxParams params(const Eigen::VectorXd& u) const {
        auto a = base_;
        for (std::size_t k = 0; k < dim(); ++k) a[index_[k]] = u(k) * scale_[k];
        return GFluxParams::from_array(a);
    }

    double scale(std::size_t k) const { return scale_[k]; }
    std::size_t index(std::size_t k) const { return index_[k]; }

    Eigen::VectorXd residuals(const Eigen::VectorXd& u) const {
        const GFluxParams p = params(u);
        Eigen::VectorXd r(rows());
        for (std::size_t i = 0; i < rows(); ++i) {
            const auto& row = rows_[i];
            double m = g_model_mhz(p, row.phi_over_phi0, row.omega1_ghz, row.omega2_ghz);
            if (!row.sign) m = std::abs(m);
            r(static_cast<Eigen::Index>(i)) = m - row.target();
        }
        return r;
    }

    double objective(const Eigen::VectorXd& u) const {
        const double s = residuals(u).squaredNorm();
        return std::isfinite(s) ? s : std::numeric_limits<double>::infinity();
    }

private:
    std::vector<GFluxRow> rows_;
    std::array<double, GFluxParams::kCount> base_;
    FreeMask mask_;
    std::vector<std::size_t> index_;
    std::vector<double> scale_;
};

/// Nelder-Mead with the standard coefficients; returns the best vertex.
inline Eigen::VectorXd nelder_mead(const GFluxProblem& pb, Eigen::VectorXd x0, int max_iter,
                                   std::vector<double>& trace) {
    const int n = static_cast<int>(x0.size());
    std::vector<Eigen::VectorXd> v(n + 1, x0);
    std::vector<double> f(n + 1);
    for (int i = 0; i < n; ++i) v[i + 1](i) += x0(i) != 0.0 ? 0.05 * std::abs(x0(i)) : 0.05;
    for (int i = 0; i <= n; ++i) f[i] = pb.objective(v[i]);
    std::vector<int> order(n + 1);
    double best = std::numeric_limits<double>::infinity();
    for (int it = 0; it < max_iter; ++it) {
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return f[a] < f[b]; });
        const int lo = order.front(), hi = order.back(), second = order[n - 1];
        if (f[lo] < best) {
            best = f[lo];
            trace.push_back(best);
        }
        double size = 0.0;
        for (int i = 0; i <= n; ++i) size = std::max(size, (v[i] - v[lo]).cwiseAbs().maxCoeff());
        if (size < 1e-10 || std::abs(f[hi] - f[lo]) <= 1e-15 * (std::abs(f[lo]) + 1e-300)) break;

        Eigen::VectorXd centroid = Eigen::VectorXd::Zero(n);
        for (int i = 0; i <= n; ++i) {
            if (i != hi) centroid += v[i];
        }
        centroid /= n;
        const Eigen::VectorXd xr = centroid + (centroid - v[hi]);
        const double fr = pb.objective(xr);
        if (fr < f[lo]) {
            const Eigen::VectorXd xe = centroid + 2.0 * (centroid - v[hi]);
            const double fe = pb.objective(xe);
            if (fe < fr) {
                v[hi] = xe;
                f[hi] = fe;
            } else {
                v[hi] = xr;
                f[hi] = fr;
            }
        } else if (fr < f[second]) {
            v[hi] = xr;
            f[hi] = fr;
        } else {
            const bool outside = fr < f[hi];
            const Eigen::VectorXd xc =
                outside ? Eigen::VectorXd(centroid + 0.5 * (xr - centroid))
                        : Eigen::VectorXd(centroid + 0.5 * (v[hi] - centroid));
            const double fc = pb.objective(xc);
            if (fc < (outside ? fr : f[hi])) {
                v[hi] = xc;
                f[hi] = fc;
            } else {
                for (int i = 0; i <= n; ++i) {
                    if (i == lo) continue;
                    v[i] = v[lo] + 0.5 * (v[i] - v[lo]);
                    f[i] = pb.objective(v[i]);
                }
            }
        }
    }
    const int lo = static_cast<int>(std::min_element(f.begin(), f.end()) - f.begin());
    return v[lo];
}

inline Eigen::MatrixXd jacobian(const GFluxProblem& pb, const Eigen::VectorXd& u,
                                const Eigen::VectorXd& r0, double rel_step) {
    Eigen::MatrixXd j(r0.size(), u.size());
    for (Eigen::Index k = 0; k < u.size(); ++k) {
        Eigen::VectorXd up = u;
        const double h = rel_step * std::max(std::abs(u(k)), 1.0);
        up(k) += h;
        j.col(k) = (pb.residuals(up) - r0) / h;
    }
    return j;
}

}  // namespace detail

/// Fits g(Phi) with a simplex search followed by Gauss-Newton refinement.
/// Gauss-Newton steps are halved until the objective decreases, so the
/// recorded objective trace never increases.
inline FitResult fit_g_vs_flux(const GFluxDataset& data, const GFluxParams& init,
                               const FreeMask& mask = {}, const FitOptions& opt = {}) {
    const std::size_t free = mask.count();
    if (free == 0) throw FitError("no free parameters to fit");
    if (data.rows.size() < free) {
        std::ostringstream os;
        os << "underdetermined fit: " << data.rows.size() << " rows for " << free
           << " free parameters";
        throw FitError(os.str());
    }
    data.validate();
    for (double v : init.to_array()) {
        if (!std::isfinite(v)) throw FitError("initial guesses must be finite");
    }

    detail::GFluxProblem pb(data.rows, init, mask);
    FitResult res;
    res.mask = mask;
    res.rows = data.rows.size();
    if (!std::isfinite(pb.objective(pb.initial()))) {
        throw FitError("model is not finite at the initial guess");
    }

    Eigen::VectorXd u = detail::nelder_mead(pb, pb.initial(), opt.max_simplex_iterations,
                                            res.objective_trace);
    double f = pb.objective(u);
    int it = 0;
    bool converged = false;
    for (; it < opt.max_gauss_newton_iterations; ++it) {
        const Eigen::VectorXd r = pb.residuals(u);
        const Eigen::MatrixXd j = detail::jacobian(pb, u, r, opt.fd_relative_step);
        const Eigen::VectorXd step = j.colPivHouseholderQr().solve(-r);
        if (!step.allFinite()) break;
        double t = 1.0;
        bool accepted = false;
        for (int half = 0; half < 30; ++half, t *= 0.5) {
            const Eigen::VectorXd trial = u + t * step;
            const double ft = pb.objective(trial);
            if (ft < f) {
                const double gain = f - ft;
                u = trial;
                f = ft;
                res.objective_trace.push_back(f);
                accepted = true;
                if (gain <= 1e-14 * std::max(f, 1e-300) || (t * step).norm() < 1e-12) {
                    converged = true;
                }
                break;
            }
        }
        // No descent along the Gauss-Newton direction: u is stationary to
        // the accuracy of the finite-difference Jacobian.
        if (!accepted) {
            converged = true;
            break;
        }
        if (converged) break;
    }
    res.iterations = it;
    res.converged = converged;
    res.params = pb.params(u);
    res.objective = f;
    res.rms_residual_mhz = std::sqrt(f / static_cast<double>(pb.rows()));

    const Eigen::VectorXd r = pb.residuals(u);
    const Eigen::MatrixXd j = detail::jacobian(pb, u, r, opt.fd_relative_step);
    const double dof = std::max<double>(1.0, static_cast<double>(pb.rows() - pb.dim()));
    const double s2 = f / dof;
    Eigen::MatrixXd cov_u = (j.transpose() * j).completeOrthogonalDecomposition().pseudoInverse() * s2;
    res.covariance = Eigen::MatrixXd(pb.dim(), pb.dim());
    for (std::size_t a = 0; a < pb.dim(); ++a) {
        for (std::size_t b = 0; b < pb.dim(); ++b) {
            res.covariance(a, b) = cov_u(a, b) * pb.scale(a) * pb.scale(b);
        }
        res.standard_errors[pb.index(a)] = std::sqrt(std::max(res.covariance(a, a), 0.0));
    }
    return res;
}

/// Model rows on the given flux grid with optional Gaussian noise. With
/// `signed_rows` each row carries the sign of its (noisy) value.
inline GFluxDataset synth_g_dataset(const GFluxParams& p, const std::vector<double>& flux_grid,
                                    double omega1_ghz, double omega2_ghz, double noise_sigma_mhz,
                                    std::uint64_t seed, bool signed_rows = true) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> noise(0.0, 1.0);
    GFluxDataset d;
    for (double x : flux_grid) {
        double y = g_model_mhz(p, x, omega1_ghz, omega2_ghz);
        if (!std::isfinite(y)) throw DomainError("synthetic model is not finite on the grid");
        if (noise_sigma_mhz > 0.0) y += noise_sigma_mhz * noise(rng);
        GFluxRow row{x, std::abs(y), std::nullopt, omega1_ghz, omega2_ghz};
        if (signed_rows) row.sign = y < 0.0 ? -1 : 1;
        d.rows.push_back(row);
    }
    return d;
}

inline std::vector<double> uniform_grid(double lo, double hi, int points) {
    std::vector<double> g(points);
    for (int i = 0; i < points; ++i) {
        g[i] = points == 1 ? lo : lo + (hi - lo) * i / (points - 1);
    }
    return g;
}

}  // namespace fcoupler

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

// Bracketing root search over a sampled interval. Sign changes are found on a
// uniform prescan and each is polished with TOMS 748. Brackets that straddle a
// pole rather than a zero are discarded.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <vector>

#include <boost/math/tools/roots.hpp>

#include "fcoupler/errors.hpp"

namespace fcoupler {

struct RootSearchOptions {
    int prescan_points = 200;
    double tolerance = 1e-6;  // absolute, in the units of x (1 kHz for GHz axes)
    int max_iterations = 200;
};

struct Prescan {
    std::vector<double> x;
    std::vector<std::optional<double>> f;  // empty where f threw
};

inline Prescan prescan(const std::function<double(double)>& f, double lo, double hi,
                       int points) {
    if (!(lo < hi) || points < 2) {
        throw DomainError("root search needs lo < hi and at least two prescan points");
    }
    Prescan s;
    s.x.resize(points);
    s.f.resize(points);
    for (int i = 0; i < points; ++i) {
        const double x = i + 1 == points ? hi : lo + (hi - lo) * i / (points - 1);
        s.x[i] = x;
        try {
            const double v = f(x);
            if (std::isfinite(v)) s.f[i] = v;
        } catch (const Error&) {
            // Resonant or unlabelable points are simply not sampled.
        }
    }
    return s;
}

struct RootList {
    std::vector<double> roots;
    int sign_changes = 0;  // sign changes seen on the prescan, poles included
};

namespace detail {

inline void refine(const std::function<double(double)>& f, double a, double b, double fa,
                   double fb, const RootSearchOptions& opt, std::vector<double>& roots) {
    try {
        std::uintmax_t iters = static_cast<std::uintmax_t>(opt.max_iterations);
        auto tol = [&](double x, double y) { return std::abs(y - x) <= opt.tolerance; };
        auto [ra, rb] = boost::math::tools::toms748_solve(f, a, b, fa, fb, tol, iters);
        const double r = 0.5 * (ra + rb);
        // A genuine zero shrinks |f|; across a pole it grows without bound.
        if (std::abs(f(r)) < std::min(std::abs(fa), std::abs(fb))) roots.push_back(r);
    } catch (const std::exception&) {
        // A bracket whose interior cannot be evaluated is not a root.
    }
}

}  // namespace detail

/// All zeros of f on [lo, hi] resolvable at the prescan resolution, ascending.
/// Samples where f is exactly zero count as a root only when isolated between
/// samples of opposite sign, so a function that vanishes identically has none.
inline RootList find_roots(const std::function<double(double)>& f, double lo, double hi,
                           const RootSearchOptions& opt = {}) {
    const Prescan s = prescan(f, lo, hi, opt.prescan_points);
    RootList out;
    std::optional<std::size_t> last;  // last sample with a finite nonzero value
    std::vector<std::size_t> zeros;   // exact-zero samples since `last`
    for (std::size_t i = 0; i < s.x.size(); ++i) {
        if (!s.f[i]) {
            last.reset();
            zeros.clear();
            continue;
        }
        const double fb = *s.f[i];
        if (fb == 0.0) {
            if (last) zeros.push_back(i);
            continue;
        }
        if (last) {
            const double fa = *s.f[*last];
            if ((fa < 0.0) != (fb < 0.0)) {
                ++out.sign_changes;
                if (zeros.size() == 1) {
                    out.roots.push_back(s.x[zeros.front()]);
                } else if (zeros.empty()) {
                    detail::refine(f, s.x[*last], s.x[i], fa, fb, opt, out.roots);
                }
            }
        }
        last = i;
        zeros.clear();
    }
    return out;
}

}  // namespace fcoupler

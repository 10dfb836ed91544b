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

// Command implementations behind the fcoupler executable. Each command
// writes results to `out`, diagnostics to `err`, and returns an exit code.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "fcoupler/capnet.hpp"
#include "fcoupler/effmodel.hpp"
#include "fcoupler/errors.hpp"
#include "fcoupler/fitkit.hpp"
#include "fcoupler/io.hpp"
#include "fcoupler/numdiag.hpp"
#include "fcoupler/transmon.hpp"

namespace fcoupler::app {

enum ExitCode : int { kOk = 0, kInputError = 2, kNoRoot = 3, kFitFailure = 4 };

enum class SweepVariable { CouplerFrequency, CouplerFlux };
enum class Quantity { G, ZZ, Both };
enum class Backend { Effective, Numeric, Both };

inline Backend parse_backend(const std::string& s) {
    if (s == "effective") return Backend::Effective;
    if (s == "numeric") return Backend::Numeric;
    if (s == "both") return Backend::Both;
    throw SchemaError("backend must be effective, numeric or both (got \"" + s + "\")");
}

struct RunConfig {
    SystemModel model;  // rates at zero coupler flux
    std::optional<CouplerTuning> tuning;

    SweepVariable variable = SweepVariable::CouplerFrequency;
    Quantity quantity = Quantity::Both;
    double lo = 0.0;
    double hi = 0.0;
    int points = 200;
    bool flux_scaled_couplings = false;

    double find_lo = 0.0;
    double find_hi = 0.0;
    std::string target = "g";
    SweepVariable find_variable = SweepVariable::CouplerFrequency;
    bool find_flux_scaled_couplings = false;

    Backend backend = Backend::Effective;
    Levels levels;
    std::optional<std::filesystem::path> output;

    ModelBuilder sweep_builder() const { return builder(variable, flux_scaled_couplings); }
    ModelBuilder find_builder() const { return builder(find_variable, find_flux_scaled_couplings); }

    ModelBuilder builder(SweepVariable var, bool flux_scaled) const {
        if (var == SweepVariable::CouplerFlux) {
            if (!tuning) throw SchemaError("coupler-flux axes need a \"coupler\" block");
            return coupler_flux_builder(model, *tuning);
        }
        if (flux_scaled) {
            if (!tuning) throw SchemaError("flux_scaled_couplings needs a \"coupler\" block");
            return flux_scaled_builder(model, *tuning);
        }
        return fixed_coupling_builder(model);
    }
};

namespace detail {

inline std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
    std::filesystem::path path(p);
    return path.is_absolute() ? path : base / path;
}

inline void read_range(const io::detail::Reader& r, double& lo, double& hi) {
    lo = r.number("lo");
    hi = r.number("hi");
    if (!(lo < hi)) r.fail("range needs lo < hi");
}

}  // namespace detail

/// Run configuration JSON. See README for the full field list.
inline RunConfig parse_run_config(const std::string& text, const std::filesystem::path& origin) {
    const auto j = io::detail::parse_json(text, origin.string());
    const io::detail::Reader r(j, "", origin.string());
    r.check_schema();
    const auto base = origin.has_parent_path() ? origin.parent_path() : std::filesystem::path(".");
    RunConfig c;

    if (r.has("netlist")) {
        const auto net = io::load_netlist(detail::resolve(base, r.string("netlist")));
        const auto d = r.object("design");
        const double fmax = d.number("coupler_max_ghz");
        const auto e = energies_exact(net);
        c.model = design_point(e, d.number("omega1_ghz"), d.number("omega2_ghz"), fmax,
                               d.boolean_or("xi_correction", true))
                      .model;
        c.tuning = CouplerTuning::from_max_frequency(e.ecc, fmax, d.number_or("asymmetry", 0.0));
    } else {
        const auto s = r.object("system");
        c.model.omega1 = s.number("omega1_ghz");
        c.model.omega2 = s.number("omega2_ghz");
        c.model.eta1 = s.number("eta1_mhz") / kMHzPerGHz;
        c.model.eta2 = s.number("eta2_mhz") / kMHzPerGHz;
        c.model.g1c = s.number("g1c_mhz") / kMHzPerGHz;
        c.model.g2c = s.number("g2c_mhz") / kMHzPerGHz;
        c.model.g12 = s.number("g12_mhz") / kMHzPerGHz;
        c.model.etac = s.number_or("etac_mhz", 0.0) / kMHzPerGHz;
        c.model.omegac = s.number_or("omegac_ghz", 0.0);
    }
    if (r.has("coupler")) {
        const auto k = r.object("coupler");
        const double ec = k.number("ec_ghz");
        const double fmax = k.number("max_frequency_ghz");
        if (!(ec > 0.0) || !(fmax > 0.0)) k.fail("ec_ghz and max_frequency_ghz must be positive");
        c.tuning = CouplerTuning::from_max_frequency(ec, fmax, k.number_or("asymmetry", 0.0));
    }
    if (c.tuning) {
        if (c.model.etac <= 0.0) c.model.etac = c.tuning->anharmonicity_at({});
        if (c.model.omegac <= 0.0) c.model.omegac = c.tuning->max_frequency();
    }
    if (!(c.model.etac > 0.0)) {
        r.fail("system.etac_mhz is required when no coupler block is given");
    }
    if (c.model.omegac <= 0.0) c.model.omegac = c.model.omega1;

    if (r.has("sweep")) {
        const auto s = r.object("sweep");
        const auto var = s.string_or("variable", "coupler-frequency");
        if (var == "coupler-frequency") {
            c.variable = SweepVariable::CouplerFrequency;
        } else if (var == "coupler-flux") {
            c.variable = SweepVariable::CouplerFlux;
        } else {
            s.fail("variable must be coupler-frequency or coupler-flux");
        }
        const auto q = s.string_or("quantity", "both");
        if (q == "g") {
            c.quantity = Quantity::G;
        } else if (q == "zz") {
            c.quantity = Quantity::ZZ;
        } else if (q == "both") {
            c.quantity = Quantity::Both;
        } else {
            s.fail("quantity must be g, zz or both");
        }
        detail::read_range(s, c.lo, c.hi);
        c.points = s.integer_or("points", 200);
        if (c.points < 2) s.fail("points must be at least 2");
        c.flux_scaled_couplings = s.boolean_or("flux_scaled_couplings", false);
    }
    if (r.has("find")) {
        const auto f = r.object("find");
        detail::read_range(f, c.find_lo, c.find_hi);
        c.target = f.string_or("target", "g");
        if (f.has("variable")) {
            const auto var = f.string("variable");
            if (var == "coupler-flux") {
                c.find_variable = SweepVariable::CouplerFlux;
            } else if (var != "coupler-frequency") {
                f.fail("variable must be coupler-frequency or coupler-flux");
            }
        }
        c.find_flux_scaled_couplings = f.boolean_or("flux_scaled_couplings", false);
    }
    if (r.has("backend")) c.backend = parse_backend(r.string("backend"));
    if (r.has("levels")) {
        const auto& lv = r.raw("levels");
        if (!lv.is_array() || lv.size() != 3 ||
            !std::all_of(lv.begin(), lv.end(), [](const auto& v) { return v.is_number_integer(); })) {
            r.fail("levels must be [n1, nc, n2] with integer entries");
        }
        c.levels = {lv[0].get<int>(), lv[1].get<int>(), lv[2].get<int>()};
        try {
            c.levels.validate();
        } catch (const DimensionError& e) {
            throw SchemaError(origin.string() + ": levels: " + e.what());
        }
    }
    if (r.has("output")) c.output = detail::resolve(base, r.string("output"));
    return c;
}

inline RunConfig load_run_config(const std::filesystem::path& path) {
    return parse_run_config(io::read_file(path), path);
}

/// Maps library exceptions onto exit codes, printing the message.
inline int guarded(const std::function<int()>& body, std::ostream& err) {
    try {
        return body();
    } catch (const NoSignChangeError& e) {
        err << "error: " << e.what() << "\n";
        return kNoRoot;
    } catch (const FitError& e) {
        err << "error: " << e.what() << "\n";
        return kFitFailure;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kInputError;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kInputError;
    }
}

// ---------------------------------------------------------------- energies

inline int cmd_energies(const std::filesystem::path& netlist, std::ostream& out, std::ostream& err,
                        double degenerate_tolerance = 1e-6) {
    const auto net = io::load_netlist(netlist);
    for (const auto& f : net.flags()) err << "note: " << f << "\n";
    const auto exact = energies_exact(net);
    std::optional<ModeEnergies> closed;
    std::string closed_problem;
    try {
        closed = net.topology() == Topology::FloatingFloating ? energies_closed_form_floating(net)
                                                              : energies_closed_form_grounded(net);
    } catch (const AssumptionViolationError& e) {
        closed_problem = e.what();
    }

    out << "topology " << to_string(net.topology()) << "\n";
    out << "quantity,exact_ghz,closed_form_ghz,relative_deviation\n";
    const std::pair<const char*, double ModeEnergies::*> rows[] = {
        {"Ec1", &ModeEnergies::ec1}, {"Ec2", &ModeEnergies::ec2}, {"Ecc", &ModeEnergies::ecc},
        {"E12", &ModeEnergies::e12}, {"E1c", &ModeEnergies::e1c}, {"E2c", &ModeEnergies::e2c}};
    for (const auto& [name, field] : rows) {
        const double x = exact.*field;
        out << name << "," << io::fmt(x) << ",";
        if (closed) {
            const double y = (*closed).*field;
            out << io::fmt(y) << ",";
            if (x != 0.0) out << io::fmt((y - x) / x);
        } else {
            out << ",";
        }
        out << "\n";
    }
    if (!closed) err << "note: closed form unavailable: " << closed_problem << "\n";
    out << "class " << to_string(classify_configuration(exact, degenerate_tolerance)) << "\n";
    return kOk;
}

// ------------------------------------------------------------------- sweep

struct SweepRow {
    double x = 0.0;
    std::optional<double> g_eff, g, zeta2, zeta34, zeta_pert, zeta_numeric;
    std::vector<std::string> warnings;
};

inline SweepRow evaluate_sweep_point(const RunConfig& c, const ModelBuilder& build, double x) {
    SweepRow row;
    row.x = x;
    auto note = [&](const char* what, const std::exception& e) {
        row.warnings.push_back(std::string(what) + ": " + e.what());
    };
    SystemModel m;
    try {
        m = build(x);
    } catch (const Error& e) {
        note("model", e);
        return row;
    }
    if (c.quantity != Quantity::ZZ) {
        try {
            const auto g = g_net(m);
            row.g_eff = g.g_eff * kMHzPerGHz;
            row.g = g.g * kMHzPerGHz;
        } catch (const Error& e) {
            note("g", e);
        }
    }
    if (c.quantity != Quantity::G) {
        if (c.backend != Backend::Numeric) {
            try {
                const auto z = zz_perturbative(m);
                row.zeta2 = z.zeta2 * kMHzPerGHz;
                row.zeta34 = z.zeta34 * kMHzPerGHz;
                row.zeta_pert = z.zeta_total * kMHzPerGHz;
            } catch (const Error& e) {
                note("zeta_pert", e);
            }
        }
        if (c.backend != Backend::Effective) {
            try {
                row.zeta_numeric = zz_numeric(m, c.levels) * kMHzPerGHz;
            } catch (const Error& e) {
                note("zeta_numeric", e);
            }
        }
    }
    return row;
}

/// Evaluates every grid point, in parallel, keeping grid order.
inline std::vector<SweepRow> run_sweep(const RunConfig& c) {
    const ModelBuilder build = c.sweep_builder();
    const auto xs = uniform_grid(c.lo, c.hi, c.points);
    std::vector<SweepRow> rows(xs.size());
    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    const std::size_t workers = std::min<std::size_t>(hw, xs.size());
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            for (std::size_t i = w; i < xs.size(); i += workers) {
                rows[i] = evaluate_sweep_point(c, build, xs[i]);
            }
        });
    }
    for (auto& t : pool) t.join();
    return rows;
}

inline std::string sweep_csv(const RunConfig& c, const std::vector<SweepRow>& rows) {
    const bool numeric = c.backend != Backend::Effective;
    std::string s = "x_value,g_eff_mhz,g_mhz,zeta2_mhz,zeta34_mhz,zeta_pert_mhz";
    if (numeric) s += ",zeta_numeric_mhz";
    s += "\n";
    auto cell = [](const std::optional<double>& v) { return v ? io::fmt(*v) : std::string(); };
    for (const auto& r : rows) {
        s += io::fmt(r.x) + "," + cell(r.g_eff) + "," + cell(r.g) + "," + cell(r.zeta2) + "," +
             cell(r.zeta34) + "," + cell(r.zeta_pert);
        if (numeric) s += "," + cell(r.zeta_numeric);
        s += "\n";
    }
    return s;
}

inline void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw SchemaError("cannot write " + path.string());
    f << text;
    if (!f) throw SchemaError("failed writing " + path.string());
}

inline int cmd_sweep(RunConfig c, std::ostream& out, std::ostream& err) {
    if (!(c.lo < c.hi)) throw SchemaError("config has no \"sweep\" block with lo < hi");
    const auto rows = run_sweep(c);
    for (const auto& r : rows) {
        for (const auto& w : r.warnings) err << "warning: x=" << io::fmt(r.x) << ": " << w << "\n";
    }
    const auto csv = sweep_csv(c, rows);
    if (c.output) {
        write_text(*c.output, csv);
    } else {
        out << csv;
    }
    return kOk;
}

// -------------------------------------------------------------------- find

inline int cmd_find(const RunConfig& c, const std::string& target, std::ostream& out,
                    std::ostream& err) {
    if (!(c.find_lo < c.find_hi)) throw SchemaError("config has no \"find\" block with lo < hi");
    const ModelBuilder build = c.find_builder();
    const char* var = c.find_variable == SweepVariable::CouplerFlux ? "coupler-flux" : "coupler-frequency";
    out << "target " << target << "\n";
    out << "variable " << var << "\n";
    out << "band " << io::fmt(c.find_lo) << " " << io::fmt(c.find_hi) << "\n";
    if (target == "g") {
        const auto z = find_zero_g(build, c.find_lo, c.find_hi);
        if (z.multiple_roots()) {
            err << "warning: " << z.roots.size() << " zero crossings in band; reporting the lowest\n";
        }
        for (double r : z.roots) out << "root " << io::fmt(r) << "\n";
        const auto m = build(z.root);
        const double ratio = std::max(std::abs(m.g1c / (m.omegac - m.omega1)),
                                      std::abs(m.g2c / (m.omegac - m.omega2)));
        out << "coupler_frequency_ghz " << io::fmt(m.omegac) << "\n";
        out << "dispersive_ratio " << io::fmt(ratio) << "\n";
        return kOk;
    }
    if (target == "zz") {
        ZZFunction zz = zz_total_perturbative;
        const Levels levels = c.levels;
        if (c.backend != Backend::Effective) {
            zz = [levels](const SystemModel& m) { return zz_numeric(m, levels); };
        }
        const auto roots = find_zero_zz(build, c.find_lo, c.find_hi, zz);
        if (roots.empty()) {
            err << "error: static ZZ has no zero in the band\n";
            return kNoRoot;
        }
        for (double r : roots) out << "root " << io::fmt(r) << "\n";
        return kOk;
    }
    throw SchemaError("target must be g or zz (got \"" + target + "\")");
}

// --------------------------------------------------------------------- fit

struct FitConfig {
    GFluxParams init;
    FreeMask mask;
    FitOptions options;
};

inline FitConfig parse_fit_config(const std::string& text, const std::string& origin) {
    const auto j = io::detail::parse_json(text, origin);
    const io::detail::Reader r(j, "", origin);
    r.check_schema();
    FitConfig c;
    const auto in = r.object("init");
    c.init.g12_mhz = in.number("g12_mhz");
    c.init.product_mhz2 = in.number("product_mhz2");
    c.init.coupler_ec_ghz = in.number("coupler_ec_ghz");
    c.init.asymmetry = in.number_or("asymmetry", 0.0);
    if (in.has("ej_sum_ghz")) {
        c.init.ej_sum_ghz = in.number("ej_sum_ghz");
    } else {
        c.init.ej_sum_ghz = ej_for_frequency(c.init.coupler_ec_ghz, in.number("coupler_max_ghz"));
    }
    if (r.has("free")) {
        const auto& f = r.raw("free");
        if (!f.is_array()) r.fail("free must be an array of parameter names");
        c.mask.free.fill(false);
        for (const auto& name : f) {
            bool found = false;
            for (std::size_t i = 0; i < GFluxParams::kCount; ++i) {
                if (name.is_string() && name.get<std::string>() == GFluxParams::name(i)) {
                    c.mask.free[i] = true;
                    found = true;
                }
            }
            if (!found) r.fail("unknown parameter in free: " + name.dump());
        }
    }
    c.options.max_simplex_iterations = r.integer_or("max_simplex_iterations", c.options.max_simplex_iterations);
    return c;
}

inline std::string fit_json(const FitResult& f) {
    std::ostringstream o;
    const auto values = f.params.to_array();
    o << "{\n  \"schema\": 1,\n";
    o << "  \"converged\": " << (f.converged ? "true" : "false") << ",\n";
    o << "  \"iterations\": " << f.iterations << ",\n";
    o << "  \"rows\": " << f.rows << ",\n";
    o << "  \"parameters\": {\n";
    for (std::size_t i = 0; i < GFluxParams::kCount; ++i) {
        o << "    \"" << GFluxParams::name(i) << "\": {\"value\": " << io::fmt(values[i])
          << ", \"stderr\": " << io::fmt(f.standard_errors[i])
          << ", \"free\": " << (f.mask.free[i] ? "true" : "false") << "}"
          << (i + 1 < GFluxParams::kCount ? "," : "") << "\n";
    }
    o << "  },\n";
    o << "  \"sqrt_abs_product_mhz\": " << io::fmt(f.sqrt_abs_product_mhz()) << ",\n";
    o << "  \"coupler_max_frequency_ghz\": " << io::fmt(f.coupler_max_frequency_ghz()) << ",\n";
    o << "  \"rms_residual_mhz\": " << io::fmt(f.rms_residual_mhz) << ",\n";
    o << "  \"objective_mhz2\": " << io::fmt(f.objective) << ",\n";
    o << "  \"covariance\": {\n    \"parameters\": [";
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < GFluxParams::kCount; ++i) {
        if (f.mask.free[i]) idx.push_back(i);
    }
    for (std::size_t k = 0; k < idx.size(); ++k) {
        o << (k ? ", " : "") << "\"" << GFluxParams::name(idx[k]) << "\"";
    }
    o << "],\n    \"matrix\": [";
    for (Eigen::Index a = 0; a < f.covariance.rows(); ++a) {
        o << (a ? ", " : "") << "[";
        for (Eigen::Index b = 0; b < f.covariance.cols(); ++b) {
            o << (b ? ", " : "") << io::fmt(f.covariance(a, b));
        }
        o << "]";
    }
    o << "]\n  },\n  \"objective_trace\": [";
    for (std::size_t k = 0; k < f.objective_trace.size(); ++k) {
        o << (k ? ", " : "") << io::fmt(f.objective_trace[k]);
    }
    o << "]\n}\n";
    return o.str();
}

inline int cmd_fit(const std::filesystem::path& data, const std::filesystem::path& config,
                   const std::optional<std::filesystem::path>& output, std::ostream& out,
                   std::ostream& err) {
    const auto dataset = io::load_dataset_csv(data);
    const auto cfg = parse_fit_config(io::read_file(config), config.string());
    const auto result = fit_g_vs_flux(dataset, cfg.init, cfg.mask, cfg.options);
    if (!result.converged) err << "warning: fit did not converge; reporting best parameters found\n";
    const auto text = fit_json(result);
    if (output) {
        write_text(*output, text);
    } else {
        out << text;
    }
    return result.converged ? kOk : kFitFailure;
}

}  // namespace fcoupler::app

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

// fcoupler command-line front end.

#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "fcoupler/app.hpp"

int main(int argc, char** argv) {
    using namespace fcoupler;
    CLI::App cli{"Tunable-coupler circuit analysis: energies, sweeps, zero points, fits"};
    cli.require_subcommand(1);

    std::string netlist;
    auto* energies = cli.add_subcommand("energies", "Exact and closed-form mode energies of a netlist");
    energies->add_option("netlist", netlist, "Netlist JSON")->required();
    double degenerate_tol = 1e-6;
    energies->add_option("--degenerate-tolerance", degenerate_tol,
                         "|E1c*E2c| below which the layout is Degenerate, GHz^2");

    std::string config, out_path, backend, levels;
    auto* sweep = cli.add_subcommand("sweep", "Sweep g and ZZ over the coupler frequency or flux");
    sweep->add_option("--config", config, "Run configuration JSON")->required();
    sweep->add_option("--out", out_path, "Output CSV (stdout if omitted)");
    sweep->add_option("--backend", backend, "effective|numeric|both");
    sweep->add_option("--levels", levels, "Fock levels n1,nc,n2 for the numeric backend");

    std::string find_config, target, find_backend, find_levels;
    auto* find = cli.add_subcommand("find", "Locate coupler bias points where g or ZZ vanishes");
    find->add_option("--config", find_config, "Run configuration JSON")->required();
    find->add_option("--target", target, "g|zz");
    find->add_option("--backend", find_backend, "effective|numeric (zz target)");
    find->add_option("--levels", find_levels, "Fock levels n1,nc,n2 for the numeric backend");

    std::string data, fit_config, fit_out;
    auto* fit = cli.add_subcommand("fit", "Fit g versus coupler flux");
    fit->add_option("--data", data, "Dataset CSV")->required();
    fit->add_option("--config", fit_config, "Initial guesses and free parameters")->required();
    fit->add_option("--out", fit_out, "Output JSON (stdout if omitted)");

    try {
        cli.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = cli.exit(e);
        return code == 0 ? 0 : app::kInputError;
    }

    auto apply_overrides = [](app::RunConfig& c, const std::string& b, const std::string& l) {
        if (!b.empty()) c.backend = app::parse_backend(b);
        if (!l.empty()) c.levels = io::parse_levels(l);
    };

    return app::guarded(
        [&]() -> int {
            if (energies->parsed()) return app::cmd_energies(netlist, std::cout, std::cerr, degenerate_tol);
            if (sweep->parsed()) {
                auto c = app::load_run_config(config);
                apply_overrides(c, backend, levels);
                if (!out_path.empty()) c.output = out_path;
                return app::cmd_sweep(c, std::cout, std::cerr);
            }
            if (find->parsed()) {
                auto c = app::load_run_config(find_config);
                apply_overrides(c, find_backend, find_levels);
                return app::cmd_find(c, target.empty() ? c.target : target, std::cout, std::cerr);
            }
            std::optional<std::filesystem::path> o;
            if (!fit_out.empty()) o = fit_out;
            return app::cmd_fit(data, fit_config, o, std::cout, std::cerr);
        },
        std::cerr);
}

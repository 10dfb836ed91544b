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

// File formats: netlist and run-configuration JSON, g(Phi) dataset CSV, and
// fixed-precision number formatting shared by every writer.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "fcoupler/capnet.hpp"
#include "fcoupler/errors.hpp"
#include "fcoupler/fitkit.hpp"
#include "fcoupler/numdiag.hpp"

namespace fcoupler::io {

using json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;

/// %.9g, the single number format of all emitted files.
inline std::string fmt(double v) {
    char buf[32];
    if (v == 0.0) v = 0.0;  // no "-0"
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

inline std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw SchemaError("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

namespace detail {

inline json parse_json(const std::string& text, const std::string& origin) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        // Translate the byte offset into a line and column.
        std::size_t line = 1, col = 1;
        const std::size_t stop = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
        for (std::size_t i = 0; i < stop; ++i) {
            if (text[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        std::ostringstream os;
        os << origin << ":" << line << ":" << col << ": malformed JSON";
        throw SchemaError(os.str());
    }
}

/// Navigates a JSON object while remembering the path for diagnostics.
class Reader {
public:
    Reader(const json& j, std::string path, std::string origin)
        : j_(j), path_(std::move(path)), origin_(std::move(origin)) {
        if (!j_.is_object()) fail("expected an object");
    }

    [[noreturn]] void fail(const std::string& what) const {
        throw SchemaError(origin_ + ": " + (path_.empty() ? std::string("<root>") : path_) + ": " +
                          what);
    }

    bool has(const std::string& key) const { return j_.contains(key) && !j_.at(key).is_null(); }
    std::string child_path(const std::string& key) const {
        return path_.empty() ? key : path_ + "." + key;
    }

    const json& raw(const std::string& key) const {
        if (!has(key)) Reader(j_, child_path(key), origin_).fail("missing required field");
        return j_.at(key);
    }

    double number(const std::string& key) const {
        const json& v = raw(key);
        if (!v.is_number()) Reader(j_, child_path(key), origin_).fail("expected a number");
        return v.get<double>();
    }
    double number_or(const std::string& key, double fallback) const {
        return has(key) ? number(key) : fallback;
    }
    std::optional<double> optional_number(const std::string& key) const {
        if (!has(key)) return std::nullopt;
        return number(key);
    }
    int integer(const std::string& key) const {
        const json& v = raw(key);
        if (!v.is_number_integer()) Reader(j_, child_path(key), origin_).fail("expected an integer");
        return v.get<int>();
    }
    int integer_or(const std::string& key, int fallback) const {
        return has(key) ? integer(key) : fallback;
    }
    std::string string(const std::string& key) const {
        const json& v = raw(key);
        if (!v.is_string()) Reader(j_, child_path(key), origin_).fail("expected a string");
        return v.get<std::string>();
    }
    std::string string_or(const std::string& key, const std::string& fallback) const {
        return has(key) ? string(key) : fallback;
    }
    bool boolean_or(const std::string& key, bool fallback) const {
        if (!has(key)) return fallback;
        const json& v = j_.at(key);
        if (!v.is_boolean()) Reader(j_, child_path(key), origin_).fail("expected true or false");
        return v.get<bool>();
    }
    Reader object(const std::string& key) const { return Reader(raw(key), child_path(key), origin_); }

    void check_schema() const {
        if (has("schema") && (!j_.at("schema").is_number_integer() ||
                              j_.at("schema").get<int>() != kSchemaVersion)) {
            Reader(j_, child_path("schema"), origin_)
                .fail("unsupported schema version (expected " + std::to_string(kSchemaVersion) + ")");
        }
    }

    const json& value() const { return j_; }
    const std::string& path() const { return path_; }
    const std::string& origin() const { return origin_; }

private:
    const json& j_;
    std::string path_;
    std::string origin_;
};

}  // namespace detail

inline Topology parse_topology(const std::string& s, const detail::Reader& ctx) {
    if (s == "floating-floating") return Topology::FloatingFloating;
    if (s == "grounded-floating") return Topology::GroundedFloating;
    ctx.fail("topology must be \"floating-floating\" or \"grounded-floating\", got \"" + s + "\"");
}

/// Netlist JSON: {"schema": 1, "topology": ..., "capacitors": [{"a", "b", "fF"}]}.
/// The schema field is optional; when present it must be 1.
inline CapNetwork parse_netlist(const std::string& text, const std::string& origin = "netlist") {
    const json j = detail::parse_json(text, origin);
    if (!j.is_object()) throw SchemaError(origin + ": <root>: expected an object");
    detail::Reader r(j, "", origin);
    r.check_schema();
    const Topology topo = parse_topology(r.string("topology"), detail::Reader(j, "topology", origin));
    const json& caps = r.raw("capacitors");
    if (!caps.is_array()) detail::Reader(j, "capacitors", origin).fail("expected an array");
    std::vector<Capacitor> list;
    for (std::size_t i = 0; i < caps.size(); ++i) {
        const std::string path = "capacitors[" + std::to_string(i) + "]";
        if (!caps[i].is_object()) throw SchemaError(origin + ": " + path + ": expected an object");
        detail::Reader c(caps[i], path, origin);
        list.push_back({c.integer("a"), c.integer("b"), c.number("fF")});
    }
    try {
        return CapNetwork(topo, std::move(list));
    } catch (const InvalidNetworkError& e) {
        throw SchemaError(origin + ": " + e.what());
    }
}

inline CapNetwork load_netlist(const std::filesystem::path& path) {
    return parse_netlist(read_file(path), path.string());
}

/// g(Phi) dataset CSV with header phi_over_phi0,g_mhz,sign,omega1_ghz,omega2_ghz.
/// The sign column may be empty on any row, or left out entirely.
inline GFluxDataset parse_dataset_csv(const std::string& text, const std::string& origin = "dataset") {
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    auto split = [](const std::string& s) {
        std::vector<std::string> out;
        std::string cell;
        std::istringstream ls(s);
        while (std::getline(ls, cell, ',')) out.push_back(cell);
        if (!s.empty() && s.back() == ',') out.emplace_back();
        return out;
    };
    auto trim = [](std::string s) {
        const auto a = s.find_first_not_of(" \t\r");
        const auto b = s.find_last_not_of(" \t\r");
        return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
    };
    auto where = [&](int l) { return origin + ":" + std::to_string(l) + ": "; };

    std::vector<std::string> header;
    while (std::getline(in, line)) {
        ++lineno;
        if (!trim(line).empty()) {
            header = split(trim(line));
            break;
        }
    }
    for (auto& h : header) h = trim(h);
    const bool with_sign = header == std::vector<std::string>{"phi_over_phi0", "g_mhz", "sign",
                                                             "omega1_ghz", "omega2_ghz"};
    const bool without_sign =
        header == std::vector<std::string>{"phi_over_phi0", "g_mhz", "omega1_ghz", "omega2_ghz"};
    if (!with_sign && !without_sign) {
        throw SchemaError(where(lineno) +
                          "header must be phi_over_phi0,g_mhz,sign,omega1_ghz,omega2_ghz");
    }

    auto number = [&](const std::string& cell, const char* field) {
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(cell, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || used != cell.size()) {
            throw SchemaError(where(lineno) + field + ": expected a number, got \"" + cell + "\"");
        }
        return v;
    };

    GFluxDataset d;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty()) continue;
        auto cells = split(trim(line));
        for (auto& c : cells) c = trim(c);
        if (cells.size() != header.size()) {
            throw SchemaError(where(lineno) + "expected " + std::to_string(header.size()) +
                              " fields, got " + std::to_string(cells.size()));
        }
        GFluxRow row;
        row.phi_over_phi0 = number(cells[0], "phi_over_phi0");
        row.g_mhz = std::abs(number(cells[1], "g_mhz"));
        std::size_t k = 2;
        if (with_sign) {
            if (!cells[2].empty()) {
                const double s = number(cells[2], "sign");
                if (s != 1.0 && s != -1.0) throw SchemaError(where(lineno) + "sign: expected +1, -1 or empty");
                row.sign = static_cast<int>(s);
            }
            k = 3;
        }
        row.omega1_ghz = number(cells[k], "omega1_ghz");
        row.omega2_ghz = number(cells[k + 1], "omega2_ghz");
        d.rows.push_back(row);
    }
    return d;
}

inline GFluxDataset load_dataset_csv(const std::filesystem::path& path) {
    return parse_dataset_csv(read_file(path), path.string());
}

inline std::string dataset_csv(const GFluxDataset& d) {
    std::string out = "phi_over_phi0,g_mhz,sign,omega1_ghz,omega2_ghz\n";
    for (const auto& r : d.rows) {
        out += fmt(r.phi_over_phi0) + "," + fmt(r.g_mhz) + "," +
               (r.sign ? std::to_string(*r.sign) : std::string()) + "," + fmt(r.omega1_ghz) + "," +
               fmt(r.omega2_ghz) + "\n";
    }
    return out;
}

inline Levels parse_levels(const std::string& s) {
    std::vector<int> v;
    std::istringstream in(s);
    std::string cell;
    while (std::getline(in, cell, ',')) {
        std::size_t used = 0;
        int n = 0;
        try {
            n = std::stoi(cell, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || used != cell.size()) {
            throw SchemaError("levels must be n1,nc,n2 (got \"" + s + "\")");
        }
        v.push_back(n);
    }
    if (v.size() != 3) throw SchemaError("levels must be n1,nc,n2 (got \"" + s + "\")");
    Levels l{v[0], v[1], v[2]};
    try {
        l.validate();
    } catch (const DimensionError& e) {
        throw SchemaError(e.what());
    }
    return l;
}

}  // namespace fcoupler::io

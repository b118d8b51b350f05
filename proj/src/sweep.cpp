// SPDX-License-Identifier: Apache-2.0
//
// nwss-mimo  Capacity analysis for spatially non-stationary massive MIMO channels
// Copyright (C) 2026 The nwss-mimo authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include "nwss/sweep.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "nwss/capacity_mc.hpp"

namespace nwss {

namespace {

std::string fmt17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

int as_positive_int(double v, const char* what) {
    const double r = std::round(v);
    if (std::abs(v - r) > 1e-9 || r < 1.0)
        throw std::invalid_argument(std::string(what) + " must be a positive integer");
    return static_cast<int>(r);
}

std::string sanitize(std::string msg) {
    for (auto& ch : msg)
        if (ch == ',' || ch == '\n') ch = ';';
    return msg;
}

}  // namespace

std::string to_string(SweepParam p) {
    switch (p) {
        case SweepParam::rho_p: return "rho_p";
        case SweepParam::s_p: return "s_p";
        case SweepParam::g: return "g";
        case SweepParam::snr_db: return "snr_db";
        case SweepParam::n_joint: return "n_joint";
        case SweepParam::m_fixed_k: return "m_fixed_k";
    }
    return "unknown";
}

SweepParam sweep_param_from_string(const std::string& s) {
    if (s == "rho_p") return SweepParam::rho_p;
    if (s == "s_p") return SweepParam::s_p;
    if (s == "g") return SweepParam::g;
    if (s == "snr_db") return SweepParam::snr_db;
    if (s == "n_joint") return SweepParam::n_joint;
    if (s == "m_fixed_k") return SweepParam::m_fixed_k;
    throw std::invalid_argument("unknown sweep parameter '" + s + "'");
}

std::string to_string(SweepMethod m) {
    switch (m) {
        case SweepMethod::mc_capacity: return "mc_capacity";
        case SweepMethod::mc_jensen: return "mc_jensen";
        case SweepMethod::mmse_rate: return "mmse_rate";
        case SweepMethod::closed_form: return "closed_form";
        case SweepMethod::high_snr: return "high_snr";
        case SweepMethod::eigen_spread: return "eigen_spread";
    }
    return "unknown";
}

SweepMethod sweep_method_from_string(const std::string& s) {
    if (s == "mc_capacity") return SweepMethod::mc_capacity;
    if (s == "mc_jensen") return SweepMethod::mc_jensen;
    if (s == "mmse_rate") return SweepMethod::mmse_rate;
    if (s == "closed_form") return SweepMethod::closed_form;
    if (s == "high_snr") return SweepMethod::high_snr;
    if (s == "eigen_spread") return SweepMethod::eigen_spread;
    throw std::invalid_argument("unknown sweep method '" + s + "'");
}

ScenarioConfig apply_sweep_value(const ScenarioConfig& base, SweepParam param, double value) {
    ScenarioConfig c = base;
    switch (param) {
        case SweepParam::rho_p: {
            if (value < 0.0 || value > 1.0)
                throw std::invalid_argument("rho_p grid value must be in [0, 1]");
            for (auto& rp : c.rho_p_per_group) rp = value;
            c.rho_w = 1.0 - value;
            break;
        }
        case SweepParam::s_p: {
            const int sp = value == 0.0 ? 0 : as_positive_int(value, "s_p");
            if (sp > c.S) throw std::invalid_argument("s_p grid value exceeds S");
            if (sp == 0) {
                c.g = 0;
                c.s_p_per_group.clear();
                c.r_per_group.clear();
                c.rho_p_per_group.clear();
                c.s_w = c.S;
                c.rho_w = 1.0;
            } else {
                const int g = base.g > 0 ? base.g : 1;
                if (sp % g != 0) throw std::invalid_argument("s_p grid value must be divisible by g");
                c.g = g;
                c.s_p_per_group.assign(g, sp / g);
                if (static_cast<int>(c.r_per_group.size()) != g) {
                    if (c.M % g != 0)
                        throw std::invalid_argument("cannot form equal sub-arrays: g does not divide M");
                    c.r_per_group.assign(g, c.M / g);
                }
                c.s_w = c.S - sp;
                const double rho_p = static_cast<double>(sp) / c.S;
                c.rho_p_per_group.assign(g, rho_p);
                c.rho_w = c.s_w > 0 ? 1.0 - rho_p : 0.0;
            }
            break;
        }
        case SweepParam::g: {
            const int g = as_positive_int(value, "g");
            const int sp = base.s_p_total();
            if (sp == 0) throw std::invalid_argument("g sweep needs PV clusters in the base scenario");
            if (c.M % g != 0) throw std::invalid_argument("g must divide M");
            if (sp % g != 0) throw std::invalid_argument("g must divide the PV cluster count");
            const double rho_p = base.g > 0 ? base.rho_p_per_group[0] : 1.0;
            c.g = g;
            c.r_per_group.assign(g, c.M / g);
            c.s_p_per_group.assign(g, sp / g);
            c.rho_p_per_group.assign(g, rho_p);
            break;
        }
        case SweepParam::snr_db: {
            c.snr_mu = std::pow(10.0, value / 10.0);
            break;
        }
        case SweepParam::n_joint: {
            const int n = as_positive_int(value, "n_joint");
            if (base.all_wv()) {
                c.M = c.K = c.S = n;
                c.s_w = n;
            } else {
                if (!base.all_pv())
                    throw std::invalid_argument("n_joint sweep needs an all-PV or all-WV base");
                const int gb = base.g;
                if (base.M % gb != 0) throw std::invalid_argument("base g must divide M");
                const int cgrp = base.M / gb;
                if (n % cgrp != 0)
                    throw std::invalid_argument("n_joint value must be divisible by the group size");
                const int g = n / cgrp;
                c.M = c.K = c.S = n;
                c.g = g;
                c.r_per_group.assign(g, cgrp);
                c.s_p_per_group.assign(g, cgrp);
                c.rho_p_per_group.assign(g, base.rho_p_per_group[0]);
                c.s_w = 0;
                c.rho_w = 0.0;
            }
            // hold the total SNR mu*K fixed while K grows
            c.snr_mu = base.snr_mu * base.K / n;
            break;
        }
        case SweepParam::m_fixed_k: {
            const int m = as_positive_int(value, "m_fixed_k");
            if (base.all_wv()) {
                c.M = c.S = m;
                c.s_w = m;
            } else {
                if (!base.all_pv())
                    throw std::invalid_argument("m_fixed_k sweep needs an all-PV or all-WV base");
                const int gb = base.g;
                if (base.M % gb != 0) throw std::invalid_argument("base g must divide M");
                const int cgrp = base.M / gb;
                if (m % cgrp != 0)
                    throw std::invalid_argument("m_fixed_k value must be divisible by the group size");
                const int g = m / cgrp;
                c.M = c.S = m;
                c.g = g;
                c.r_per_group.assign(g, cgrp);
                c.s_p_per_group.assign(g, cgrp);
                c.rho_p_per_group.assign(g, base.rho_p_per_group[0]);
                c.s_w = 0;
                c.rho_w = 0.0;
            }
            // transmit power reduced with the array size
            c.snr_mu = base.snr_mu * base.M / m;
            break;
        }
    }
    c.validate();
    return c;
}

std::vector<ResultRow> run_sweep(const SweepSpec& spec, const std::string& out_path) {
    spec.base.validate();
    std::vector<ResultRow> rows;
    for (double value : spec.grid) {
        for (SweepMethod method : spec.methods) {
            ResultRow row;
            row.sweep_param = to_string(spec.param);
            row.value = value;
            row.method = to_string(method);
            const auto t0 = std::chrono::steady_clock::now();
            try {
                const ScenarioConfig cfg = apply_sweep_value(spec.base, spec.param, value);
                const CorrelationBundle bundle = build_bundle(cfg);
                switch (method) {
                    case SweepMethod::mc_capacity: {
                        const auto r = mc_capacity(cfg, bundle, spec.trials, spec.seed, spec.threads);
                        row.value_bits = r.value;
                        row.std_error = r.std_error;
                        row.trials = r.trials;
                        break;
                    }
                    case SweepMethod::mc_jensen: {
                        const auto r = mc_jensen(cfg, bundle, spec.trials, spec.seed, spec.threads);
                        row.value_bits = r.value;
                        row.std_error = r.std_error;
                        row.trials = r.trials;
                        break;
                    }
                    case SweepMethod::mmse_rate: {
                        const auto r = mmse_sum_rate(cfg, bundle, spec.trials, spec.seed, spec.threads);
                        row.value_bits = r.value;
                        row.std_error = r.std_error;
                        row.trials = r.trials;
                        break;
                    }
                    case SweepMethod::closed_form:
                        row.value_bits = closed_form_bound(cfg, bundle, spec.budget).value;
                        break;
                    case SweepMethod::high_snr:
                        row.value_bits = high_snr_bound(cfg, bundle).value;
                        break;
                    case SweepMethod::eigen_spread: {
                        const Eigen::VectorXd ev = eigen_spread(cfg, bundle);
                        const double lo = ev[ev.size() - 1];
                        row.value_bits = lo > 0.0 ? ev[0] / lo
                                                  : std::numeric_limits<double>::infinity();
                        break;
                    }
                }
            } catch (const std::exception& e) {
                row.value_bits = std::numeric_limits<double>::quiet_NaN();
                row.error = sanitize(e.what());
            }
            const auto t1 = std::chrono::steady_clock::now();
            row.wall_time_ms =
                spec.record_timing
                    ? std::chrono::duration_cast<std::chrono::duration<double, std::milli>>(t1 - t0)
                          .count()
                    : 0.0;
            rows.push_back(std::move(row));
        }
    }
    if (!out_path.empty()) write_csv(rows, out_path);
    return rows;
}

std::string to_csv(const std::vector<ResultRow>& rows) {
    std::ostringstream out;
    out << "sweep_param,value,method,value_bits,std_error,trials,wall_time_ms,error\n";
    for (const auto& r : rows) {
        out << r.sweep_param << ',' << fmt17(r.value) << ',' << r.method << ','
            << fmt17(r.value_bits) << ',';
        if (r.std_error) out << fmt17(*r.std_error);
        out << ',';
        if (r.trials) out << *r.trials;
        out << ',' << fmt17(r.wall_time_ms) << ',' << r.error << '\n';
    }
    return out.str();
}

void write_csv(const std::vector<ResultRow>& rows, const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open '" + path + "' for writing");
    f << to_csv(rows);
}

std::vector<ResultRow> parse_csv_string(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) throw std::invalid_argument("empty CSV");
    if (line != "sweep_param,value,method,value_bits,std_error,trials,wall_time_ms,error")
        throw std::invalid_argument("unexpected CSV header: " + line);
    std::vector<ResultRow> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> f;
        std::size_t start = 0;
        for (int i = 0; i < 7; ++i) {
            const std::size_t pos = line.find(',', start);
            if (pos == std::string::npos) throw std::invalid_argument("short CSV row: " + line);
            f.push_back(line.substr(start, pos - start));
            start = pos + 1;
        }
        f.push_back(line.substr(start));
        ResultRow r;
        r.sweep_param = f[0];
        r.value = std::stod(f[1]);
        r.method = f[2];
        r.value_bits = std::stod(f[3]);
        if (!f[4].empty()) r.std_error = std::stod(f[4]);
        if (!f[5].empty()) r.trials = std::stoll(f[5]);
        r.wall_time_ms = std::stod(f[6]);
        r.error = f[7];
        rows.push_back(std::move(r));
    }
    return rows;
}

std::vector<ResultRow> read_csv(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << f.rdbuf();
    return parse_csv_string(ss.str());
}

void emit_eigen(const ScenarioConfig& cfg, const CorrelationBundle& bundle,
                const std::string& out_path) {
    const Eigen::VectorXd ev = eigen_spread(cfg, bundle);
    std::ofstream f(out_path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open '" + out_path + "' for writing");
    f << "index,eigenvalue\n";
    for (Eigen::Index i = 0; i < ev.size(); ++i)
        f << (i + 1) << ',' << fmt17(ev[i]) << '\n';
}

ScenarioFile load_scenario_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::invalid_argument("cannot open config file '" + path + "'");
    nlohmann::json j = nlohmann::json::parse(f);
    if (!j.is_object()) throw std::invalid_argument("config file must hold a JSON object");

    ScenarioFile out;
    nlohmann::json sweep_block;
    if (j.contains("sweep")) {
        sweep_block = j.at("sweep");
        j.erase("sweep");
    }
    out.scenario = ScenarioConfig::from_json(j);
    if (!sweep_block.is_null()) {
        if (!sweep_block.is_object()) throw std::invalid_argument("'sweep' must be an object");
        SweepSpec spec;
        spec.base = out.scenario;
        for (const auto& item : sweep_block.items()) {
            const std::string& key = item.key();
            if (key == "param") spec.param = sweep_param_from_string(item.value().get<std::string>());
            else if (key == "grid") spec.grid = item.value().get<std::vector<double>>();
            else if (key == "methods") {
                for (const auto& m : item.value())
                    spec.methods.push_back(sweep_method_from_string(m.get<std::string>()));
            } else if (key == "trials") spec.trials = item.value().get<std::int64_t>();
            else if (key == "seed") spec.seed = item.value().get<std::uint64_t>();
            else if (key == "budget") spec.budget = item.value().get<std::uint64_t>();
            else throw std::invalid_argument("unknown sweep key '" + key + "'");
        }
        out.sweep = std::move(spec);
    }
    return out;
}

}  // namespace nwss

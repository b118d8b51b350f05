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

#include "nwss/scenario.hpp"

#include <cmath>
#include <numeric>
#include <set>
#include <stdexcept>

namespace nwss {

namespace {

const std::set<std::string> kScenarioKeys = {
    "M", "K", "S", "g", "s_p_per_group", "r_per_group", "s_w",
    "rho_p_per_group", "rho_w", "a_p", "a_w", "a_s", "snr_mu"};

cxd coeff_from_json(const nlohmann::json& v, const std::string& name) {
    if (v.is_number()) return cxd(v.get<double>(), 0.0);
    if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number())
        return cxd(v[0].get<double>(), v[1].get<double>());
    throw std::invalid_argument("field '" + name + "' must be a number or a [re, im] pair");
}

nlohmann::json coeff_to_json(cxd a) {
    if (a.imag() == 0.0) return a.real();
    return nlohmann::json::array({a.real(), a.imag()});
}

}  // namespace

std::string to_string(Method m) {
    switch (m) {
        case Method::mc_capacity: return "mc_capacity";
        case Method::mc_jensen: return "mc_jensen";
        case Method::mmse_rate: return "mmse_rate";
        case Method::closed_form: return "closed_form";
        case Method::high_snr: return "high_snr";
        case Method::asymptotic: return "asymptotic";
    }
    return "unknown";
}

Method method_from_string(const std::string& s) {
    if (s == "mc_capacity") return Method::mc_capacity;
    if (s == "mc_jensen") return Method::mc_jensen;
    if (s == "mmse_rate") return Method::mmse_rate;
    if (s == "closed_form") return Method::closed_form;
    if (s == "high_snr") return Method::high_snr;
    if (s == "asymptotic") return Method::asymptotic;
    throw std::invalid_argument("unknown method '" + s + "'");
}

int ScenarioConfig::s_p_total() const {
    return std::accumulate(s_p_per_group.begin(), s_p_per_group.end(), 0);
}

bool ScenarioConfig::energy_normalized() const {
    for (double rp : rho_p_per_group)
        if (std::abs(rp + rho_w - 1.0) > 1e-12) return false;
    if (g == 0) return std::abs(rho_w - 1.0) <= 1e-12;
    return true;
}

void ScenarioConfig::validate() const {
    if (M < 1 || K < 1 || S < 1) throw std::invalid_argument("M, K, S must be >= 1");
    if (g < 0) throw std::invalid_argument("g must be >= 0");
    if (s_w < 0) throw std::invalid_argument("s_w must be >= 0");
    if (static_cast<int>(s_p_per_group.size()) != g ||
        static_cast<int>(r_per_group.size()) != g ||
        static_cast<int>(rho_p_per_group.size()) != g)
        throw std::invalid_argument("group vectors must all have length g");
    for (int s : s_p_per_group)
        if (s < 1) throw std::invalid_argument("s_p_per_group entries must be >= 1");
    for (int r : r_per_group)
        if (r < 1) throw std::invalid_argument("r_per_group entries must be >= 1");
    for (double rp : rho_p_per_group)
        if (!(rp >= 0.0) || !std::isfinite(rp))
            throw std::invalid_argument("rho_p_per_group entries must be nonnegative");
    if (!(rho_w >= 0.0) || !std::isfinite(rho_w))
        throw std::invalid_argument("rho_w must be nonnegative");
    if (s_p_total() + s_w != S)
        throw std::invalid_argument("sum(s_p_per_group) + s_w must equal S");
    if (g > 0) {
        int rsum = std::accumulate(r_per_group.begin(), r_per_group.end(), 0);
        if (rsum != M) throw std::invalid_argument("sum(r_per_group) must equal M");
    }
    if (s_w == 0 && rho_w > 0.0)
        throw std::invalid_argument("s_w = 0 requires rho_w = 0");
    if (std::abs(a_p) > 1.0 + 1e-15 || std::abs(a_w) > 1.0 + 1e-15 || std::abs(a_s) > 1.0 + 1e-15)
        throw std::invalid_argument("correlation coefficients must have modulus <= 1");
    if (!(snr_mu >= 0.0) || !std::isfinite(snr_mu))
        throw std::invalid_argument("snr_mu must be a nonnegative finite real");
}

ScenarioConfig ScenarioConfig::from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw std::invalid_argument("scenario must be a JSON object");
    for (const auto& item : j.items()) {
        if (!kScenarioKeys.count(item.key()))
            throw std::invalid_argument("unknown scenario key '" + item.key() + "'");
    }
    ScenarioConfig c;
    auto need = [&](const char* key) -> const nlohmann::json& {
        auto it = j.find(key);
        if (it == j.end()) throw std::invalid_argument(std::string("missing scenario key '") + key + "'");
        return *it;
    };
    c.M = need("M").get<int>();
    c.K = need("K").get<int>();
    c.S = need("S").get<int>();
    c.g = need("g").get<int>();
    c.s_p_per_group = need("s_p_per_group").get<std::vector<int>>();
    c.r_per_group = need("r_per_group").get<std::vector<int>>();
    c.s_w = need("s_w").get<int>();
    c.rho_p_per_group = need("rho_p_per_group").get<std::vector<double>>();
    c.rho_w = need("rho_w").get<double>();
    c.a_p = coeff_from_json(need("a_p"), "a_p");
    c.a_w = coeff_from_json(need("a_w"), "a_w");
    c.a_s = coeff_from_json(need("a_s"), "a_s");
    c.snr_mu = need("snr_mu").get<double>();
    c.validate();
    return c;
}

nlohmann::json ScenarioConfig::to_json() const {
    nlohmann::json j;
    j["M"] = M;
    j["K"] = K;
    j["S"] = S;
    j["g"] = g;
    j["s_p_per_group"] = s_p_per_group;
    j["r_per_group"] = r_per_group;
    j["s_w"] = s_w;
    j["rho_p_per_group"] = rho_p_per_group;
    j["rho_w"] = rho_w;
    j["a_p"] = coeff_to_json(a_p);
    j["a_w"] = coeff_to_json(a_w);
    j["a_s"] = coeff_to_json(a_s);
    j["snr_mu"] = snr_mu;
    return j;
}

}  // namespace nwss

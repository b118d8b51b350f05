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

#include <CLI11.hpp>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "nwss/capacity_mc.hpp"
#include "nwss/sweep.hpp"
#include "nwss/verify.hpp"

namespace {

// exit codes: 0 success, 1 validation error, 2 verification failure,
// 3 budget exceeded
constexpr int kOk = 0;
constexpr int kValidationError = 1;
constexpr int kVerifyFailure = 2;
constexpr int kBudgetExceeded = 3;

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) out.push_back(item);
    return out;
}

void print_result(const std::string& name, const nwss::CapacityResult& r, double ms) {
    std::printf("%-12s %.10g bits/s/Hz", name.c_str(), r.value);
    if (r.std_error) std::printf("  +- %.3g", *r.std_error);
    if (r.trials) std::printf("  (trials=%lld)", static_cast<long long>(*r.trials));
    std::printf("  [%.1f ms]\n", ms);
}

struct Timer {
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
    double ms() const {
        return std::chrono::duration_cast<std::chrono::duration<double, std::milli>>(
                   std::chrono::steady_clock::now() - t0)
            .count();
    }
};

nwss::ResultRow make_row(const nwss::ScenarioConfig& cfg, const std::string& method,
                         const nwss::CapacityResult& r, double ms) {
    nwss::ResultRow row;
    row.sweep_param = "snr_db";
    row.value = 10.0 * std::log10(cfg.snr_mu);
    row.method = method;
    row.value_bits = r.value;
    row.std_error = r.std_error;
    row.trials = r.trials;
    row.wall_time_ms = ms;
    return row;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"capacity analysis for spatially non-stationary massive MIMO channels"};
    app.require_subcommand(1);

    std::string config_path, out_path, param_str, grid_str, methods_str;
    long long trials = 10000;
    std::uint64_t seed = 1;
    std::uint64_t budget = nwss::kDefaultBudget;
    unsigned threads = 0;
    std::string level_str = "fast";
    bool no_timing = false;

    auto add_common = [&](CLI::App* sub, bool needs_config) {
        auto* opt = sub->add_option("--config", config_path, "scenario JSON file");
        if (needs_config) opt->required();
        sub->add_option("--threads", threads, "worker threads (0 = hardware)");
    };

    auto* cap = app.add_subcommand("capacity", "Monte Carlo capacity estimates");
    add_common(cap, true);
    cap->add_option("--trials", trials, "Monte Carlo trials");
    cap->add_option("--seed", seed, "master RNG seed");
    cap->add_option("--methods", methods_str, "subset of mc_capacity,mc_jensen,mmse_rate");
    cap->add_option("--out", out_path, "write results as CSV");

    auto* bound = app.add_subcommand("bound", "closed-form capacity bounds");
    add_common(bound, true);
    bound->add_option("--budget", budget, "principal-minor term budget");
    bound->add_option("--methods", methods_str, "subset of closed_form,high_snr,c_max");
    bound->add_option("--out", out_path, "write results as CSV");

    auto* sweep = app.add_subcommand("sweep", "evaluate methods over a parameter grid");
    add_common(sweep, true);
    sweep->add_option("--param", param_str, "rho_p|s_p|g|snr_db|n_joint|m_fixed_k");
    sweep->add_option("--grid", grid_str, "comma-separated grid values");
    sweep->add_option("--methods", methods_str,
                      "subset of mc_capacity,mc_jensen,mmse_rate,closed_form,high_snr,eigen_spread");
    sweep->add_option("--trials", trials, "Monte Carlo trials per grid point");
    sweep->add_option("--seed", seed, "master RNG seed (common random numbers)");
    sweep->add_option("--budget", budget, "principal-minor term budget");
    sweep->add_option("--out", out_path, "output CSV path")->required();
    sweep->add_flag("--no-timing", no_timing, "write 0 for wall_time_ms (byte-stable output)");

    auto* eigen = app.add_subcommand("eigen", "receiver-correlation eigenvalue spread");
    add_common(eigen, true);
    eigen->add_option("--out", out_path, "output CSV path")->required();

    auto* verify = app.add_subcommand("verify", "run the verification suite");
    add_common(verify, false);
    verify->add_option("--level", level_str, "fast|full")
        ->check(CLI::IsMember({"fast", "full"}));

    CLI11_PARSE(app, argc, argv);

    try {
        if (cap->parsed()) {
            const auto file = nwss::load_scenario_file(config_path);
            const auto& cfg = file.scenario;
            const auto bundle = nwss::build_bundle(cfg);
            auto methods = split_list(methods_str);
            if (methods.empty()) methods = {"mc_capacity"};
            std::vector<nwss::ResultRow> rows;
            for (const auto& m : methods) {
                Timer t;
                nwss::CapacityResult r;
                if (m == "mc_capacity") r = nwss::mc_capacity(cfg, bundle, trials, seed, threads);
                else if (m == "mc_jensen") r = nwss::mc_jensen(cfg, bundle, trials, seed, threads);
                else if (m == "mmse_rate") r = nwss::mmse_sum_rate(cfg, bundle, trials, seed, threads);
                else throw std::invalid_argument("capacity: unknown method '" + m + "'");
                const double ms = t.ms();
                print_result(m, r, ms);
                rows.push_back(make_row(cfg, m, r, ms));
            }
            if (!out_path.empty()) nwss::write_csv(rows, out_path);
            return kOk;
        }

        if (bound->parsed()) {
            const auto file = nwss::load_scenario_file(config_path);
            const auto& cfg = file.scenario;
            const auto bundle = nwss::build_bundle(cfg);
            auto methods = split_list(methods_str);
            if (methods.empty()) methods = {"closed_form"};
            std::vector<nwss::ResultRow> rows;
            for (const auto& m : methods) {
                Timer t;
                nwss::CapacityResult r;
                if (m == "closed_form") r = nwss::closed_form_bound(cfg, bundle, budget);
                else if (m == "high_snr") r = nwss::high_snr_bound(cfg, bundle);
                else if (m == "c_max") r = nwss::c_max(cfg, bundle);
                else throw std::invalid_argument("bound: unknown method '" + m + "'");
                const double ms = t.ms();
                print_result(m, r, ms);
                rows.push_back(make_row(cfg, m, r, ms));
            }
            if (!out_path.empty()) nwss::write_csv(rows, out_path);
            return kOk;
        }

        if (sweep->parsed()) {
            const auto file = nwss::load_scenario_file(config_path);
            nwss::SweepSpec spec;
            if (file.sweep) spec = *file.sweep;
            spec.base = file.scenario;
            if (!param_str.empty()) spec.param = nwss::sweep_param_from_string(param_str);
            if (!grid_str.empty()) {
                spec.grid.clear();
                for (const auto& v : split_list(grid_str)) spec.grid.push_back(std::stod(v));
            }
            if (!methods_str.empty()) {
                spec.methods.clear();
                for (const auto& m : split_list(methods_str))
                    spec.methods.push_back(nwss::sweep_method_from_string(m));
            }
            if (sweep->count("--trials")) spec.trials = trials;
            if (sweep->count("--seed")) spec.seed = seed;
            if (sweep->count("--budget")) spec.budget = budget;
            spec.threads = threads;
            spec.record_timing = !no_timing;
            if (spec.methods.empty())
                throw std::invalid_argument("sweep: no methods requested (use --methods)");
            const auto rows = nwss::run_sweep(spec, out_path);
            std::printf("wrote %zu rows to %s\n", rows.size(), out_path.c_str());
            int errors = 0;
            for (const auto& r : rows)
                if (!r.error.empty()) ++errors;
            if (errors > 0) std::printf("%d grid points recorded errors (see the error column)\n", errors);
            return kOk;
        }

        if (eigen->parsed()) {
            const auto file = nwss::load_scenario_file(config_path);
            const auto bundle = nwss::build_bundle(file.scenario);
            nwss::emit_eigen(file.scenario, bundle, out_path);
            std::printf("wrote %d eigenvalues to %s\n", file.scenario.M, out_path.c_str());
            return kOk;
        }

        if (verify->parsed()) {
            const auto level =
                level_str == "full" ? nwss::VerifyLevel::full : nwss::VerifyLevel::fast;
            const auto report = nwss::run_verify(level, threads);
            nwss::print_report(report, std::cout);
            return report.all_passed() ? kOk : kVerifyFailure;
        }
    } catch (const nwss::BudgetExceededError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kBudgetExceeded;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kValidationError;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kValidationError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kValidationError;
    }
    return kOk;
}

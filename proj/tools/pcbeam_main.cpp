// SPDX-License-Identifier: Apache-2.0
//
// pcbeam: multiuser beamforming for partially-connected mmWave massive MIMO
// Copyright (C) 2026 the pcbeam contributors
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

#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include <pcbeam/pcbeam.hpp>

namespace {

struct CommonArgs
{
    std::string config_path;
    std::string out_dir = ".";
    std::optional<std::uint64_t> seed;
    std::optional<unsigned> trials;
    std::optional<unsigned> threads;
};

void add_common(CLI::App* cmd, CommonArgs& args)
{
    cmd->add_option("--config", args.config_path, "experiment config file")->required();
    cmd->add_option("--out", args.out_dir, "output directory");
    cmd->add_option("--seed", args.seed, "override the root seed");
    cmd->add_option("--trials", args.trials, "override the trial count");
    cmd->add_option("--threads", args.threads, "worker threads (0 = hardware)");
}

pcbeam::ExperimentConfig load(const CommonArgs& args)
{
    pcbeam::ExperimentConfig cfg = pcbeam::parse_config_file(args.config_path);
    if (args.seed)
        cfg.root_seed = *args.seed;
    if (args.trials)
        cfg.trials = *args.trials;
    if (args.threads)
        cfg.threads = *args.threads;
    return cfg;
}

int run_sumrate(const CommonArgs& args, pcbeam::SweepAxis axis)
{
    pcbeam::ExperimentConfig cfg = load(args);
    if (cfg.sweep_axis != axis)
        throw std::invalid_argument("config sweep.axis does not match the chosen subcommand");
    const pcbeam::RunResult result = pcbeam::run_experiment(cfg);

    namespace fs = std::filesystem;
    fs::create_directories(args.out_dir);
    const fs::path csv_path = fs::path(args.out_dir) / cfg.output;
    std::ofstream out(csv_path);
    if (!out)
        throw std::runtime_error("cannot write " + csv_path.string());
    pcbeam::write_csv(result, out);

    std::cout << "wrote " << result.rows.size() << " rows to " << csv_path.string() << "\n";
    for (pcbeam::Scheme s : cfg.schemes) {
        std::cout << "  " << pcbeam::scheme_name(s) << ":";
        for (double v : cfg.sweep_values)
            std::cout << "  " << v << " -> " << pcbeam::mean_sum_rate(result, s, v);
        std::cout << "  (mean sum-rate, bits/s/Hz)\n";
    }
    const auto failures = result.failures();
    if (failures > 0) {
        std::cerr << "pcbeam: " << failures << " trial run(s) failed\n";
        return 1;
    }
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"multiuser beamforming simulator for partially-connected mmWave massive MIMO"};
    app.require_subcommand(1);

    CommonArgs args;
    CLI::App* beampattern = app.add_subcommand("beampattern", "beam patterns and nulling depths");
    CLI::App* sumrate_snr = app.add_subcommand("sumrate-snr", "Monte Carlo sum-rate sweep over SNR");
    CLI::App* sumrate_nbs = app.add_subcommand("sumrate-nbs", "Monte Carlo sum-rate sweep over array size");
    CLI::App* convergence = app.add_subcommand("convergence", "per-iteration objective traces");
    for (CLI::App* cmd : {beampattern, sumrate_snr, sumrate_nbs, convergence})
        add_common(cmd, args);

    CLI11_PARSE(app, argc, argv);

    try {
        if (beampattern->parsed())
            return pcbeam::cmd_beampattern(load(args), args.out_dir);
        if (sumrate_snr->parsed())
            return run_sumrate(args, pcbeam::SweepAxis::snr_db);
        if (sumrate_nbs->parsed())
            return run_sumrate(args, pcbeam::SweepAxis::n_bs);
        if (convergence->parsed())
            return pcbeam::cmd_convergence(load(args), args.out_dir);
    } catch (const std::exception& ex) {
        std::cerr << "pcbeam: error: " << ex.what() << "\n";
        return 2;
    }
    return 0;
}

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

#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "amm.hpp"
#include "baselines.hpp"
#include "codebook.hpp"
#include "metrics.hpp"
#include "pwmmse.hpp"
#include "system.hpp"

namespace pcbeam {

enum class Scheme
{
    pwmmse = 0,
    amm = 1,
    fully_digital = 2,
    tsh = 3,
};

inline const char* scheme_name(Scheme s)
{
    switch (s) {
        case Scheme::pwmmse: return "pwmmse";
        case Scheme::amm: return "amm";
        case Scheme::fully_digital: return "fully_digital";
        case Scheme::tsh: return "tsh";
    }
    return "?";
}

inline Scheme scheme_from_name(const std::string& name)
{
    for (Scheme s : {Scheme::pwmmse, Scheme::amm, Scheme::fully_digital, Scheme::tsh})
        if (name == scheme_name(s))
            return s;
    throw std::invalid_argument("unknown scheme: " + name);
}

enum class SweepAxis
{
    snr_db,
    n_bs,
};

// Declarative experiment description, loadable from a flat key = value file.
struct ExperimentConfig
{
    arma::uword n_bs = 512;
    arma::uword n_rf = 4;
    arma::uword k_users = 4;
    std::optional<double> total_power; // default: k_users (unit per-stream power)

    ChannelParams channel;
    WmmseOptions wmmse;
    AmmConfig amm;
    arma::uword codebook_size = 0; // 0: one codeword per antenna
    std::vector<AngleRange> explicit_ranges; // fixed sectors for the beam-pattern command

    std::vector<Scheme> schemes{Scheme::pwmmse, Scheme::amm, Scheme::fully_digital, Scheme::tsh};
    SweepAxis sweep_axis = SweepAxis::snr_db;
    std::vector<double> sweep_values{-10.0, -5.0, 0.0, 5.0, 10.0};
    double fixed_snr_db = 10.0;     // used when sweeping n_bs
    double sweep_snr_db = std::numeric_limits<double>::infinity();   // pilot SNR of beam sweeping
    double eff_csi_snr_db = std::numeric_limits<double>::infinity(); // effective-CSI SNR of the ZF scheme

    unsigned trials = 200;
    std::uint64_t root_seed = 1;
    unsigned threads = 0; // 0: hardware concurrency
    std::string output = "results.csv";
    arma::uword pattern_grid = 4096;

    bool has_scheme(Scheme s) const
    {
        return std::find(schemes.begin(), schemes.end(), s) != schemes.end();
    }

    double resolved_power() const
    {
        return total_power.value_or(static_cast<double>(k_users));
    }

    // System parameters at one sweep point.
    SystemConfig system_at(double sweep_value) const
    {
        SystemConfig cfg;
        cfg.n_rf = n_rf;
        cfg.k_users = k_users;
        cfg.total_power = resolved_power();
        double snr_db = fixed_snr_db;
        if (sweep_axis == SweepAxis::snr_db) {
            cfg.n_bs = n_bs;
            snr_db = sweep_value;
        } else {
            cfg.n_bs = static_cast<arma::uword>(sweep_value);
        }
        cfg.noise_var = cfg.total_power / db_to_linear(snr_db);
        cfg.validate();
        return cfg;
    }

    void validate() const
    {
        if (trials == 0)
            throw std::invalid_argument("ExperimentConfig: trials must be at least 1");
        if (sweep_values.empty())
            throw std::invalid_argument("ExperimentConfig: sweep values must not be empty");
        if (schemes.empty())
            throw std::invalid_argument("ExperimentConfig: no schemes enabled");
        channel.validate();
        amm.validate();
        if (sweep_axis == SweepAxis::n_bs)
            for (double v : sweep_values)
                if (v <= 0.0 || v != std::floor(v))
                    throw std::invalid_argument("ExperimentConfig: n_bs sweep values must be positive integers");
        for (double v : sweep_values)
            (void)system_at(v);
        for (const auto& r : explicit_ranges)
            r.validate();
    }
};

// ---------------------------------------------------------------- config IO

namespace detail {

inline std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos)
        return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

inline std::vector<std::string> split_list(const std::string& s)
{
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty())
            out.push_back(item);
    }
    return out;
}

inline double parse_double(const std::string& key, const std::string& value)
{
    if (value == "inf" || value == "+inf")
        return std::numeric_limits<double>::infinity();
    try {
        std::size_t pos = 0;
        const double v = std::stod(value, &pos);
        if (pos != value.size())
            throw std::invalid_argument("");
        return v;
    } catch (...) {
        throw std::invalid_argument("config key '" + key + "': cannot parse number '" + value + "'");
    }
}

inline std::uint64_t parse_uint(const std::string& key, const std::string& value)
{
    try {
        std::size_t pos = 0;
        const unsigned long long v = std::stoull(value, &pos);
        if (pos != value.size())
            throw std::invalid_argument("");
        return v;
    } catch (...) {
        throw std::invalid_argument("config key '" + key + "': cannot parse integer '" + value + "'");
    }
}

inline AngleRange parse_range_deg(const std::string& key, const std::string& item)
{
    const auto colon = item.find(':');
    if (colon == std::string::npos)
        throw std::invalid_argument("config key '" + key + "': expected lo:hi, got '" + item + "'");
    const double lo = parse_double(key, trim(item.substr(0, colon)));
    const double hi = parse_double(key, trim(item.substr(colon + 1)));
    return angle_range_from_degrees(lo, hi);
}

} // namespace detail

inline void apply_config_entry(ExperimentConfig& cfg, const std::string& key, const std::string& value)
{
    using detail::parse_double;
    using detail::parse_uint;

    if (key == "system.n_bs") cfg.n_bs = parse_uint(key, value);
    else if (key == "system.n_rf") cfg.n_rf = parse_uint(key, value);
    else if (key == "system.k_users") cfg.k_users = parse_uint(key, value);
    else if (key == "system.total_power") cfg.total_power = parse_double(key, value);
    else if (key == "channel.n_paths") cfg.channel.n_paths = parse_uint(key, value);
    else if (key == "channel.los_var") cfg.channel.los_var = parse_double(key, value);
    else if (key == "channel.nlos_var") cfg.channel.nlos_var = parse_double(key, value);
    else if (key == "pwmmse.max_iters") cfg.wmmse.max_iters = static_cast<unsigned>(parse_uint(key, value));
    else if (key == "pwmmse.rel_tol") cfg.wmmse.rel_tol = parse_double(key, value);
    else if (key == "pwmmse.variant") {
        if (value == "derived-optimal") cfg.wmmse.variant = WmmseVariant::derived_optimal;
        else if (value == "paper-literal") cfg.wmmse.variant = WmmseVariant::paper_literal;
        else throw std::invalid_argument("config key 'pwmmse.variant': unknown variant '" + value + "'");
    }
    else if (key == "amm.lambda") cfg.amm.lambda = parse_double(key, value);
    else if (key == "amm.samples_per_range") cfg.amm.samples_per_range = static_cast<unsigned>(parse_uint(key, value));
    else if (key == "amm.max_iters") cfg.amm.max_iters = static_cast<unsigned>(parse_uint(key, value));
    else if (key == "amm.rel_tol") cfg.amm.rel_tol = parse_double(key, value);
    else if (key == "amm.codebook_size") cfg.codebook_size = parse_uint(key, value);
    else if (key == "amm.ranges_deg") {
        cfg.explicit_ranges.clear();
        for (const auto& item : detail::split_list(value))
            cfg.explicit_ranges.push_back(detail::parse_range_deg(key, item));
    }
    else if (key == "sweep.axis") {
        if (value == "snr_db") cfg.sweep_axis = SweepAxis::snr_db;
        else if (value == "n_bs") cfg.sweep_axis = SweepAxis::n_bs;
        else throw std::invalid_argument("config key 'sweep.axis': unknown axis '" + value + "'");
    }
    else if (key == "sweep.values") {
        cfg.sweep_values.clear();
        for (const auto& item : detail::split_list(value))
            cfg.sweep_values.push_back(parse_double(key, item));
    }
    else if (key == "snr_db") cfg.fixed_snr_db = parse_double(key, value);
    else if (key == "sweep_snr_db") cfg.sweep_snr_db = parse_double(key, value);
    else if (key == "tsh.eff_csi_snr_db") cfg.eff_csi_snr_db = parse_double(key, value);
    else if (key == "schemes") {
        cfg.schemes.clear();
        for (const auto& item : detail::split_list(value))
            cfg.schemes.push_back(scheme_from_name(item));
    }
    else if (key == "trials") cfg.trials = static_cast<unsigned>(parse_uint(key, value));
    else if (key == "seed") cfg.root_seed = parse_uint(key, value);
    else if (key == "threads") cfg.threads = static_cast<unsigned>(parse_uint(key, value));
    else if (key == "output") cfg.output = value;
    else if (key == "pattern.grid_size") cfg.pattern_grid = parse_uint(key, value);
    else throw std::invalid_argument("unknown config key: '" + key + "'");
}

// Flat key = value format, '#' comments, unknown keys rejected.
inline ExperimentConfig parse_config(std::istream& in)
{
    ExperimentConfig cfg;
    std::string line;
    unsigned line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos)
            line = line.substr(0, hash);
        line = detail::trim(line);
        if (line.empty())
            continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config line " + std::to_string(line_no) + ": expected key = value");
        const std::string key = detail::trim(line.substr(0, eq));
        const std::string value = detail::trim(line.substr(eq + 1));
        apply_config_entry(cfg, key, value);
    }
    return cfg;
}

inline ExperimentConfig parse_config_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw std::invalid_argument("cannot open config file: " + path);
    return parse_config(in);
}

// ---------------------------------------------------------------- execution

struct ResultRow
{
    Scheme scheme = Scheme::pwmmse;
    double sweep_value = 0.0;
    unsigned trial = 0;
    bool ok = true;
    double sum_rate = 0.0;
    arma::vec per_user;
    unsigned iters = 0;
    double wall_ms = 0.0;
};

struct RunResult
{
    arma::uword k_users = 0;
    std::vector<ResultRow> rows;

    arma::uword failures() const
    {
        arma::uword n = 0;
        for (const auto& r : rows)
            if (!r.ok)
                ++n;
        return n;
    }
};

inline double mean_sum_rate(const RunResult& result, Scheme scheme, double sweep_value)
{
    double total = 0.0;
    arma::uword n = 0;
    for (const auto& r : result.rows)
        if (r.scheme == scheme && r.sweep_value == sweep_value && r.ok) {
            total += r.sum_rate;
            ++n;
        }
    if (n == 0)
        throw std::runtime_error("mean_sum_rate: no rows for requested scheme and sweep value");
    return total / static_cast<double>(n);
}

namespace detail {

struct SchemeOutcome
{
    RateReport rates;
    unsigned iters = 0;
    bool ok = true;
};

inline bool validate_hybrid(const AnalogBeamformer& analog, const DigitalBeamformer& digital,
                            const SystemConfig& cfg)
{
    if (!check_constant_modulus(analog, 1e-10))
        return false;
    const arma::cx_mat dense = analog.assemble();
    if (!check_block_support(dense, cfg.n_s()))
        return false;
    const double power = arma::accu(arma::square(arma::abs(dense * digital.matrix)));
    return std::abs(power - static_cast<double>(cfg.k_users)) <= 1e-8;
}

inline SchemeOutcome execute_scheme(Scheme scheme, const std::vector<ChannelRealization>& channels,
                                    const SystemConfig& cfg, const Codebook* codebook,
                                    const ExperimentConfig& exp, std::uint64_t trial_seed)
{
    SchemeOutcome out;
    const double sweep_snr = db_to_linear(exp.sweep_snr_db);
    switch (scheme) {
        case Scheme::pwmmse: {
            const PwmmseResult r = run_pwmmse(channels, cfg, exp.wmmse);
            out.rates = sum_rate(channels, r.analog, r.digital, cfg);
            out.iters = r.state.iterations;
            out.ok = validate_hybrid(r.analog, r.digital, cfg);
            break;
        }
        case Scheme::amm: {
            const AmmResult r = run_amm_from_sweep(channels, *codebook, cfg, exp.amm, sweep_snr, trial_seed);
            DigitalBeamformer identity{arma::cx_mat(arma::eye(cfg.k_users, cfg.k_users),
                                                    arma::zeros(cfg.k_users, cfg.k_users))};
            out.rates = sum_rate(channels, r.analog, identity, cfg);
            for (const auto& t : r.traces)
                out.iters = std::max(out.iters, t.iterations);
            out.ok = validate_hybrid(r.analog, identity, cfg);
            break;
        }
        case Scheme::fully_digital: {
            const FullyDigitalResult r = run_fully_digital(channels, cfg, exp.wmmse);
            out.rates = sum_rate(channels, r.beamformer.matrix, cfg);
            out.iters = r.state.iterations;
            const double power = arma::accu(arma::square(arma::abs(r.beamformer.matrix)));
            out.ok = std::abs(power - static_cast<double>(cfg.k_users)) <= 1e-8;
            break;
        }
        case Scheme::tsh: {
            const TshResult r =
                run_tsh(channels, *codebook, cfg, sweep_snr, db_to_linear(exp.eff_csi_snr_db), trial_seed);
            out.rates = sum_rate(channels, r.analog, r.digital, cfg);
            out.ok = validate_hybrid(r.analog, r.digital, cfg);
            break;
        }
    }
    return out;
}

} // namespace detail

// Seeded Monte Carlo execution. All schemes at one (sweep value, trial) pair
// see bit-identical channels (seed = root + trial), trials can run on a
// worker pool, and rows come back sorted by (scheme, sweep value, trial) so
// the output is independent of scheduling.
inline RunResult run_experiment(const ExperimentConfig& exp)
{
    exp.validate();

    RunResult result;
    result.k_users = exp.k_users;
    const arma::uword n_sweep = exp.sweep_values.size();
    const arma::uword n_schemes = exp.schemes.size();
    result.rows.resize(n_sweep * exp.trials * n_schemes);

    const bool needs_codebook = exp.has_scheme(Scheme::amm) || exp.has_scheme(Scheme::tsh);
    std::vector<SystemConfig> sweep_cfg(n_sweep);
    std::vector<Codebook> sweep_codebook(needs_codebook ? n_sweep : 0);
    for (arma::uword s = 0; s < n_sweep; ++s) {
        sweep_cfg[s] = exp.system_at(exp.sweep_values[s]);
        if (needs_codebook)
            sweep_codebook[s] =
                build_codebook(sweep_cfg[s], exp.codebook_size == 0 ? sweep_cfg[s].n_bs : exp.codebook_size);
    }

    const arma::uword n_jobs = n_sweep * exp.trials;
    std::atomic<arma::uword> next_job{0};

    const auto worker = [&]() {
        for (;;) {
            const arma::uword job = next_job.fetch_add(1);
            if (job >= n_jobs)
                return;
            const arma::uword s = job / exp.trials;
            const unsigned trial = static_cast<unsigned>(job % exp.trials);
            const SystemConfig& cfg = sweep_cfg[s];
            const std::uint64_t trial_seed = exp.root_seed + trial;
            const auto channels = generate_user_channels(trial_seed, cfg, exp.channel);

            for (arma::uword sc = 0; sc < n_schemes; ++sc) {
                ResultRow row;
                row.scheme = exp.schemes[sc];
                row.sweep_value = exp.sweep_values[s];
                row.trial = trial;
                row.per_user = arma::vec(exp.k_users, arma::fill::value(arma::datum::nan));
                row.sum_rate = arma::datum::nan;

                const auto t0 = std::chrono::steady_clock::now();
                try {
                    const auto outcome = detail::execute_scheme(
                        row.scheme, channels, cfg, needs_codebook ? &sweep_codebook[s] : nullptr, exp,
                        trial_seed);
                    row.ok = outcome.ok;
                    if (outcome.ok) {
                        row.sum_rate = outcome.rates.sum;
                        row.per_user = outcome.rates.per_user;
                        row.iters = outcome.iters;
                    }
                } catch (const std::exception& ex) {
                    row.ok = false;
                    std::cerr << "pcbeam: " << scheme_name(row.scheme) << " failed on trial " << trial
                              << " at sweep value " << row.sweep_value << ": " << ex.what() << "\n";
                }
                row.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
                                  .count();
                result.rows[(s * exp.trials + trial) * n_schemes + sc] = std::move(row);
            }
        }
    };

    unsigned n_threads = exp.threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : exp.threads;
    n_threads = static_cast<unsigned>(std::min<arma::uword>(n_threads, n_jobs));
    if (n_threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(n_threads);
        for (unsigned t = 0; t < n_threads; ++t)
            pool.emplace_back(worker);
        for (auto& t : pool)
            t.join();
    }

    std::sort(result.rows.begin(), result.rows.end(), [](const ResultRow& a, const ResultRow& b) {
        if (a.scheme != b.scheme)
            return static_cast<int>(a.scheme) < static_cast<int>(b.scheme);
        if (a.sweep_value != b.sweep_value)
            return a.sweep_value < b.sweep_value;
        return a.trial < b.trial;
    });
    return result;
}

// --------------------------------------------------------------------- CSV

namespace detail {

inline std::string format_sig(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

} // namespace detail

inline void write_csv(const RunResult& result, std::ostream& out)
{
    out << "scheme,sweep_value,trial,sum_rate";
    for (arma::uword k = 0; k < result.k_users; ++k)
        out << ",rate_user_" << (k + 1);
    out << ",iters,wall_ms\n";
    for (const auto& row : result.rows) {
        out << scheme_name(row.scheme) << ',' << detail::format_sig(row.sweep_value) << ',' << row.trial
            << ',' << detail::format_sig(row.sum_rate);
        for (arma::uword k = 0; k < result.k_users; ++k)
            out << ',' << detail::format_sig(row.per_user.n_elem > k ? row.per_user(k) : arma::datum::nan);
        out << ',' << row.iters << ',' << detail::format_sig(row.wall_ms) << '\n';
    }
}

inline RunResult read_csv(std::istream& in)
{
    std::string line;
    if (!std::getline(in, line))
        throw std::invalid_argument("read_csv: empty input");
    const auto header = detail::split_list(line);
    if (header.size() < 7 || header[0] != "scheme")
        throw std::invalid_argument("read_csv: unexpected header");
    RunResult result;
    result.k_users = header.size() - 6;

    while (std::getline(in, line)) {
        if (detail::trim(line).empty())
            continue;
        std::vector<std::string> fields;
        std::stringstream ss(line);
        std::string item;
        while (std::getline(ss, item, ','))
            fields.push_back(detail::trim(item));
        if (fields.size() != header.size())
            throw std::invalid_argument("read_csv: malformed row: " + line);
        ResultRow row;
        row.scheme = scheme_from_name(fields[0]);
        row.sweep_value = detail::parse_double("sweep_value", fields[1]);
        row.trial = static_cast<unsigned>(detail::parse_uint("trial", fields[2]));
        row.sum_rate = std::stod(fields[3]);
        row.ok = std::isfinite(row.sum_rate);
        row.per_user.set_size(result.k_users);
        for (arma::uword k = 0; k < result.k_users; ++k)
            row.per_user(k) = std::stod(fields[4 + k]);
        row.iters = static_cast<unsigned>(detail::parse_uint("iters", fields[4 + result.k_users]));
        row.wall_ms = std::stod(fields[5 + result.k_users]);
        result.rows.push_back(std::move(row));
    }
    return result;
}

// ---------------------------------------------------------------- commands

// System parameters of a single-instance command: the configured array at the
// first swept (or fixed) SNR.
inline SystemConfig operating_system_config(const ExperimentConfig& exp)
{
    if (exp.sweep_axis == SweepAxis::n_bs)
        return exp.system_at(static_cast<double>(exp.n_bs));
    return exp.system_at(exp.sweep_values.empty() ? exp.fixed_snr_db : exp.sweep_values.front());
}

// Beam patterns of the nulling scheme next to the quiescent (pre-nulling)
// codeword beams, one file pair per user, plus a per-sector depth summary.
inline int cmd_beampattern(const ExperimentConfig& exp, const std::string& out_dir)
{
    const SystemConfig cfg = operating_system_config(exp);
    if (!exp.has_scheme(Scheme::amm))
        throw std::invalid_argument("cmd_beampattern: scheme 'amm' must be enabled");

    std::vector<AngleRange> ranges;
    std::vector<arma::cx_vec> quiescent;
    if (!exp.explicit_ranges.empty()) {
        if (exp.explicit_ranges.size() != cfg.k_users)
            throw std::invalid_argument("cmd_beampattern: need one explicit range per user");
        ranges = exp.explicit_ranges;
        for (const auto& r : ranges)
            quiescent.push_back(steering_vector(r.mid(), cfg.n_s()));
    } else {
        const auto channels = generate_user_channels(exp.root_seed, cfg, exp.channel);
        const Codebook cb =
            build_codebook(cfg, exp.codebook_size == 0 ? cfg.n_bs : exp.codebook_size);
        const SweepSelection sel =
            beam_sweep(channels, cb, cfg, db_to_linear(exp.sweep_snr_db), exp.root_seed);
        ranges = sel.ranges;
        quiescent = sel.codewords;
    }

    const AmmResult amm = run_amm(quiescent, ranges, cfg, exp.amm);

    namespace fs = std::filesystem;
    fs::create_directories(out_dir);
    const auto write_pattern = [&](const arma::cx_vec& beam, arma::uword user, const std::string& tag) {
        const BeamPattern p = beam_pattern(beam, exp.pattern_grid, user);
        std::ofstream out(fs::path(out_dir) / ("pattern_user" + std::to_string(user + 1) + "_" + tag + ".csv"));
        out << "angle_sine,angle_deg,gain_db\n";
        for (arma::uword i = 0; i < p.angles.n_elem; ++i)
            out << detail::format_sig(p.angles(i)) << ',' << detail::format_sig(sine_to_deg(p.angles(i)))
                << ',' << detail::format_sig(p.gains_db(i)) << '\n';
    };

    std::ofstream depths(fs::path(out_dir) / "nulling_depths.csv");
    depths << "beam_user,sector_user,lo_deg,hi_deg,quiescent_db,amm_db\n";
    for (arma::uword q = 0; q < cfg.k_users; ++q) {
        write_pattern(amm.analog.subarray_vectors[q], q, "amm");
        write_pattern(quiescent[q], q, "quiescent");
        for (arma::uword j = 0; j < cfg.k_users; ++j) {
            const double quiescent_db = nulling_depth_db(quiescent[q], ranges[j]);
            const double amm_db = nulling_depth_db(amm.analog.subarray_vectors[q], ranges[j]);
            depths << (q + 1) << ',' << (j + 1) << ',' << detail::format_sig(sine_to_deg(ranges[j].lo)) << ','
                   << detail::format_sig(sine_to_deg(ranges[j].hi)) << ',' << detail::format_sig(quiescent_db)
                   << ',' << detail::format_sig(amm_db) << '\n';
            if (j != q)
                std::cout << "user " << (q + 1) << " gain in sector " << (j + 1)
                          << ": quiescent " << detail::format_sig(quiescent_db) << " dB, nulled "
                          << detail::format_sig(amm_db) << " dB\n";
        }
    }
    return check_constant_modulus(amm.analog, 1e-10) ? 0 : 1;
}

// Per-iteration objective traces of the iterative schemes on one seeded
// instance.
inline int cmd_convergence(const ExperimentConfig& exp, const std::string& out_dir)
{
    if (!exp.has_scheme(Scheme::pwmmse) && !exp.has_scheme(Scheme::amm) &&
        !exp.has_scheme(Scheme::fully_digital))
        throw std::invalid_argument("cmd_convergence: enable at least one iterative scheme");

    const SystemConfig cfg = operating_system_config(exp);
    const auto channels = generate_user_channels(exp.root_seed, cfg, exp.channel);

    namespace fs = std::filesystem;
    fs::create_directories(out_dir);
    std::ofstream out(fs::path(out_dir) / "convergence.csv");
    out << "scheme,user,iter,objective,sum_rate\n";

    const auto dump_wmmse = [&](const char* name, const WmmseState& state) {
        for (std::size_t i = 0; i < state.objective_trace.size(); ++i)
            out << name << ",0," << (i + 1) << ',' << detail::format_sig(state.objective_trace[i]) << ','
                << detail::format_sig(state.sum_rate_trace[i]) << '\n';
    };

    if (exp.has_scheme(Scheme::pwmmse))
        dump_wmmse("pwmmse", run_pwmmse(channels, cfg, exp.wmmse).state);
    if (exp.has_scheme(Scheme::fully_digital))
        dump_wmmse("fully_digital", run_fully_digital(channels, cfg, exp.wmmse).state);
    if (exp.has_scheme(Scheme::amm)) {
        const Codebook cb = build_codebook(cfg, exp.codebook_size == 0 ? cfg.n_bs : exp.codebook_size);
        const AmmResult amm =
            run_amm_from_sweep(channels, cb, cfg, exp.amm, db_to_linear(exp.sweep_snr_db), exp.root_seed);
        for (arma::uword q = 0; q < cfg.k_users; ++q)
            for (std::size_t i = 0; i < amm.traces[q].objective.size(); ++i)
                out << "amm," << (q + 1) << ',' << (i + 1) << ','
                    << detail::format_sig(amm.traces[q].objective[i]) << ",nan\n";
    }
    return 0;
}

} // namespace pcbeam

// Command-line front end: binds run-configuration files to the library
// operations and writes CSV/JSON artifacts.
//
// Exit codes: 0 success, 2 configuration error, 3 numerical-accuracy failure,
// 4 pulse-spacing constraint violation (with --enforce-dtmin).

#include "dephase/analysis.hpp"
#include "dephase/config.hpp"
#include "dephase/errors.hpp"
#include "dephase/magnus.hpp"
#include "dephase/trace_io.hpp"

#include "CLI11.hpp"
#include <nlohmann/json.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct GlobalOptions {
    std::string config_path;
    std::string out_dir = ".";
    double tol = 0.0; // overrides rel_tol when > 0
    int threads = 0;  // overrides config when > 0
    bool no_timestamp = false;
    bool enforce_dtmin = false;
};

dephase::RunConfig load_config(const GlobalOptions& opt) {
    if (opt.config_path.empty()) throw dephase::ParamError("missing --config <path>");
    dephase::RunConfig cfg = dephase::parse_config_file(opt.config_path);
    if (opt.tol > 0.0) cfg.quadrature.rel_tol = opt.tol;
    if (opt.threads > 0) cfg.threads = opt.threads;
    if (opt.enforce_dtmin) cfg.enforce_dt_min = true;
    return cfg;
}

fs::path out_file(const GlobalOptions& opt, const std::string& name) {
    fs::create_directories(opt.out_dir);
    return fs::path(opt.out_dir) / name;
}

void check_dtmin(const dephase::RunConfig& cfg, const dephase::PulseSequence& seq) {
    if (!cfg.enforce_dt_min) return;
    if (!(cfg.dt_min > 0.0))
        throw dephase::ParamError("--enforce-dtmin requires dt_min in the [run] section");
    const auto report = dephase::check_constraint(seq, cfg.dt_min, cfg.horizon);
    if (!report.constraint_ok)
        throw dephase::ConstraintError("sequence '" + seq.label + "' violates dt_min (min gap " +
                                       dephase::format_double(report.min_gap) + ")");
}

// Stroboscopic band-split trace (full / small-omega / resonant), sampled at
// the configured cycle counts.
int run_band_trace(const GlobalOptions& opt, const dephase::RunConfig& cfg) {
    const double dt = cfg.asymptote_dt;
    std::ofstream out(out_file(opt, "bands.csv"));
    out << "n,t,gamma_full,gamma_smallw,gamma_resonant\n";
    for (int n : cfg.strobe_cycles) {
        const double full = dephase::gamma_pdd_stroboscopic(cfg.bath, dt, n, cfg.quadrature);
        const double sm =
            dephase::gamma_band(cfg.bath, dt, n, dephase::Band::small_omega, cfg.quadrature);
        const double res =
            dephase::gamma_band(cfg.bath, dt, n, dephase::Band::resonant, cfg.quadrature);
        out << n << ',' << dephase::format_double(2.0 * n * dt) << ','
            << dephase::format_double(full) << ',' << dephase::format_double(sm) << ','
            << dephase::format_double(res) << '\n';
    }
    std::cout << "bands.csv: " << cfg.strobe_cycles.size() << " stroboscopic samples\n";
    return 0;
}

int run_trace(const GlobalOptions& opt) {
    const dephase::RunConfig cfg = load_config(opt);
    if (!cfg.strobe_cycles.empty()) {
        if (!(cfg.asymptote_dt > 0.0))
            throw dephase::ParamError("band traces need dt in the [run] section");
        return run_band_trace(opt, cfg);
    }
    std::vector<dephase::ProtocolSpec> specs = cfg.protocols;
    if (specs.empty()) specs.push_back({}); // free evolution only

    for (const auto& spec : specs) {
        const auto gen = dephase::generate(spec, cfg.horizon);
        check_dtmin(cfg, gen.pulses);
        double step = dephase::default_trace_step(spec, cfg.bath, cfg.grid_per_dt);
        const double gap = gen.pulses.min_gap();
        if (std::isfinite(gap)) step = std::min(step, gap / 10.0);
        dephase::Gamma0Cache cache(cfg.bath, cfg.quadrature, step / 1024.0);
        const auto trace = dephase::compute_trace(cache, gen.pulses, cfg.horizon,
                                                  {step, cfg.threads});
        const std::string base = "trace-" + spec.describe();
        dephase::write_trace_csv(trace, out_file(opt, base + ".csv"));
        dephase::write_trace_metadata(trace, cfg.bath, cfg.quadrature,
                                      out_file(opt, base + ".json"), !opt.no_timestamp);
        std::cout << base << ".csv: " << trace.grid.size() << " samples\n";
    }
    return 0;
}

int run_sequence(const GlobalOptions& opt, const dephase::ProtocolSpec& spec, double horizon,
                 double dt_min) {
    const auto gen = dephase::generate(spec, horizon);
    const auto report = dephase::check_constraint(gen.pulses, dt_min, horizon);
    const std::string base = "sequence-" + spec.describe();
    dephase::write_sequence_csv(gen.pulses, out_file(opt, base + ".csv"));

    json j;
    j["label"] = gen.pulses.label;
    j["pulse_count"] = report.pulse_count;
    j["min_gap"] = report.min_gap;
    j["constraint_ok"] = report.constraint_ok;
    j["dt_min"] = dt_min;
    j["horizon"] = horizon;
    std::ofstream out(out_file(opt, base + ".json"));
    out << j.dump(2) << '\n';
    std::cout << j.dump(2) << '\n';
    if (opt.enforce_dtmin && dt_min > 0.0 && !report.constraint_ok) return 4;
    return 0;
}

int run_asymptote(const GlobalOptions& opt) {
    const dephase::RunConfig cfg = load_config(opt);
    std::vector<double> dts = cfg.dt_list;
    if (cfg.asymptote_dt > 0.0) dts.insert(dts.begin(), cfg.asymptote_dt);
    if (dts.empty())
        throw dephase::ParamError("asymptote requires dt (or dt_list) in the [run] section");

    json all = json::array();
    for (double dt : dts) {
        dephase::Gamma0Cache cache(cfg.bath, cfg.quadrature, dt / 1024.0);
        const auto rep = dephase::saturation_analysis(cache, dt);
        json j;
        j["dt"] = rep.dt;
        j["omega_res"] = rep.omega_res;
        j["delta_gamma_inf"] = rep.delta_gamma_inf;
        j["n_sat"] = rep.n_sat;
        j["t_sat"] = rep.t_sat;
        j["t_av"] = rep.t_av;
        j["validity_flag"] = rep.validity;
        all.push_back(j);

        // differential dephasing series alongside the report
        const std::string tag = "deltagamma-dt" + dephase::format_double(dt);
        std::ofstream series(out_file(opt, tag + ".csv"));
        series << "n,delta_gamma,delta_gamma_inf\n";
        for (int n = 1; n <= cfg.series_n_max; ++n)
            series << n << ',' << dephase::format_double(dephase::delta_gamma_pdd(cache, dt, n))
                   << ',' << dephase::format_double(rep.delta_gamma_inf) << '\n';
    }
    std::ofstream out(out_file(opt, "asymptote.json"));
    out << all.dump(2) << '\n';
    std::cout << all.dump(2) << '\n';
    return 0;
}

int run_sweep(const GlobalOptions& opt) {
    const dephase::RunConfig cfg = load_config(opt);
    if (!(cfg.sweep_dt_lo > 0.0) || !(cfg.sweep_dt_hi > cfg.sweep_dt_lo) || cfg.sweep_points < 2)
        throw dephase::ParamError("sweep requires sweep_dt_lo < sweep_dt_hi and sweep_points >= 2");
    std::ofstream out(out_file(opt, "sweep.csv"));
    out << "dt,rate,t2,t1_rate\n";
    for (int i = 0; i < cfg.sweep_points; ++i) {
        const double dt = cfg.sweep_dt_lo +
                          (cfg.sweep_dt_hi - cfg.sweep_dt_lo) * i / (cfg.sweep_points - 1);
        const auto t2 = dephase::t2_effective(cfg.bath, dt);
        out << dephase::format_double(dt) << ',' << dephase::format_double(t2.rate) << ','
            << dephase::format_double(t2.t2) << ',' << dephase::format_double(cfg.t1_rate)
            << '\n';
    }
    std::cout << "sweep.csv: " << cfg.sweep_points << " points\n";
    return 0;
}

int run_compare(const GlobalOptions& opt) {
    const dephase::RunConfig cfg = load_config(opt);
    if (cfg.protocols.empty()) throw dephase::ParamError("compare needs [protocol] blocks");
    for (const auto& spec : cfg.protocols)
        check_dtmin(cfg, dephase::generate(spec, cfg.horizon).pulses);

    double step = std::numeric_limits<double>::infinity();
    for (const auto& spec : cfg.protocols)
        step = std::min(step, dephase::default_trace_step(spec, cfg.bath, cfg.grid_per_dt));
    const auto cmp = dephase::compare_protocols(cfg.bath, cfg.protocols, cfg.horizon,
                                                {step, cfg.threads}, cfg.quadrature);
    json summary = json::array();
    for (const auto& entry : cmp.entries) {
        const std::string base = "compare-" + entry.spec.describe();
        dephase::write_trace_csv(entry.trace, out_file(opt, base + ".csv"));
        json e;
        e["protocol"] = entry.spec.describe();
        e["pulse_count"] = entry.trace.sequence.times.size();
        e["oscillation_amplitude"] = entry.oscillation_amplitude;
        if (entry.t2_eff) e["t2_eff"] = *entry.t2_eff;
        json peaks = json::array();
        for (const auto& [t, c] : entry.maxima) peaks.push_back({{"t", t}, {"coherence", c}});
        e["maxima_count"] = entry.maxima.size();
        if (!entry.maxima.empty()) {
            e["last_maximum"] = {{"t", entry.maxima.back().first},
                                 {"coherence", entry.maxima.back().second}};
        }
        summary.push_back(e);
    }
    std::ofstream out(out_file(opt, "compare-summary.json"));
    out << summary.dump(2) << '\n';
    std::cout << summary.dump(2) << '\n';
    return 0;
}

int run_magnus(const GlobalOptions& opt, const dephase::ProtocolSpec& spec, double horizon) {
    // the interpolated generators reserve readout headroom before the horizon;
    // the Magnus check wants every pulse strictly inside [0, horizon]
    const double gen_horizon = horizon + (spec.dt_min > 0.0 ? spec.dt_min : 0.0);
    auto gen = dephase::generate(spec, gen_horizon);
    json j;
    j["protocol"] = spec.describe();
    if (gen.ticks) {
        auto& ticks = *gen.ticks;
        const auto total =
            static_cast<std::int64_t>(std::llround(horizon / ticks.tick));
        std::erase_if(ticks.ticks, [&](std::int64_t k) { return k >= total; });
        ticks.horizon_ticks = total;
        const auto check = dephase::verify_second_order(ticks, ticks.horizon_ticks);
        j["a1"] = check.a1;
        j["a2"] = check.a2;
        j["a1_ticks"] = check.a1_ticks;
        j["a2_ticks2"] = static_cast<double>(check.a2_ticks2);
        j["tick"] = ticks.tick;
        j["exact"] = true;
        j["cancels"] = check.cancels;
    } else {
        auto& pulses = gen.pulses;
        std::erase_if(pulses.times, [&](double t) { return t >= horizon; });
        const auto check = dephase::verify_second_order(pulses, horizon);
        j["a1"] = check.a1;
        j["a2"] = check.a2;
        j["exact"] = false;
        j["cancels"] = check.cancels;
    }
    std::cout << j.dump(2) << '\n';
    std::ofstream out(out_file(opt, "magnus-" + spec.describe() + ".json"));
    out << j.dump(2) << '\n';
    return 0;
}

void add_protocol_flags(CLI::App* cmd, dephase::ProtocolSpec& spec, std::string& kind) {
    cmd->add_option("--protocol", kind, "free|pdd|cpdd|cdd|pcdd|udd|interp-abrupt|interp-smooth")
        ->required();
    cmd->add_option("--dt", spec.dt, "base pulse delay");
    cmd->add_option("--dt-cp", spec.dt_cp, "Carr-Purcell cycle delay");
    cmd->add_option("--dt-min-seq", spec.dt_min, "minimum delay of interpolated sequences");
    cmd->add_option("--delta2", spec.delta2, "interp-smooth decrement");
    cmd->add_option("--level", spec.level, "pcdd concatenation level");
    cmd->add_option("--n", spec.pulse_count, "udd pulse count");
    cmd->add_option("--times", spec.times, "explicit pulse times");
    cmd->add_option("--label", spec.label, "protocol label");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"single-qubit dephasing under bang-bang dynamical decoupling"};
    app.require_subcommand(1);

    GlobalOptions opt;
    app.add_option("--config", opt.config_path, "run configuration file");
    app.add_option("--out", opt.out_dir, "output directory");
    app.add_option("--tol", opt.tol, "override quadrature rel_tol");
    app.add_option("--threads", opt.threads, "worker threads for trace grids");
    app.add_flag("--no-timestamp", opt.no_timestamp, "omit timestamps from metadata");
    app.add_flag("--enforce-dtmin", opt.enforce_dtmin, "fail on dt_min violations (exit 4)");

    auto* trace_cmd = app.add_subcommand("trace", "coherence traces for configured protocols");
    auto* seq_cmd = app.add_subcommand("sequence", "emit pulse times and a constraint report");
    auto* asym_cmd = app.add_subcommand("asymptote", "saturation analysis for PDD");
    auto* sweep_cmd = app.add_subcommand("sweep", "effective-T2 rate vs dt");
    auto* compare_cmd = app.add_subcommand("compare", "protocol comparison traces");
    auto* magnus_cmd = app.add_subcommand("magnus", "Magnus first/second-order coefficients");
    for (CLI::App* c : {trace_cmd, seq_cmd, asym_cmd, sweep_cmd, compare_cmd, magnus_cmd})
        c->fallthrough(); // global flags may follow the subcommand

    dephase::ProtocolSpec flag_spec;
    std::string flag_kind;
    double flag_horizon = 10.0, flag_dtmin = 0.0;
    for (CLI::App* c : {seq_cmd, magnus_cmd}) {
        add_protocol_flags(c, flag_spec, flag_kind);
        c->add_option("--horizon", flag_horizon, "total storage time");
    }
    seq_cmd->add_option("--dt-min", flag_dtmin, "constraint to check against");

    CLI11_PARSE(app, argc, argv);

    try {
        if (trace_cmd->parsed()) return run_trace(opt);
        if (asym_cmd->parsed()) return run_asymptote(opt);
        if (sweep_cmd->parsed()) return run_sweep(opt);
        if (compare_cmd->parsed()) return run_compare(opt);
        if (seq_cmd->parsed() || magnus_cmd->parsed()) {
            flag_spec.kind = dephase::protocol_kind_from_string(flag_kind);
            if (seq_cmd->parsed()) return run_sequence(opt, flag_spec, flag_horizon, flag_dtmin);
            return run_magnus(opt, flag_spec, flag_horizon);
        }
    } catch (const dephase::AccuracyError& e) {
        json err{{"error", "accuracy"},
                 {"message", e.what()},
                 {"achieved", e.achieved_error},
                 {"requested", e.requested_error}};
        std::cerr << err.dump() << '\n';
        return 3;
    } catch (const dephase::ConvergenceError& e) {
        json err{{"error", "convergence"}, {"message", e.what()}};
        std::cerr << err.dump() << '\n';
        return 3;
    } catch (const dephase::ParamError& e) {
        json err{{"error", "config"}, {"message", e.what()}};
        std::cerr << err.dump() << '\n';
        return 2;
    } catch (const dephase::ConstraintError& e) {
        json err{{"error", "constraint"}, {"message", e.what()}};
        std::cerr << err.dump() << '\n';
        return 4;
    } catch (const std::exception& e) {
        json err{{"error", "runtime"}, {"message", e.what()}};
        std::cerr << err.dump() << '\n';
        return 1;
    }
    return 0;
}

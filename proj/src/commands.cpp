#include "cspin/commands.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"

#include "cspin/channel.hpp"
#include "cspin/detail/parallel.hpp"
#include "cspin/longtime.hpp"
#include "cspin/oracle.hpp"
#include "cspin/quantumness.hpp"
#include "cspin/sweep.hpp"
#include "cspin/thermo.hpp"

namespace cspin {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void add_flag(std::string& flags, const char* f) {
    if (!flags.empty()) flags += '|';
    flags += f;
}

std::map<std::string, std::string> model_metadata(const RunConfig& cfg, const char* command) {
    const auto& m = cfg.model;
    return {
        {"command", command},
        {"code_version", kCodeVersion},
        {"units", cfg.units == Units::physical ? "physical" : "natural"},
        {"omega0", format_double(m.omega0)},
        {"omega", format_double(m.omega)},
        {"epsilon", format_double(m.epsilon)},
        {"n_bath", std::to_string(m.n_bath)},
        {"temperature", format_double(m.temperature.value())},
        {"delta_form", to_string(m.delta_form)},
        {"tol", format_double(cfg.tol)},
    };
}

} // namespace

CommandResult cmd_evolve(const RunConfig& cfg) {
    CommandResult res;
    res.table.metadata = model_metadata(cfg, "evolve");
    res.table.columns = {"time", "rho11", "rho12_re", "rho12_im", "coherence", "coherence_ratio",
                         "entanglement", "alpha", "beta", "delta_re", "delta_im"};
    const ReducedMap map(cfg.model);
    for (const double t : cfg.grid.times()) {
        const auto c = map.at(t);
        TableRow row;
        try {
            const auto rho = apply_map(c, cfg.rho0);
            row.values = {t, rho.rho11(), rho.rho12().real(), rho.rho12().imag(), l1_coherence(rho),
                          std::abs(c.delta), choi_concurrence(c)};
        } catch (const CpViolation&) {
            row.values = {t, kNaN, kNaN, kNaN, kNaN, std::abs(c.delta), kNaN};
            add_flag(row.flags, "cp_violation");
            res.exit_code = kExitPathology;
        }
        row.values.insert(row.values.end(), {c.alpha, c.beta, c.delta.real(), c.delta.imag()});
        res.table.rows.push_back(std::move(row));
    }
    return res;
}

CommandResult cmd_rates(const RunConfig& cfg) {
    CommandResult res;
    res.table.metadata = model_metadata(cfg, "rates");
    res.table.columns = {"time", "gamma_dis", "gamma_abs", "gamma_deph", "delta_shift"};
    const ReducedMap map(cfg.model);
    for (const double t : cfg.grid.times()) {
        const auto g = lindblad_rates(map, t);
        TableRow row{{t, g.gamma_dis, g.gamma_abs, g.gamma_deph, g.delta_shift}, {}};
        if (g.pole_flag) add_flag(row.flags, "pole");
        res.table.rows.push_back(std::move(row));
    }
    return res;
}

CommandResult cmd_thermo(const RunConfig& cfg) {
    CommandResult res;
    res.table.metadata = model_metadata(cfg, "thermo");
    res.table.columns = {"time", "d_balance", "d_rotated", "sigma", "phi", "entropy", "entropy_rate",
                         "p_a", "p_b", "flux_dis", "flux_abs"};
    const ReducedMap map(cfg.model);
    for (const double t : cfg.grid.times()) {
        const auto s = entropy_production(map, cfg.rho0, t);
        TableRow row{{t, s.d_balance, s.d_rotated, s.sigma, s.phi, s.entropy, s.entropy_rate, s.p_a, s.p_b,
                      s.flux_dis, s.flux_abs},
                     {}};
        if (s.pole_flag) add_flag(row.flags, "pole");
        if (!s.d_defined || !std::isfinite(s.d_rotated)) add_flag(row.flags, "undefined");
        if (s.sigma_pathology || !std::isfinite(s.sigma)) add_flag(row.flags, "pathology");
        res.table.rows.push_back(std::move(row));
    }
    return res;
}

CommandResult cmd_resonance(const RunConfig& cfg) {
    CommandResult res;
    const auto& rs = cfg.resonance;
    res.table.metadata = model_metadata(cfg, "resonance");
    res.table.metadata["eps_min"] = format_double(rs.eps_min);
    res.table.metadata["eps_max"] = format_double(rs.eps_max);
    res.table.metadata["count"] = std::to_string(rs.count);
    res.table.metadata["threshold"] = format_double(rs.threshold);
    res.table.columns = {"epsilon", "level", "branch", "residual", "discriminant", "q1", "q2", "q3", "q4",
                         "delta_bar_abs", "delta_bar_re", "delta_bar_im", "horizon", "grid_index"};
    const auto hits = resonance_scan(cfg.model, rs.eps_min, rs.eps_max, rs.count, rs.threshold, cfg.workers);
    for (const auto& h : hits) {
        const auto& r = h.report;
        ModelParams p = cfg.model;
        p.epsilon = r.epsilon;
        for (const int level : r.integer_levels) {
            TableRow row{{r.epsilon, static_cast<double>(level), r.branch == Branch::minus ? -1.0 : 1.0,
                          branch_residual(p, level, r.branch), r.discriminant, r.q1, r.q2, r.q3, r.q4,
                          std::abs(h.delta_bar.value), h.delta_bar.value.real(), h.delta_bar.value.imag(),
                          h.delta_bar.horizon, static_cast<double>(h.grid_index)},
                         {}};
            if (!h.delta_bar.converged) add_flag(row.flags, "unconverged");
            res.table.rows.push_back(std::move(row));
        }
    }
    return res;
}

CommandResult cmd_average(const RunConfig& cfg) {
    CommandResult res;
    res.table.metadata = model_metadata(cfg, "average");
    res.table.columns = {"alpha_bar", "beta_bar", "delta_bar_re", "delta_bar_im", "horizon",
                         "rho11_bar", "rho12_bar_re", "rho12_bar_im"};
    auto avg = averaged_populations(cfg.model);
    const auto d = delta_average(cfg.model, 1e-3);
    avg.delta_bar = d.value;
    const auto rho = time_averaged_state(avg, cfg.rho0);
    TableRow row{{avg.alpha_bar, avg.beta_bar, d.value.real(), d.value.imag(), d.horizon, rho.rho11(),
                  rho.rho12().real(), rho.rho12().imag()},
                 {}};
    if (d.analytic_zero) add_flag(row.flags, "analytic_zero");
    if (!d.converged) add_flag(row.flags, "unconverged");
    res.table.rows.push_back(std::move(row));
    return res;
}

CommandResult cmd_trapping(const RunConfig& cfg) {
    CommandResult res;
    res.table.metadata = model_metadata(cfg, "trapping");
    res.table.columns = {"closed_form", "half_norm", "full_norm", "boundary_max", "interior_max",
                         "alpha_bar", "beta_bar"};
    const auto avg = averaged_coefficients(cfg.model);
    const auto grid = bloch_grid(400, 5);
    const auto tn = trapping_numeric(avg, grid);
    TableRow row{{tn.closed_form, tn.half_norm, tn.full_norm, tn.boundary_max, tn.interior_max, avg.alpha_bar,
                  avg.beta_bar},
                 {}};
    if (!avg.converged) add_flag(row.flags, "unconverged");
    res.table.rows.push_back(std::move(row));
    return res;
}

CommandResult cmd_validate(const RunConfig& cfg) {
    CommandResult res;
    res.table.metadata = model_metadata(cfg, "validate");
    res.table.metadata["seed"] = std::to_string(cfg.seed);
    res.table.metadata["points"] = std::to_string(cfg.validate_points);
    res.table.columns = {"n_bath", "temperature", "epsilon", "omega0", "omega", "time", "block_deviation",
                         "joint_deviation", "unitarity_defect"};
    auto points = oracle::oracle_grid(cfg.validate_points, cfg.seed);
    points = detail::parallel_map<oracle::OraclePoint>(points.size(), cfg.workers, [&](std::size_t i) {
        auto p = points[i];
        oracle::evaluate_oracle_point(p);
        return p;
    });
    double worst_block = 0.0, worst_joint = 0.0;
    int failures = 0;
    for (const auto& p : points) {
        TableRow row{{static_cast<double>(p.params.n_bath), p.params.temperature.value(), p.params.epsilon,
                      p.params.omega0, p.params.omega, p.time, p.block_deviation, p.joint_deviation,
                      p.unitarity_defect},
                     {}};
        worst_block = std::max(worst_block, p.block_deviation);
        if (std::isfinite(p.joint_deviation)) worst_joint = std::max(worst_joint, p.joint_deviation);
        const bool ok = p.block_deviation <= cfg.tol && !(p.joint_deviation > cfg.tol);
        if (!ok) {
            add_flag(row.flags, "fail");
            ++failures;
        }
        res.table.rows.push_back(std::move(row));
    }
    std::ostringstream sum;
    sum.precision(3);
    sum << (failures == 0 ? "PASS" : "FAIL") << ": " << points.size() << " points, " << failures
        << " above tolerance " << cfg.tol << "; max block deviation " << worst_block
        << ", max joint deviation " << worst_joint;
    res.summary = sum.str();
    if (failures > 0) res.exit_code = kExitValidation;
    return res;
}

CommandResult cmd_sweep(const RunConfig& cfg) {
    if (!cfg.sweep) throw ConfigError("sweep needs a [sweep] section or --preset");
    CommandResult res;
    res.table = to_table(run_sweep(*cfg.sweep));
    return res;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Central spin in a finite spin bath: exact reduced dynamics and diagnostics", "cspin"};
    app.require_subcommand(1);
    std::string config_path, out_path, format, preset_name;
    int workers = -1;

    static const std::vector<std::pair<const char*, const char*>> kCommands = {
        {"evolve", "rho(t), coherence and entanglement on the time grid"},
        {"rates", "time-local rates and Lamb-type shift"},
        {"thermo", "detailed-balance ratio, entropy production and flux"},
        {"resonance", "epsilon scan for resonant levels with non-zero averaged coherence"},
        {"average", "long-time averaged coefficients and state"},
        {"trapping", "information trapping, closed form and grid maximization"},
        {"validate", "closed-form map against the brute-force oracles"},
        {"sweep", "parameter sweep from [sweep] or a preset"},
    };
    std::vector<CLI::App*> subs;
    for (const auto& [name, help] : kCommands) {
        auto* sub = app.add_subcommand(name, help);
        sub->add_option("--config", config_path, "INI configuration file");
        sub->add_option("--out", out_path, "output file (default stdout)");
        sub->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
        sub->add_option("--workers", workers, "worker threads (0: all cores)")->check(CLI::NonNegativeNumber);
        if (std::string(name) == "sweep") sub->add_option("--preset", preset_name, "named sweep preset");
        subs.push_back(sub);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        app.exit(e, err, err);
        return kExitConfig;
    }

    std::string command;
    for (auto* s : subs)
        if (s->parsed()) command = s->get_name();

    static const std::map<std::string, std::function<CommandResult(const RunConfig&)>> kDispatch = {
        {"evolve", cmd_evolve},       {"rates", cmd_rates},       {"thermo", cmd_thermo},
        {"resonance", cmd_resonance}, {"average", cmd_average},   {"trapping", cmd_trapping},
        {"validate", cmd_validate},   {"sweep", cmd_sweep},
    };

    RunConfig cfg;
    CommandResult res;
    try {
        if (!config_path.empty()) cfg = load_config(config_path);
        apply_environment(cfg);
        if (!out_path.empty()) cfg.out_path = out_path;
        if (!format.empty()) cfg.format = output_format_from_string(format);
        if (workers >= 0) {
            cfg.workers = workers;
            if (cfg.sweep) cfg.sweep->workers = workers;
        }
        if (!preset_name.empty()) {
            try {
                auto s = preset(preset_name);
                s.workers = cfg.workers;
                cfg.sweep = std::move(s);
            } catch (const std::invalid_argument& e) {
                throw ConfigError(e.what());
            }
        }
        res = kDispatch.at(command)(cfg);
    } catch (const ConfigError& e) {
        err << "cspin: config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::invalid_argument& e) {
        err << "cspin: invalid input: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::exception& e) {
        err << "cspin: numerical failure: " << e.what() << '\n';
        return kExitPathology;
    }

    std::ofstream file;
    std::ostream* sink = &out;
    if (!cfg.out_path.empty()) {
        file.open(cfg.out_path, std::ios::binary);
        if (!file) {
            err << "cspin: cannot write '" << cfg.out_path << "'\n";
            return kExitConfig;
        }
        sink = &file;
    }
    if (cfg.format == OutputFormat::json) write_json(*sink, res.table);
    else write_csv(*sink, res.table);
    if (!res.summary.empty()) err << res.summary << '\n';
    return res.exit_code;
}

} // namespace cspin

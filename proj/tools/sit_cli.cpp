// sit_cli: dispersion-law sweeps, critical-width tables, Maxwell-Bloch
// simulation runs and area-theorem evolution from one executable.
//
// Parameters come from an optional flat key=value config file with
// command-line flags taking precedence.  Exit codes: 0 success, 2 invalid
// input, 3 numerical failure; failures emit one-line JSON on stderr.

#include <initializer_list>
#include <iostream>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "sit/cli.hpp"

namespace {

using sit::cli::config_get;
using sit::cli::config_map;

struct sub_ctx {
    std::string config_path;
    config_map overrides;
};

double to_double(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        const double d = std::stod(value, &pos);
        if (pos != value.size()) throw std::invalid_argument(value);
        return d;
    } catch (const std::exception&) {
        throw sit::validation_error("parameter '" + key + "': not a number: '" + value + "'");
    }
}

int to_int(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        const long v = std::stol(value, &pos);
        if (pos != value.size() || v < -2000000000L || v > 2000000000L)
            throw std::invalid_argument(value);
        return static_cast<int>(v);
    } catch (const std::exception&) {
        throw sit::validation_error("parameter '" + key + "': not an integer: '" + value + "'");
    }
}

double get_double(const config_map& m, const std::string& key, double fallback) {
    const auto v = config_get(m, key);
    return v ? to_double(key, *v) : fallback;
}

int get_int(const config_map& m, const std::string& key, int fallback) {
    const auto v = config_get(m, key);
    return v ? to_int(key, *v) : fallback;
}

double need_double(const config_map& m, const std::string& key) {
    const auto v = config_get(m, key);
    if (!v) throw sit::validation_error("parameter '" + key + "' is required");
    return to_double(key, *v);
}

int need_int(const config_map& m, const std::string& key) {
    const auto v = config_get(m, key);
    if (!v) throw sit::validation_error("parameter '" + key + "' is required");
    return to_int(key, *v);
}

sit::medium_params make_medium(const config_map& m) {
    sit::medium_params md;
    if (const auto v = config_get(m, "lineshape")) {
        if (*v == "sharp")
            md.lineshape = sit::lineshape_kind::sharp_line;
        else if (*v == "lorentzian")
            md.lineshape = sit::lineshape_kind::lorentzian;
        else
            throw sit::validation_error("parameter 'lineshape': expected sharp or lorentzian");
    }
    md.nu = get_double(m, "nu", md.nu);
    md.s0 = get_double(m, "s0", md.s0);
    if (const auto v = config_get(m, "omega0_tau_star"))
        md.omega0_tau_star = to_double("omega0_tau_star", *v);
    return md;
}

sit::pulse_params make_pulse(const config_map& m, const sit::medium_params& md) {
    sit::pulse_params p;
    p.x = get_double(m, "x", p.x);
    const auto tau0 = config_get(m, "tau0");
    const auto y = config_get(m, "y");
    if (tau0 && y)
        throw sit::validation_error("give either 'tau0' or 'y', not both");
    if (tau0) {
        p.tau0 = to_double("tau0", *tau0);
    } else if (y) {
        if (md.lineshape != sit::lineshape_kind::lorentzian || !md.omega0_tau_star)
            throw sit::validation_error(
                "parameter 'y' requires a lorentzian medium with omega0_tau_star");
        p.tau0 = to_double("y", *y) * *md.omega0_tau_star;
    }
    return p;
}

sit::broadened_form make_form(const config_map& m) {
    const auto v = config_get(m, "eq18_literal");
    if (!v || *v == "0" || *v == "false") return sit::broadened_form::canonical;
    if (*v == "1" || *v == "true") return sit::broadened_form::literal_y4;
    throw sit::validation_error("parameter 'eq18_literal': expected 0/1 or true/false");
}

sit::cli::sweep_spec make_sweep(const config_map& m) {
    sit::cli::sweep_spec s;
    s.medium = make_medium(m);
    s.pulse = make_pulse(m, s.medium);
    s.form = make_form(m);
    if (const auto v = config_get(m, "variable")) {
        if (*v == "x")
            s.variable = sit::cli::sweep_variable::x;
        else if (*v == "tau0")
            s.variable = sit::cli::sweep_variable::tau0;
        else if (*v == "y")
            s.variable = sit::cli::sweep_variable::y;
        else
            throw sit::validation_error("parameter 'variable': expected x, tau0 or y");
    }
    s.start = need_double(m, "start");
    s.stop = need_double(m, "stop");
    s.count = need_int(m, "count");
    return s;
}

sit::cli::output_format make_format(const config_map& m) {
    const auto v = config_get(m, "format");
    if (!v || *v == "csv") return sit::cli::output_format::csv;
    if (*v == "json") return sit::cli::output_format::json;
    throw sit::validation_error("parameter 'format': expected csv or json");
}

config_map merged_config(const sub_ctx& ctx) {
    config_map m;
    if (!ctx.config_path.empty()) m = sit::cli::parse_config_file(ctx.config_path);
    m.insert(m.end(), ctx.overrides.begin(), ctx.overrides.end());
    return m;
}

void add_funnel_options(CLI::App* sub, const std::shared_ptr<sub_ctx>& ctx,
                        std::initializer_list<std::pair<const char*, const char*>> options) {
    sub->add_option("--config", ctx->config_path, "flat key=value parameter file");
    for (const auto& [flag, key] : options) {
        const std::string key_copy = key;
        sub->add_option_function<std::string>(
            flag,
            [ctx, key_copy](const std::string& value) {
                ctx->overrides.emplace_back(key_copy, value);
            },
            std::string("sets ") + key_copy);
    }
    sub->add_flag_function(
        "--eq18-literal",
        [ctx](std::int64_t) { ctx->overrides.emplace_back("eq18_literal", "1"); },
        "use the alternate broadened wavevector variant (y^4 factor)");
}

std::string error_json(const char* type, const std::string& message) {
    return std::string("{\"error\":{\"type\":\"") + type +
           "\",\"message\":\"" + sit::cli::json_escape(message) + "\"}}\n";
}

constexpr std::initializer_list<std::pair<const char*, const char*>> sweep_options = {
    {"--nu", "nu"},           {"--s0", "s0"},
    {"--lineshape", "lineshape"}, {"--omega0-tau-star", "omega0_tau_star"},
    {"--x", "x"},             {"--tau0", "tau0"},
    {"--y", "y"},             {"--var", "variable"},
    {"--start", "start"},     {"--stop", "stop"},
    {"--count", "count"},     {"--output", "output"},
    {"--format", "format"}};

constexpr std::initializer_list<std::pair<const char*, const char*>> simulate_options = {
    {"--nu", "nu"},           {"--s0", "s0"},
    {"--lineshape", "lineshape"}, {"--omega0-tau-star", "omega0_tau_star"},
    {"--x", "x"},             {"--tau0", "tau0"},
    {"--y", "y"},             {"--tau-min", "tau_min"},
    {"--tau-max", "tau_max"}, {"--n-tau", "n_tau"},
    {"--steps", "steps"},     {"--dx", "dx"},
    {"--snapshot-every", "snapshot_every"}, {"--n-atoms", "n_atoms"},
    {"--cutoff", "cutoff"},   {"--k-scale", "k_scale"},
    {"--area", "area"},       {"--output", "output"}};

constexpr std::initializer_list<std::pair<const char*, const char*>> critical_options = {
    {"--nu", "nu"},       {"--start", "start"},   {"--stop", "stop"},
    {"--count", "count"}, {"--output", "output"}, {"--format", "format"}};

constexpr std::initializer_list<std::pair<const char*, const char*>> area_options = {
    {"--theta0", "theta0"}, {"--beta", "beta"},     {"--x-max", "x_max"},
    {"--steps", "steps"},   {"--output", "output"}, {"--format", "format"}};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"sech-soliton dispersion laws with Maxwell-Bloch verification runs"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string("sit ") + sit::version_string);

    const auto disp_ctx = std::make_shared<sub_ctx>();
    auto* disp = app.add_subcommand("dispersion", "sweep the carrier wavevector K");
    add_funnel_options(disp, disp_ctx, sweep_options);
    disp->callback([disp_ctx] {
        const auto m = merged_config(*disp_ctx);
        const auto t = sit::cli::run_dispersion(make_sweep(m));
        sit::cli::write_table(t, config_get(m, "output").value_or(""), make_format(m));
    });

    const auto vel_ctx = std::make_shared<sub_ctx>();
    auto* vel = app.add_subcommand("velocity", "sweep the soliton velocity V");
    add_funnel_options(vel, vel_ctx, sweep_options);
    vel->callback([vel_ctx] {
        const auto m = merged_config(*vel_ctx);
        const auto t = sit::cli::run_velocity(make_sweep(m));
        sit::cli::write_table(t, config_get(m, "output").value_or(""), make_format(m));
    });

    const auto crit_ctx = std::make_shared<sub_ctx>();
    auto* crit = app.add_subcommand("critical", "critical stopping width over x");
    add_funnel_options(crit, crit_ctx, critical_options);
    crit->callback([crit_ctx] {
        const auto m = merged_config(*crit_ctx);
        sit::cli::critical_spec spec;
        spec.nu = get_double(m, "nu", spec.nu);
        spec.start = get_double(m, "start", spec.start);
        spec.stop = get_double(m, "stop", spec.stop);
        spec.count = get_int(m, "count", spec.count);
        const auto t = sit::cli::run_critical(spec);
        sit::cli::write_table(t, config_get(m, "output").value_or(""), make_format(m));
    });

    const auto sim_ctx = std::make_shared<sub_ctx>();
    auto* sim = app.add_subcommand("simulate", "Maxwell-Bloch propagation run");
    add_funnel_options(sim, sim_ctx, simulate_options);
    sim->callback([sim_ctx] {
        const auto m = merged_config(*sim_ctx);
        sit::cli::simulate_spec spec;
        spec.medium = make_medium(m);
        spec.pulse = make_pulse(m, spec.medium);
        spec.form = make_form(m);
        spec.tau_min = get_double(m, "tau_min", spec.tau_min);
        spec.tau_max = get_double(m, "tau_max", spec.tau_max);
        spec.n_tau = get_int(m, "n_tau", spec.n_tau);
        spec.steps = get_int(m, "steps", spec.steps);
        spec.dx = get_double(m, "dx", spec.dx);
        spec.snapshot_every = get_int(m, "snapshot_every", spec.snapshot_every);
        spec.n_atoms = get_int(m, "n_atoms", spec.n_atoms);
        spec.cutoff = get_double(m, "cutoff", spec.cutoff);
        spec.k_scale = get_double(m, "k_scale", spec.k_scale);
        spec.area = get_double(m, "area", spec.area);
        const std::string out_dir = config_get(m, "output").value_or("");
        const auto summary = sit::cli::run_simulate(spec, out_dir);
        if (out_dir.empty()) sit::cli::render_simulate_summary(std::cout, spec, summary);
    });

    const auto area_ctx = std::make_shared<sub_ctx>();
    auto* area = app.add_subcommand("area", "pulse-area evolution theta(x)");
    add_funnel_options(area, area_ctx, area_options);
    area->callback([area_ctx] {
        const auto m = merged_config(*area_ctx);
        sit::cli::area_spec spec;
        spec.theta0 = get_double(m, "theta0", spec.theta0);
        spec.beta = get_double(m, "beta", spec.beta);
        spec.x_max = get_double(m, "x_max", spec.x_max);
        spec.steps = get_int(m, "steps", spec.steps);
        const auto t = sit::cli::run_area(spec);
        sit::cli::write_table(t, config_get(m, "output").value_or(""), make_format(m));
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        std::cerr << error_json("validation", e.what());
        return 2;
    } catch (const sit::validation_error& e) {
        std::cerr << error_json("validation", e.what());
        return 2;
    } catch (const sit::numerical_error& e) {
        std::cerr << error_json("numerical", e.what());
        return 3;
    } catch (const std::exception& e) {
        std::cerr << error_json("internal", e.what());
        return 3;
    }
    return 0;
}

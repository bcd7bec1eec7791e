#include "sit/cli.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "sit/format.hpp"
#include "sit/numerics.hpp"

namespace sit::cli {

namespace {

const char* lineshape_name(lineshape_kind k) {
    return k == lineshape_kind::sharp_line ? "sharp" : "lorentzian";
}

const char* regime_name(regime_kind r) {
    switch (r) {
        case regime_kind::subluminal: return "subluminal";
        case regime_kind::luminal: return "luminal";
        case regime_kind::superluminal: return "superluminal";
    }
    return "unknown";
}

const char* form_name(broadened_form f) {
    return f == broadened_form::canonical ? "canonical" : "literal-y4";
}

const char* variable_name(sweep_variable v) {
    switch (v) {
        case sweep_variable::x: return "x";
        case sweep_variable::tau0: return "tau0";
        case sweep_variable::y: return "y";
    }
    return "unknown";
}

std::string variable_label(sweep_variable v) {
    switch (v) {
        case sweep_variable::x: return "x (omega/omega0)";
        case sweep_variable::tau0: return "tau0 (1/omega0)";
        case sweep_variable::y: return "y (tau_p/tau_star)";
    }
    return "value";
}

double grid_value(const sweep_spec& spec, std::size_t i) {
    return spec.start + (spec.stop - spec.start) * static_cast<double>(i) /
                            static_cast<double>(spec.count - 1);
}

pulse_params pulse_at(const sweep_spec& spec, double value) {
    pulse_params p = spec.pulse;
    switch (spec.variable) {
        case sweep_variable::x: p.x = value; break;
        case sweep_variable::tau0: p.tau0 = value; break;
        case sweep_variable::y: p.tau0 = value * *spec.medium.omega0_tau_star; break;
    }
    return p;
}

void check_sweep(const sweep_spec& spec) {
    if (spec.count < 2) throw validation_error("sweep: count must be >= 2");
    if (!std::isfinite(spec.start) || !std::isfinite(spec.stop) || !(spec.start < spec.stop))
        throw validation_error("sweep: start must be finite and < stop");
    if (!(spec.start > 0.0))
        throw validation_error("sweep: swept values must be positive");
    if (spec.variable == sweep_variable::y && spec.medium.lineshape != lineshape_kind::lorentzian)
        throw validation_error("sweep: variable y requires a lorentzian medium");
    validate(spec.medium, pulse_at(spec, spec.start));
    validate(spec.medium, pulse_at(spec, spec.stop));
}

std::vector<std::pair<std::string, std::string>> echo_sweep(const char* kind,
                                                            const sweep_spec& spec) {
    std::vector<std::pair<std::string, std::string>> p;
    p.emplace_back("kind", kind);
    p.emplace_back("lineshape", lineshape_name(spec.medium.lineshape));
    p.emplace_back("nu", format_e12(spec.medium.nu));
    p.emplace_back("s0", spec.medium.s0 < 0 ? "-1" : "1");
    if (spec.medium.lineshape == lineshape_kind::lorentzian) {
        p.emplace_back("omega0_tau_star", format_e12(*spec.medium.omega0_tau_star));
        p.emplace_back("k_form", form_name(spec.form));
    }
    if (spec.variable != sweep_variable::x) p.emplace_back("x", format_e12(spec.pulse.x));
    if (spec.variable == sweep_variable::x) p.emplace_back("tau0", format_e12(spec.pulse.tau0));
    p.emplace_back("variable", variable_name(spec.variable));
    p.emplace_back("start", format_e12(spec.start));
    p.emplace_back("stop", format_e12(spec.stop));
    p.emplace_back("count", std::to_string(spec.count));
    return p;
}

std::string trim(std::string_view s) {
    const auto is_space = [](char c) {
        return c == ' ' || c == '\t' || c == '\r' || c == '\n';
    };
    std::size_t b = 0, e = s.size();
    while (b < e && is_space(s[b])) ++b;
    while (e > b && is_space(s[e - 1])) --e;
    return std::string(s.substr(b, e - b));
}

double snapshot_peak(const snapshot_state& s) {
    double peak = 0.0;
    for (double e : s.envelope) peak = std::max(peak, e);
    return peak;
}

}  // namespace

std::string json_escape(const std::string& s) {
    std::string out;
    out.reserve(s.size() + 2);
    for (char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\r': out += "\\r"; break;
            case '\t': out += "\\t"; break;
            default:
                if (static_cast<unsigned char>(c) < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof buf, "\\u%04x", c);
                    out += buf;
                } else {
                    out += c;
                }
        }
    }
    return out;
}

table run_dispersion(const sweep_spec& spec) {
    check_sweep(spec);
    table t;
    t.params = echo_sweep("dispersion_sweep", spec);
    t.columns = {variable_label(spec.variable), "K (omega0/c)", "exists"};
    t.rows.resize(spec.count);
    num::parallel_for(spec.count, [&](std::size_t i) {
        const double v = grid_value(spec, i);
        const auto sol = solve_dispersion(spec.medium, pulse_at(spec, v), spec.form);
        auto& row = t.rows[i];
        row.reserve(3);
        row.push_back(cell::number(v));
        row.push_back(sol.exists ? cell::number(sol.k_dimless) : cell::empty());
        row.push_back(cell::text(sol.exists ? "true" : "false"));
    });
    return t;
}

table run_velocity(const sweep_spec& spec) {
    check_sweep(spec);
    table t;
    t.params = echo_sweep("velocity_sweep", spec);
    t.columns = {variable_label(spec.variable), "V (c)", "regime"};
    t.rows.resize(spec.count);
    num::parallel_for(spec.count, [&](std::size_t i) {
        const double v = grid_value(spec, i);
        const auto sol = solve_dispersion(spec.medium, pulse_at(spec, v), spec.form);
        auto& row = t.rows[i];
        row.reserve(3);
        row.push_back(cell::number(v));
        if (sol.exists) {
            row.push_back(cell::number(sol.v_dimless));
            row.push_back(cell::text(regime_name(sol.regime)));
        } else {
            row.push_back(cell::empty());
            row.push_back(cell::empty());
        }
    });
    return t;
}

table run_critical(const critical_spec& spec) {
    if (!(spec.nu > 0.0) || !std::isfinite(spec.nu))
        throw validation_error("critical: nu must be a positive finite number");
    if (spec.count < 2) throw validation_error("critical: count must be >= 2");
    const auto min_info = min_critical_width(spec.nu);
    double start = spec.start, stop = spec.stop;
    if (!(start < stop)) {
        // Natural view: the stopping domain plus half a width of margin on
        // each side, so out-of-domain rows are visible.
        const double pad = 0.5 * (min_info.x_domain_hi - min_info.x_domain_lo);
        start = min_info.x_domain_lo - pad;
        stop = min_info.x_domain_hi + pad;
    }
    if (!std::isfinite(start) || !std::isfinite(stop) || !(start < stop))
        throw validation_error("critical: start must be finite and < stop");

    table t;
    t.params.emplace_back("kind", "critical_width");
    t.params.emplace_back("nu", format_e12(spec.nu));
    t.params.emplace_back("start", format_e12(start));
    t.params.emplace_back("stop", format_e12(stop));
    t.params.emplace_back("count", std::to_string(spec.count));
    t.params.emplace_back("domain_lo", format_e12(min_info.x_domain_lo));
    t.params.emplace_back("domain_hi", format_e12(min_info.x_domain_hi));
    t.params.emplace_back("min_x", format_e12(min_info.x_at_min));
    t.params.emplace_back("min_tau0_crit", format_e12(min_info.tau0_crit));
    t.columns = {"x (omega/omega0)", "tau0_crit (1/omega0)", "status"};
    t.rows.resize(spec.count);
    for (int i = 0; i < spec.count; ++i) {
        const double x =
            start + (stop - start) * static_cast<double>(i) / static_cast<double>(spec.count - 1);
        const auto tc = critical_width(x, spec.nu);
        auto& row = t.rows[i];
        row.reserve(3);
        row.push_back(cell::number(x));
        row.push_back(tc ? cell::number(*tc) : cell::empty());
        row.push_back(cell::text(tc ? "ok" : "out-of-domain"));
    }
    return t;
}

table run_area(const area_spec& spec) {
    const auto samples = area_theorem_evolve(spec.theta0, spec.beta, spec.x_max, spec.steps);
    table t;
    t.params.emplace_back("kind", "area_theorem");
    t.params.emplace_back("theta0", format_e12(spec.theta0));
    t.params.emplace_back("beta", format_e12(spec.beta));
    t.params.emplace_back("x_max", format_e12(spec.x_max));
    t.params.emplace_back("steps", std::to_string(spec.steps));
    t.columns = {"x (c/omega0)", "theta_numeric (rad)", "theta_closed_form (rad)"};
    t.rows.reserve(samples.size());
    for (const auto& [x, theta] : samples) {
        std::vector<cell> row;
        row.reserve(3);
        row.push_back(cell::number(x));
        row.push_back(cell::number(theta));
        row.push_back(cell::number(area_theorem_closed_form(spec.theta0, spec.beta, x)));
        t.rows.push_back(std::move(row));
    }
    return t;
}

namespace {

std::vector<std::pair<std::string, std::string>> echo_simulate(const simulate_spec& spec,
                                                               const simulate_summary& s) {
    std::vector<std::pair<std::string, std::string>> p;
    p.emplace_back("lineshape", lineshape_name(spec.medium.lineshape));
    p.emplace_back("nu", format_e12(spec.medium.nu));
    p.emplace_back("s0", spec.medium.s0 < 0 ? "-1" : "1");
    if (spec.medium.lineshape == lineshape_kind::lorentzian) {
        p.emplace_back("omega0_tau_star", format_e12(*spec.medium.omega0_tau_star));
        p.emplace_back("k_form", form_name(spec.form));
    }
    p.emplace_back("x", format_e12(spec.pulse.x));
    p.emplace_back("tau0", format_e12(spec.pulse.tau0));
    p.emplace_back("tau_min", format_e12(spec.tau_min));
    p.emplace_back("tau_max", format_e12(spec.tau_max));
    p.emplace_back("n_tau", std::to_string(spec.n_tau));
    p.emplace_back("steps", std::to_string(spec.steps));
    p.emplace_back("dx", format_e12(s.dx));
    p.emplace_back("snapshot_every", std::to_string(spec.snapshot_every));
    p.emplace_back("n_atoms", std::to_string(spec.n_atoms));
    p.emplace_back("cutoff", format_e12(spec.cutoff));
    p.emplace_back("k_scale", format_e12(spec.k_scale));
    p.emplace_back("area", format_e12(spec.area));
    p.emplace_back("k_launch", format_e12(s.k_launch));
    return p;
}

void render_pair_array(std::ostream& os, const std::vector<std::pair<double, double>>& a,
                       const char* indent) {
    os << "[";
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (i) os << ",";
        os << "\n" << indent << "[" << format_e12(a[i].first) << ", " << format_e12(a[i].second)
           << "]";
    }
    os << "\n  ]";
}

}  // namespace

void render_simulate_summary(std::ostream& os, const simulate_spec& spec,
                             const simulate_summary& s) {
    os << "{\n";
    os << "  \"version\": \"" << version_string << "\",\n";
    os << "  \"params\": {\n";
    const auto params = echo_simulate(spec, s);
    for (std::size_t i = 0; i < params.size(); ++i)
        os << "    \"" << json_escape(params[i].first) << "\": \""
           << json_escape(params[i].second) << "\"" << (i + 1 < params.size() ? "," : "")
           << "\n";
    os << "  },\n";
    os << "  \"k_closed_form\": " << format_e12(s.k_closed_form) << ",\n";
    os << "  \"v_closed_form\": " << format_e12(s.v_closed_form) << ",\n";
    os << "  \"k_launch\": " << format_e12(s.k_launch) << ",\n";
    os << "  \"measured_velocity\": " << format_e12(s.measured_velocity) << ",\n";
    os << "  \"velocity_error_rel\": " << format_e12(s.velocity_error_rel) << ",\n";
    os << "  \"fit_slope\": " << format_e12(s.fit_slope) << ",\n";
    os << "  \"fit_residual_rms\": " << format_e12(s.fit_residual_rms) << ",\n";
    os << "  \"max_phase_rate\": " << format_e12(s.max_phase_rate) << ",\n";
    os << "  \"peak_initial\": " << format_e12(s.peak_initial) << ",\n";
    os << "  \"peak_final\": " << format_e12(s.peak_final) << ",\n";
    os << "  \"peak_drift_rel\": " << format_e12(s.peak_drift_rel) << ",\n";
    os << "  \"area_initial\": " << format_e12(s.area_initial) << ",\n";
    os << "  \"area_final\": " << format_e12(s.area_final) << ",\n";
    os << "  \"area_history\": ";
    render_pair_array(os, s.record.area_history, "    ");
    os << ",\n";
    os << "  \"peak_trajectory\": ";
    render_pair_array(os, s.record.peak_trajectory, "    ");
    os << "\n}\n";
}

simulate_summary run_simulate(const simulate_spec& spec, const std::string& out_dir) {
    validate(spec.medium, spec.pulse);
    if (spec.n_tau < 8) throw validation_error("simulate: n_tau must be >= 8");
    if (spec.steps < 1) throw validation_error("simulate: steps must be >= 1");
    if (!(spec.tau_min < spec.tau_max) || !std::isfinite(spec.tau_min) ||
        !std::isfinite(spec.tau_max))
        throw validation_error("simulate: tau_min must be finite and < tau_max");
    if (!(spec.k_scale > 0.0) || !std::isfinite(spec.k_scale))
        throw validation_error("simulate: k_scale must be a positive finite number");
    if (!(spec.area > 0.0) || !std::isfinite(spec.area))
        throw validation_error("simulate: area must be a positive finite number");

    const auto sol = solve_dispersion(spec.medium, spec.pulse, spec.form);
    if (!sol.exists)
        throw numerical_error("simulate: no dispersion solution (" + sol.failure + ")");

    simulate_summary s;
    s.k_closed_form = sol.k_dimless;
    s.v_closed_form = sol.v_dimless;
    s.k_launch = spec.k_scale * sol.k_dimless;
    if (!(s.k_launch > 0.0))
        throw numerical_error("simulate: launch wavevector is not positive");

    const double tau0 = spec.pulse.tau0;
    const field_state initial = make_sech_field(spec.tau_min * tau0, spec.tau_max * tau0,
                                                static_cast<std::size_t>(spec.n_tau), tau0, 0.0,
                                                spec.area);
    const double dtau = initial.tau[1] - initial.tau[0];
    s.dx = spec.dx > 0.0 ? spec.dx : 0.9 * dtau * spec.pulse.x / s.k_launch;

    propagate_config cfg;
    cfg.k = s.k_launch;
    cfg.steps = spec.steps;
    cfg.dx = s.dx;
    cfg.snapshot_every = spec.snapshot_every > 0 ? spec.snapshot_every
                                                 : std::max(1, spec.steps / 10);
    cfg.n_atoms = spec.n_atoms;
    cfg.cutoff = spec.cutoff;

    s.record = propagate(spec.medium, spec.pulse, initial, cfg);
    const auto fit = measure_velocity(s.record);
    s.measured_velocity = fit.v_dimless;
    s.fit_slope = fit.slope;
    s.fit_residual_rms = fit.residual_rms;
    s.velocity_error_rel = s.v_closed_form != 0.0
                               ? std::abs(s.measured_velocity - s.v_closed_form) /
                                     std::abs(s.v_closed_form)
                               : std::numeric_limits<double>::infinity();
    s.max_phase_rate = max_phase_rate(s.record.snapshots.back());
    s.peak_initial = snapshot_peak(s.record.snapshots.front());
    s.peak_final = snapshot_peak(s.record.snapshots.back());
    s.peak_drift_rel = s.peak_initial != 0.0
                           ? std::abs(s.peak_final - s.peak_initial) / s.peak_initial
                           : 0.0;
    s.area_initial = s.record.area_history.front().second;
    s.area_final = s.record.area_history.back().second;

    if (!out_dir.empty()) {
        std::filesystem::create_directories(out_dir);
        const auto snap_path = std::filesystem::path(out_dir) / "snapshots.csv";
        std::ofstream snap_os(snap_path);
        if (!snap_os)
            throw validation_error("simulate: cannot open output file: " + snap_path.string());
        write_snapshots(snap_os, s.record, echo_simulate(spec, s));

        const auto sum_path = std::filesystem::path(out_dir) / "summary.json";
        std::ofstream sum_os(sum_path);
        if (!sum_os)
            throw validation_error("simulate: cannot open output file: " + sum_path.string());
        render_simulate_summary(sum_os, spec, s);
    }
    return s;
}

void render_csv(std::ostream& os, const table& t) {
    os << "# sit " << version_string << "\n";
    for (const auto& [key, value] : t.params) os << "# " << key << "=" << value << "\n";
    for (std::size_t c = 0; c < t.columns.size(); ++c)
        os << t.columns[c] << (c + 1 < t.columns.size() ? "," : "");
    os << "\n";
    for (const auto& row : t.rows) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            const cell& v = row[c];
            if (v.k == cell::kind::number)
                os << format_e12(v.num);
            else if (v.k == cell::kind::text)
                os << v.str;
            os << (c + 1 < row.size() ? "," : "");
        }
        os << "\n";
    }
}

void render_json(std::ostream& os, const table& t) {
    os << "{\n";
    os << "  \"version\": \"" << version_string << "\",\n";
    os << "  \"params\": {\n";
    for (std::size_t i = 0; i < t.params.size(); ++i)
        os << "    \"" << json_escape(t.params[i].first) << "\": \""
           << json_escape(t.params[i].second) << "\"" << (i + 1 < t.params.size() ? "," : "")
           << "\n";
    os << "  },\n";
    os << "  \"columns\": [";
    for (std::size_t c = 0; c < t.columns.size(); ++c)
        os << (c ? ", " : "") << "\"" << json_escape(t.columns[c]) << "\"";
    os << "],\n";
    os << "  \"rows\": [";
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        if (r) os << ",";
        os << "\n    [";
        const auto& row = t.rows[r];
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (c) os << ", ";
            const cell& v = row[c];
            if (v.k == cell::kind::number)
                os << format_e12(v.num);
            else if (v.k == cell::kind::text)
                os << "\"" << json_escape(v.str) << "\"";
            else
                os << "null";
        }
        os << "]";
    }
    os << "\n  ]\n}\n";
}

void write_table(const table& t, const std::string& path, output_format format) {
    const auto render = [&](std::ostream& os) {
        if (format == output_format::csv)
            render_csv(os, t);
        else
            render_json(os, t);
    };
    if (path.empty()) {
        render(std::cout);
        return;
    }
    std::ofstream os(path);
    if (!os) throw validation_error("cannot open output file: " + path);
    render(os);
}

config_map parse_config_text(const std::string& text) {
    config_map out;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        const std::string stripped = trim(line);
        if (stripped.empty()) continue;
        const auto eq = stripped.find('=');
        if (eq == std::string::npos)
            throw validation_error("config line " + std::to_string(lineno) +
                                   ": expected key=value");
        std::string key = trim(std::string_view(stripped).substr(0, eq));
        std::string value = trim(std::string_view(stripped).substr(eq + 1));
        if (key.empty())
            throw validation_error("config line " + std::to_string(lineno) + ": empty key");
        out.emplace_back(std::move(key), std::move(value));
    }
    return out;
}

config_map parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw validation_error("cannot read config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str());
}

std::optional<std::string> config_get(const config_map& cfg, const std::string& key) {
    for (auto it = cfg.rbegin(); it != cfg.rend(); ++it)
        if (it->first == key) return it->second;
    return std::nullopt;
}

}  // namespace sit::cli

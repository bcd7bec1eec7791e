// Command implementations behind the sit_cli executable, kept as library
// code so the test suite drives them in-process.  Sweeps evaluate grid
// points concurrently and assemble rows in input order; all text output is
// rendered with fixed %.12e floats so identical inputs give identical bytes.

#pragma once

#include <iosfwd>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "sit/core.hpp"
#include "sit/dispersion.hpp"
#include "sit/mbe.hpp"

namespace sit::cli {

enum class sweep_variable { x, tau0, y };
enum class output_format { csv, json };

struct sweep_spec {
    sweep_variable variable = sweep_variable::x;
    double start = 0.0;
    double stop = 0.0;
    int count = 0;  // grid points, >= 2
    medium_params medium{};
    pulse_params pulse{};  // the swept member is overwritten per grid point
    broadened_form form = broadened_form::canonical;
};

// One output cell: a number, a short text token, or empty (a value that does
// not exist at this grid point; empty CSV field, JSON null).
struct cell {
    enum class kind { empty, number, text };
    kind k = kind::empty;
    double num = 0.0;
    std::string str;

    static cell empty() { return {}; }
    static cell number(double v) { return {kind::number, v, {}}; }
    static cell text(std::string s) { return {kind::text, 0.0, std::move(s)}; }
};

struct table {
    std::vector<std::pair<std::string, std::string>> params;  // echoed into every header
    std::vector<std::string> columns;                         // names with unit annotations
    std::vector<std::vector<cell>> rows;
};

table run_dispersion(const sweep_spec& spec);
table run_velocity(const sweep_spec& spec);

struct critical_spec {
    double nu = 1.0;
    double start = 0.0;  // start >= stop selects the natural stopping domain
    double stop = 0.0;   // padded by half a domain width on each side
    int count = 200;
};
// (x, tau0_crit, status) rows; the minimum over the stopping domain is
// echoed in the params header as min_x / min_tau0_crit.
table run_critical(const critical_spec& spec);

struct area_spec {
    double theta0 = 0.5 * std::numbers::pi;
    double beta = 1.0;
    double x_max = 10.0;
    int steps = 100;  // output intervals
};
// (x, theta_numeric, theta_closed_form) rows from the adaptive RK
// integration next to the tan-half closed form.
table run_area(const area_spec& spec);

struct simulate_spec {
    medium_params medium{};
    pulse_params pulse{};
    broadened_form form = broadened_form::canonical;
    double tau_min = -20.0;  // grid bounds in units of tau0
    double tau_max = 24.0;
    int n_tau = 2048;
    int steps = 500;
    double dx = 0.0;         // <= 0 derives 0.9 * dtau * x/K from the grid
    int snapshot_every = 0;  // 0 keeps first and last only
    int n_atoms = 200;
    double cutoff = 0.0;     // lorentzian detuning cutoff; <= 0 -> 50/tau_star
    double k_scale = 1.0;    // launch-K multiplier for off-resonance studies
    double area = 2.0 * std::numbers::pi;  // launch Bloch-angle area
};

struct simulate_summary {
    double k_closed_form = 0.0;
    double v_closed_form = 0.0;
    double k_launch = 0.0;
    double dx = 0.0;
    double measured_velocity = 0.0;
    double velocity_error_rel = 0.0;  // |measured - closed|/closed
    double fit_slope = 0.0;
    double fit_residual_rms = 0.0;
    double max_phase_rate = 0.0;  // over the final snapshot
    double peak_initial = 0.0;
    double peak_final = 0.0;
    double peak_drift_rel = 0.0;
    double area_initial = 0.0;
    double area_final = 0.0;
    propagation_record record;
};

// Runs the configured propagation; when out_dir is non-empty the directory
// is created and receives snapshots.csv plus summary.json.
simulate_summary run_simulate(const simulate_spec& spec, const std::string& out_dir);

// The summary.json rendering, exposed so the executable can stream it to
// stdout when no run directory is requested.
void render_simulate_summary(std::ostream& os, const simulate_spec& spec,
                             const simulate_summary& s);

void render_csv(std::ostream& os, const table& t);
void render_json(std::ostream& os, const table& t);
// Renders to the path, or to stdout when path is empty.
void write_table(const table& t, const std::string& path, output_format format);

// Minimal JSON string escaping (quotes, backslashes, control characters).
std::string json_escape(const std::string& s);

// Flat key=value configuration text: one pair per line, '#' starts a
// comment, blank lines ignored, keys and values trimmed of surrounding
// whitespace.  Later occurrences of a key override earlier ones.
using config_map = std::vector<std::pair<std::string, std::string>>;
config_map parse_config_text(const std::string& text);
config_map parse_config_file(const std::string& path);
std::optional<std::string> config_get(const config_map& cfg, const std::string& key);

}  // namespace sit::cli

// Command-line front end: prepare states, apply monitoring, compute
// quantifier reports, build time schedules, simulate and reconstruct
// tomography data, run the full sweep, and verify bound datasets.
//
// Exit codes: 0 = clean, 1 = bound violation on theorem-backed (ideal) rows,
// 2 = input or convergence error.

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qrealism/qrealism.hpp"

namespace {

using namespace qrealism;

DensityMatrix<4> load_state(const std::string& arg) {
  if (is_state_spec(arg)) return parse_state_spec(arg);
  return read_density<4>(arg);
}

ObservableBasis parse_basis(const std::string& arg) {
  const auto comma = arg.find(',');
  if (comma == std::string::npos)
    throw std::invalid_argument("--basis expects 'theta,phi' (radians)");
  return ObservableBasis(std::stod(arg.substr(0, comma)), std::stod(arg.substr(comma + 1)));
}

void write_or_print(const std::string& out_path, const std::string& text) {
  if (out_path.empty()) {
    std::cout << text;
    if (!text.empty() && text.back() != '\n') std::cout << '\n';
  } else {
    detail::write_text_file(out_path, text);
  }
}

int print_bounds_report(const BoundsReport& report) {
  for (const BoundCheck& c : report.checks) {
    if (c.slack < -1e-9) {
      std::cerr << (c.hard_violation ? "VIOLATION" : "warning") << ": mu=" << format_sig12(c.mu)
                << " eps=" << format_sig12(c.eps) << " method=" << to_string(c.method)
                << " slack=" << format_sig12(c.slack);
      if (c.err > 0.0) std::cerr << " err=" << format_sig12(c.err);
      std::cerr << '\n';
    }
  }
  std::cout << "checked " << report.checks.size() << " rows: " << report.hard_violations
            << " hard violations, " << report.noisy_violations << " within-noise crossings\n";
  return report.ok() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Entropic realism, monitoring, and discord for two-qubit states"};
  app.require_subcommand(1);

  // prepare
  auto* prepare = app.add_subcommand("prepare", "Emit a Werner state as density JSON");
  double prepare_mu = 1.0;
  std::string prepare_out;
  prepare->add_option("--mu", prepare_mu, "Werner mixing parameter in [0,1]")->required();
  prepare->add_option("--out", prepare_out, "Output path (default stdout)");

  // monitor
  auto* monitor = app.add_subcommand("monitor", "Apply a monitoring map to a state");
  std::string monitor_state = "bell:phi-";
  double monitor_eps = 0.0;
  std::string monitor_basis;
  std::string monitor_out;
  monitor->add_option("--eps", monitor_eps, "Monitoring strength in [0,1]")->required();
  monitor->add_option("--state", monitor_state,
                      "Input state: density JSON path, 'bell:<label>' or 'werner:<mu>'");
  monitor->add_option("--basis", monitor_basis, "Measured basis as 'theta,phi' (radians)");
  monitor->add_option("--out", monitor_out, "Output path (default stdout)");

  // quantify
  auto* quantify = app.add_subcommand("quantify", "Quantifier report for a state (CSV)");
  std::string quantify_state;
  double quantify_eps = 1.0;
  std::string quantify_basis;
  std::string quantify_out;
  quantify->add_option("--state", quantify_state,
                       "Input state: density JSON path, 'bell:<label>' or 'werner:<mu>'")
      ->required();
  quantify->add_option("--eps", quantify_eps, "Monitoring strength in [0,1]")->required();
  quantify->add_option("--basis", quantify_basis, "Measured basis as 'theta,phi' (radians)");
  quantify->add_option("--out", quantify_out, "Output path (default stdout)");

  // schedule
  auto* schedule = app.add_subcommand("schedule", "Time-sliced preparation schedule (JSON)");
  std::optional<double> schedule_mu, schedule_eps;
  double schedule_total = 16.0;
  double schedule_granularity = 0.0;
  std::string schedule_out;
  schedule->add_option("--mu", schedule_mu, "Werner parameter: emit the four-slice schedule");
  schedule->add_option("--eps", schedule_eps, "Monitoring strength: emit the two-slice schedule");
  schedule->add_option("--total", schedule_total, "Total acquisition time in seconds");
  schedule->add_option("--granularity", schedule_granularity,
                       "Round slice durations to multiples of this many seconds (0 = exact)");
  schedule->add_option("--out", schedule_out, "Output path (default stdout)");

  // tomo
  auto* tomo = app.add_subcommand("tomo", "Tomography simulate/reconstruct");
  tomo->require_subcommand(1);
  auto* tomo_sim = tomo->add_subcommand("simulate", "Simulate Poisson coincidence counts (CSV)");
  std::string sim_state;
  double sim_exposure = 16.0, sim_rate = 625.0;
  std::uint64_t sim_seed = 0;
  std::string sim_out;
  tomo_sim->add_option("--state", sim_state,
                       "Input state: density JSON path, 'bell:<label>' or 'werner:<mu>'")
      ->required();
  tomo_sim->add_option("--exposure", sim_exposure, "Seconds per setting");
  tomo_sim->add_option("--rate", sim_rate, "Coincidences/s at unit probability");
  tomo_sim->add_option("--seed", sim_seed, "Generator seed")->required();
  tomo_sim->add_option("--out", sim_out, "Output path (default stdout)");

  auto* tomo_rec = tomo->add_subcommand("reconstruct", "Reconstruct a state from counts CSV");
  std::string rec_counts;
  std::string rec_method = "mle";
  std::string rec_out;
  tomo_rec->add_option("--counts", rec_counts, "Counts CSV path")->required();
  tomo_rec->add_option("--method", rec_method, "mle | projected | linear-inversion")
      ->check(CLI::IsMember({"mle", "projected", "linear-inversion"}));
  tomo_rec->add_option("--out", rec_out, "Output path for density JSON (default stdout)");

  // sweep
  auto* sweep = app.add_subcommand("sweep", "Run the mu x eps grid and emit datasets");
  std::string sweep_config;
  std::string sweep_mode_flag;
  std::optional<std::uint64_t> sweep_seed;
  std::optional<int> sweep_bootstrap;
  std::optional<double> sweep_exposure, sweep_rate;
  std::string sweep_csv_flag, sweep_json_flag, fidelity_csv_flag;
  sweep->add_option("--config", sweep_config, "Config JSON path (flags override its values)");
  sweep->add_option("--mode", sweep_mode_flag, "ideal | simulated-tomography")
      ->check(CLI::IsMember({"ideal", "simulated-tomography"}));
  sweep->add_option("--seed", sweep_seed, "Generator seed (required in simulated mode)");
  sweep->add_option("--bootstrap", sweep_bootstrap, "Bootstrap resamples per grid cell");
  sweep->add_option("--exposure", sweep_exposure, "Seconds per setting");
  sweep->add_option("--rate", sweep_rate, "Coincidences/s at unit probability");
  sweep->add_option("--sweep-csv", sweep_csv_flag, "Write sweep rows as CSV here");
  sweep->add_option("--sweep-json", sweep_json_flag, "Write sweep rows as JSON here");
  sweep->add_option("--fidelity-csv", fidelity_csv_flag, "Write the fidelity table here");

  // verify
  auto* verify = app.add_subcommand("verify", "Check the monitoring bound on a sweep dataset");
  std::string verify_dataset;
  verify->add_option("--dataset", verify_dataset, "Sweep dataset path (CSV or JSON)")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (prepare->parsed()) {
      write_or_print(prepare_out, density_to_json<4>(werner_state(prepare_mu)).dump(2));
      return 0;
    }

    if (monitor->parsed()) {
      const DensityMatrix<4> rho = load_state(monitor_state);
      const ObservableBasis basis =
          monitor_basis.empty() ? ObservableBasis::computational() : parse_basis(monitor_basis);
      write_or_print(monitor_out,
                     density_to_json<4>(monitoring(rho, basis, monitor_eps)).dump(2));
      return 0;
    }

    if (quantify->parsed()) {
      const DensityMatrix<4> rho = load_state(quantify_state);
      const ObservableBasis basis =
          quantify_basis.empty() ? ObservableBasis::computational() : parse_basis(quantify_basis);
      const QuantifierReport report = quantifier_report(rho, basis, quantify_eps);
      QuantifierCsvRow row;
      if (quantify_state.rfind("werner:", 0) == 0)
        row.mu = std::stod(quantify_state.substr(7));
      row.eps = quantify_eps;
      row.irrealism = report.irrealism;
      row.realism = report.realism;
      row.delta_realism = report.delta_realism;
      row.weak_discord_unmin = report.weak_discord_unmin;
      row.weak_discord_min = weak_discord(rho, quantify_eps).value;
      row.discord_e1 = discord(rho).value;
      row.bound = report.bound_eps_times_irrealism;
      row.slack = report.delta_realism - report.bound_eps_times_irrealism;
      write_or_print(quantify_out, quantifier_csv_header() + "\n" + quantifier_csv_row(row) + "\n");
      return 0;
    }

    if (schedule->parsed()) {
      if (schedule_mu.has_value() == schedule_eps.has_value())
        throw std::invalid_argument("schedule: pass exactly one of --mu or --eps");
      TimeSchedule sched = schedule_mu.has_value()
                               ? werner_schedule(*schedule_mu, schedule_total)
                               : monitoring_schedule(*schedule_eps, schedule_total);
      if (schedule_granularity > 0.0) {
        const QuantizedSchedule q = quantize_schedule(sched, schedule_granularity);
        std::cerr << "quantized to " << format_sig12(schedule_granularity)
                  << " s quanta, max weight error " << format_sig12(q.max_weight_error) << '\n';
        sched = q.schedule;
      }
      write_or_print(schedule_out, schedule_to_json(sched).dump(2));
      return 0;
    }

    if (tomo_sim->parsed()) {
      const DensityMatrix<4> rho = load_state(sim_state);
      const CountsTable table =
          simulate_counts(rho, standard_settings(), sim_exposure, sim_rate, sim_seed);
      write_or_print(sim_out, counts_to_csv(table));
      return 0;
    }

    if (tomo_rec->parsed()) {
      const CountsTable table = read_counts_csv(rec_counts);
      ReconstructionMethod method = ReconstructionMethod::Mle;
      if (rec_method == "projected") method = ReconstructionMethod::Projected;
      if (rec_method == "linear-inversion") method = ReconstructionMethod::LinearInversion;
      const ReconstructionResult result = reconstruct(table, method);
      std::cerr << "method=" << to_string(result.method)
                << " residual=" << format_sig12(result.residual);
      if (method == ReconstructionMethod::Mle)
        std::cerr << " loglik=" << format_sig12(result.loglik) << " iterations="
                  << result.iterations << " converged=" << (result.converged ? "yes" : "no");
      std::cerr << '\n';
      if (method == ReconstructionMethod::Mle && !result.converged) {
        std::cerr << "error: maximum-likelihood iteration did not converge\n";
        return 2;
      }
      write_or_print(rec_out, density_to_json<4>(result.rho_hat).dump(2));
      return 0;
    }

    if (sweep->parsed()) {
      ExperimentConfig cfg;
      if (!sweep_config.empty()) cfg = read_experiment_config(sweep_config);
      if (!sweep_mode_flag.empty()) cfg.mode = sweep_mode_from_string(sweep_mode_flag);
      if (sweep_seed) cfg.seed = *sweep_seed;
      if (sweep_bootstrap) cfg.n_bootstrap = *sweep_bootstrap;
      if (sweep_exposure) cfg.exposure_s = *sweep_exposure;
      if (sweep_rate) cfg.rate_hz = *sweep_rate;
      if (!sweep_csv_flag.empty()) cfg.sweep_csv = sweep_csv_flag;
      if (!sweep_json_flag.empty()) cfg.sweep_json = sweep_json_flag;
      if (!fidelity_csv_flag.empty()) cfg.fidelity_csv = fidelity_csv_flag;
      validate_config(cfg);

      const std::vector<SweepRow> rows = run_sweep(cfg);
      if (!cfg.sweep_csv.empty()) emit(rows, EmitFormat::Csv, cfg.sweep_csv);
      if (!cfg.sweep_json.empty()) emit(rows, EmitFormat::Json, cfg.sweep_json);
      if (cfg.sweep_csv.empty() && cfg.sweep_json.empty()) std::cout << sweep_to_csv(rows);
      if (!cfg.fidelity_csv.empty()) emit(fidelity_table(cfg), cfg.fidelity_csv);
      return print_bounds_report(verify_bounds(rows));
    }

    if (verify->parsed())
      return print_bounds_report(verify_bounds(read_sweep_dataset(verify_dataset)));
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}

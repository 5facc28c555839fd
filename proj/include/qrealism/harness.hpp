#pragma once

// Experiment harness: run the full mu x eps grid in ideal or
// simulated-tomography mode, verify the monitoring bound on every row, build
// the fidelity table, and emit plot-ready CSV/JSON datasets.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>  // nlohmann/json single header (vendored)

#include "qrealism/channels.hpp"
#include "qrealism/density.hpp"
#include "qrealism/io.hpp"
#include "qrealism/quantifiers.hpp"
#include "qrealism/states.hpp"
#include "qrealism/tomography.hpp"

namespace qrealism {

enum class SweepMode { Ideal, SimulatedTomography };

inline std::string to_string(SweepMode m) {
  return m == SweepMode::Ideal ? "ideal" : "simulated-tomography";
}

inline SweepMode sweep_mode_from_string(const std::string& s) {
  if (s == "ideal") return SweepMode::Ideal;
  if (s == "simulated-tomography") return SweepMode::SimulatedTomography;
  throw std::invalid_argument("unknown sweep mode '" + s + "'");
}

// Order matches the emitted sort order within a grid cell.
enum class EstimationMethod { EntropyVariation, MutualInfoDifference, MinimizedDiscord };

inline std::string to_string(EstimationMethod m) {
  switch (m) {
    case EstimationMethod::EntropyVariation: return "entropy-variation";
    case EstimationMethod::MutualInfoDifference: return "mutual-info-difference";
    case EstimationMethod::MinimizedDiscord: return "minimized-discord";
  }
  throw std::logic_error("to_string: bad EstimationMethod");
}

inline EstimationMethod estimation_method_from_string(const std::string& s) {
  if (s == "entropy-variation") return EstimationMethod::EntropyVariation;
  if (s == "mutual-info-difference") return EstimationMethod::MutualInfoDifference;
  if (s == "minimized-discord") return EstimationMethod::MinimizedDiscord;
  throw std::invalid_argument("unknown estimation method '" + s + "'");
}

struct ExperimentConfig {
  SweepMode mode = SweepMode::Ideal;
  std::vector<double> mu_values = {0.0, 0.25, 0.5, 0.75, 1.0};
  std::vector<double> eps_values = {0.0, 0.25, 0.5, 0.75, 1.0};
  double exposure_s = 16.0;  // acquisition time per setting
  double rate_hz = 625.0;    // coincidences/s at unit probability
  std::optional<std::uint64_t> seed;
  int n_bootstrap = 50;
  std::string sweep_csv;     // output paths; empty = do not write
  std::string sweep_json;
  std::string fidelity_csv;
};

inline void validate_config(const ExperimentConfig& cfg) {
  if (cfg.mu_values.empty() || cfg.eps_values.empty())
    throw std::invalid_argument("config: mu_values and eps_values must be nonempty");
  for (double mu : cfg.mu_values)
    if (!(mu >= 0.0 && mu <= 1.0))
      throw std::invalid_argument("config: mu values must lie in [0,1]");
  for (double eps : cfg.eps_values)
    if (!(eps >= 0.0 && eps <= 1.0))
      throw std::invalid_argument("config: eps values must lie in [0,1]");
  if (cfg.mode == SweepMode::SimulatedTomography) {
    if (!cfg.seed.has_value())
      throw std::invalid_argument("config: seed is required in simulated-tomography mode");
    if (!(cfg.exposure_s > 0.0) || !(cfg.rate_hz > 0.0))
      throw std::invalid_argument("config: exposure_s and rate_hz must be positive");
    if (cfg.n_bootstrap < 2)
      throw std::invalid_argument("config: n_bootstrap must be at least 2");
  }
}

inline ExperimentConfig config_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw std::invalid_argument("config: expected a JSON object");
  ExperimentConfig cfg;
  for (const auto& [key, value] : j.items()) {
    if (key == "mode") cfg.mode = sweep_mode_from_string(value.get<std::string>());
    else if (key == "mu_values") cfg.mu_values = value.get<std::vector<double>>();
    else if (key == "eps_values") cfg.eps_values = value.get<std::vector<double>>();
    else if (key == "exposure_s") cfg.exposure_s = value.get<double>();
    else if (key == "rate_hz") cfg.rate_hz = value.get<double>();
    else if (key == "seed") cfg.seed = value.get<std::uint64_t>();
    else if (key == "n_bootstrap") cfg.n_bootstrap = value.get<int>();
    else if (key == "sweep_csv") cfg.sweep_csv = value.get<std::string>();
    else if (key == "sweep_json") cfg.sweep_json = value.get<std::string>();
    else if (key == "fidelity_csv") cfg.fidelity_csv = value.get<std::string>();
    else throw std::invalid_argument("config: unknown key '" + key + "'");
  }
  validate_config(cfg);
  return cfg;
}

inline ExperimentConfig read_experiment_config(const std::string& path) {
  try {
    return config_from_json(nlohmann::json::parse(detail::read_text_file(path)));
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error(path + ": invalid config JSON (" + e.what() + ")");
  } catch (const std::invalid_argument& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
}

struct SweepRow {
  double mu = 0.0;
  double eps = 0.0;
  EstimationMethod method = EstimationMethod::EntropyVariation;
  double value = 0.0;
  double err = 0.0;  // bootstrap std; 0 in ideal mode
  double bound = 0.0;
  double closed_form = 0.0;
  double fidelity = 1.0;
};

namespace detail {

// Distinct stream tags so preparation, bootstrap, and fidelity tomography
// never share a generator stream.
inline constexpr std::uint64_t kStreamPrepare = 0;
inline constexpr std::uint64_t kStreamBootstrap = 1u << 20;
inline constexpr std::uint64_t kStreamFidelity = 1u << 21;

}  // namespace detail

// One row per (mu, eps, method), sorted by mu, then eps, then method. In
// simulated mode the prepared Werner state is measured by tomography once per
// mu; every method and every monitoring strength is then evaluated on that
// reconstruction, with Poisson-bootstrap error bars. The bound column is
// eps times the irrealism of the ideal source state, so noisy values may
// legitimately cross it; the closed-form column is the analytic curve.
inline std::vector<SweepRow> run_sweep(const ExperimentConfig& cfg) {
  validate_config(cfg);
  std::vector<double> mu_values = cfg.mu_values;
  std::vector<double> eps_values = cfg.eps_values;
  std::sort(mu_values.begin(), mu_values.end());
  std::sort(eps_values.begin(), eps_values.end());
  const ObservableBasis basis = ObservableBasis::computational();
  const std::array<EstimationMethod, 3> methods = {EstimationMethod::EntropyVariation,
                                                   EstimationMethod::MutualInfoDifference,
                                                   EstimationMethod::MinimizedDiscord};
  std::vector<SweepRow> rows;
  rows.reserve(mu_values.size() * eps_values.size() * 3);

  for (std::size_t mi = 0; mi < mu_values.size(); ++mi) {
    const double mu = mu_values[mi];
    const DensityMatrix<4> ideal = werner_state(mu);

    DensityMatrix<4> state = ideal;
    double state_fidelity = 1.0;
    CountsTable counts;
    if (cfg.mode == SweepMode::SimulatedTomography) {
      counts = simulate_counts(ideal, standard_settings(), cfg.exposure_s, cfg.rate_hz,
                               derive_seed(*cfg.seed, detail::kStreamPrepare + mi));
      const ReconstructionResult rec = mle_reconstruct(counts);
      if (!rec.converged) {
        std::ostringstream msg;
        msg << "sweep: reconstruction did not converge for prepared state at mu="
            << format_sig12(mu) << " (" << rec.iterations << " iterations)";
        throw std::runtime_error(msg.str());
      }
      state = rec.rho_hat;
      state_fidelity = fidelity(state, ideal);
    }

    // Primary estimates per eps; the minimizer's argmin seeds the bootstrap.
    std::vector<std::array<double, 3>> values(eps_values.size());
    std::vector<ObservableBasis> argmins(eps_values.size(), basis);
    for (std::size_t ei = 0; ei < eps_values.size(); ++ei) {
      const double eps = eps_values[ei];
      values[ei][0] = delta_realism(state, basis, eps);
      values[ei][1] = weak_discord_unminimized(state, basis, eps);
      const MinimizationResult min = weak_discord(state, eps);
      if (!min.converged) {
        std::ostringstream msg;
        msg << "sweep: discord minimization did not converge at mu=" << format_sig12(mu)
            << " eps=" << format_sig12(eps);
        throw std::runtime_error(msg.str());
      }
      values[ei][2] = min.value;
      argmins[ei] = min.argmin;
    }

    // One bootstrap pass per mu: each resample reconstructs once and
    // evaluates every (eps, method) quantifier on that reconstruction.
    std::vector<std::array<double, 3>> errs(eps_values.size(), {0.0, 0.0, 0.0});
    if (cfg.mode == SweepMode::SimulatedTomography) {
      QuantifierSpec spec;
      for (std::size_t ei = 0; ei < eps_values.size(); ++ei) {
        const double eps = eps_values[ei];
        spec.emplace_back("ev", [&, eps](const DensityMatrix<4>& r) {
          return delta_realism(r, basis, eps);
        });
        spec.emplace_back("mid", [&, eps](const DensityMatrix<4>& r) {
          return weak_discord_unminimized(r, basis, eps);
        });
        MinimizeOptions warm;
        warm.warm_start = std::array<double, 2>{argmins[ei].theta(), argmins[ei].phi()};
        spec.emplace_back("md", [eps, warm](const DensityMatrix<4>& r) {
          return weak_discord(r, eps, Subsystem::A, warm).value;
        });
      }
      const std::vector<QuantifierStat> stats = bootstrap_errorbars(
          counts, cfg.n_bootstrap, derive_seed(*cfg.seed, detail::kStreamBootstrap + mi), spec);
      for (std::size_t ei = 0; ei < eps_values.size(); ++ei)
        for (int m = 0; m < 3; ++m) errs[ei][m] = stats[3 * ei + m].stddev;
    }

    const double source_irrealism = irrealism(ideal, basis);
    for (std::size_t ei = 0; ei < eps_values.size(); ++ei) {
      const double eps = eps_values[ei];
      for (int m = 0; m < 3; ++m) {
        SweepRow row;
        row.mu = mu;
        row.eps = eps;
        row.method = methods[static_cast<std::size_t>(m)];
        row.value = values[ei][static_cast<std::size_t>(m)];
        row.err = errs[ei][static_cast<std::size_t>(m)];
        row.bound = eps * source_irrealism;
        row.closed_form = werner_delta_realism_closed_form(mu, eps);
        row.fidelity = state_fidelity;
        rows.push_back(row);
      }
    }
  }
  return rows;
}

struct BoundCheck {
  double mu = 0.0;
  double eps = 0.0;
  EstimationMethod method = EstimationMethod::EntropyVariation;
  double slack = 0.0;  // value - bound
  bool hard_violation = false;  // ideal row (err == 0) below the bound
  double err = 0.0;
};

struct BoundsReport {
  std::vector<BoundCheck> checks;
  int hard_violations = 0;
  int noisy_violations = 0;  // bound crossed within shot noise; warning only
  bool ok() const { return hard_violations == 0; }
};

// slack = value - bound per row. Rows with err == 0 are theorem-backed
// (ideal mode): slack < -1e-9 is a hard failure. Noisy rows may cross the
// bound; they are reported alongside their error bars.
inline BoundsReport verify_bounds(const std::vector<SweepRow>& rows) {
  BoundsReport report;
  report.checks.reserve(rows.size());
  for (const SweepRow& row : rows) {
    BoundCheck check;
    check.mu = row.mu;
    check.eps = row.eps;
    check.method = row.method;
    check.slack = row.value - row.bound;
    check.err = row.err;
    if (check.slack < -1e-9) {
      if (row.err == 0.0) {
        check.hard_violation = true;
        ++report.hard_violations;
      } else {
        ++report.noisy_violations;
      }
    }
    report.checks.push_back(check);
  }
  return report;
}

struct FidelityRow {
  double mu = 0.0;
  double eps = 0.0;
  double fidelity_monitored = 0.0;  // vs ideal monitored Werner state
  double fidelity_bell = 0.0;       // vs raw |phi-><phi-|
};

// Tomography of the monitored state at every grid cell, scored against both
// candidate references (the ideal monitored state and the raw Bell state).
inline std::vector<FidelityRow> fidelity_table(const ExperimentConfig& cfg) {
  validate_config(cfg);
  if (cfg.mode != SweepMode::SimulatedTomography)
    throw std::invalid_argument("fidelity_table: requires simulated-tomography mode");
  std::vector<double> mu_values = cfg.mu_values;
  std::vector<double> eps_values = cfg.eps_values;
  std::sort(mu_values.begin(), mu_values.end());
  std::sort(eps_values.begin(), eps_values.end());
  const ObservableBasis basis = ObservableBasis::computational();
  const DensityMatrix<4> bell = bell_state(BellLabel::PhiMinus);
  const auto settings = standard_settings();

  std::vector<FidelityRow> rows(mu_values.size() * eps_values.size());
  for (std::size_t mi = 0; mi < mu_values.size(); ++mi) {
    for (std::size_t ei = 0; ei < eps_values.size(); ++ei) {
      const std::size_t cell = mi * eps_values.size() + ei;
      const DensityMatrix<4> monitored = monitoring(werner_state(mu_values[mi]), basis,
                                                    eps_values[ei]);
      const CountsTable counts =
          simulate_counts(monitored, settings, cfg.exposure_s, cfg.rate_hz,
                          derive_seed(*cfg.seed, detail::kStreamFidelity + cell));
      const ReconstructionResult rec = mle_reconstruct(counts);
      if (!rec.converged) {
        std::ostringstream msg;
        msg << "fidelity_table: reconstruction did not converge at mu="
            << format_sig12(mu_values[mi]) << " eps=" << format_sig12(eps_values[ei]);
        throw std::runtime_error(msg.str());
      }
      FidelityRow& row = rows[cell];
      row.mu = mu_values[mi];
      row.eps = eps_values[ei];
      row.fidelity_monitored = fidelity(rec.rho_hat, monitored);
      row.fidelity_bell = fidelity(rec.rho_hat, bell);
    }
  }
  return rows;
}

// --- dataset emission -------------------------------------------------------

inline std::string sweep_to_csv(const std::vector<SweepRow>& rows) {
  std::ostringstream out;
  out << "mu,eps,method,value,err,bound,closed_form,fidelity\n";
  for (const SweepRow& r : rows) {
    out << format_sig12(r.mu) << ',' << format_sig12(r.eps) << ',' << to_string(r.method) << ','
        << format_sig12(r.value) << ',' << format_sig12(r.err) << ',' << format_sig12(r.bound)
        << ',' << format_sig12(r.closed_form) << ',' << format_sig12(r.fidelity) << '\n';
  }
  return out.str();
}

inline nlohmann::json sweep_to_json(const std::vector<SweepRow>& rows) {
  nlohmann::json arr = nlohmann::json::array();
  for (const SweepRow& r : rows) {
    arr.push_back({{"mu", r.mu},
                   {"eps", r.eps},
                   {"method", to_string(r.method)},
                   {"value", r.value},
                   {"err", r.err},
                   {"bound", r.bound},
                   {"closed_form", r.closed_form},
                   {"fidelity", r.fidelity}});
  }
  return nlohmann::json{{"rows", arr}};
}

inline std::vector<SweepRow> sweep_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("rows"))
    throw std::invalid_argument("sweep dataset: expected object with 'rows'");
  std::vector<SweepRow> rows;
  for (const auto& e : j.at("rows")) {
    SweepRow r;
    r.mu = e.at("mu").get<double>();
    r.eps = e.at("eps").get<double>();
    r.method = estimation_method_from_string(e.at("method").get<std::string>());
    r.value = e.at("value").get<double>();
    r.err = e.at("err").get<double>();
    r.bound = e.at("bound").get<double>();
    r.closed_form = e.at("closed_form").get<double>();
    r.fidelity = e.at("fidelity").get<double>();
    rows.push_back(r);
  }
  return rows;
}

inline std::vector<SweepRow> sweep_from_csv(const std::string& text, const std::string& context) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error(context + ": empty sweep CSV");
  std::vector<SweepRow> rows;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line == "\r") continue;
    const std::vector<std::string> f = detail::split_csv_line(line);
    if (f.size() != 8)
      throw std::runtime_error(context + ":" + std::to_string(lineno) +
                               ": expected 8 fields, got " + std::to_string(f.size()));
    try {
      SweepRow r;
      r.mu = std::stod(f[0]);
      r.eps = std::stod(f[1]);
      r.method = estimation_method_from_string(f[2]);
      r.value = std::stod(f[3]);
      r.err = std::stod(f[4]);
      r.bound = std::stod(f[5]);
      r.closed_form = std::stod(f[6]);
      r.fidelity = std::stod(f[7]);
      rows.push_back(r);
    } catch (const std::exception& e) {
      throw std::runtime_error(context + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  return rows;
}

inline std::vector<SweepRow> read_sweep_dataset(const std::string& path) {
  const std::string text = detail::read_text_file(path);
  const auto json_start = text.find_first_not_of(" \t\r\n");
  if (json_start != std::string::npos && text[json_start] == '{') {
    try {
      return sweep_from_json(nlohmann::json::parse(text));
    } catch (const nlohmann::json::exception& e) {
      throw std::runtime_error(path + ": invalid sweep JSON (" + e.what() + ")");
    } catch (const std::invalid_argument& e) {
      throw std::runtime_error(path + ": " + e.what());
    }
  }
  return sweep_from_csv(text, path);
}

inline std::string fidelity_to_csv(const std::vector<FidelityRow>& rows) {
  std::ostringstream out;
  out << "mu,eps,fidelity_monitored,fidelity_bell\n";
  for (const FidelityRow& r : rows) {
    out << format_sig12(r.mu) << ',' << format_sig12(r.eps) << ','
        << format_sig12(r.fidelity_monitored) << ',' << format_sig12(r.fidelity_bell) << '\n';
  }
  return out.str();
}

enum class EmitFormat { Csv, Json };

inline void emit(const std::vector<SweepRow>& rows, EmitFormat format, const std::string& path) {
  if (format == EmitFormat::Csv) detail::write_text_file(path, sweep_to_csv(rows));
  else detail::write_text_file(path, sweep_to_json(rows).dump(2) + "\n");
}

inline void emit(const std::vector<FidelityRow>& rows, const std::string& path) {
  detail::write_text_file(path, fidelity_to_csv(rows));
}

}  // namespace qrealism

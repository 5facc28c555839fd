#pragma once

// Serialization: density matrices and time schedules as JSON, counts tables
// and quantifier reports as CSV. Readers validate what they load; writers
// emit Hermitian-symmetrized data and 12-significant-digit numerics.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>  // nlohmann/json single header (vendored)

#include "qrealism/channels.hpp"
#include "qrealism/density.hpp"
#include "qrealism/tomography.hpp"

namespace qrealism {

// Fixed-width significant-digit formatting for all CLI/CSV numerics.
inline std::string format_sig12(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", x);
  return std::string(buf);
}

namespace detail {

inline std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error(path + ": cannot open for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error(path + ": cannot open for writing");
  out << text;
  if (!out) throw std::runtime_error(path + ": write failed");
}

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) {
    const auto b = field.find_first_not_of(" \t\r");
    const auto e = field.find_last_not_of(" \t\r");
    fields.push_back(b == std::string::npos ? "" : field.substr(b, e - b + 1));
  }
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

}  // namespace detail

// --- density matrices: JSON {dim, re: row-major, im: row-major} ------------

template <int N>
nlohmann::json density_to_json(const DensityMatrix<N>& rho) {
  const CMatrix<N> m = hermitize<N>(rho.matrix());
  std::vector<double> re, im;
  re.reserve(N * N);
  im.reserve(N * N);
  for (int i = 0; i < N; ++i) {
    for (int j = 0; j < N; ++j) {
      re.push_back(m(i, j).real());
      im.push_back(m(i, j).imag());
    }
  }
  return nlohmann::json{{"dim", N}, {"re", re}, {"im", im}};
}

template <int N>
DensityMatrix<N> density_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("dim") || !j.contains("re") || !j.contains("im"))
    throw std::invalid_argument("density_from_json: expected object with dim/re/im");
  if (j.at("dim").get<int>() != N)
    throw std::invalid_argument("density_from_json: dimension mismatch");
  const auto re = j.at("re").get<std::vector<double>>();
  const auto im = j.at("im").get<std::vector<double>>();
  if (re.size() != N * N || im.size() != N * N)
    throw std::invalid_argument("density_from_json: re/im must have dim*dim entries");
  CMatrix<N> m;
  for (int i = 0; i < N; ++i)
    for (int j2 = 0; j2 < N; ++j2)
      m(i, j2) = complexd(re[static_cast<std::size_t>(N * i + j2)],
                          im[static_cast<std::size_t>(N * i + j2)]);
  return DensityMatrix<N>::from_matrix(m);
}

template <int N>
void write_density(const std::string& path, const DensityMatrix<N>& rho) {
  detail::write_text_file(path, density_to_json<N>(rho).dump(2) + "\n");
}

template <int N>
DensityMatrix<N> read_density(const std::string& path) {
  try {
    return density_from_json<N>(nlohmann::json::parse(detail::read_text_file(path)));
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error(path + ": invalid density JSON (" + e.what() + ")");
  } catch (const std::invalid_argument& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
}

// --- time schedules: JSON {total_s, slices: [{label, duration_s}]} ---------

inline nlohmann::json schedule_to_json(const TimeSchedule& schedule) {
  nlohmann::json slices = nlohmann::json::array();
  for (const TimeSlice& s : schedule.slices)
    slices.push_back({{"label", s.label}, {"duration_s", s.duration_s}});
  return nlohmann::json{{"total_s", schedule.total_s}, {"slices", slices}};
}

inline TimeSchedule schedule_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("total_s") || !j.contains("slices"))
    throw std::invalid_argument("schedule_from_json: expected object with total_s/slices");
  std::vector<TimeSlice> slices;
  for (const auto& s : j.at("slices"))
    slices.push_back({s.at("label").get<std::string>(), s.at("duration_s").get<double>()});
  return make_schedule(j.at("total_s").get<double>(), slices);
}

inline void write_schedule(const std::string& path, const TimeSchedule& schedule) {
  detail::write_text_file(path, schedule_to_json(schedule).dump(2) + "\n");
}

inline TimeSchedule read_schedule(const std::string& path) {
  try {
    return schedule_from_json(nlohmann::json::parse(detail::read_text_file(path)));
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error(path + ": invalid schedule JSON (" + e.what() + ")");
  } catch (const std::invalid_argument& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
}

// --- counts tables: CSV setting_label, basis_a, basis_b, exposure_s, counts

inline std::string counts_to_csv(const CountsTable& table) {
  validate_counts(table);
  std::ostringstream out;
  out << "setting_label,basis_a,basis_b,exposure_s,counts\n";
  for (std::size_t i = 0; i < table.settings.size(); ++i) {
    const TomographySetting& s = table.settings[i];
    out << s.label << ',' << s.basis_a << ',' << s.basis_b << ','
        << format_sig12(table.exposure_s) << ',' << format_sig12(table.counts[i]) << '\n';
  }
  return out.str();
}

inline void write_counts_csv(const std::string& path, const CountsTable& table) {
  detail::write_text_file(path, counts_to_csv(table));
}

inline CountsTable counts_from_csv(const std::string& text, const std::string& context) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line))
    throw std::runtime_error(context + ": empty counts CSV");
  CountsTable table;
  table.rate_hz = 0.0;  // the CSV carries no rate; reconstruction is scale-free
  std::size_t lineno = 1;
  bool have_exposure = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line == "\r") continue;
    const std::vector<std::string> f = detail::split_csv_line(line);
    if (f.size() != 5)
      throw std::runtime_error(context + ":" + std::to_string(lineno) +
                               ": expected 5 fields, got " + std::to_string(f.size()));
    try {
      TomographySetting s = make_setting(f[1], f[2]);
      const double exposure = std::stod(f[3]);
      const double counts = std::stod(f[4]);
      if (!have_exposure) {
        table.exposure_s = exposure;
        have_exposure = true;
      } else if (std::abs(exposure - table.exposure_s) > 1e-9) {
        throw std::invalid_argument("exposure differs between rows");
      }
      table.settings.push_back(std::move(s));
      table.counts.push_back(counts);
    } catch (const std::exception& e) {
      throw std::runtime_error(context + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  try {
    validate_counts(table);
  } catch (const std::exception& e) {
    throw std::runtime_error(context + ": " + e.what());
  }
  return table;
}

inline CountsTable read_counts_csv(const std::string& path) {
  return counts_from_csv(detail::read_text_file(path), path);
}

// --- quantifier reports: one CSV row ---------------------------------------

struct QuantifierCsvRow {
  double mu = std::numeric_limits<double>::quiet_NaN();  // NaN when not a Werner input
  double eps = 0.0;
  double irrealism = 0.0;
  double realism = 0.0;
  double delta_realism = 0.0;
  double weak_discord_unmin = 0.0;
  double weak_discord_min = 0.0;
  double discord_e1 = 0.0;
  double bound = 0.0;  // eps * irrealism
  double slack = 0.0;  // delta_realism - bound
};

inline std::string quantifier_csv_header() {
  return "mu,eps,irrealism,realism,delta_realism,weak_discord_unmin,weak_discord_min,"
         "discord_e1,bound,slack";
}

inline std::string quantifier_csv_row(const QuantifierCsvRow& r) {
  std::ostringstream out;
  out << format_sig12(r.mu) << ',' << format_sig12(r.eps) << ',' << format_sig12(r.irrealism)
      << ',' << format_sig12(r.realism) << ',' << format_sig12(r.delta_realism) << ','
      << format_sig12(r.weak_discord_unmin) << ',' << format_sig12(r.weak_discord_min) << ','
      << format_sig12(r.discord_e1) << ',' << format_sig12(r.bound) << ','
      << format_sig12(r.slack);
  return out.str();
}

}  // namespace qrealism

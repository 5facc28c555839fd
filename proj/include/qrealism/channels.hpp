#pragma once

// Mixed-unitary Kraus channels and their experimental realization as
// time-sliced operations: the depolarizing channel that prepares Werner
// states, the monitoring map, its dephasing equivalent, and acquisition-time
// schedules.

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "qrealism/density.hpp"
#include "qrealism/linalg.hpp"
#include "qrealism/states.hpp"

namespace qrealism {

inline constexpr double kScheduleTol = 1e-9;  // seconds

// Probability-weighted mixture of single-qubit unitaries acting on one
// subsystem. Weights sum to one, which is the completeness condition for the
// Kraus set K_k = sqrt(w_k) U_k.
class KrausChannel {
 public:
  using WeightedUnitary = std::pair<double, CMatrix<2>>;

  KrausChannel(std::vector<WeightedUnitary> ops, Subsystem sub)
      : ops_(std::move(ops)), sub_(sub) {
    double total = 0.0;
    for (const auto& [w, u] : ops_) {
      if (w < 0.0) throw std::invalid_argument("KrausChannel: negative weight");
      if (!is_unitary<2>(u)) throw std::invalid_argument("KrausChannel: non-unitary operator");
      total += w;
    }
    if (std::abs(total - 1.0) > kHermitianTol)
      throw std::invalid_argument("KrausChannel: weights must sum to 1");
  }

  const std::vector<WeightedUnitary>& operators() const { return ops_; }
  Subsystem subsystem() const { return sub_; }

 private:
  std::vector<WeightedUnitary> ops_;
  Subsystem sub_;
};

struct TimeSlice {
  std::string label;
  double duration_s;
};

// Division of a total acquisition window into per-operator intervals; the
// time fractions become channel weights.
struct TimeSchedule {
  double total_s = 0.0;
  std::vector<TimeSlice> slices;
};

inline TimeSchedule make_schedule(double total_s, std::vector<TimeSlice> slices) {
  double sum = 0.0;
  for (const auto& s : slices) {
    if (s.duration_s < 0.0) throw std::invalid_argument("TimeSchedule: negative slice duration");
    sum += s.duration_s;
  }
  if (std::abs(sum - total_s) > kScheduleTol)
    throw std::invalid_argument("TimeSchedule: slice durations do not add up to total");
  return {total_s, std::move(slices)};
}

// Depolarizing mixture with weights ((1+3mu)/4, (1-mu)/4 x3) over
// (I, sigma_x, sigma_y, sigma_z).
inline KrausChannel depolarizing_channel(double mu, Subsystem sub = Subsystem::A) {
  if (!(mu >= 0.0 && mu <= 1.0))
    throw std::invalid_argument("depolarizing_channel: mu must lie in [0,1]");
  const double p0 = (1.0 + 3.0 * mu) / 4.0;
  const double p = (1.0 - mu) / 4.0;
  return KrausChannel({{p0, identity2()}, {p, sigma_x()}, {p, sigma_y()}, {p, sigma_z()}}, sub);
}

inline DensityMatrix<4> apply_channel(const DensityMatrix<4>& rho, const KrausChannel& ch) {
  CMatrix<4> out = CMatrix<4>::Zero();
  for (const auto& [w, u] : ch.operators()) {
    if (w == 0.0) continue;
    const CMatrix<4> lifted = embed(u, ch.subsystem());
    out += w * (lifted * rho.matrix() * lifted.adjoint());
  }
  return DensityMatrix<4>::unchecked(hermitize<4>(out));
}

namespace detail {

// Phi_A(rho) = sum_a (A_a ⊗ 1) rho (A_a ⊗ 1); dephasing in the measured basis.
inline CMatrix<4> phi_map_raw(const CMatrix<4>& rho, const CMatrix<2>& proj_plus,
                              const CMatrix<2>& proj_minus, Subsystem sub) {
  const CMatrix<4> p = embed(proj_plus, sub);
  const CMatrix<4> m = embed(proj_minus, sub);
  return p * rho * p + m * rho * m;
}

inline CMatrix<2> phi_map_raw2(const CMatrix<2>& rho, const CMatrix<2>& proj_plus,
                               const CMatrix<2>& proj_minus) {
  return proj_plus * rho * proj_plus + proj_minus * rho * proj_minus;
}

}  // namespace detail

inline DensityMatrix<4> phi_map(const DensityMatrix<4>& rho, const ObservableBasis& basis,
                                Subsystem sub = Subsystem::A) {
  const auto [pp, pm] = observable_projectors(basis);
  return DensityMatrix<4>::unchecked(hermitize<4>(detail::phi_map_raw(rho.matrix(), pp, pm, sub)));
}

inline DensityMatrix<2> phi_map_local(const DensityMatrix<2>& rho, const ObservableBasis& basis) {
  const auto [pp, pm] = observable_projectors(basis);
  return DensityMatrix<2>::unchecked(hermitize<2>(detail::phi_map_raw2(rho.matrix(), pp, pm)));
}

// M_A^eps(rho) = (1-eps) rho + eps Phi_A(rho).
inline DensityMatrix<4> monitoring(const DensityMatrix<4>& rho, const ObservableBasis& basis,
                                   double eps, Subsystem sub = Subsystem::A) {
  if (!(eps >= 0.0 && eps <= 1.0))
    throw std::invalid_argument("monitoring: eps must lie in [0,1]");
  if (eps == 0.0) return rho;
  const auto [pp, pm] = observable_projectors(basis);
  const CMatrix<4> out =
      (1.0 - eps) * rho.matrix() + eps * detail::phi_map_raw(rho.matrix(), pp, pm, sub);
  return DensityMatrix<4>::unchecked(hermitize<4>(out));
}

inline DensityMatrix<2> monitoring_local(const DensityMatrix<2>& rho, const ObservableBasis& basis,
                                         double eps) {
  if (!(eps >= 0.0 && eps <= 1.0))
    throw std::invalid_argument("monitoring_local: eps must lie in [0,1]");
  const auto [pp, pm] = observable_projectors(basis);
  const CMatrix<2> out =
      (1.0 - eps) * rho.matrix() + eps * detail::phi_map_raw2(rho.matrix(), pp, pm);
  return DensityMatrix<2>::unchecked(hermitize<2>(out));
}

// Computational-basis monitoring written as the dephasing mixture
// (1 - eps/2) rho + (eps/2) sigma_z rho sigma_z.
inline DensityMatrix<4> monitoring_as_dephasing(const DensityMatrix<4>& rho, double eps,
                                                Subsystem sub = Subsystem::A) {
  if (!(eps >= 0.0 && eps <= 1.0))
    throw std::invalid_argument("monitoring_as_dephasing: eps must lie in [0,1]");
  const CMatrix<4> z = embed(sigma_z(), sub);
  const CMatrix<4> out = (1.0 - 0.5 * eps) * rho.matrix() + 0.5 * eps * (z * rho.matrix() * z);
  return DensityMatrix<4>::unchecked(hermitize<4>(out));
}

// Acquisition-time subdivision (t0, tx, ty, tz) = total * (p0, px, py, pz)
// realizing the depolarizing weights for a given mu.
inline TimeSchedule werner_schedule(double mu, double total_s) {
  if (!(mu >= 0.0 && mu <= 1.0))
    throw std::invalid_argument("werner_schedule: mu must lie in [0,1]");
  if (!(total_s > 0.0)) throw std::invalid_argument("werner_schedule: total must be positive");
  const double p0 = (1.0 + 3.0 * mu) / 4.0;
  const double p = (1.0 - mu) / 4.0;
  return make_schedule(total_s, {{"I", total_s * p0},
                                 {"X", total_s * p},
                                 {"Y", total_s * p},
                                 {"Z", total_s * p}});
}

// Subdivision (t0, tz) = total * (1 - eps/2, eps/2) for the dephasing form of
// the monitoring map.
inline TimeSchedule monitoring_schedule(double eps, double total_s) {
  if (!(eps >= 0.0 && eps <= 1.0))
    throw std::invalid_argument("monitoring_schedule: eps must lie in [0,1]");
  if (!(total_s > 0.0)) throw std::invalid_argument("monitoring_schedule: total must be positive");
  return make_schedule(total_s,
                       {{"I", total_s * (1.0 - 0.5 * eps)}, {"Z", total_s * 0.5 * eps}});
}

inline const std::map<std::string, CMatrix<2>>& standard_unitary_ops() {
  static const std::map<std::string, CMatrix<2>> ops = {
      {"I", identity2()}, {"X", sigma_x()}, {"Y", sigma_y()}, {"Z", sigma_z()}};
  return ops;
}

// Weights = slice duration / total; the induced channel is order-independent.
inline KrausChannel channel_from_schedule(const TimeSchedule& sched,
                                          const std::map<std::string, CMatrix<2>>& ops,
                                          Subsystem sub) {
  if (!(sched.total_s > 0.0))
    throw std::invalid_argument("channel_from_schedule: zero total acquisition time");
  std::vector<KrausChannel::WeightedUnitary> weighted;
  double sum = 0.0;
  for (const auto& slice : sched.slices) {
    const auto it = ops.find(slice.label);
    if (it == ops.end())
      throw std::invalid_argument("channel_from_schedule: unknown operator label '" +
                                  slice.label + "'");
    weighted.emplace_back(slice.duration_s / sched.total_s, it->second);
    sum += slice.duration_s;
  }
  if (std::abs(sum - sched.total_s) > kScheduleTol)
    throw std::invalid_argument("channel_from_schedule: slices do not cover the total time");
  // Renormalize away the last few ulps so the weight sum is exact.
  for (auto& [w, u] : weighted) w *= sched.total_s / sum;
  return KrausChannel(std::move(weighted), sub);
}

struct QuantizedSchedule {
  TimeSchedule schedule;
  double max_weight_error;  // max |w_quantized - w_exact| over slices
};

// Round slice durations to multiples of `granularity_s` preserving the total
// (largest-remainder apportionment, ties to the earlier slice), and report
// the worst induced weight round-off.
inline QuantizedSchedule quantize_schedule(const TimeSchedule& sched, double granularity_s) {
  if (!(granularity_s > 0.0))
    throw std::invalid_argument("quantize_schedule: granularity must be positive");
  const double total_quanta_d = sched.total_s / granularity_s;
  const long long total_quanta = std::llround(total_quanta_d);
  if (std::abs(total_quanta_d - static_cast<double>(total_quanta)) > 1e-9)
    throw std::invalid_argument("quantize_schedule: total is not a multiple of the granularity");

  const std::size_t n = sched.slices.size();
  std::vector<long long> floors(n);
  std::vector<double> remainders(n);
  long long assigned = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double q = sched.slices[i].duration_s / granularity_s;
    floors[i] = static_cast<long long>(std::floor(q + 1e-12));
    remainders[i] = q - static_cast<double>(floors[i]);
    assigned += floors[i];
  }
  long long leftover = total_quanta - assigned;
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return remainders[a] > remainders[b]; });
  for (std::size_t k = 0; leftover > 0 && k < n; ++k, --leftover) ++floors[order[k]];
  // Rounding fuzz can overshoot by a quantum; take it back from the slice
  // that rounded up with the least claim to it.
  for (std::size_t k = n; leftover < 0 && k-- > 0;)
    if (floors[order[k]] > 0) ++leftover, --floors[order[k]];

  TimeSchedule out;
  out.total_s = sched.total_s;
  double max_err = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dur = static_cast<double>(floors[i]) * granularity_s;
    out.slices.push_back({sched.slices[i].label, dur});
    max_err = std::max(max_err,
                       std::abs(dur - sched.slices[i].duration_s) / sched.total_s);
  }
  return {std::move(out), max_err};
}

}  // namespace qrealism

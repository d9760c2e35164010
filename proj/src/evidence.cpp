// SPDX-License-Identifier: Apache-2.0
#include "evoc/evidence.hpp"

#include <cmath>
#include <sstream>

#include "evoc/error.hpp"
#include "evoc/parallel.hpp"

namespace evoc {

SensorModel SensorModel::defaults_for_voxel_size(double voxel_size) {
  if (std::abs(voxel_size - 0.4) < 1e-9) return {0.9, 0.1};
  return {0.8, 0.2};
}

void SensorModel::validate() const {
  if (!(p_fn > 0.0 && p_fn < 1.0) || !(p_fp > 0.0 && p_fp < 1.0)) {
    std::ostringstream msg;
    msg << "sensor model probabilities must lie in (0, 1), got p_fn=" << p_fn
        << " p_fp=" << p_fp;
    throw ValidationError(msg.str());
  }
}

Masses bba(double transmissions, double reflections, const SensorModel& model) {
  if (!std::isfinite(transmissions) || !std::isfinite(reflections) || transmissions < 0.0 ||
      reflections < 0.0) {
    throw ValidationError("evidence counts must be finite and non-negative");
  }
  const double q = std::min(transmissions, kMaxEvidenceCount);
  const double r = std::min(reflections, kMaxEvidenceCount);
  const double a = std::exp(q * std::log(model.p_fn));  // p_fn^q
  const double b = std::exp(r * std::log(model.p_fp));  // p_fp^r
  Masses m;
  m.occupied = a * (1.0 - b);
  m.free = b * (1.0 - a);
  // 1 - m_o - m_f, in a form that cannot go negative through rounding.
  m.unknown = (1.0 - a) * (1.0 - b) + a * b;
  return m;
}

BeliefGrid compute_beliefs(const AggregatedGrid& counts, const SensorModel& model) {
  model.validate();
  BeliefGrid out{counts.spec, std::vector<Masses>(counts.reflections.size())};
  parallel_for(out.masses.size(), [&](std::size_t begin, std::size_t end) {
    for (std::size_t v = begin; v < end; ++v) {
      out.masses[v] = bba(counts.transmissions[v], counts.reflections[v], model);
    }
  });
  return out;
}

void validate_beliefs(const BeliefGrid& belief, double tolerance) {
  if (belief.masses.size() != belief.spec.voxel_count()) {
    throw ValidationError("belief grid size does not match its spec");
  }
  for (std::size_t v = 0; v < belief.masses.size(); ++v) {
    const Masses& m = belief.masses[v];
    const double sum = m.occupied + m.free + m.unknown;
    const bool in_range = m.occupied >= -tolerance && m.occupied <= 1.0 + tolerance &&
                          m.free >= -tolerance && m.free <= 1.0 + tolerance &&
                          m.unknown >= -tolerance && m.unknown <= 1.0 + tolerance;
    if (!in_range || !(std::abs(sum - 1.0) <= tolerance)) {
      std::ostringstream msg;
      msg << "voxel " << v << " has invalid masses (" << m.occupied << ", " << m.free << ", "
          << m.unknown << ")";
      throw ValidationError(msg.str());
    }
  }
}

namespace {

template <typename Predicate>
OccupancyGrid threshold(const BeliefGrid& belief, Predicate pred) {
  OccupancyGrid out{belief.spec, std::vector<std::uint8_t>(belief.masses.size())};
  for (std::size_t v = 0; v < belief.masses.size(); ++v) {
    out.occupied[v] = pred(belief.masses[v]) ? 1 : 0;
  }
  return out;
}

}  // namespace

OccupancyGrid binarize(const BeliefGrid& belief) {
  return threshold(belief, [](const Masses& m) { return is_occupied(m); });
}

OccupancyBounds binarize_bounds(const BeliefGrid& belief) {
  return {threshold(belief, [](const Masses& m) { return m.occupied + m.unknown > m.free; }),
          threshold(belief, [](const Masses& m) { return m.occupied > m.free + m.unknown; })};
}

TrainingTargets training_targets(const BeliefGrid& belief) {
  TrainingTargets out{belief.spec, std::vector<double>(belief.masses.size()),
                      std::vector<double>(belief.masses.size())};
  for (std::size_t v = 0; v < belief.masses.size(); ++v) {
    const Masses& m = belief.masses[v];
    const double committed = m.occupied + m.free;
    out.probability[v] = committed > 0.0 ? m.occupied / committed : 0.5;
    out.weight[v] = 1.0 - m.unknown;
  }
  return out;
}

}  // namespace evoc

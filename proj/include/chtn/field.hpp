#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "chtn/network.hpp"

namespace chtn {

// Degree-of-freedom numbering: dof = 2 * site_index + species.
inline constexpr std::size_t dof_index(std::size_t site_index, Species s) {
  return 2 * site_index + static_cast<std::size_t>(s);
}
inline constexpr std::size_t site_of_dof(std::size_t dof) { return dof / 2; }
inline constexpr Species species_of_dof(std::size_t dof) {
  return static_cast<Species>(dof % 2);
}

struct DofIndex {
  Site site;
  Species species;
  auto operator<=>(const DofIndex&) const = default;
};

// f_alpha(v, t_n). `tick` counts Planck-time differences.
struct DistributionField {
  std::vector<double> values;
  std::int64_t tick = 0;

  std::size_t size() const { return values.size(); }
};

inline DistributionField zero_field(const Network& net) {
  return {std::vector<double>(2 * net.site_count(), 0.0), 0};
}

}  // namespace chtn

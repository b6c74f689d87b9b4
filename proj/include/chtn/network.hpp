#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace chtn {

enum class Mode { Rectangular, Tree };
enum class HorizontalBc { Periodic, Dirichlet };
enum class RadialBc { DirichletGhost, Truncated };
enum class ParityOffset { FixedZero, PerLayerAlternating };

// The two spin-zero bipartite-spin states.
enum class Species : std::uint8_t { UD = 0, DU = 1 };
inline constexpr std::array<Species, 2> kAllSpecies{Species::UD, Species::DU};

enum class Spin : std::uint8_t { Up, Down };

struct NetworkConfig {
  int width = 8;  // sites per layer at n = 0
  int depth = 4;  // number of RG layers
  Mode mode = Mode::Rectangular;
  HorizontalBc horizontal_bc = HorizontalBc::Periodic;
  RadialBc radial_bc = RadialBc::DirichletGhost;
  ParityOffset parity_offset = ParityOffset::FixedZero;
  double lattice_constant = 1.0;  // length
};

// Throws ConfigError naming the first violated invariant.
void validate(const NetworkConfig& config);

// Site v = (j, n). Indices may lie outside a network when naming ghost sites.
struct Site {
  int j = 0;
  int n = 0;
  auto operator<=>(const Site&) const = default;
};

// Four classical spin bits per site: the earlier pair is occupied by UD when
// species_phase is 0 and by DU when it is 1; the later pair holds the other.
struct SiteState {
  std::array<Spin, 2> earlier;
  std::array<Spin, 2> later;
  int species_phase;
};

struct Neighbors {
  std::vector<Site> horizontal;
  std::vector<Site> radial_up;
  std::vector<Site> radial_down;
};

// (j + offset(n)) mod 2, defined for any integers (ghost sites included).
int staggering_phase(int j, int n, ParityOffset offset);

std::string_view to_string(Species s);
std::string_view to_string(Mode m);
std::string_view to_string(HorizontalBc bc);
std::string_view to_string(RadialBc bc);
std::string_view to_string(ParityOffset p);

// Layered lattice of the classicalized network. Immutable after build.
// Sites are ordered layer by layer (n outer, j inner).
class Network {
 public:
  const NetworkConfig& config() const { return config_; }
  int depth() const { return config_.depth; }
  int layer_width(int n) const;

  std::size_t site_count() const { return sites_.size(); }
  std::span<const Site> sites() const { return sites_; }
  bool contains(Site s) const;
  // Throws IndexError for a site outside the network.
  std::size_t index_of(Site s) const;

  int species_phase_at(Site s) const;
  const SiteState& state_at(Site s) const;
  const Neighbors& neighbors(Site s) const;

  // Horizontal neighbour positions; with a Dirichlet horizontal boundary the
  // returned site may lie outside the layer (a ghost position).
  Site left_of(Site s) const;
  Site right_of(Site s) const;

  // One pixel of area R_AdS^2 per site.
  std::size_t pixel_area() const { return sites_.size(); }

 private:
  friend Network build_network(const NetworkConfig& config);

  NetworkConfig config_;
  std::vector<std::size_t> layer_offset_;
  std::vector<Site> sites_;
  std::vector<SiteState> states_;
  std::vector<Neighbors> neighbors_;
};

Network build_network(const NetworkConfig& config);

}  // namespace chtn

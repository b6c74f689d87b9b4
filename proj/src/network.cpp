#include "chtn/network.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "chtn/errors.hpp"

namespace chtn {

namespace {

int floor_mod(int a, int m) { return ((a % m) + m) % m; }

void add_unique(std::vector<Site>& out, Site s, Site self) {
  if (s == self) return;
  if (std::find(out.begin(), out.end(), s) == out.end()) out.push_back(s);
}

SiteState make_state(int phase) {
  constexpr std::array<Spin, 2> ud{Spin::Up, Spin::Down};
  constexpr std::array<Spin, 2> du{Spin::Down, Spin::Up};
  return phase == 0 ? SiteState{ud, du, 0} : SiteState{du, ud, 1};
}

}  // namespace

void validate(const NetworkConfig& config) {
  if (config.width < 4) throw ConfigError("width must be at least 4");
  if (config.width % 2 != 0) throw ConfigError("width must be even");
  if (config.depth < 3) throw ConfigError("depth must be at least 3");
  if (!(config.lattice_constant > 0.0) || !std::isfinite(config.lattice_constant)) {
    throw ConfigError("lattice_constant must be positive");
  }
  if (config.mode == Mode::Tree) {
    if (config.depth > 30) throw ConfigError("depth too large for tree mode");
    const long long stride = 1LL << (config.depth - 1);
    if (config.width % stride != 0) {
      throw ConfigError("tree mode: width must be divisible by 2^(depth-1) = " +
                        std::to_string(stride));
    }
  }
}

int staggering_phase(int j, int n, ParityOffset offset) {
  const int shift = offset == ParityOffset::PerLayerAlternating ? n : 0;
  return floor_mod(j + shift, 2);
}

std::string_view to_string(Species s) { return s == Species::UD ? "UD" : "DU"; }
std::string_view to_string(Mode m) { return m == Mode::Rectangular ? "rectangular" : "tree"; }
std::string_view to_string(HorizontalBc bc) {
  return bc == HorizontalBc::Periodic ? "periodic" : "dirichlet";
}
std::string_view to_string(RadialBc bc) {
  return bc == RadialBc::DirichletGhost ? "dirichlet_ghost" : "truncated";
}
std::string_view to_string(ParityOffset p) {
  return p == ParityOffset::FixedZero ? "fixed_zero" : "per_layer_alternating";
}

int Network::layer_width(int n) const {
  if (n < 0 || n >= config_.depth) {
    throw IndexError("layer index " + std::to_string(n) + " out of range");
  }
  return config_.mode == Mode::Rectangular ? config_.width : config_.width >> n;
}

bool Network::contains(Site s) const {
  return s.n >= 0 && s.n < config_.depth && s.j >= 0 && s.j < layer_width(s.n);
}

std::size_t Network::index_of(Site s) const {
  if (!contains(s)) {
    throw IndexError("site (" + std::to_string(s.j) + ", " + std::to_string(s.n) +
                     ") is not in the network");
  }
  return layer_offset_[s.n] + static_cast<std::size_t>(s.j);
}

int Network::species_phase_at(Site s) const { return states_[index_of(s)].species_phase; }

const SiteState& Network::state_at(Site s) const { return states_[index_of(s)]; }

const Neighbors& Network::neighbors(Site s) const { return neighbors_[index_of(s)]; }

Site Network::left_of(Site s) const {
  const int w = layer_width(s.n);
  if (config_.horizontal_bc == HorizontalBc::Periodic) return {floor_mod(s.j - 1, w), s.n};
  return {s.j - 1, s.n};
}

Site Network::right_of(Site s) const {
  const int w = layer_width(s.n);
  if (config_.horizontal_bc == HorizontalBc::Periodic) return {floor_mod(s.j + 1, w), s.n};
  return {s.j + 1, s.n};
}

Network build_network(const NetworkConfig& config) {
  validate(config);
  Network net;
  net.config_ = config;

  std::size_t offset = 0;
  for (int n = 0; n < config.depth; ++n) {
    net.layer_offset_.push_back(offset);
    const int w = net.layer_width(n);
    for (int j = 0; j < w; ++j) {
      net.sites_.push_back({j, n});
      net.states_.push_back(make_state(staggering_phase(j, n, config.parity_offset)));
    }
    offset += static_cast<std::size_t>(w);
  }

  net.neighbors_.resize(net.sites_.size());
  for (std::size_t i = 0; i < net.sites_.size(); ++i) {
    const Site s = net.sites_[i];
    Neighbors& nb = net.neighbors_[i];
    for (Site h : {net.left_of(s), net.right_of(s)}) {
      if (net.contains(h)) add_unique(nb.horizontal, h, s);
    }
    if (config.mode == Mode::Rectangular) {
      if (s.n + 1 < config.depth) nb.radial_up.push_back({s.j, s.n + 1});
      if (s.n > 0) nb.radial_down.push_back({s.j, s.n - 1});
    } else {
      if (s.n + 1 < config.depth) nb.radial_up.push_back({s.j / 2, s.n + 1});
      if (s.n > 0) {
        nb.radial_down.push_back({2 * s.j, s.n - 1});
        nb.radial_down.push_back({2 * s.j + 1, s.n - 1});
      }
    }
  }
  return net;
}

}  // namespace chtn

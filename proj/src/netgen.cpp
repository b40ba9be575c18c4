#include "uavr/netgen.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "uavr/errors.hpp"
#include "uavr/rng.hpp"

namespace uavr {

namespace {

bool positive_finite(double v) { return std::isfinite(v) && v > 0.0; }

void require(bool ok, const char* what) {
  if (!ok) throw Error(ErrorKind::ConfigInvalid, what);
}

}  // namespace

void RadioParams::validate() const {
  require(positive_finite(carrier_freq), "carrier frequency must be positive");
  require(positive_finite(light_speed), "light speed must be positive");
  require(positive_finite(tx_power), "transmit power must be positive");
  require(positive_finite(noise_power), "noise power must be positive");
  // +inf is a legal threshold: it disables every link.
  require(!std::isnan(snr_threshold), "SNR threshold must be a number");
}

void HoverParams::validate() const {
  require(positive_finite(gravity), "gravity must be positive");
  require(positive_finite(prop_radius), "propeller radius must be positive");
  require(num_props > 0, "propeller count must be positive");
  require(positive_finite(air_density), "air density must be positive");
}

void NetworkParams::validate() const {
  require(num_uavs >= 2, "num_uavs must be at least 2");
  require(positive_finite(area_side), "area side must be positive");
  require(std::isfinite(common_altitude), "altitude must be finite");
  require(!mass_choices.empty(), "mass choices must not be empty");
  for (double mass : mass_choices) require(std::isfinite(mass) && mass >= 0.0, "masses must be non-negative");
  radio.validate();
  hover.validate();
}

double UavNetwork::distance(std::size_t u, std::size_t v) const {
  return std::hypot(positions[u].x - positions[v].x, positions[u].y - positions[v].y);
}

bool UavNetwork::linked(std::size_t u, std::size_t v) const {
  return std::binary_search(links[u].begin(), links[u].end(), v);
}

double path_loss_db(double distance, const RadioParams& radio) {
  if (!(distance > 0.0)) throw Error(ErrorKind::NonPositiveDistance, "path loss needs a positive distance");
  return 20.0 * std::log10(4.0 * std::numbers::pi * radio.carrier_freq * distance / radio.light_speed);
}

double snr_db(double distance, const RadioParams& radio) {
  return 10.0 * std::log10(radio.tx_power) - path_loss_db(distance, radio) - 10.0 * std::log10(radio.noise_power);
}

double snr_db(std::size_t u, std::size_t v, const UavNetwork& net, const RadioParams& radio) {
  return snr_db(net.distance(u, v), radio);
}

double link_radius(const RadioParams& radio) {
  const double budget = 10.0 * std::log10(radio.tx_power) - 10.0 * std::log10(radio.noise_power) - radio.snr_threshold;
  return std::pow(10.0, budget / 20.0) * radio.light_speed / (4.0 * std::numbers::pi * radio.carrier_freq);
}

double hover_power(double mass, const HoverParams& hover) {
  const double weight = mass * hover.gravity;
  return std::sqrt(weight * weight * weight /
                   (2.0 * std::numbers::pi * hover.prop_radius * hover.prop_radius * hover.num_props * hover.air_density));
}

UavNetwork make_network(std::vector<Position> positions, std::vector<double> masses, const NetworkParams& params) {
  if (positions.size() != masses.size()) throw Error(ErrorKind::ConfigInvalid, "positions and masses differ in length");
  UavNetwork net;
  net.altitude = params.common_altitude;
  net.positions = std::move(positions);
  net.masses = std::move(masses);
  const std::size_t n = net.size();
  net.hover_powers.resize(n);
  for (std::size_t u = 0; u < n; ++u) net.hover_powers[u] = hover_power(net.masses[u], params.hover);
  net.links.assign(n, {});
  for (std::size_t u = 0; u < n; ++u) {
    for (std::size_t v = u + 1; v < n; ++v) {
      const double d = net.distance(u, v);
      // Co-located UAVs are treated as linked; the log model is undefined at d = 0.
      const bool link = d <= 0.0 ? true : snr_db(d, params.radio) >= params.radio.snr_threshold;
      if (link) {
        net.links[u].push_back(v);
        net.links[v].push_back(u);
      }
    }
  }
  for (auto& adj : net.links) std::sort(adj.begin(), adj.end());
  return net;
}

UavNetwork generate_network(const NetworkParams& params, std::uint64_t seed) {
  params.validate();
  Rng rng(seed);
  std::vector<Position> positions(params.num_uavs);
  std::vector<double> masses(params.num_uavs);
  for (std::size_t u = 0; u < params.num_uavs; ++u) {
    positions[u].x = rng.uniform(0.0, params.area_side);
    positions[u].y = rng.uniform(0.0, params.area_side);
    masses[u] = params.mass_choices[rng.below(params.mass_choices.size())];
  }
  return make_network(std::move(positions), std::move(masses), params);
}

std::optional<std::vector<std::size_t>> shortest_route(const UavNetwork& net, std::size_t src, std::size_t dst) {
  const std::size_t n = net.size();
  if (src >= n || dst >= n) throw Error(ErrorKind::ConfigInvalid, "route endpoint out of range");
  if (src == dst) throw Error(ErrorKind::ConfigInvalid, "route endpoints must differ");

  constexpr std::size_t kUnseen = static_cast<std::size_t>(-1);
  std::vector<std::size_t> hops(n, kUnseen);
  std::vector<std::size_t> frontier{src};
  hops[src] = 0;
  while (!frontier.empty() && hops[dst] == kUnseen) {
    std::vector<std::size_t> next;
    for (std::size_t u : frontier) {
      for (std::size_t v : net.links[u]) {
        if (hops[v] == kUnseen) {
          hops[v] = hops[u] + 1;
          next.push_back(v);
        }
      }
    }
    frontier = std::move(next);
  }
  if (hops[dst] == kUnseen) return std::nullopt;

  std::vector<std::size_t> route{dst};
  for (std::size_t v = dst; v != src;) {
    // Neighbour lists are sorted, so the first match is the lowest id.
    for (std::size_t w : net.links[v]) {
      if (hops[w] + 1 == hops[v]) {
        v = w;
        break;
      }
    }
    route.push_back(v);
  }
  std::reverse(route.begin(), route.end());
  return route;
}

std::vector<std::size_t> sample_retired(const UavNetwork& net, std::size_t m, std::uint64_t seed) {
  if (m >= net.size()) throw Error(ErrorKind::ConfigInvalid, "cannot retire " + std::to_string(m) + " of " + std::to_string(net.size()) + " UAVs");
  Rng rng(seed);
  std::vector<std::size_t> pool(net.size());
  for (std::size_t u = 0; u < pool.size(); ++u) pool[u] = u;
  // Partial Fisher-Yates.
  for (std::size_t k = 0; k < m; ++k) {
    const std::size_t pick = k + rng.below(pool.size() - k);
    std::swap(pool[k], pool[pick]);
  }
  pool.resize(m);
  return pool;
}

std::vector<RoutedFlow> sample_flows(const UavNetwork& net, const std::vector<std::size_t>& retired, std::size_t n_flows,
                                     std::uint64_t seed) {
  std::vector<bool> is_retired(net.size(), false);
  for (std::size_t u : retired) is_retired.at(u) = true;
  std::vector<std::size_t> active;
  for (std::size_t u = 0; u < net.size(); ++u) {
    if (!is_retired[u]) active.push_back(u);
  }
  if (n_flows > 0 && active.size() < 2) throw Error(ErrorKind::SamplingExhausted, "fewer than two UAVs stay in service");

  Rng rng(seed);
  std::vector<RoutedFlow> flows;
  flows.reserve(n_flows);
  for (std::size_t f = 0; f < n_flows; ++f) {
    std::optional<std::vector<std::size_t>> route;
    for (int attempt = 0; attempt < kMaxRouteAttempts && !route; ++attempt) {
      const std::size_t a = rng.below(active.size());
      std::size_t b = rng.below(active.size() - 1);
      if (b >= a) ++b;
      route = shortest_route(net, active[a], active[b]);
    }
    if (!route) {
      throw Error(ErrorKind::SamplingExhausted,
                  "no routable endpoint pair for flow " + std::to_string(f) + " after " + std::to_string(kMaxRouteAttempts) + " attempts");
    }
    flows.push_back(RoutedFlow{f, std::move(*route)});
  }
  return flows;
}

Scenario sample_scenario(const UavNetwork& net, std::size_t n_flows, std::size_t m, std::uint64_t seed) {
  Scenario s;
  s.retired = sample_retired(net, m, derive_seed(seed, {1}));
  s.flows = sample_flows(net, s.retired, n_flows, derive_seed(seed, {2}));
  return s;
}

std::vector<RetiringUav> retiring_uavs(const UavNetwork& net, const std::vector<std::size_t>& retired) {
  std::vector<RetiringUav> out;
  out.reserve(retired.size());
  for (std::size_t u : retired) out.push_back(RetiringUav{u, net.hover_powers.at(u)});
  return out;
}

}  // namespace uavr

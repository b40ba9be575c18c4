#pragma once

// Random UAV relay networks: placement, line-of-sight radio links, hover
// power, minimum-hop routes and replacement scenarios.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "uavr/model.hpp"

namespace uavr {

struct RadioParams {
  double carrier_freq = 3e9;     // Hz
  double light_speed = 3e8;      // m/s
  double tx_power = 1.0;         // W
  double noise_power = 1e-16;    // W
  double snr_threshold = 85.0;   // dB

  void validate() const;
};

struct HoverParams {
  double gravity = 9.8;        // m/s^2
  double prop_radius = 0.2;    // m
  int num_props = 4;
  double air_density = 1.225;  // kg/m^3

  void validate() const;
};

struct NetworkParams {
  std::size_t num_uavs = 40;
  double area_side = 150.0;       // m
  double common_altitude = 70.0;  // m
  std::vector<double> mass_choices{1.0, 2.0, 3.0, 4.0, 5.0};
  RadioParams radio;
  HoverParams hover;

  /// Throws ConfigInvalid on any out-of-range field.
  void validate() const;
};

struct Position {
  double x = 0.0;
  double y = 0.0;
};

/// UAVs share one altitude, so inter-UAV distance is planar.
struct UavNetwork {
  double altitude = 0.0;
  std::vector<Position> positions;
  std::vector<double> masses;
  std::vector<double> hover_powers;
  /// Sorted neighbour lists; symmetric and irreflexive.
  std::vector<std::vector<std::size_t>> links;

  std::size_t size() const noexcept { return positions.size(); }
  double distance(std::size_t u, std::size_t v) const;
  bool linked(std::size_t u, std::size_t v) const;
};

/// Free-space path loss 20·log10(4π·f_c·d / c) in dB. Throws NonPositiveDistance.
double path_loss_db(double distance, const RadioParams& radio);

/// SNR 10·log10(p) − Γ(d) − 10·log10(N_0) in dB. Throws NonPositiveDistance.
double snr_db(double distance, const RadioParams& radio);

double snr_db(std::size_t u, std::size_t v, const UavNetwork& net, const RadioParams& radio);

/// Largest distance at which snr_db ≥ threshold, from inverting the link budget.
double link_radius(const RadioParams& radio);

/// Hover power sqrt((M·g)^3 / (2π·r_p²·n_p·ρ)) in watts.
double hover_power(double mass, const HoverParams& hover);

/// Assembles a network from explicit placement and masses; links and hover
/// powers are recomputed from the parameters.
UavNetwork make_network(std::vector<Position> positions, std::vector<double> masses, const NetworkParams& params);

/// Uniform placement over the square, masses drawn from mass_choices.
UavNetwork generate_network(const NetworkParams& params, std::uint64_t seed);

/// Minimum-hop route from src to dst, or nullopt when unreachable. Among
/// equal-length routes each hop walking back from dst picks the lowest-id
/// predecessor.
std::optional<std::vector<std::size_t>> shortest_route(const UavNetwork& net, std::size_t src, std::size_t dst);

struct Scenario {
  std::vector<std::size_t> retired;
  std::vector<RoutedFlow> flows;
};

inline constexpr int kMaxRouteAttempts = 1000;

/// m distinct UAVs sampled uniformly without replacement.
std::vector<std::size_t> sample_retired(const UavNetwork& net, std::size_t m, std::uint64_t seed);

/// n_flows routes between uniformly drawn distinct non-retired endpoints.
/// Unreachable pairs are redrawn, up to kMaxRouteAttempts per flow, after
/// which SamplingExhausted is thrown.
std::vector<RoutedFlow> sample_flows(const UavNetwork& net, const std::vector<std::size_t>& retired, std::size_t n_flows,
                                     std::uint64_t seed);

/// Retired set first, then flows avoiding it as endpoints.
Scenario sample_scenario(const UavNetwork& net, std::size_t n_flows, std::size_t m, std::uint64_t seed);

/// Pairs the scenario's retired set with the network's hover powers.
std::vector<RetiringUav> retiring_uavs(const UavNetwork& net, const std::vector<std::size_t>& retired);

}  // namespace uavr

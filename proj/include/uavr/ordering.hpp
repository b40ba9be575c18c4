#pragma once

// Strict total orders over the combined flow ∪ UAV index set and the integer
// linear program whose feasible points are exactly those orders.
//
// Internally the combined index of flow i is i and of UAV j is n + j (both
// 0-based). LP export shifts everything by one, so variables read x_1_2 etc.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "uavr/model.hpp"

namespace uavr {

struct CombinedIndex {
  std::size_t n = 0;
  std::size_t m = 0;

  std::size_t size() const noexcept { return n + m; }
  std::size_t of_flow(FlowId i) const noexcept { return i; }
  std::size_t of_uav(UavId j) const noexcept { return n + j; }
  bool is_flow(std::size_t k) const noexcept { return k < n; }
  /// 1-based label used in exported models.
  static std::size_t label(std::size_t k) noexcept { return k + 1; }

  friend bool operator==(const CombinedIndex&, const CombinedIndex&) = default;
};

/// Flow-before-UAV precedence pairs (flow index, UAV index), sorted.
struct DependencyRelation {
  CombinedIndex index;
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
};

DependencyRelation dependency_from_instance(const ReplacementInstance& instance);

/// Dense 0/1 relation matrix; x(a, b) = 1 means a precedes b.
class TotalOrderMatrix {
 public:
  TotalOrderMatrix() = default;
  explicit TotalOrderMatrix(CombinedIndex index);

  /// Relation induced by listing every combined index once, earliest first.
  static TotalOrderMatrix from_sequence(CombinedIndex index, const std::vector<std::size_t>& sequence);

  const CombinedIndex& index() const noexcept { return index_; }
  std::size_t dim() const noexcept { return index_.size(); }

  bool operator()(std::size_t a, std::size_t b) const { return cells_[a * dim() + b] != 0; }
  void set(std::size_t a, std::size_t b, bool value) { cells_[a * dim() + b] = value ? 1 : 0; }

 private:
  CombinedIndex index_;
  std::vector<std::uint8_t> cells_;
};

enum class ViolationFamily { Irreflexive, Comparability, Asymmetry, Transitivity, Dependency };

std::string_view to_string(ViolationFamily family) noexcept;

struct Violation {
  ViolationFamily family;
  /// Offending indices: (a) for reflexive, (a, b) for pair families,
  /// (a, b, c) for transitivity.
  std::vector<std::size_t> indices;
};

/// Lists every violated constraint; empty means x is a strict total order
/// containing the dependency relation. Throws DimensionMismatch.
std::vector<Violation> validate_total_order(const TotalOrderMatrix& x, const DependencyRelation& dependency);

struct LinearOrder {
  /// All combined indices, earliest first.
  std::vector<std::size_t> sequence;
  /// Flow subsequence.
  Schedule schedule;
  /// Position of each UAV in `sequence`.
  std::vector<std::size_t> uav_position;
};

/// Linear extension by descending successor count. Throws InvalidOrder when
/// the counts are not a permutation of 0..n+m-1 or x is not transitive.
LinearOrder order_to_schedule(const TotalOrderMatrix& x);

/// Flows in schedule order with each UAV placed right after the last of its
/// flows (ties by UAV id; UAVs without flows first).
std::vector<std::size_t> canonical_sequence(const ReplacementInstance& instance, const Schedule& schedule);

TotalOrderMatrix schedule_to_canonical_order(const ReplacementInstance& instance, const Schedule& schedule);

struct ObjectiveTerm {
  std::size_t flow;  // combined index
  std::size_t uav;   // combined index
  double coefficient;
};

struct TripleInequality {
  std::size_t a, b, c;  // x_ab + x_bc - x_ac <= 1
};

/// Model: min Σ T_i·P_j·x_ij subject to dependency fixings, pairwise
/// comparability equalities and transitivity inequalities over binaries.
struct IlpModel {
  CombinedIndex index;
  std::vector<ObjectiveTerm> objective;                          // n·m terms, (flow, uav) ascending
  std::vector<std::pair<std::size_t, std::size_t>> fixed;        // x = 1
  std::vector<std::pair<std::size_t, std::size_t>> pair_equalities;  // a < b: x_ab + x_ba = 1
  std::vector<TripleInequality> triples;                         // ordered distinct triples

  std::size_t variable_count() const noexcept { return index.size() * (index.size() - (index.size() > 0 ? 1 : 0)); }
};

/// Throws EmptyInstance when n + m < 2.
IlpModel build_ilp(const ReplacementInstance& instance);

/// Writes the model in CPLEX LP format. Output is a pure function of the model.
void write_lp(const IlpModel& model, std::ostream& out);
std::string to_lp_string(const IlpModel& model);
/// Throws IoFailure when the file cannot be written.
void export_lp(const IlpModel& model, const std::string& path);

/// Σ coefficient·x over the objective terms. Throws DimensionMismatch.
double ilp_objective(const IlpModel& model, const TotalOrderMatrix& x);

}  // namespace uavr

#include "uavr/ordering.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <ostream>
#include <sstream>

#include "uavr/errors.hpp"

namespace uavr {

DependencyRelation dependency_from_instance(const ReplacementInstance& instance) {
  DependencyRelation d;
  d.index = CombinedIndex{instance.n(), instance.m()};
  for (FlowId i = 0; i < instance.n(); ++i) {
    for (UavId j : instance.delta(i)) d.pairs.emplace_back(d.index.of_flow(i), d.index.of_uav(j));
  }
  return d;
}

TotalOrderMatrix::TotalOrderMatrix(CombinedIndex index) : index_(index), cells_(index.size() * index.size(), 0) {}

TotalOrderMatrix TotalOrderMatrix::from_sequence(CombinedIndex index, const std::vector<std::size_t>& sequence) {
  if (sequence.size() != index.size()) throw Error(ErrorKind::DimensionMismatch, "sequence length differs from n + m");
  TotalOrderMatrix x(index);
  for (std::size_t p = 0; p < sequence.size(); ++p) {
    for (std::size_t q = p + 1; q < sequence.size(); ++q) x.set(sequence[p], sequence[q], true);
  }
  return x;
}

std::string_view to_string(ViolationFamily family) noexcept {
  switch (family) {
    case ViolationFamily::Irreflexive: return "irreflexive";
    case ViolationFamily::Comparability: return "comparability";
    case ViolationFamily::Asymmetry: return "asymmetry";
    case ViolationFamily::Transitivity: return "transitivity";
    case ViolationFamily::Dependency: return "dependency";
  }
  return "unknown";
}

std::vector<Violation> validate_total_order(const TotalOrderMatrix& x, const DependencyRelation& dependency) {
  if (!(x.index() == dependency.index)) throw Error(ErrorKind::DimensionMismatch, "order and dependency relation differ in n or m");
  const std::size_t dim = x.dim();
  std::vector<Violation> out;
  for (std::size_t a = 0; a < dim; ++a) {
    if (x(a, a)) out.push_back({ViolationFamily::Irreflexive, {a}});
  }
  for (std::size_t a = 0; a < dim; ++a) {
    for (std::size_t b = a + 1; b < dim; ++b) {
      const int sum = int{x(a, b)} + int{x(b, a)};
      if (sum == 0) out.push_back({ViolationFamily::Comparability, {a, b}});
      if (sum == 2) out.push_back({ViolationFamily::Asymmetry, {a, b}});
    }
  }
  for (std::size_t a = 0; a < dim; ++a) {
    for (std::size_t b = 0; b < dim; ++b) {
      if (b == a || !x(a, b)) continue;
      for (std::size_t c = 0; c < dim; ++c) {
        if (c == a || c == b) continue;
        if (x(b, c) && !x(a, c)) out.push_back({ViolationFamily::Transitivity, {a, b, c}});
      }
    }
  }
  for (const auto& [a, b] : dependency.pairs) {
    if (!x(a, b)) out.push_back({ViolationFamily::Dependency, {a, b}});
  }
  return out;
}

LinearOrder order_to_schedule(const TotalOrderMatrix& x) {
  const std::size_t dim = x.dim();
  std::vector<std::size_t> successors(dim, 0);
  for (std::size_t a = 0; a < dim; ++a) {
    for (std::size_t b = 0; b < dim; ++b) {
      if (a != b && x(a, b)) ++successors[a];
    }
  }
  LinearOrder lin;
  lin.sequence.resize(dim);
  std::iota(lin.sequence.begin(), lin.sequence.end(), std::size_t{0});
  std::sort(lin.sequence.begin(), lin.sequence.end(),
            [&](std::size_t a, std::size_t b) { return successors[a] > successors[b] || (successors[a] == successors[b] && a < b); });
  for (std::size_t p = 0; p < dim; ++p) {
    if (successors[lin.sequence[p]] != dim - 1 - p) throw Error(ErrorKind::InvalidOrder, "successor counts are not a permutation");
    // Distinct counts alone admit non-transitive tournaments, so confirm
    // each consecutive pair is actually ordered.
    if (p > 0 && !x(lin.sequence[p - 1], lin.sequence[p])) throw Error(ErrorKind::InvalidOrder, "relation is not a linear order");
  }
  const CombinedIndex& idx = x.index();
  lin.uav_position.assign(idx.m, 0);
  for (std::size_t p = 0; p < dim; ++p) {
    const std::size_t k = lin.sequence[p];
    if (idx.is_flow(k)) {
      lin.schedule.order.push_back(k);
    } else {
      lin.uav_position[k - idx.n] = p;
    }
  }
  return lin;
}

std::vector<std::size_t> canonical_sequence(const ReplacementInstance& instance, const Schedule& schedule) {
  validate_schedule(instance, schedule);
  const CombinedIndex idx{instance.n(), instance.m()};
  // Last scheduled flow of each UAV, as a position in the schedule.
  std::vector<std::vector<UavId>> retiring_after(instance.n());
  std::vector<std::size_t> position(instance.n());
  for (std::size_t p = 0; p < schedule.order.size(); ++p) position[schedule.order[p]] = p;
  std::vector<std::size_t> sequence;
  sequence.reserve(idx.size());
  for (UavId j = 0; j < instance.m(); ++j) {
    const auto& lam = instance.lambda(j);
    if (lam.empty()) {
      sequence.push_back(idx.of_uav(j));
      continue;
    }
    const FlowId last = *std::max_element(lam.begin(), lam.end(), [&](FlowId a, FlowId b) { return position[a] < position[b]; });
    retiring_after[position[last]].push_back(j);
  }
  for (std::size_t p = 0; p < schedule.order.size(); ++p) {
    sequence.push_back(idx.of_flow(schedule.order[p]));
    for (UavId j : retiring_after[p]) sequence.push_back(idx.of_uav(j));
  }
  return sequence;
}

TotalOrderMatrix schedule_to_canonical_order(const ReplacementInstance& instance, const Schedule& schedule) {
  return TotalOrderMatrix::from_sequence(CombinedIndex{instance.n(), instance.m()}, canonical_sequence(instance, schedule));
}

IlpModel build_ilp(const ReplacementInstance& instance) {
  IlpModel model;
  model.index = CombinedIndex{instance.n(), instance.m()};
  const std::size_t dim = model.index.size();
  if (dim < 2) throw Error(ErrorKind::EmptyInstance, "ILP needs at least two combined elements");
  for (FlowId i = 0; i < instance.n(); ++i) {
    for (UavId j = 0; j < instance.m(); ++j) {
      model.objective.push_back({model.index.of_flow(i), model.index.of_uav(j), instance.time(i) * instance.power(j)});
    }
  }
  model.fixed = dependency_from_instance(instance).pairs;
  for (std::size_t a = 0; a < dim; ++a) {
    for (std::size_t b = a + 1; b < dim; ++b) model.pair_equalities.emplace_back(a, b);
  }
  model.triples.reserve(dim * (dim - 1) * (dim > 2 ? dim - 2 : 0));
  for (std::size_t a = 0; a < dim; ++a) {
    for (std::size_t b = 0; b < dim; ++b) {
      if (b == a) continue;
      for (std::size_t c = 0; c < dim; ++c) {
        if (c != a && c != b) model.triples.push_back({a, b, c});
      }
    }
  }
  return model;
}

namespace {

std::string var(std::size_t a, std::size_t b) {
  return "x_" + std::to_string(CombinedIndex::label(a)) + "_" + std::to_string(CombinedIndex::label(b));
}

std::string number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

void write_lp(const IlpModel& model, std::ostream& out) {
  const std::size_t dim = model.index.size();
  out << "\\ Handover ordering model: n = " << model.index.n << " flows, m = " << model.index.m << " UAVs\n";
  out << "Minimize\n obj:";
  if (model.objective.empty()) {
    out << " 0 " << var(0, 1);
  }
  std::size_t on_line = 0;
  for (std::size_t t = 0; t < model.objective.size(); ++t) {
    const auto& term = model.objective[t];
    if (on_line == 4) {
      out << "\n    ";
      on_line = 0;
    }
    out << (t == 0 ? " " : " + ") << number(term.coefficient) << " " << var(term.flow, term.uav);
    ++on_line;
  }
  out << "\nSubject To\n";
  for (const auto& [a, b] : model.fixed) {
    out << " dep_" << CombinedIndex::label(a) << "_" << CombinedIndex::label(b) << ": " << var(a, b) << " = 1\n";
  }
  for (const auto& [a, b] : model.pair_equalities) {
    out << " tot_" << CombinedIndex::label(a) << "_" << CombinedIndex::label(b) << ": " << var(a, b) << " + " << var(b, a)
        << " = 1\n";
  }
  for (const auto& t : model.triples) {
    out << " tr_" << CombinedIndex::label(t.a) << "_" << CombinedIndex::label(t.b) << "_" << CombinedIndex::label(t.c) << ": "
        << var(t.a, t.b) << " + " << var(t.b, t.c) << " - " << var(t.a, t.c) << " <= 1\n";
  }
  out << "Binary\n";
  for (std::size_t a = 0; a < dim; ++a) {
    for (std::size_t b = 0; b < dim; ++b) {
      if (a != b) out << " " << var(a, b) << "\n";
    }
  }
  out << "End\n";
}

std::string to_lp_string(const IlpModel& model) {
  std::ostringstream os;
  write_lp(model, os);
  return os.str();
}

void export_lp(const IlpModel& model, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::IoFailure, "cannot open " + path + " for writing");
  write_lp(model, out);
  out.flush();
  if (!out) throw Error(ErrorKind::IoFailure, "failed writing " + path);
}

double ilp_objective(const IlpModel& model, const TotalOrderMatrix& x) {
  if (!(x.index() == model.index)) throw Error(ErrorKind::DimensionMismatch, "order and model differ in n or m");
  double total = 0.0;
  for (const auto& term : model.objective) {
    if (x(term.flow, term.uav)) total += term.coefficient;
  }
  return total;
}

}  // namespace uavr

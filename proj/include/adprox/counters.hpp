#pragma once

#include <cstdint>
#include <span>
#include <string>

namespace adprox {

/// The dominant cost of one prox call.
enum class ProxKind {
  Identity,          // g = 0
  Projection,        // cheap or linear-algebra projection (orthant, affine)
  Eigendecomposition,
  Svd,
};

/// One billable event emitted by a solver run.
enum class OpEvent : std::uint8_t {
  Value,        // f evaluated
  ValueReused,  // last linesearch value whose work feeds the next gradient
  Gradient,
  Prox,
};

/// Raw operation counters. All fields are monotone along a run.
struct Counters {
  std::int64_t grad_evals = 0;
  std::int64_t func_evals = 0;
  std::int64_t prox_evals = 0;
  std::int64_t svd_count = 0;
  std::int64_t eig_count = 0;
  std::int64_t projection_count = 0;
  std::int64_t reused_evals = 0;

  void record(OpEvent event, ProxKind prox_kind);

  friend bool operator==(const Counters&, const Counters&) = default;
};

/// Which counter combination a problem family reports as its cost axis.
enum class EssentialMetric {
  GradientsAndValues,  // unit problems: one unit per gradient and per non-reused value
  Projections,         // minimal-length curve
  Eigendecompositions, // MLE
  Svds,                // matrix completion
  MatMulUnits,         // NMF: gradient = 3 products, value = 1
  MatVecUnits,         // dual entropy: gradient = 2 products, value = 1
};

/// Per-call weights of value / gradient / prox in essential-operation units.
struct CostModel {
  EssentialMetric metric = EssentialMetric::GradientsAndValues;
  double value_weight = 1.0;
  double gradient_weight = 1.0;
  double prox_weight = 0.0;
  ProxKind prox_kind = ProxKind::Identity;

  static CostModel for_metric(EssentialMetric metric, ProxKind prox_kind);
};

/// Replays an event stream into counters. Throws ContractError on an unknown event.
Counters count_essential(ProxKind prox_kind, std::span<const OpEvent> events);

/// Weighted total: value_weight * (func - reused) + gradient_weight * grads + prox_weight * proxes.
double essential_operations(const Counters& c, const CostModel& cost);

std::string metric_name(EssentialMetric metric);

}  // namespace adprox

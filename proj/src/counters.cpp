#include "adprox/counters.hpp"

#include "adprox/core.hpp"

namespace adprox {

void Counters::record(OpEvent event, ProxKind prox_kind) {
  switch (event) {
    case OpEvent::Value:
      ++func_evals;
      return;
    case OpEvent::ValueReused:
      ++reused_evals;
      return;
    case OpEvent::Gradient:
      ++grad_evals;
      return;
    case OpEvent::Prox:
      ++prox_evals;
      switch (prox_kind) {
        case ProxKind::Identity:
          break;
        case ProxKind::Projection:
          ++projection_count;
          break;
        case ProxKind::Eigendecomposition:
          ++eig_count;
          break;
        case ProxKind::Svd:
          ++svd_count;
          break;
      }
      return;
  }
  throw ContractError("unknown operation event " + std::to_string(static_cast<int>(event)));
}

Counters count_essential(ProxKind prox_kind, std::span<const OpEvent> events) {
  Counters c;
  for (auto e : events) c.record(e, prox_kind);
  if (c.reused_evals > c.func_evals)
    throw ContractError("event stream reuses more values than it evaluated");
  return c;
}

CostModel CostModel::for_metric(EssentialMetric metric, ProxKind prox_kind) {
  CostModel m;
  m.metric = metric;
  m.prox_kind = prox_kind;
  switch (metric) {
    case EssentialMetric::GradientsAndValues:
      m.value_weight = 1.0;
      m.gradient_weight = 1.0;
      m.prox_weight = 0.0;
      break;
    case EssentialMetric::Projections:
    case EssentialMetric::Eigendecompositions:
    case EssentialMetric::Svds:
      m.value_weight = 0.0;
      m.gradient_weight = 0.0;
      m.prox_weight = 1.0;
      break;
    case EssentialMetric::MatMulUnits:
      m.value_weight = 1.0;
      m.gradient_weight = 3.0;
      m.prox_weight = 0.0;
      break;
    case EssentialMetric::MatVecUnits:
      m.value_weight = 1.0;
      m.gradient_weight = 2.0;
      m.prox_weight = 0.0;
      break;
  }
  return m;
}

double essential_operations(const Counters& c, const CostModel& cost) {
  return cost.value_weight * static_cast<double>(c.func_evals - c.reused_evals) +
         cost.gradient_weight * static_cast<double>(c.grad_evals) +
         cost.prox_weight * static_cast<double>(c.prox_evals);
}

std::string metric_name(EssentialMetric metric) {
  switch (metric) {
    case EssentialMetric::GradientsAndValues: return "gradients+values";
    case EssentialMetric::Projections: return "projections";
    case EssentialMetric::Eigendecompositions: return "eigendecompositions";
    case EssentialMetric::Svds: return "svds";
    case EssentialMetric::MatMulUnits: return "matmul-units";
    case EssentialMetric::MatVecUnits: return "matvec-units";
  }
  return "unknown";
}

}  // namespace adprox

#include "adprox/core.hpp"

#include <cmath>
#include <limits>

namespace adprox {
namespace {

class ZeroRegularizer final : public ProxFriendly {
 public:
  double value(const Vector&) const override { return 0.0; }
  Vector prox(double, const Vector& y) const override { return y; }
  ProxKind kind() const override { return ProxKind::Identity; }
  std::string describe() const override { return "zero"; }
  bool is_zero() const override { return true; }
};

Vector central_differences(const SmoothFunction& f, const Vector& x, double h, bool relative) {
  if (!(h > 0.0)) throw ContractError("finite-difference step must be positive");
  if (x.size() != f.dimension()) throw ContractError("finite_difference_gradient: dimension mismatch");
  Vector g(x.size());
  Vector probe = x;
  for (Index i = 0; i < x.size(); ++i) {
    const double hi = relative ? h * (1.0 + std::abs(x[i])) : h;
    probe[i] = x[i] + hi;
    const double up = f.value(probe);
    probe[i] = x[i] - hi;
    const double down = f.value(probe);
    probe[i] = x[i];
    if (!std::isfinite(up) || !std::isfinite(down))
      throw NumericalError("non-finite value in finite differences at coordinate " + std::to_string(i));
    // (x+h)-(x-h) need not be exactly 2h in floating point
    const double span = (x[i] + hi) - (x[i] - hi);
    g[i] = (up - down) / span;
  }
  return g;
}

}  // namespace

std::shared_ptr<const ProxFriendly> zero_regularizer() {
  static const auto instance = std::make_shared<const ZeroRegularizer>();
  return instance;
}

double evaluate_composite(const CompositeProblem& p, const Vector& x) {
  if (x.size() != p.dimension())
    throw ContractError("evaluate_composite: point has dimension " + std::to_string(x.size()) +
                        ", problem has " + std::to_string(p.dimension()));
  const double gx = p.g->value(x);
  if (gx == std::numeric_limits<double>::infinity()) return gx;
  return p.f->value(x) + gx;
}

Vector finite_difference_gradient(const SmoothFunction& f, const Vector& x, double h) {
  return central_differences(f, x, h, true);
}

Vector finite_difference_gradient_abs(const SmoothFunction& f, const Vector& x, double h) {
  return central_differences(f, x, h, false);
}

}  // namespace adprox

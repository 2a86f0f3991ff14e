#include "feasib/schedule.hpp"

#include <cmath>

#include <fmt/format.h>

namespace feasib {

std::string_view to_string(Regime regime) {
  return regime == Regime::OneSet ? "OneSet" : "TwoSets";
}

bool satisfies_regime(const ForcingParams& p, Regime regime) {
  if (!(p.gamma >= 0.0 && p.theta >= 0.0 && p.lambda >= 0.0)) return false;
  const bool sigma_ok = 2.0 * p.gamma + 4.0 * p.lambda < 1.0;
  if (regime == Regime::OneSet) return p.theta < 0.5 && sigma_ok;
  return p.theta < 0.25 && sigma_ok && 2.0 * (p.gamma + p.theta + p.lambda) < 1.0;
}

ForcingSchedule::ForcingSchedule(ForcingParams initial, double tau, double delta, Regime regime)
    : current_(initial), tau_(tau), delta_(delta), regime_(regime) {
  current_.validate();
  if (!(tau_ > 0.0 && tau_ < 1.0)) throw InvalidInput(fmt::format("tau must lie in (0,1), got {}", tau_));
  if (!(delta_ > 0.0 && delta_ < 1.0)) {
    throw InvalidInput(fmt::format("delta must lie in (0,1), got {}", delta_));
  }
  if (!satisfies_regime(current_, regime_)) {
    throw InvalidInput(fmt::format(
        "forcing parameters (gamma={}, theta={}, lambda={}) violate the {} conditions",
        current_.gamma, current_.theta, current_.lambda, to_string(regime_)));
  }
}

ForcingSchedule ForcingSchedule::standard(Regime regime, double eps_feas) {
  return ForcingSchedule({0.1 - eps_feas, 0.2 - eps_feas, 0.2 - eps_feas}, 0.9, 0.1, regime);
}

ForcingSchedule ForcingSchedule::decreased() const {
  ForcingSchedule next = *this;
  next.current_.gamma *= delta_;
  next.current_.theta *= delta_;
  next.current_.lambda *= delta_;
  return next;
}

ForcingSchedule schedule_update(const ForcingSchedule& schedule, double cB_prev, double cB_curr,
                                double cA_prev, double cA_curr) {
  if (cB_prev < 0.0 || cB_curr < 0.0 || cA_prev < 0.0 || cA_curr < 0.0) {
    throw InvalidInput("schedule_update: violations must be nonnegative");
  }
  const double tau = schedule.tau();
  const bool progress = cB_curr <= tau * cB_prev || cA_curr <= tau * cA_prev;
  return progress ? schedule : schedule.decreased();
}

}  // namespace feasib

#pragma once

#include <string_view>

#include "feasib/condg.hpp"

namespace feasib {

/// Which admissibility conditions the forcing parameters must keep.
///   OneSet  (one inexact projection):  theta < 1/2,  2 gamma + 4 lambda < 1
///   TwoSets (two inexact projections): theta < 1/4,  2 gamma + 4 lambda < 1,
///                                      2 gamma + 2 theta + 2 lambda < 1
enum class Regime { OneSet, TwoSets };

std::string_view to_string(Regime regime);

bool satisfies_regime(const ForcingParams& params, Regime regime);

/// Adaptive forcing parameters: kept while feasibility improves by the factor `tau`
/// against either set, otherwise scaled by `delta`. Components never increase.
class ForcingSchedule {
 public:
  /// Throws InvalidInput unless tau, delta lie in (0, 1) and `initial` satisfies `regime`.
  ForcingSchedule(ForcingParams initial, double tau, double delta, Regime regime);

  /// gamma_0 = 0.1 - eps_feas, theta_0 = lambda_0 = 0.2 - eps_feas, tau = 0.9, delta = 0.1.
  static ForcingSchedule standard(Regime regime, double eps_feas = 1e-8);

  const ForcingParams& current() const { return current_; }
  double tau() const { return tau_; }
  double delta() const { return delta_; }
  Regime regime() const { return regime_; }

  /// Same schedule with the current parameters scaled by delta.
  ForcingSchedule decreased() const;

 private:
  ForcingParams current_;
  double tau_;
  double delta_;
  Regime regime_;
};

/// One step of the adaptive rule. Parameters are kept when
///   cB_curr <= tau * cB_prev   or   cA_curr <= tau * cA_prev,
/// and multiplied by delta otherwise.
ForcingSchedule schedule_update(const ForcingSchedule& schedule, double cB_prev, double cB_curr,
                                double cA_prev, double cA_curr);

}  // namespace feasib

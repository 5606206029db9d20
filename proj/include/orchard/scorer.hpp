#pragma once

namespace orchard {

struct ScoreInputs {
  long long c_r = 0;  // reported count
  long long c_t = 0;  // true count
  double t_m = 0.0;   // mission seconds
  double d_m = 0.0;   // mission meters
  int k = 0;          // collision events
  double t_b = 100.0;
  double d_b = 150.0;
};

struct ScoreReport {
  double p_f = 0.0;
  double p_t = 0.0;
  double p_d = 0.0;
  double p_c = 0.0;
  double p = 0.0;
};

/// Throws DomainError when c_t < 0, c_r < 0, t_m <= 0, d_m < 0, k < 0 or a
/// reference constant is not positive. p_f is not clamped at zero.
void validate(const ScoreInputs& in);

ScoreReport compute_score(const ScoreInputs& in);

}  // namespace orchard

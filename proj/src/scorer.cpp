#include "orchard/scorer.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include "orchard/errors.hpp"

namespace orchard {

void validate(const ScoreInputs& in) {
  if (in.c_t < 0) throw DomainError("score: true count must be >= 0");
  if (in.c_r < 0) throw DomainError("score: reported count must be >= 0");
  if (!(in.t_m > 0.0) || !std::isfinite(in.t_m)) throw DomainError("score: t_m must be positive");
  if (!(in.d_m >= 0.0) || !std::isfinite(in.d_m)) throw DomainError("score: d_m must be >= 0");
  if (in.k < 0) throw DomainError("score: k must be >= 0");
  if (!(in.t_b > 0.0)) throw DomainError("score: t_b must be positive");
  if (!(in.d_b > 0.0)) throw DomainError("score: d_b must be positive");
}

ScoreReport compute_score(const ScoreInputs& in) {
  validate(in);
  ScoreReport r;
  const double miss = static_cast<double>(std::llabs(in.c_r - in.c_t));
  r.p_f = 50.0 * (1.0 - 4.0 * miss / static_cast<double>(std::max(in.c_t, 1LL)));
  r.p_t = 25.0 * std::exp(1.0 - in.t_m / in.t_b);
  r.p_d = 25.0 * std::exp(2.0 * (1.0 - in.d_m / in.d_b));
  r.p_c = 25.0 * in.k;
  r.p = r.p_f + r.p_t + r.p_d - r.p_c;
  return r;
}

}  // namespace orchard

#pragma once

#include <span>
#include <vector>

#include "crowdtruth/aggregators.hpp"
#include "crowdtruth/types.hpp"

namespace crowdtruth {

struct BoundReport {
    double entropy = 0.0;          // H(rho), nats
    double kl_penalty = 0.0;       // sum_j sum_g sum_g' rho_g rho_g' KL(pi^j_g || pi^j_g')
    double r_value = 0.0;          // entropy - kl_penalty
    double lower_bound_raw = 0.0;  // (r_value - log2/n) / (n log K)
    double lower_bound = 0.0;      // clamped to [0, 1]
};

// H(rho) in nats, with 0 log 0 = 0.
double entropy(const ClassPrior& prior);

// KL(p || q) in nats. With eps > 0, q is replaced by (q + eps) / (1 + K*eps).
// With eps = 0 the result is +inf when some p_k > 0 has q_k = 0; p_k = 0
// terms contribute nothing.
double row_kl(std::span<const double> p, std::span<const double> q, double eps);

// R(rho, pi) = H(rho) - prior-weighted pairwise row KL summed over workers.
// May be -inf when eps = 0 and some KL diverges.
double r_value(const ClassPrior& prior, const std::vector<ConfusionMatrix>& confusions,
               double eps);

// Minimax error-rate lower bound: raw = (R - log2/n) / (n log K). Rejects K=1.
BoundReport minimax_lower_bound(const ClassPrior& prior,
                                const std::vector<ConfusionMatrix>& confusions, long long n,
                                int num_classes, double eps);

// R with each worker's matrix replaced by its hard-assigned cluster template.
double r_value_wc(const WcParams& params, double eps);

}  // namespace crowdtruth

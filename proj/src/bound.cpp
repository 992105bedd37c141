#include "crowdtruth/bound.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace crowdtruth {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

double entropy(const ClassPrior& prior) {
    double h = 0.0;
    for (double p : prior.probs) {
        if (p > 0.0) h -= p * std::log(p);
    }
    return h;
}

double row_kl(std::span<const double> p, std::span<const double> q, double eps) {
    if (p.size() != q.size()) throw std::invalid_argument("row_kl: size mismatch");
    const double k = static_cast<double>(p.size());
    double kl = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (p[i] == 0.0) continue;
        const double qi = eps > 0.0 ? (q[i] + eps) / (1.0 + k * eps) : q[i];
        if (qi == 0.0) return kInf;
        kl += p[i] * std::log(p[i] / qi);
    }
    return kl;
}

namespace {

// The triple sum of Theorem 1: sum_j sum_g sum_g' rho_g rho_g' KL.
double kl_penalty_sum(const ClassPrior& prior, const std::vector<ConfusionMatrix>& confusions,
                      double eps) {
    const int k = prior.num_classes();
    double penalty = 0.0;
    for (const auto& pi : confusions) {
        if (pi.num_classes() != k) throw std::invalid_argument("r_value: class count mismatch");
        for (int g = 0; g < k; ++g) {
            for (int g2 = 0; g2 < k; ++g2) {
                if (g == g2) continue;
                const double w = prior.probs[g] * prior.probs[g2];
                if (w == 0.0) continue;
                penalty += w * row_kl(pi.row(g), pi.row(g2), eps);
            }
        }
    }
    return penalty;
}

}  // namespace

double r_value(const ClassPrior& prior, const std::vector<ConfusionMatrix>& confusions,
               double eps) {
    return entropy(prior) - kl_penalty_sum(prior, confusions, eps);
}

BoundReport minimax_lower_bound(const ClassPrior& prior,
                                const std::vector<ConfusionMatrix>& confusions, long long n,
                                int num_classes, double eps) {
    if (num_classes < 2) throw std::invalid_argument("minimax_lower_bound: need K >= 2");
    if (n < 1) throw std::invalid_argument("minimax_lower_bound: need n >= 1");
    BoundReport rep;
    rep.entropy = entropy(prior);
    rep.kl_penalty = kl_penalty_sum(prior, confusions, eps);
    rep.r_value = rep.entropy - rep.kl_penalty;
    const double nn = static_cast<double>(n);
    rep.lower_bound_raw = (rep.r_value - std::log(2.0) / nn) / (nn * std::log(num_classes));
    rep.lower_bound = std::max(0.0, std::min(1.0, rep.lower_bound_raw));
    return rep;
}

double r_value_wc(const WcParams& params, double eps) {
    const std::vector<int> assign = hard_assignments(params.responsibilities);
    std::vector<ConfusionMatrix> per_worker;
    per_worker.reserve(assign.size());
    for (int l : assign) per_worker.push_back(params.templates[l]);
    return r_value(params.prior, per_worker, eps);
}

}  // namespace crowdtruth

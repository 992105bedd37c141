#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "crowdtruth/types.hpp"

namespace crowdtruth {

enum class InitScheme { kMvInit, kRandom };

struct FitConfig {
    int max_iters = 1000;
    double tol = 1e-6;         // absolute objective change
    double smoothing = 0.01;   // epsilon added in every M-step row normalization
    std::uint64_t seed = 0;
    InitScheme init = InitScheme::kMvInit;
};

// --- Majority voting ---------------------------------------------------

// dist[i] proportional to per-class vote counts; uniform when a task has no
// labels. MAP labels use the smallest-index tie rule.
TruthPosterior majority_vote(const LabelMatrix& labels);

// --- Dawid-Skene -------------------------------------------------------

struct DsResult {
    TruthPosterior posterior;
    std::vector<ConfusionMatrix> confusions;  // one per worker
    ClassPrior prior;
    std::vector<double> loglik_trace;  // penalized objective, one value per iteration
    int iterations = 0;
};

// q(G_i = k) proportional to rho_k * prod_j pi^j[k, X_ij], in log space.
// Throws std::domain_error when a task's whole row underflows to zero
// (possible with exact-zero confusion entries; smooth before calling).
TruthPosterior ds_e_step(const LabelMatrix& labels,
                         const std::vector<ConfusionMatrix>& confusions,
                         const ClassPrior& prior);

// Smoothed count updates:
//   pi^j[k,k'] = (eps + sum_i q_ik d(X_ij=k')) / (K*eps + sum over answers),
//   rho_k = mean_i q_ik.
// Workers with no labels get uniform rows.
std::pair<std::vector<ConfusionMatrix>, ClassPrior> ds_m_step(const LabelMatrix& labels,
                                                              const TruthPosterior& posterior,
                                                              double eps);

// Observed-data log-likelihood plus the smoothing penalty eps * sum log pi
// entries; the quantity ds_fit traces and tests for monotonicity.
double ds_objective(const LabelMatrix& labels, const std::vector<ConfusionMatrix>& confusions,
                    const ClassPrior& prior, double eps);

DsResult ds_fit(const LabelMatrix& labels, const FitConfig& cfg);

// --- Worker clustering -------------------------------------------------

struct WcParams {
    std::vector<ConfusionMatrix> templates;  // L cluster templates (Lambda)
    std::vector<double> cluster_prior;       // tau, L-simplex
    Mat responsibilities;                    // phi, m x L, rows sum to 1
    ClassPrior prior;                        // rho

    int cluster_count() const { return static_cast<int>(templates.size()); }
};

struct WcResult {
    TruthPosterior posterior;
    WcParams params;
    std::vector<double> elbo_trace;  // penalized ELBO, one value per iteration
    int iterations = 0;
    std::vector<int> hard_assignments;  // argmax of each phi row, 0-based
};

// log q(G_i=k) = log rho_k + sum_j sum_l phi_jl log Lambda_l[k, X_ij].
TruthPosterior wc_update_qg(const LabelMatrix& labels, const WcParams& params);

// log phi_jl = log tau_l + sum_i sum_k q_ik log Lambda_l[k, X_ij], rows
// normalized with max subtraction.
Mat wc_update_phi(const LabelMatrix& labels, const TruthPosterior& posterior,
                  const WcParams& params);

// Lambda_l[k,k'] prop. eps + sum_j phi_jl sum_i q_ik d(X_ij=k');
// tau_l = mean_j phi_jl; rho_k = mean_i q_ik.
WcParams wc_m_step(const LabelMatrix& labels, const TruthPosterior& posterior, const Mat& phi,
                   double eps);

// ELBO (complete-data expectation plus entropies of q and phi) plus the
// eps * sum log Lambda smoothing penalty.
double wc_objective(const LabelMatrix& labels, const TruthPosterior& posterior, const Mat& phi,
                    const WcParams& params, double eps);

std::vector<int> hard_assignments(const Mat& phi);

WcResult wc_fit(const LabelMatrix& labels, int num_clusters, const FitConfig& cfg);

}  // namespace crowdtruth

#pragma once

#include <utility>
#include <vector>

#include "crowdtruth/aggregators.hpp"
#include "crowdtruth/types.hpp"

// Serial reference implementations of the inference kernels. Plain loops,
// no OpenMP, no precomputed tables; kept as the comparison baseline for the
// parallel kernels in tests and for the benchmark target.
namespace crowdtruth::ref {

TruthPosterior majority_vote(const LabelMatrix& labels);

TruthPosterior ds_e_step(const LabelMatrix& labels, const std::vector<ConfusionMatrix>& confusions,
                         const ClassPrior& prior);

std::pair<std::vector<ConfusionMatrix>, ClassPrior> ds_m_step(const LabelMatrix& labels,
                                                              const TruthPosterior& posterior,
                                                              double eps);

double ds_objective(const LabelMatrix& labels, const std::vector<ConfusionMatrix>& confusions,
                    const ClassPrior& prior, double eps);

TruthPosterior wc_update_qg(const LabelMatrix& labels, const WcParams& params);

Mat wc_update_phi(const LabelMatrix& labels, const TruthPosterior& posterior,
                  const WcParams& params);

WcParams wc_m_step(const LabelMatrix& labels, const TruthPosterior& posterior, const Mat& phi,
                   double eps);

double wc_objective(const LabelMatrix& labels, const TruthPosterior& posterior, const Mat& phi,
                    const WcParams& params, double eps);

}  // namespace crowdtruth::ref

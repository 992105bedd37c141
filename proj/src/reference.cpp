#include "crowdtruth/reference.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace crowdtruth::ref {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void normalize_or_throw(std::span<double> row, const char* who) {
    double mx = kNegInf;
    for (double v : row) mx = std::max(mx, v);
    if (mx == kNegInf) throw std::domain_error(std::string(who) + ": zero row");
    double sum = 0.0;
    for (double& v : row) {
        v = std::exp(v - mx);
        sum += v;
    }
    for (double& v : row) v /= sum;
}

}  // namespace

TruthPosterior majority_vote(const LabelMatrix& labels) {
    const int n = labels.task_count();
    const int k = labels.num_classes();
    std::vector<double> dist(static_cast<std::size_t>(n) * k, 0.0);
    for (int i = 0; i < n; ++i) {
        double* row = dist.data() + static_cast<std::size_t>(i) * k;
        const auto obs = labels.labels_of_task(i);
        if (obs.empty()) {
            for (int g = 0; g < k; ++g) row[g] = 1.0 / k;
            continue;
        }
        for (const auto& tl : obs) row[tl.label - 1] += 1.0;
        for (int g = 0; g < k; ++g) row[g] /= static_cast<double>(obs.size());
    }
    return TruthPosterior::from_dist(n, k, std::move(dist));
}

TruthPosterior ds_e_step(const LabelMatrix& labels, const std::vector<ConfusionMatrix>& confusions,
                         const ClassPrior& prior) {
    const int n = labels.task_count();
    const int k = labels.num_classes();
    std::vector<double> dist(static_cast<std::size_t>(n) * k, 0.0);
    for (int i = 0; i < n; ++i) {
        double* row = dist.data() + static_cast<std::size_t>(i) * k;
        for (int g = 0; g < k; ++g) {
            double acc = std::log(prior.probs[g]);
            for (const auto& tl : labels.labels_of_task(i))
                acc += std::log(confusions[tl.worker](g, tl.label - 1));
            row[g] = acc;
        }
        normalize_or_throw({row, static_cast<std::size_t>(k)}, "ref::ds_e_step");
    }
    return TruthPosterior::from_dist(n, k, std::move(dist));
}

std::pair<std::vector<ConfusionMatrix>, ClassPrior> ds_m_step(const LabelMatrix& labels,
                                                              const TruthPosterior& posterior,
                                                              double eps) {
    const int m = labels.worker_count();
    const int k = labels.num_classes();
    std::vector<ConfusionMatrix> out(m, ConfusionMatrix(k));
    for (int j = 0; j < m; ++j) {
        ConfusionMatrix counts(k, 0.0);
        for (const auto& wl : labels.labels_of_worker(j)) {
            for (int g = 0; g < k; ++g) counts(g, wl.label - 1) += posterior.row(wl.task)[g];
        }
        for (int g = 0; g < k; ++g) {
            double row_sum = 0.0;
            for (int a = 0; a < k; ++a) row_sum += counts(g, a);
            for (int a = 0; a < k; ++a) out[j](g, a) = (eps + counts(g, a)) / (k * eps + row_sum);
        }
    }
    ClassPrior rho{std::vector<double>(k, 0.0)};
    for (int i = 0; i < posterior.n; ++i)
        for (int g = 0; g < k; ++g) rho.probs[g] += posterior.row(i)[g];
    for (double& v : rho.probs) v /= std::max(1, posterior.n);
    return {std::move(out), std::move(rho)};
}

double ds_objective(const LabelMatrix& labels, const std::vector<ConfusionMatrix>& confusions,
                    const ClassPrior& prior, double eps) {
    const int n = labels.task_count();
    const int k = labels.num_classes();
    double obj = 0.0;
    for (int i = 0; i < n; ++i) {
        std::vector<double> acc(k);
        double mx = kNegInf;
        for (int g = 0; g < k; ++g) {
            double a = std::log(prior.probs[g]);
            for (const auto& tl : labels.labels_of_task(i))
                a += std::log(confusions[tl.worker](g, tl.label - 1));
            acc[g] = a;
            mx = std::max(mx, a);
        }
        if (mx == kNegInf) {
            obj = kNegInf;
            continue;
        }
        double s = 0.0;
        for (int g = 0; g < k; ++g) s += std::exp(acc[g] - mx);
        obj += mx + std::log(s);
    }
    if (eps > 0.0) {
        for (const auto& pi : confusions)
            for (int g = 0; g < k; ++g)
                for (int a = 0; a < k; ++a) obj += eps * std::log(pi(g, a));
    }
    return obj;
}

TruthPosterior wc_update_qg(const LabelMatrix& labels, const WcParams& params) {
    const int n = labels.task_count();
    const int k = labels.num_classes();
    const int L = params.cluster_count();
    std::vector<double> dist(static_cast<std::size_t>(n) * k, 0.0);
    for (int i = 0; i < n; ++i) {
        double* row = dist.data() + static_cast<std::size_t>(i) * k;
        for (int g = 0; g < k; ++g) {
            double acc = std::log(params.prior.probs[g]);
            for (const auto& tl : labels.labels_of_task(i)) {
                for (int l = 0; l < L; ++l) {
                    const double w = params.responsibilities.at(tl.worker, l);
                    if (w == 0.0) continue;
                    acc += w * std::log(params.templates[l](g, tl.label - 1));
                }
            }
            row[g] = acc;
        }
        normalize_or_throw({row, static_cast<std::size_t>(k)}, "ref::wc_update_qg");
    }
    return TruthPosterior::from_dist(n, k, std::move(dist));
}

Mat wc_update_phi(const LabelMatrix& labels, const TruthPosterior& posterior,
                  const WcParams& params) {
    const int m = labels.worker_count();
    const int k = labels.num_classes();
    const int L = params.cluster_count();
    Mat phi(m, L);
    for (int j = 0; j < m; ++j) {
        auto row = phi.row(j);
        for (int l = 0; l < L; ++l) {
            double acc = std::log(params.cluster_prior[l]);
            for (const auto& wl : labels.labels_of_worker(j)) {
                const auto qrow = posterior.row(wl.task);
                for (int g = 0; g < k; ++g) {
                    if (qrow[g] == 0.0) continue;
                    acc += qrow[g] * std::log(params.templates[l](g, wl.label - 1));
                }
            }
            row[l] = acc;
        }
        normalize_or_throw(row, "ref::wc_update_phi");
    }
    return phi;
}

WcParams wc_m_step(const LabelMatrix& labels, const TruthPosterior& posterior, const Mat& phi,
                   double eps) {
    const int m = labels.worker_count();
    const int k = labels.num_classes();
    const int L = phi.cols;
    WcParams params;
    params.templates.assign(L, ConfusionMatrix(k));
    params.cluster_prior.assign(L, 0.0);
    for (int l = 0; l < L; ++l) {
        ConfusionMatrix counts(k, 0.0);
        double tau = 0.0;
        for (int j = 0; j < m; ++j) {
            const double w = phi.at(j, l);
            tau += w;
            if (w == 0.0) continue;
            for (const auto& wl : labels.labels_of_worker(j)) {
                for (int g = 0; g < k; ++g)
                    counts(g, wl.label - 1) += w * posterior.row(wl.task)[g];
            }
        }
        for (int g = 0; g < k; ++g) {
            double row_sum = 0.0;
            for (int a = 0; a < k; ++a) row_sum += counts(g, a);
            for (int a = 0; a < k; ++a)
                params.templates[l](g, a) = (eps + counts(g, a)) / (k * eps + row_sum);
        }
        params.cluster_prior[l] = tau / std::max(1, m);
    }
    ClassPrior rho{std::vector<double>(k, 0.0)};
    for (int i = 0; i < posterior.n; ++i)
        for (int g = 0; g < k; ++g) rho.probs[g] += posterior.row(i)[g];
    for (double& v : rho.probs) v /= std::max(1, posterior.n);
    params.prior = std::move(rho);
    params.responsibilities = phi;
    return params;
}

double wc_objective(const LabelMatrix& labels, const TruthPosterior& posterior, const Mat& phi,
                    const WcParams& params, double eps) {
    const int n = labels.task_count();
    const int m = labels.worker_count();
    const int k = labels.num_classes();
    const int L = params.cluster_count();
    double obj = 0.0;
    for (int j = 0; j < m; ++j) {
        for (const auto& wl : labels.labels_of_worker(j)) {
            const auto qrow = posterior.row(wl.task);
            for (int l = 0; l < L; ++l) {
                const double w = phi.at(j, l);
                if (w == 0.0) continue;
                for (int g = 0; g < k; ++g) {
                    if (qrow[g] == 0.0) continue;
                    obj += w * qrow[g] * std::log(params.templates[l](g, wl.label - 1));
                }
            }
        }
        for (int l = 0; l < L; ++l) {
            const double w = phi.at(j, l);
            if (w == 0.0) continue;
            obj += w * std::log(params.cluster_prior[l]);
            obj -= w * std::log(w);
        }
    }
    for (int i = 0; i < n; ++i) {
        const auto qrow = posterior.row(i);
        for (int g = 0; g < k; ++g) {
            if (qrow[g] == 0.0) continue;
            obj += qrow[g] * std::log(params.prior.probs[g]);
            obj -= qrow[g] * std::log(qrow[g]);
        }
    }
    if (eps > 0.0) {
        for (int l = 0; l < L; ++l)
            for (int g = 0; g < k; ++g)
                for (int a = 0; a < k; ++a) obj += eps * std::log(params.templates[l](g, a));
    }
    return obj;
}

}  // namespace crowdtruth::ref

#include "crowdtruth/aggregators.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "crowdtruth/rng.hpp"

namespace crowdtruth {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void require_valid(const LabelMatrix& labels) {
    ValidationReport rep = validate_dataset(labels);
    if (!rep.ok())
        throw std::invalid_argument("invalid dataset: " + rep.violations.front() + " (and " +
                                    std::to_string(rep.violations.size() - 1) + " more)");
}

// Normalizes one log-space row in place into probabilities. Returns false
// when every entry is -inf (caller decides how to report).
bool normalize_log_row(std::span<double> row) {
    double mx = kNegInf;
    for (double v : row) mx = std::max(mx, v);
    if (mx == kNegInf) return false;
    double sum = 0.0;
    for (double& v : row) {
        v = std::exp(v - mx);
        sum += v;
    }
    for (double& v : row) v /= sum;
    return true;
}

std::vector<double> log_table(const ConfusionMatrix& c) {
    const int k = c.num_classes();
    std::vector<double> t(static_cast<std::size_t>(k) * k);
    for (int a = 0; a < k; ++a)
        for (int b = 0; b < k; ++b) t[a * k + b] = std::log(c(a, b));
    return t;
}

// Per-worker soft count matrices C^j[k][k'] = sum_i q_ik * d(X_ij = k').
std::vector<double> worker_soft_counts(const LabelMatrix& labels, const TruthPosterior& q) {
    const int m = labels.worker_count();
    const int k = labels.num_classes();
    std::vector<double> counts(static_cast<std::size_t>(m) * k * k, 0.0);
#pragma omp parallel for schedule(static)
    for (int j = 0; j < m; ++j) {
        double* cj = counts.data() + static_cast<std::size_t>(j) * k * k;
        for (const auto& wl : labels.labels_of_worker(j)) {
            const auto qrow = q.row(wl.task);
            const int ans = wl.label - 1;
            for (int g = 0; g < k; ++g) cj[g * k + ans] += qrow[g];
        }
    }
    return counts;
}

ConfusionMatrix normalize_counts(const double* counts, int k, double eps) {
    ConfusionMatrix out(k);
    for (int g = 0; g < k; ++g) {
        double row_sum = 0.0;
        for (int a = 0; a < k; ++a) row_sum += counts[g * k + a];
        const double denom = k * eps + row_sum;
        for (int a = 0; a < k; ++a) out(g, a) = (eps + counts[g * k + a]) / denom;
    }
    return out;
}

ClassPrior mean_posterior(const TruthPosterior& q) {
    const int k = q.num_classes;
    ClassPrior rho{std::vector<double>(k, 0.0)};
    for (int i = 0; i < q.n; ++i) {
        const auto row = q.row(i);
        for (int g = 0; g < k; ++g) rho.probs[g] += row[g];
    }
    for (double& v : rho.probs) v /= std::max(1, q.n);
    return rho;
}

Mat dirichlet_rows(int rows, int cols, std::uint64_t seed) {
    Mat out(rows, cols);
    const std::vector<double> alpha(cols, 1.0);
#pragma omp parallel for schedule(static)
    for (int r = 0; r < rows; ++r) {
        Rng rng(mix_seed(seed, static_cast<std::uint64_t>(r)));
        rng.dirichlet(alpha, out.row(r));
    }
    return out;
}

double serial_sum(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s;
}

}  // namespace

TruthPosterior majority_vote(const LabelMatrix& labels) {
    require_valid(labels);
    const int n = labels.task_count();
    const int k = labels.num_classes();
    std::vector<double> dist(static_cast<std::size_t>(n) * k, 0.0);
#pragma omp parallel for schedule(static)
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
    const int m = labels.worker_count();
    const int k = labels.num_classes();
    if (static_cast<int>(confusions.size()) != m)
        throw std::invalid_argument("ds_e_step: need one confusion matrix per worker");
    if (prior.num_classes() != k) throw std::invalid_argument("ds_e_step: prior size mismatch");

    std::vector<std::vector<double>> log_pi(m);
#pragma omp parallel for schedule(static)
    for (int j = 0; j < m; ++j) log_pi[j] = log_table(confusions[j]);

    std::vector<double> log_rho(k);
    for (int g = 0; g < k; ++g) log_rho[g] = std::log(prior.probs[g]);

    std::vector<double> dist(static_cast<std::size_t>(n) * k, 0.0);
    bool degenerate = false;
#pragma omp parallel for schedule(static) reduction(|| : degenerate)
    for (int i = 0; i < n; ++i) {
        double* row = dist.data() + static_cast<std::size_t>(i) * k;
        for (int g = 0; g < k; ++g) {
            double acc = log_rho[g];
            for (const auto& tl : labels.labels_of_task(i))
                acc += log_pi[tl.worker][g * k + (tl.label - 1)];
            row[g] = acc;
        }
        degenerate = degenerate || !normalize_log_row({row, static_cast<std::size_t>(k)});
    }
    if (degenerate)
        throw std::domain_error(
            "ds_e_step: a task's posterior row is identically zero; smooth the confusion "
            "matrices");
    return TruthPosterior::from_dist(n, k, std::move(dist));
}

std::pair<std::vector<ConfusionMatrix>, ClassPrior> ds_m_step(const LabelMatrix& labels,
                                                              const TruthPosterior& posterior,
                                                              double eps) {
    const int m = labels.worker_count();
    const int k = labels.num_classes();
    if (posterior.n != labels.task_count() || posterior.num_classes != k)
        throw std::invalid_argument("ds_m_step: posterior shape mismatch");
    const std::vector<double> counts = worker_soft_counts(labels, posterior);
    std::vector<ConfusionMatrix> out(m, ConfusionMatrix(k));
#pragma omp parallel for schedule(static)
    for (int j = 0; j < m; ++j)
        out[j] = normalize_counts(counts.data() + static_cast<std::size_t>(j) * k * k, k, eps);
    return {std::move(out), mean_posterior(posterior)};
}

double ds_objective(const LabelMatrix& labels, const std::vector<ConfusionMatrix>& confusions,
                    const ClassPrior& prior, double eps) {
    const int n = labels.task_count();
    const int m = labels.worker_count();
    const int k = labels.num_classes();

    std::vector<std::vector<double>> log_pi(m);
#pragma omp parallel for schedule(static)
    for (int j = 0; j < m; ++j) log_pi[j] = log_table(confusions[j]);

    std::vector<double> log_rho(k);
    for (int g = 0; g < k; ++g) log_rho[g] = std::log(prior.probs[g]);

    std::vector<double> per_task(n, 0.0);
#pragma omp parallel for schedule(static)
    for (int i = 0; i < n; ++i) {
        double mx = kNegInf;
        std::vector<double> acc(k);
        for (int g = 0; g < k; ++g) {
            double a = log_rho[g];
            for (const auto& tl : labels.labels_of_task(i))
                a += log_pi[tl.worker][g * k + (tl.label - 1)];
            acc[g] = a;
            mx = std::max(mx, a);
        }
        if (mx == kNegInf) {
            per_task[i] = kNegInf;
            continue;
        }
        double s = 0.0;
        for (int g = 0; g < k; ++g) s += std::exp(acc[g] - mx);
        per_task[i] = mx + std::log(s);
    }

    double obj = serial_sum(per_task);
    if (eps > 0.0) {
        std::vector<double> per_worker(m, 0.0);
#pragma omp parallel for schedule(static)
        for (int j = 0; j < m; ++j) {
            double s = 0.0;
            for (double lv : log_pi[j]) s += lv;
            per_worker[j] = eps * s;
        }
        obj += serial_sum(per_worker);
    }
    return obj;
}

DsResult ds_fit(const LabelMatrix& labels, const FitConfig& cfg) {
    require_valid(labels);
    if (cfg.max_iters < 1) throw std::invalid_argument("ds_fit: max_iters must be >= 1");
    if (!(cfg.tol > 0.0)) throw std::invalid_argument("ds_fit: tol must be positive");
    if (!(cfg.smoothing > 0.0)) throw std::invalid_argument("ds_fit: smoothing must be positive");
    const int n = labels.task_count();
    const int k = labels.num_classes();

    TruthPosterior q;
    if (cfg.init == InitScheme::kMvInit) {
        q = majority_vote(labels);
    } else {
        Mat rows = dirichlet_rows(n, k, mix_seed(cfg.seed, 0x6473u));  // "ds" stream
        q = TruthPosterior::from_dist(n, k, std::move(rows.v));
    }

    DsResult res;
    double prev = std::numeric_limits<double>::quiet_NaN();
    for (int it = 1; it <= cfg.max_iters; ++it) {
        auto [pi, rho] = ds_m_step(labels, q, cfg.smoothing);
        q = ds_e_step(labels, pi, rho);
        const double obj = ds_objective(labels, pi, rho, cfg.smoothing);
        res.loglik_trace.push_back(obj);
        res.confusions = std::move(pi);
        res.prior = std::move(rho);
        res.iterations = it;
        if (it > 1 && std::abs(obj - prev) < cfg.tol) break;
        prev = obj;
    }
    res.posterior = std::move(q);
    return res;
}

TruthPosterior wc_update_qg(const LabelMatrix& labels, const WcParams& params) {
    const int n = labels.task_count();
    const int m = labels.worker_count();
    const int k = labels.num_classes();
    const int L = params.cluster_count();
    if (params.responsibilities.rows != m || params.responsibilities.cols != L)
        throw std::invalid_argument("wc_update_qg: responsibilities shape mismatch");
    if (params.prior.num_classes() != k) throw std::invalid_argument("wc_update_qg: prior size mismatch");

    std::vector<std::vector<double>> log_lambda(L);
#pragma omp parallel for schedule(static)
    for (int l = 0; l < L; ++l) log_lambda[l] = log_table(params.templates[l]);

    // Mixed per-worker log template: M^j = sum_l phi_jl * log Lambda_l.
    std::vector<double> mixed(static_cast<std::size_t>(m) * k * k, 0.0);
#pragma omp parallel for schedule(static)
    for (int j = 0; j < m; ++j) {
        double* mj = mixed.data() + static_cast<std::size_t>(j) * k * k;
        const auto phi_row = params.responsibilities.row(j);
        for (int l = 0; l < L; ++l) {
            const double w = phi_row[l];
            if (w == 0.0) continue;  // avoid 0 * -inf
            const double* tl = log_lambda[l].data();
            for (int e = 0; e < k * k; ++e) mj[e] += w * tl[e];
        }
    }

    std::vector<double> log_rho(k);
    for (int g = 0; g < k; ++g) log_rho[g] = std::log(params.prior.probs[g]);

    std::vector<double> dist(static_cast<std::size_t>(n) * k, 0.0);
    bool degenerate = false;
#pragma omp parallel for schedule(static) reduction(|| : degenerate)
    for (int i = 0; i < n; ++i) {
        double* row = dist.data() + static_cast<std::size_t>(i) * k;
        for (int g = 0; g < k; ++g) {
            double acc = log_rho[g];
            for (const auto& tl : labels.labels_of_task(i))
                acc += mixed[static_cast<std::size_t>(tl.worker) * k * k + g * k + (tl.label - 1)];
            row[g] = acc;
        }
        degenerate = degenerate || !normalize_log_row({row, static_cast<std::size_t>(k)});
    }
    if (degenerate)
        throw std::domain_error("wc_update_qg: zero posterior row; templates must be positive");
    return TruthPosterior::from_dist(n, k, std::move(dist));
}

Mat wc_update_phi(const LabelMatrix& labels, const TruthPosterior& posterior,
                  const WcParams& params) {
    const int m = labels.worker_count();
    const int k = labels.num_classes();
    const int L = params.cluster_count();
    if (posterior.n != labels.task_count() || posterior.num_classes != k)
        throw std::invalid_argument("wc_update_phi: posterior shape mismatch");

    std::vector<std::vector<double>> log_lambda(L);
#pragma omp parallel for schedule(static)
    for (int l = 0; l < L; ++l) log_lambda[l] = log_table(params.templates[l]);

    std::vector<double> log_tau(L);
    for (int l = 0; l < L; ++l) log_tau[l] = std::log(params.cluster_prior[l]);

    const std::vector<double> counts = worker_soft_counts(labels, posterior);

    Mat phi(m, L);
    bool degenerate = false;
#pragma omp parallel for schedule(static) reduction(|| : degenerate)
    for (int j = 0; j < m; ++j) {
        const double* cj = counts.data() + static_cast<std::size_t>(j) * k * k;
        auto row = phi.row(j);
        for (int l = 0; l < L; ++l) {
            double acc = log_tau[l];
            const double* tl = log_lambda[l].data();
            for (int e = 0; e < k * k; ++e) {
                if (cj[e] == 0.0) continue;  // avoid 0 * -inf
                acc += cj[e] * tl[e];
            }
            row[l] = acc;
        }
        degenerate = degenerate || !normalize_log_row(row);
    }
    if (degenerate)
        throw std::domain_error("wc_update_phi: zero responsibility row; templates must be positive");
    return phi;
}

WcParams wc_m_step(const LabelMatrix& labels, const TruthPosterior& posterior, const Mat& phi,
                   double eps) {
    const int m = labels.worker_count();
    const int k = labels.num_classes();
    const int L = phi.cols;
    if (phi.rows != m) throw std::invalid_argument("wc_m_step: phi shape mismatch");

    const std::vector<double> counts = worker_soft_counts(labels, posterior);

    WcParams params;
    params.templates.assign(L, ConfusionMatrix(k));
    params.cluster_prior.assign(L, 0.0);
#pragma omp parallel for schedule(static)
    for (int l = 0; l < L; ++l) {
        std::vector<double> acc(static_cast<std::size_t>(k) * k, 0.0);
        double tau = 0.0;
        for (int j = 0; j < m; ++j) {
            const double w = phi.at(j, l);
            tau += w;
            if (w == 0.0) continue;
            const double* cj = counts.data() + static_cast<std::size_t>(j) * k * k;
            for (int e = 0; e < k * k; ++e) acc[e] += w * cj[e];
        }
        params.templates[l] = normalize_counts(acc.data(), k, eps);
        params.cluster_prior[l] = tau / std::max(1, m);
    }
    params.prior = mean_posterior(posterior);
    params.responsibilities = phi;
    return params;
}

double wc_objective(const LabelMatrix& labels, const TruthPosterior& posterior, const Mat& phi,
                    const WcParams& params, double eps) {
    const int n = labels.task_count();
    const int m = labels.worker_count();
    const int k = labels.num_classes();
    const int L = params.cluster_count();

    std::vector<std::vector<double>> log_lambda(L);
#pragma omp parallel for schedule(static)
    for (int l = 0; l < L; ++l) log_lambda[l] = log_table(params.templates[l]);

    // E[log p(X | G, z)] accumulated per worker over its labels.
    std::vector<double> per_worker(m, 0.0);
#pragma omp parallel for schedule(static)
    for (int j = 0; j < m; ++j) {
        const auto phi_row = phi.row(j);
        double s = 0.0;
        for (const auto& wl : labels.labels_of_worker(j)) {
            const auto qrow = posterior.row(wl.task);
            const int ans = wl.label - 1;
            for (int l = 0; l < L; ++l) {
                if (phi_row[l] == 0.0) continue;
                const double* tl = log_lambda[l].data();
                double inner = 0.0;
                for (int g = 0; g < k; ++g) {
                    if (qrow[g] == 0.0) continue;
                    inner += qrow[g] * tl[g * k + ans];
                }
                s += phi_row[l] * inner;
            }
        }
        // E[log p(z_j | tau)] and the entropy of phi_j.
        for (int l = 0; l < L; ++l) {
            const double w = phi_row[l];
            if (w == 0.0) continue;
            s += w * std::log(params.cluster_prior[l]);
            s -= w * std::log(w);
        }
        per_worker[j] = s;
    }

    // E[log p(G | rho)] and the entropy of q.
    std::vector<double> per_task(n, 0.0);
#pragma omp parallel for schedule(static)
    for (int i = 0; i < n; ++i) {
        const auto qrow = posterior.row(i);
        double s = 0.0;
        for (int g = 0; g < k; ++g) {
            const double w = qrow[g];
            if (w == 0.0) continue;
            s += w * std::log(params.prior.probs[g]);
            s -= w * std::log(w);
        }
        per_task[i] = s;
    }

    double obj = serial_sum(per_worker) + serial_sum(per_task);
    if (eps > 0.0) {
        double pen = 0.0;
        for (int l = 0; l < L; ++l)
            for (double lv : log_lambda[l]) pen += lv;
        obj += eps * pen;
    }
    return obj;
}

std::vector<int> hard_assignments(const Mat& phi) {
    std::vector<int> out(phi.rows);
    for (int j = 0; j < phi.rows; ++j) out[j] = argmax_smallest(phi.row(j));
    return out;
}

WcResult wc_fit(const LabelMatrix& labels, int num_clusters, const FitConfig& cfg) {
    require_valid(labels);
    const int n = labels.task_count();
    const int m = labels.worker_count();
    const int k = labels.num_classes();
    if (num_clusters < 1 || num_clusters > m)
        throw std::invalid_argument("wc_fit: need 1 <= L <= worker count");
    if (cfg.max_iters < 1) throw std::invalid_argument("wc_fit: max_iters must be >= 1");
    if (!(cfg.tol > 0.0)) throw std::invalid_argument("wc_fit: tol must be positive");
    if (!(cfg.smoothing > 0.0)) throw std::invalid_argument("wc_fit: smoothing must be positive");

    TruthPosterior q;
    if (cfg.init == InitScheme::kMvInit) {
        q = majority_vote(labels);
    } else {
        Mat rows = dirichlet_rows(n, k, mix_seed(cfg.seed, 0x7763u));  // "wc" stream
        q = TruthPosterior::from_dist(n, k, std::move(rows.v));
    }
    Mat phi = dirichlet_rows(m, num_clusters, mix_seed(cfg.seed, 0x706869u));  // "phi" stream

    WcResult res;
    WcParams params = wc_m_step(labels, q, phi, cfg.smoothing);
    double prev = std::numeric_limits<double>::quiet_NaN();
    for (int it = 1; it <= cfg.max_iters; ++it) {
        q = wc_update_qg(labels, params);
        phi = wc_update_phi(labels, q, params);
        params = wc_m_step(labels, q, phi, cfg.smoothing);
        const double obj = wc_objective(labels, q, phi, params, cfg.smoothing);
        res.elbo_trace.push_back(obj);
        res.iterations = it;
        if (it > 1 && std::abs(obj - prev) < cfg.tol) break;
        prev = obj;
    }
    res.posterior = std::move(q);
    res.hard_assignments = hard_assignments(params.responsibilities);
    res.params = std::move(params);
    return res;
}

}  // namespace crowdtruth

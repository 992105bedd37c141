#include "crowdtruth/types.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace crowdtruth {

int argmax_smallest(std::span<const double> v) {
    int best = 0;
    for (int i = 1; i < static_cast<int>(v.size()); ++i) {
        if (v[i] > v[best]) best = i;
    }
    return best;
}

LabelMatrix::LabelMatrix(int n, int m, int num_classes, std::vector<LabelEntry> entries)
    : n_(n), m_(m), k_(num_classes), entries_(std::move(entries)) {
    if (n_ < 0 || m_ < 0 || k_ < 0) throw std::invalid_argument("LabelMatrix: negative dimension");
    std::sort(entries_.begin(), entries_.end(), [](const LabelEntry& a, const LabelEntry& b) {
        if (a.task != b.task) return a.task < b.task;
        if (a.worker != b.worker) return a.worker < b.worker;
        return a.label < b.label;
    });

    task_offsets_.assign(static_cast<std::size_t>(n_) + 1, 0);
    worker_offsets_.assign(static_cast<std::size_t>(m_) + 1, 0);
    std::size_t usable = 0;
    for (const auto& e : entries_) {
        if (e.task < 0 || e.task >= n_ || e.worker < 0 || e.worker >= m_) continue;
        ++task_offsets_[e.task + 1];
        ++worker_offsets_[e.worker + 1];
        ++usable;
    }
    for (int i = 0; i < n_; ++i) task_offsets_[i + 1] += task_offsets_[i];
    for (int j = 0; j < m_; ++j) worker_offsets_[j + 1] += worker_offsets_[j];

    task_labels_.resize(usable);
    worker_labels_.resize(usable);
    std::vector<std::size_t> tpos(task_offsets_.begin(), task_offsets_.end() - 1);
    std::vector<std::size_t> wpos(worker_offsets_.begin(), worker_offsets_.end() - 1);
    for (const auto& e : entries_) {
        if (e.task < 0 || e.task >= n_ || e.worker < 0 || e.worker >= m_) continue;
        task_labels_[tpos[e.task]++] = TaskLabel{e.worker, e.label};
        worker_labels_[wpos[e.worker]++] = WorkerLabel{e.task, e.label};
    }
}

std::span<const TaskLabel> LabelMatrix::labels_of_task(int task) const {
    return {task_labels_.data() + task_offsets_[task],
            task_offsets_[task + 1] - task_offsets_[task]};
}

std::span<const WorkerLabel> LabelMatrix::labels_of_worker(int worker) const {
    return {worker_labels_.data() + worker_offsets_[worker],
            worker_offsets_[worker + 1] - worker_offsets_[worker]};
}

ConfusionMatrix::ConfusionMatrix(int num_classes, double fill)
    : k_(num_classes), p_(static_cast<std::size_t>(num_classes) * num_classes, fill) {
    if (num_classes < 1) throw std::invalid_argument("ConfusionMatrix: need at least one class");
}

ConfusionMatrix ConfusionMatrix::identity(int num_classes) {
    ConfusionMatrix c(num_classes);
    for (int k = 0; k < num_classes; ++k) c(k, k) = 1.0;
    return c;
}

namespace {

bool is_simplex_row(std::span<const double> row, double tol) {
    double sum = 0.0;
    for (double v : row) {
        if (!(v >= 0.0)) return false;  // also rejects NaN
        sum += v;
    }
    return std::abs(sum - 1.0) <= tol;
}

}  // namespace

bool ConfusionMatrix::is_right_stochastic(double tol) const {
    for (int k = 0; k < k_; ++k) {
        if (!is_simplex_row(row(k), tol)) return false;
    }
    return true;
}

bool ClassPrior::is_simplex(double tol) const {
    return !probs.empty() && is_simplex_row(probs, tol);
}

ClassPrior ClassPrior::uniform(int num_classes) {
    return ClassPrior{std::vector<double>(num_classes, 1.0 / num_classes)};
}

TruthPosterior TruthPosterior::from_dist(int n, int num_classes, std::vector<double> dist) {
    if (static_cast<std::size_t>(n) * num_classes != dist.size())
        throw std::invalid_argument("TruthPosterior: dist size mismatch");
    TruthPosterior post;
    post.n = n;
    post.num_classes = num_classes;
    post.dist = std::move(dist);
    post.map_labels.resize(n);
    for (int i = 0; i < n; ++i) post.map_labels[i] = argmax_smallest(post.row(i)) + 1;
    return post;
}

ValidationReport validate_dataset(const LabelMatrix& labels, const GoldLabels* gold) {
    ValidationReport rep;
    rep.n = labels.task_count();
    rep.m = labels.worker_count();
    rep.num_classes = labels.num_classes();
    rep.label_count = labels.entries().size();

    const auto& es = labels.entries();
    for (std::size_t idx = 0; idx < es.size(); ++idx) {
        const auto& e = es[idx];
        if (e.task < 0 || e.task >= rep.n)
            rep.violations.push_back("task id out of range: " + std::to_string(e.task));
        if (e.worker < 0 || e.worker >= rep.m)
            rep.violations.push_back("worker id out of range: " + std::to_string(e.worker));
        if (e.label < 1 || e.label > rep.num_classes)
            rep.violations.push_back("label out of range [1," + std::to_string(rep.num_classes) +
                                     "]: " + std::to_string(e.label) + " (task " +
                                     std::to_string(e.task) + ", worker " +
                                     std::to_string(e.worker) + ")");
        if (idx > 0 && es[idx - 1].task == e.task && es[idx - 1].worker == e.worker)
            rep.violations.push_back("duplicate (task " + std::to_string(e.task) + ", worker " +
                                     std::to_string(e.worker) + ") pair");
    }

    if (gold != nullptr) {
        if (gold->size() != rep.n)
            rep.violations.push_back("gold length " + std::to_string(gold->size()) +
                                     " does not match task count " + std::to_string(rep.n));
        for (int i = 0; i < gold->size() && i < rep.n; ++i) {
            int g = gold->labels[i];
            if (g != 0 && (g < 1 || g > rep.num_classes))
                rep.violations.push_back("gold label out of range: " + std::to_string(g) +
                                         " (task " + std::to_string(i) + ")");
        }
    }
    return rep;
}

double error_rate(const std::vector<int>& estimate, const GoldLabels& gold) {
    if (static_cast<int>(estimate.size()) != gold.size())
        throw std::invalid_argument("error_rate: estimate and gold lengths differ");
    std::size_t evaluated = 0;
    std::size_t wrong = 0;
    for (std::size_t i = 0; i < estimate.size(); ++i) {
        if (gold.labels[i] == 0) continue;
        ++evaluated;
        if (estimate[i] != gold.labels[i]) ++wrong;
    }
    if (evaluated == 0) throw std::invalid_argument("error_rate: no task has a gold label");
    return static_cast<double>(wrong) / static_cast<double>(evaluated);
}

}  // namespace crowdtruth

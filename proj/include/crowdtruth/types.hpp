#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace crowdtruth {

constexpr double kSimplexTol = 1e-9;

// Smallest-index argmax, the tie rule used everywhere.
int argmax_smallest(std::span<const double> v);

// Row-major dense matrix, just enough for responsibilities and the like.
struct Mat {
    int rows = 0;
    int cols = 0;
    std::vector<double> v;

    Mat() = default;
    Mat(int r, int c, double fill = 0.0) : rows(r), cols(c), v(static_cast<std::size_t>(r) * c, fill) {}
    double& at(int r, int c) { return v[static_cast<std::size_t>(r) * cols + c]; }
    double at(int r, int c) const { return v[static_cast<std::size_t>(r) * cols + c]; }
    std::span<double> row(int r) { return {v.data() + static_cast<std::size_t>(r) * cols, static_cast<std::size_t>(cols)}; }
    std::span<const double> row(int r) const { return {v.data() + static_cast<std::size_t>(r) * cols, static_cast<std::size_t>(cols)}; }
};

// One observation: worker `worker` gave `label` (1-based, in [1,K]) to task `task`.
// A (task, worker) pair that never appears means "did not label".
struct LabelEntry {
    int task = 0;
    int worker = 0;
    int label = 0;

    friend bool operator==(const LabelEntry&, const LabelEntry&) = default;
};

struct TaskLabel {
    int worker = 0;
    int label = 0;
};

struct WorkerLabel {
    int task = 0;
    int label = 0;
};

// Sparse set of (task, worker, label) observations with CSR-style views by
// task and by worker. Entries are stored sorted by (task, worker); the
// constructor does not reject bad entries (validate_dataset reports them),
// but the per-task/per-worker indexes only cover in-range entries.
class LabelMatrix {
public:
    LabelMatrix(int n, int m, int num_classes, std::vector<LabelEntry> entries);

    int task_count() const { return n_; }
    int worker_count() const { return m_; }
    int num_classes() const { return k_; }
    const std::vector<LabelEntry>& entries() const { return entries_; }

    std::span<const TaskLabel> labels_of_task(int task) const;
    std::span<const WorkerLabel> labels_of_worker(int worker) const;

private:
    int n_;
    int m_;
    int k_;
    std::vector<LabelEntry> entries_;
    std::vector<std::size_t> task_offsets_;
    std::vector<TaskLabel> task_labels_;
    std::vector<std::size_t> worker_offsets_;
    std::vector<WorkerLabel> worker_labels_;
};

// K x K right-stochastic matrix: row k is the answer distribution when the
// truth is class k.
class ConfusionMatrix {
public:
    explicit ConfusionMatrix(int num_classes, double fill = 0.0);
    static ConfusionMatrix identity(int num_classes);

    int num_classes() const { return k_; }
    double operator()(int truth, int answer) const { return p_[truth * k_ + answer]; }
    double& operator()(int truth, int answer) { return p_[truth * k_ + answer]; }
    std::span<const double> row(int truth) const { return {p_.data() + truth * k_, static_cast<std::size_t>(k_)}; }
    std::span<double> row(int truth) { return {p_.data() + truth * k_, static_cast<std::size_t>(k_)}; }

    bool is_right_stochastic(double tol = kSimplexTol) const;

private:
    int k_;
    std::vector<double> p_;
};

// Simplex over the K classes.
struct ClassPrior {
    std::vector<double> probs;

    int num_classes() const { return static_cast<int>(probs.size()); }
    bool is_simplex(double tol = kSimplexTol) const;
    static ClassPrior uniform(int num_classes);
};

// Per-task class distributions plus their MAP labels (1-based).
struct TruthPosterior {
    int n = 0;
    int num_classes = 0;
    std::vector<double> dist;     // n * K, row-major, rows sum to 1
    std::vector<int> map_labels;  // n entries in [1, K]

    std::span<const double> row(int task) const {
        return {dist.data() + static_cast<std::size_t>(task) * num_classes,
                static_cast<std::size_t>(num_classes)};
    }
    std::span<double> row(int task) {
        return {dist.data() + static_cast<std::size_t>(task) * num_classes,
                static_cast<std::size_t>(num_classes)};
    }

    // Fills map_labels from dist (smallest-index tie rule).
    static TruthPosterior from_dist(int n, int num_classes, std::vector<double> dist);
};

// Reference labels; 0 means missing.
struct GoldLabels {
    std::vector<int> labels;

    int size() const { return static_cast<int>(labels.size()); }
    bool has(int task) const { return labels[task] != 0; }
};

struct ValidationReport {
    int n = 0;
    int m = 0;
    int num_classes = 0;
    std::size_t label_count = 0;
    std::vector<std::string> violations;

    bool ok() const { return violations.empty(); }
};

// Enumerates duplicate pairs, out-of-range ids and labels; accepts iff none.
ValidationReport validate_dataset(const LabelMatrix& labels,
                                  const GoldLabels* gold = nullptr);

// Fraction of mismatches over tasks with gold present. Throws on length
// mismatch or when no task is evaluable.
double error_rate(const std::vector<int>& estimate, const GoldLabels& gold);

}  // namespace crowdtruth

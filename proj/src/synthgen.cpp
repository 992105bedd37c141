#include "crowdtruth/synthgen.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "crowdtruth/rng.hpp"

namespace crowdtruth {

namespace {

// Substream tags; worker-level streams hang off these so parallel generation
// is schedule-independent.
constexpr std::uint64_t kTruthStream = 0x01;
constexpr std::uint64_t kTypeStream = 0x02;
constexpr std::uint64_t kConfusionStream = 0x03;
constexpr std::uint64_t kAssignStream = 0x04;
constexpr std::uint64_t kLabelStream = 0x05;

void check_config(const SynthConfig& cfg) {
    if (cfg.tasks < 1 || cfg.workers < 1) throw std::invalid_argument("synthgen: need tasks and workers >= 1");
    if (cfg.classes < 2) throw std::invalid_argument("synthgen: need at least 2 classes");
    if (cfg.prior.num_classes() != cfg.classes || !cfg.prior.is_simplex())
        throw std::invalid_argument("synthgen: prior must be a K-simplex");
    if (cfg.adversary_fraction < 0.0 || cfg.adversary_fraction > 1.0)
        throw std::invalid_argument("synthgen: adversary fraction must be in [0,1]");
    if (const auto* cln = std::get_if<ClnRegime>(&cfg.regime)) {
        if (cln->labels_per_worker < 1 || cln->labels_per_worker > cfg.tasks)
            throw std::invalid_argument("synthgen: CLN needs 1 <= N <= tasks");
    } else {
        const auto& zln = std::get<ZlnRegime>(cfg.regime);
        if (zln.max_labels < 1 || zln.max_labels > cfg.tasks)
            throw std::invalid_argument("synthgen: ZLN needs 1 <= n_max <= tasks");
        if (!(zln.exponent > 0.0)) throw std::invalid_argument("synthgen: ZLN exponent must be positive");
    }
}

int adversary_count(double fraction, int workers) {
    // Small slack so exact decimal fractions floor the way exact arithmetic would.
    return static_cast<int>(std::floor(fraction * workers + 1e-9));
}

}  // namespace

GoldLabels gen_truths(const SynthConfig& cfg) {
    check_config(cfg);
    Rng rng(mix_seed(cfg.seed, kTruthStream));
    GoldLabels gold;
    gold.labels.resize(cfg.tasks);
    for (int i = 0; i < cfg.tasks; ++i) gold.labels[i] = rng.categorical(cfg.prior.probs) + 1;
    return gold;
}

std::pair<std::vector<ConfusionMatrix>, std::vector<bool>> gen_confusions(const SynthConfig& cfg) {
    check_config(cfg);
    const int m = cfg.workers;
    const int k = cfg.classes;

    // Type layout: first `adv` flags set, then a fraction-independent shuffle.
    std::vector<bool> adversarial(m, false);
    const int adv = adversary_count(cfg.adversary_fraction, m);
    for (int j = 0; j < adv; ++j) adversarial[j] = true;
    Rng type_rng(mix_seed(cfg.seed, kTypeStream));
    for (int j = m - 1; j > 0; --j) {
        const int o = type_rng.uniform_int(j + 1);
        const bool tmp = adversarial[j];
        adversarial[j] = adversarial[o];
        adversarial[o] = tmp;
    }

    std::vector<ConfusionMatrix> confusions(m, ConfusionMatrix(k));
    const std::uint64_t conf_base = mix_seed(cfg.seed, kConfusionStream);
#pragma omp parallel for schedule(static)
    for (int j = 0; j < m; ++j) {
        Rng rng(mix_seed(conf_base, static_cast<std::uint64_t>(j)));
        const double diag = adversarial[j] ? cfg.adv_diag : cfg.honest_diag;
        const double off = adversarial[j] ? cfg.adv_off : cfg.honest_off;
        std::vector<double> alpha(k);
        for (int g = 0; g < k; ++g) {
            std::fill(alpha.begin(), alpha.end(), off);
            alpha[g] = diag;
            rng.dirichlet(alpha, confusions[j].row(g));
        }
    }
    return {std::move(confusions), std::move(adversarial)};
}

std::vector<std::vector<int>> assign_tasks(const SynthConfig& cfg) {
    check_config(cfg);
    const int m = cfg.workers;
    std::vector<std::vector<int>> assignment(m);
    const std::uint64_t assign_base = mix_seed(cfg.seed, kAssignStream);

    if (const auto* cln = std::get_if<ClnRegime>(&cfg.regime)) {
        const int count = cln->labels_per_worker;
#pragma omp parallel for schedule(static)
        for (int j = 0; j < m; ++j) {
            Rng rng(mix_seed(assign_base, static_cast<std::uint64_t>(j)));
            assignment[j] = rng.sample_without_replacement(cfg.tasks, count);
        }
    } else {
        const auto& zln = std::get<ZlnRegime>(cfg.regime);
        const ZipfSampler zipf(zln.max_labels, zln.exponent);
#pragma omp parallel for schedule(static)
        for (int j = 0; j < m; ++j) {
            Rng rng(mix_seed(assign_base, static_cast<std::uint64_t>(j)));
            const int count = zipf.sample(rng);
            assignment[j] = rng.sample_without_replacement(cfg.tasks, count);
        }
    }
    return assignment;
}

LabelMatrix gen_labels(const GoldLabels& truths, const std::vector<ConfusionMatrix>& confusions,
                       const std::vector<std::vector<int>>& assignment, int num_classes,
                       std::uint64_t seed) {
    const int m = static_cast<int>(assignment.size());
    if (confusions.size() != assignment.size())
        throw std::invalid_argument("gen_labels: confusions/assignment size mismatch");
    const std::uint64_t label_base = mix_seed(seed, kLabelStream);

    std::vector<std::vector<LabelEntry>> per_worker(m);
#pragma omp parallel for schedule(static)
    for (int j = 0; j < m; ++j) {
        Rng rng(mix_seed(label_base, static_cast<std::uint64_t>(j)));
        per_worker[j].reserve(assignment[j].size());
        for (int task : assignment[j]) {
            const int truth = truths.labels.at(task);
            const int label = rng.categorical(confusions[j].row(truth - 1)) + 1;
            per_worker[j].push_back(LabelEntry{task, j, label});
        }
    }

    std::vector<LabelEntry> entries;
    for (const auto& chunk : per_worker) entries.insert(entries.end(), chunk.begin(), chunk.end());
    return LabelMatrix(static_cast<int>(truths.labels.size()), m, num_classes, std::move(entries));
}

SynthDataset gen_dataset(const SynthConfig& cfg) {
    GoldLabels gold = gen_truths(cfg);
    auto [confusions, adversarial] = gen_confusions(cfg);
    const auto assignment = assign_tasks(cfg);
    LabelMatrix labels = gen_labels(gold, confusions, assignment, cfg.classes, cfg.seed);
    return SynthDataset{std::move(labels), std::move(gold), std::move(confusions),
                        std::move(adversarial)};
}

}  // namespace crowdtruth

#pragma once

#include <cstdint>
#include <utility>
#include <variant>
#include <vector>

#include "crowdtruth/types.hpp"

namespace crowdtruth {

// Every worker labels exactly `labels_per_worker` distinct tasks.
struct ClnRegime {
    int labels_per_worker = 10;
};

// Per-worker label counts follow a truncated Zipf law on {1..max_labels}.
struct ZlnRegime {
    int max_labels = 60;
    double exponent = 1.0;
};

struct SynthConfig {
    int tasks = 1000;
    int workers = 100;
    int classes = 2;
    ClassPrior prior{{0.3, 0.7}};
    double adversary_fraction = 0.0;
    std::variant<ClnRegime, ZlnRegime> regime = ClnRegime{};
    double honest_diag = 100.0;  // Dirichlet concentration on the diagonal
    double honest_off = 10.0;
    double adv_diag = 1.0;
    double adv_off = 10.0;
    std::uint64_t seed = 0;
};

struct SynthDataset {
    LabelMatrix labels;
    GoldLabels gold;
    std::vector<ConfusionMatrix> true_confusions;
    std::vector<bool> adversarial;
};

// n i.i.d. draws from the class prior.
GoldLabels gen_truths(const SynthConfig& cfg);

// floor(adversary_fraction * m) adversarial workers (positions fixed by a
// seeded shuffle that does not depend on the fraction, so adversary sets are
// nested across fractions); each confusion row drawn from a Dirichlet whose
// concentration puts diag/off values per the worker's type.
std::pair<std::vector<ConfusionMatrix>, std::vector<bool>> gen_confusions(const SynthConfig& cfg);

// Distinct uniformly sampled task sets per worker, sized by the regime.
std::vector<std::vector<int>> assign_tasks(const SynthConfig& cfg);

// One label per assigned (task, worker), drawn from the worker's confusion
// row for the task's true class.
LabelMatrix gen_labels(const GoldLabels& truths, const std::vector<ConfusionMatrix>& confusions,
                       const std::vector<std::vector<int>>& assignment, int num_classes,
                       std::uint64_t seed);

SynthDataset gen_dataset(const SynthConfig& cfg);

}  // namespace crowdtruth

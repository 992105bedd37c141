#pragma once

#include <iosfwd>
#include <string>
#include <unordered_map>
#include <vector>

#include "crowdtruth/types.hpp"

namespace crowdtruth {

struct IngestOptions {
    // Published copies of some benchmarks use 0-based answers; this shifts
    // every parsed label by +1. In the canonical format label 0 is invalid
    // (an unlabeled pair is simply absent).
    bool zero_based_labels = false;
    // Overrides class-count inference (0 = infer as max observed label).
    int force_classes = 0;
};

// Triplet file parsed into dense internal ids. External ids may be arbitrary
// strings; internal ids are assigned in order of first appearance.
struct ParsedDataset {
    LabelMatrix labels;
    std::vector<std::string> task_names;
    std::vector<std::string> worker_names;
    std::unordered_map<std::string, int> task_ids;
    std::unordered_map<std::string, int> worker_ids;
};

// Accepts the canonical `task,worker,label` lines plus the common published
// layouts: comma/tab/whitespace separated, `#` comments, one recognized
// header line. Throws std::runtime_error with a line number on malformed
// lines, duplicate (task, worker) pairs, and labels < 1.
ParsedDataset parse_triplets(std::istream& in, const IngestOptions& opts = {});

// Gold lines are `task,label`. Unknown task ids and duplicate gold entries
// are errors; tasks without gold stay missing.
GoldLabels parse_gold(std::istream& in, const ParsedDataset& dataset,
                      const IngestOptions& opts = {});

// Parses labels and optional gold together, inferring K as the max observed
// label across both files (unless forced).
struct LoadedDataset {
    ParsedDataset dataset;
    GoldLabels gold;  // empty labels vector when no gold stream given
};
LoadedDataset load_dataset(std::istream& labels_in, std::istream* gold_in,
                           const IngestOptions& opts = {});
LoadedDataset load_dataset_files(const std::string& labels_path, const std::string& gold_path,
                                 const IngestOptions& opts = {});

struct DatasetStats {
    int classes = 0;
    int tasks = 0;
    int workers = 0;
    std::size_t labels = 0;

    friend bool operator==(const DatasetStats&, const DatasetStats&) = default;
};
DatasetStats dataset_stats(const LabelMatrix& labels);

// Canonical triplet/gold emission; uses external names when provided.
void emit_triplets(std::ostream& out, const LabelMatrix& labels,
                   const std::vector<std::string>* task_names = nullptr,
                   const std::vector<std::string>* worker_names = nullptr);
void emit_gold(std::ostream& out, const GoldLabels& gold,
               const std::vector<std::string>* task_names = nullptr);

}  // namespace crowdtruth

#include "crowdtruth/ingest.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <stdexcept>

namespace crowdtruth {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> fields;
    if (line.find(',') != std::string::npos) {
        std::size_t pos = 0;
        while (pos <= line.size()) {
            std::size_t next = line.find(',', pos);
            if (next == std::string::npos) next = line.size();
            fields.push_back(trim(line.substr(pos, next - pos)));
            pos = next + 1;
        }
    } else {
        std::size_t pos = 0;
        while (pos < line.size()) {
            while (pos < line.size() && std::isspace(static_cast<unsigned char>(line[pos]))) ++pos;
            std::size_t start = pos;
            while (pos < line.size() && !std::isspace(static_cast<unsigned char>(line[pos]))) ++pos;
            if (pos > start) fields.push_back(line.substr(start, pos - start));
        }
    }
    return fields;
}

bool is_known_header(const std::vector<std::string>& fields) {
    static const std::set<std::string> task_words = {"task", "question", "item", "example", "task_id"};
    static const std::set<std::string> worker_words = {"worker", "annotator", "turker", "worker_id"};
    static const std::set<std::string> label_words = {"label", "answer", "response", "truth", "gold", "class"};
    if (fields.size() == 2)
        return task_words.count(lower(fields[0])) && label_words.count(lower(fields[1]));
    if (fields.size() == 3)
        return task_words.count(lower(fields[0])) && worker_words.count(lower(fields[1])) &&
               label_words.count(lower(fields[2]));
    return false;
}

int parse_label(const std::string& tok, const IngestOptions& opts, std::size_t line_no) {
    int value = 0;
    const char* first = tok.data();
    const char* last = tok.data() + tok.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last)
        throw std::runtime_error("line " + std::to_string(line_no) + ": label is not an integer: '" +
                                 tok + "'");
    if (opts.zero_based_labels) ++value;
    if (value < 1)
        throw std::runtime_error("line " + std::to_string(line_no) +
                                 ": label " + std::to_string(value) +
                                 " is below 1 (0 means unlabeled and must be absent)");
    return value;
}

// Shared line loop: yields (fields, line_no) for data lines.
template <typename Fn>
void for_each_record(std::istream& in, Fn&& fn) {
    std::string line;
    std::size_t line_no = 0;
    bool first_data_line = true;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string stripped = trim(line);
        if (stripped.empty() || stripped[0] == '#') continue;
        auto fields = split_fields(stripped);
        if (first_data_line) {
            first_data_line = false;
            if (is_known_header(fields)) continue;
        }
        fn(fields, line_no);
    }
}

int intern(const std::string& name, std::unordered_map<std::string, int>& ids,
           std::vector<std::string>& names) {
    auto [it, inserted] = ids.emplace(name, static_cast<int>(names.size()));
    if (inserted) names.push_back(name);
    return it->second;
}

}  // namespace

ParsedDataset parse_triplets(std::istream& in, const IngestOptions& opts) {
    std::vector<LabelEntry> entries;
    std::vector<std::string> task_names;
    std::vector<std::string> worker_names;
    std::unordered_map<std::string, int> task_ids;
    std::unordered_map<std::string, int> worker_ids;
    std::set<std::pair<int, int>> seen;
    int max_label = 0;

    for_each_record(in, [&](const std::vector<std::string>& fields, std::size_t line_no) {
        if (fields.size() != 3)
            throw std::runtime_error("line " + std::to_string(line_no) +
                                     ": expected task,worker,label (got " +
                                     std::to_string(fields.size()) + " fields)");
        const int task = intern(fields[0], task_ids, task_names);
        const int worker = intern(fields[1], worker_ids, worker_names);
        const int label = parse_label(fields[2], opts, line_no);
        if (!seen.emplace(task, worker).second)
            throw std::runtime_error("line " + std::to_string(line_no) + ": duplicate (task " +
                                     fields[0] + ", worker " + fields[1] + ") pair");
        max_label = std::max(max_label, label);
        entries.push_back(LabelEntry{task, worker, label});
    });

    int num_classes = opts.force_classes > 0 ? opts.force_classes : max_label;
    if (opts.force_classes > 0 && max_label > opts.force_classes)
        throw std::runtime_error("observed label " + std::to_string(max_label) +
                                 " exceeds forced class count " +
                                 std::to_string(opts.force_classes));
    LabelMatrix labels(static_cast<int>(task_names.size()), static_cast<int>(worker_names.size()),
                       num_classes, std::move(entries));
    return ParsedDataset{std::move(labels), std::move(task_names), std::move(worker_names),
                         std::move(task_ids), std::move(worker_ids)};
}

GoldLabels parse_gold(std::istream& in, const ParsedDataset& dataset, const IngestOptions& opts) {
    GoldLabels gold;
    gold.labels.assign(dataset.labels.task_count(), 0);

    for_each_record(in, [&](const std::vector<std::string>& fields, std::size_t line_no) {
        if (fields.size() != 2)
            throw std::runtime_error("line " + std::to_string(line_no) +
                                     ": expected task,label (got " +
                                     std::to_string(fields.size()) + " fields)");
        auto it = dataset.task_ids.find(fields[0]);
        if (it == dataset.task_ids.end())
            throw std::runtime_error("line " + std::to_string(line_no) + ": unknown task id '" +
                                     fields[0] + "'");
        const int label = parse_label(fields[1], opts, line_no);
        if (gold.labels[it->second] != 0)
            throw std::runtime_error("line " + std::to_string(line_no) +
                                     ": duplicate gold for task '" + fields[0] + "'");
        gold.labels[it->second] = label;
    });
    return gold;
}

LoadedDataset load_dataset(std::istream& labels_in, std::istream* gold_in,
                           const IngestOptions& opts) {
    ParsedDataset parsed = parse_triplets(labels_in, opts);
    GoldLabels gold;
    if (gold_in != nullptr) {
        gold = parse_gold(*gold_in, parsed, opts);
        int max_gold = 0;
        for (int g : gold.labels) max_gold = std::max(max_gold, g);
        if (opts.force_classes > 0 && max_gold > opts.force_classes)
            throw std::runtime_error("gold label " + std::to_string(max_gold) +
                                     " exceeds forced class count");
        if (max_gold > parsed.labels.num_classes()) {
            // A class only the gold file mentions still counts toward K.
            LabelMatrix widened(parsed.labels.task_count(), parsed.labels.worker_count(), max_gold,
                                parsed.labels.entries());
            parsed.labels = std::move(widened);
        }
    }
    return LoadedDataset{std::move(parsed), std::move(gold)};
}

LoadedDataset load_dataset_files(const std::string& labels_path, const std::string& gold_path,
                                 const IngestOptions& opts) {
    std::ifstream labels_in(labels_path);
    if (!labels_in) throw std::runtime_error("cannot open labels file: " + labels_path);
    if (gold_path.empty()) return load_dataset(labels_in, nullptr, opts);
    std::ifstream gold_in(gold_path);
    if (!gold_in) throw std::runtime_error("cannot open gold file: " + gold_path);
    return load_dataset(labels_in, &gold_in, opts);
}

DatasetStats dataset_stats(const LabelMatrix& labels) {
    return DatasetStats{labels.num_classes(), labels.task_count(), labels.worker_count(),
                        labels.entries().size()};
}

void emit_triplets(std::ostream& out, const LabelMatrix& labels,
                   const std::vector<std::string>* task_names,
                   const std::vector<std::string>* worker_names) {
    for (const auto& e : labels.entries()) {
        if (task_names != nullptr)
            out << (*task_names)[e.task];
        else
            out << e.task;
        out << ',';
        if (worker_names != nullptr)
            out << (*worker_names)[e.worker];
        else
            out << e.worker;
        out << ',' << e.label << '\n';
    }
}

void emit_gold(std::ostream& out, const GoldLabels& gold,
               const std::vector<std::string>* task_names) {
    for (int i = 0; i < gold.size(); ++i) {
        if (gold.labels[i] == 0) continue;
        if (task_names != nullptr)
            out << (*task_names)[i];
        else
            out << i;
        out << ',' << gold.labels[i] << '\n';
    }
}

}  // namespace crowdtruth

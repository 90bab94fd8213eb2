#pragma once

#include "taxoalign/tree.hpp"

#include <optional>
#include <string>
#include <vector>

namespace taxoalign {

struct ReferenceDocument {
    std::string id;
    std::string title;
    std::string abstract_or_text;
};

struct BenchmarkInstance {
    std::string instance_id;
    std::string topic;
    std::optional<TaxonomyTree> gold_tree;
    std::vector<ReferenceDocument> references;
    std::string split = "test"; // train | test | conference_test
};

struct CorpusLoadIssue {
    std::string file;
    std::string message;
};

struct CorpusLoadResult {
    std::vector<BenchmarkInstance> instances;
    std::vector<CorpusLoadIssue> issues; // malformed files, validation warnings
};

/// Loads one JSON instance file per entry from a directory. Malformed files
/// are reported with file-level attribution; valid instances still load.
/// Throws NoInstancesFound when nothing valid is present.
CorpusLoadResult load_corpus(const std::string& directory);

BenchmarkInstance load_instance_file(const std::string& path);
void save_instance_file(const std::string& path, const BenchmarkInstance& instance);

struct CorpusStats {
    std::vector<std::pair<std::string, std::size_t>> count_per_split;
    std::size_t total_references = 0;
    double mean_references_per_instance = 0;
    double reference_availability_fraction = 0; // non-empty text / total
};

CorpusStats corpus_stats(const std::vector<BenchmarkInstance>& instances);

} // namespace taxoalign

#pragma once

#include "taxoalign/corpus.hpp"
#include "taxoalign/gateway.hpp"
#include "taxoalign/tree.hpp"

#include <optional>
#include <string>
#include <vector>

namespace taxoalign {

struct KnowledgeSlice {
    std::string document_id;
    std::string text;
    bool grounding_flagged = false; // < 60% of content words found in the source
};

struct PipelineConfig {
    std::string slice_model = "slice-model";
    std::string verbalize_model = "verbalize-model";
    std::string refine_model = "refine-model";
    int max_depth = 3;
    int min_nodes_for_keep = 5;
    int input_context_budget = 16384; // approximate tokens for pooled slices
    bool alpaca_verbalization = false; // wrap verbalize prompt in the
                                       // single-string instruction format
};

struct TranscriptEntry {
    std::string phase; // slice | verbalize | refine
    std::string document_id; // empty for tree-level phases
    std::string request_hash;
    std::string response_hash; // empty when the call failed
    std::string error;         // empty on success
};

struct PipelineResult {
    TaxonomyTree tree;
    std::vector<KnowledgeSlice> slices;
    std::vector<TranscriptEntry> transcript;
};

/// Parses the bracketed slice list format; accepts comma- or line-separated
/// entries and returns them trimmed. "[]" yields an empty list.
std::vector<std::string> parse_slice_list(const std::string& response);

/// Renders pooled slices as the Doc-1 / Doc-2 ... block the prompts expect.
std::string format_slices(const std::vector<KnowledgeSlice>& slices);

std::vector<KnowledgeSlice> create_knowledge_slices(const ReferenceDocument& document,
                                                    const std::string& topic,
                                                    Gateway& gateway,
                                                    const PipelineConfig& config);

TaxonomyTree verbalize_taxonomy(const std::string& topic,
                                const std::vector<KnowledgeSlice>& slices,
                                Gateway& gateway, const PipelineConfig& config);

TaxonomyTree refine_taxonomy(const TaxonomyTree& tree, const std::string& topic,
                             const std::vector<KnowledgeSlice>& slices,
                             Gateway& gateway, const PipelineConfig& config,
                             std::vector<TranscriptEntry>* transcript = nullptr);

/// Three phases end to end: per-document slices (documents that fail
/// permanently are skipped and flagged in the transcript), verbalization,
/// refinement. The final tree has depth <= max_depth and the topic as root.
PipelineResult run_pipeline(const BenchmarkInstance& instance, const PipelineConfig& config,
                            Gateway& gateway);

/// Drops trailing slices of the largest documents until the pooled block
/// fits the budget; exposed for testing.
std::vector<KnowledgeSlice> fit_to_context_budget(std::vector<KnowledgeSlice> slices,
                                                  int budget_tokens);

} // namespace taxoalign

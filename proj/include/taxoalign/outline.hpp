#pragma once

#include "taxoalign/tree.hpp"

#include <string>
#include <vector>

namespace taxoalign {

struct OutlineHeading {
    std::string text;
    int level = 1; // 1 = section, 2 = subsection, 3 = sub-subsection
    std::vector<std::string> reference_ids;
};

struct ExtractionConfig {
    std::vector<std::string> stop_terms = default_stop_terms();
    bool require_references = false;

    static std::vector<std::string> default_stop_terms();
};

/// Builds the gold taxonomy tree from a survey outline: the title becomes
/// the root, headings containing a stop term are dropped together with their
/// deeper following headings, and survivors nest by level (levels > 3 clip
/// to 3). Throws NoHeadingsSurvive when everything is filtered out.
TaxonomyTree build_outline_tree(const std::string& title,
                                const std::vector<OutlineHeading>& headings,
                                const ExtractionConfig& config = {});

struct PathPrf {
    double precision = 0;
    double recall = 0;
    double f1 = 0;
};

/// Compares two trees by their sets of root-to-node paths (exact
/// label-sequence equality after whitespace normalization).
PathPrf path_prf(const TaxonomyTree& gold, const TaxonomyTree& extracted);

/// Parsed form of an outline JSON file:
/// {"title": str, "headings": [{"text", "level", "reference_ids"}]}.
struct OutlineDocument {
    std::string title;
    std::vector<OutlineHeading> headings;
};

OutlineDocument load_outline_file(const std::string& path);

} // namespace taxoalign

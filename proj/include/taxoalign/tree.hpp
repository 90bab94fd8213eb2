#pragma once

#include <memory>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace taxoalign {

/// A node in a rooted labeled taxonomy tree. Labels are non-empty after
/// trimming; child order is significant and preserved through round-trips.
struct TaxonomyNode {
    std::string label;
    std::vector<TaxonomyNode> children;

    TaxonomyNode() = default;
    explicit TaxonomyNode(std::string lbl, std::vector<TaxonomyNode> kids = {})
        : label(std::move(lbl)), children(std::move(kids)) {}
};

/// Rooted labeled tree with cached node count and depth (root = depth 0).
class TaxonomyTree {
public:
    explicit TaxonomyTree(TaxonomyNode root);

    const TaxonomyNode& root() const { return root_; }
    std::size_t node_count() const { return node_count_; }
    std::size_t depth() const { return depth_; }

    /// Breadth-first label list: root first, then each level left-to-right.
    std::vector<std::string> level_order() const;

    /// Root-to-node label sequences, one per node; duplicates collapse.
    std::set<std::vector<std::string>> root_paths() const;

    /// Sum of node degrees; equals 2 * (node_count - 1) for any tree.
    std::size_t degree_sum() const;

    /// Drops every node strictly deeper than max_depth edges from the root.
    TaxonomyTree clipped_to_depth(std::size_t max_depth) const;

    /// Same structure with the root label replaced.
    TaxonomyTree with_root_label(std::string label) const;

    /// Labels that appear more than once among siblings anywhere in the tree.
    std::vector<std::string> duplicate_sibling_labels() const;

private:
    TaxonomyNode root_;
    std::size_t node_count_ = 0;
    std::size_t depth_ = 0;
};

/// Parses the indented outline format. Throws EmptyInput, OrphanLine or
/// AmbiguousIndent. Accepts two-space indents, tabs (1 tab = 1 level) and
/// bullet/number markers; markers are stripped from labels.
TaxonomyTree parse_tree_text(const std::string& text);

/// Canonical form: root on the first line, then one node per line with
/// two-space indentation per level and a "- " marker. parse_tree_text
/// inverts it exactly.
std::string serialize_tree(const TaxonomyTree& tree);

/// JSON encoding {"label": ..., "children": [...]} used by the corpus store.
nlohmann::json tree_to_json(const TaxonomyTree& tree);
TaxonomyTree tree_from_json(const nlohmann::json& j);

} // namespace taxoalign

#include "taxoalign/outline.hpp"
#include "taxoalign/errors.hpp"
#include "taxoalign/text.hpp"

#include <algorithm>
#include <fstream>

#include <nlohmann/json.hpp>

namespace taxoalign {

std::vector<std::string> ExtractionConfig::default_stop_terms() {
    return {"introduction", "related work", "problem formulation", "summary",
            "conclusion",   "result",       "future",              "discussion",
            "background",   "overview"};
}

namespace {

bool contains_stop_term(const std::string& text, const std::vector<std::string>& terms) {
    std::string lower = to_lower(text);
    return std::any_of(terms.begin(), terms.end(), [&](const std::string& t) {
        return !t.empty() && lower.find(t) != std::string::npos;
    });
}

} // namespace

TaxonomyTree build_outline_tree(const std::string& title,
                                const std::vector<OutlineHeading>& headings,
                                const ExtractionConfig& config) {
    struct Survivor {
        std::string text;
        int level;
    };
    std::vector<Survivor> survivors;
    int dropped_subtree_level = 0; // 0 = not inside a dropped subtree
    for (const auto& h : headings) {
        int level = std::clamp(h.level, 1, 3);
        if (dropped_subtree_level != 0 && level > dropped_subtree_level) continue;
        dropped_subtree_level = 0;
        if (contains_stop_term(h.text, config.stop_terms)) {
            dropped_subtree_level = level;
            continue;
        }
        if (config.require_references && h.reference_ids.empty()) continue;
        survivors.push_back({h.text, level});
    }
    if (survivors.empty())
        throw NoHeadingsSurvive("all headings filtered for: " + title);

    TaxonomyNode root(title);
    // stack of (level, path of child indices from root) along the rightmost spine
    std::vector<std::pair<int, std::vector<std::size_t>>> stack;
    auto node_at = [&](const std::vector<std::size_t>& path) -> TaxonomyNode* {
        TaxonomyNode* n = &root;
        for (std::size_t i : path) n = &n->children[i];
        return n;
    };
    for (const auto& s : survivors) {
        while (!stack.empty() && stack.back().first >= s.level) stack.pop_back();
        std::vector<std::size_t> parent_path =
            stack.empty() ? std::vector<std::size_t>{} : stack.back().second;
        TaxonomyNode* parent = node_at(parent_path);
        parent->children.emplace_back(s.text);
        parent_path.push_back(parent->children.size() - 1);
        stack.emplace_back(s.level, std::move(parent_path));
    }
    return TaxonomyTree(std::move(root));
}

PathPrf path_prf(const TaxonomyTree& gold, const TaxonomyTree& extracted) {
    auto normalized_paths = [](const TaxonomyTree& t) {
        std::set<std::vector<std::string>> out;
        for (const auto& path : t.root_paths()) {
            std::vector<std::string> norm;
            norm.reserve(path.size());
            for (const auto& label : path) norm.push_back(normalize_whitespace(label));
            out.insert(std::move(norm));
        }
        return out;
    };
    auto gold_paths = normalized_paths(gold);
    auto ext_paths = normalized_paths(extracted);
    std::size_t common = 0;
    for (const auto& p : ext_paths) common += gold_paths.count(p);

    PathPrf prf;
    prf.precision = ext_paths.empty() ? 0.0 : double(common) / double(ext_paths.size());
    prf.recall = gold_paths.empty() ? 0.0 : double(common) / double(gold_paths.size());
    prf.f1 = (prf.precision + prf.recall) > 0
                 ? 2 * prf.precision * prf.recall / (prf.precision + prf.recall)
                 : 0.0;
    return prf;
}

OutlineDocument load_outline_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open outline file: " + path);
    auto j = nlohmann::json::parse(in);
    OutlineDocument doc;
    doc.title = j.at("title").get<std::string>();
    for (const auto& h : j.at("headings")) {
        OutlineHeading heading;
        heading.text = h.at("text").get<std::string>();
        heading.level = h.at("level").get<int>();
        if (h.contains("reference_ids"))
            heading.reference_ids = h.at("reference_ids").get<std::vector<std::string>>();
        doc.headings.push_back(std::move(heading));
    }
    return doc;
}

} // namespace taxoalign

#include "taxoalign/tree.hpp"
#include "taxoalign/errors.hpp"

#include <algorithm>
#include <cctype>
#include <deque>
#include <map>
#include <sstream>

#include <nlohmann/json.hpp>

namespace taxoalign {

namespace {

std::string trim(const std::string& s) {
    auto begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos) return "";
    auto end = s.find_last_not_of(" \t\r\n");
    return s.substr(begin, end - begin + 1);
}

std::size_t count_nodes(const TaxonomyNode& n) {
    std::size_t total = 1;
    for (const auto& c : n.children) total += count_nodes(c);
    return total;
}

std::size_t max_depth(const TaxonomyNode& n) {
    std::size_t d = 0;
    for (const auto& c : n.children) d = std::max(d, 1 + max_depth(c));
    return d;
}

// Strips one leading bullet ("-", "*", "+") or number marker ("1.", "1.1")
// followed by whitespace or end of line.
std::string strip_marker(const std::string& line) {
    if (line.empty()) return line;
    char c = line[0];
    if (c == '-' || c == '*' || c == '+') {
        if (line.size() == 1) return "";
        if (line[1] == ' ' || line[1] == '\t') return trim(line.substr(2));
        return line;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
        std::size_t i = 0;
        while (i < line.size() &&
               (std::isdigit(static_cast<unsigned char>(line[i])) || line[i] == '.'))
            ++i;
        // require the marker to end in '.' or be dotted ("1.", "2.3") and be
        // followed by whitespace, so labels like "3D Models" survive intact
        std::string marker = line.substr(0, i);
        bool dotted = marker.find('.') != std::string::npos;
        bool followed = i >= line.size() || line[i] == ' ' || line[i] == '\t';
        if (dotted && followed) return trim(line.substr(i));
    }
    return line;
}

} // namespace

TaxonomyTree::TaxonomyTree(TaxonomyNode root) : root_(std::move(root)) {
    node_count_ = count_nodes(root_);
    depth_ = max_depth(root_);
}

std::vector<std::string> TaxonomyTree::level_order() const {
    std::vector<std::string> out;
    out.reserve(node_count_);
    std::deque<const TaxonomyNode*> queue{&root_};
    while (!queue.empty()) {
        const TaxonomyNode* n = queue.front();
        queue.pop_front();
        out.push_back(n->label);
        for (const auto& c : n->children) queue.push_back(&c);
    }
    return out;
}

std::set<std::vector<std::string>> TaxonomyTree::root_paths() const {
    std::set<std::vector<std::string>> paths;
    std::vector<std::string> prefix;
    auto visit = [&](auto&& self, const TaxonomyNode& n) -> void {
        prefix.push_back(n.label);
        paths.insert(prefix);
        for (const auto& c : n.children) self(self, c);
        prefix.pop_back();
    };
    visit(visit, root_);
    return paths;
}

std::size_t TaxonomyTree::degree_sum() const {
    // every edge contributes to two degrees
    return 2 * (node_count_ - 1);
}

TaxonomyTree TaxonomyTree::clipped_to_depth(std::size_t limit) const {
    auto clip = [&](auto&& self, const TaxonomyNode& n, std::size_t d) -> TaxonomyNode {
        TaxonomyNode out(n.label);
        if (d < limit)
            for (const auto& c : n.children) out.children.push_back(self(self, c, d + 1));
        return out;
    };
    return TaxonomyTree(clip(clip, root_, 0));
}

TaxonomyTree TaxonomyTree::with_root_label(std::string label) const {
    TaxonomyNode r = root_;
    r.label = std::move(label);
    return TaxonomyTree(std::move(r));
}

std::vector<std::string> TaxonomyTree::duplicate_sibling_labels() const {
    std::vector<std::string> dups;
    auto visit = [&](auto&& self, const TaxonomyNode& n) -> void {
        std::map<std::string, int> seen;
        for (const auto& c : n.children)
            if (++seen[c.label] == 2) dups.push_back(c.label);
        for (const auto& c : n.children) self(self, c);
    };
    visit(visit, root_);
    return dups;
}

TaxonomyTree parse_tree_text(const std::string& text) {
    struct Line {
        std::size_t indent;
        std::string label;
    };
    std::vector<Line> lines;
    bool saw_tabs = false, saw_spaces = false;

    std::istringstream in(text);
    std::string raw;
    while (std::getline(in, raw)) {
        if (trim(raw).empty()) continue;
        std::size_t i = 0;
        bool tabs = false, spaces = false;
        while (i < raw.size() && (raw[i] == ' ' || raw[i] == '\t')) {
            (raw[i] == '\t' ? tabs : spaces) = true;
            ++i;
        }
        if (tabs && spaces)
            throw AmbiguousIndent("mixed tabs and spaces in line indent: " + raw);
        saw_tabs |= tabs;
        saw_spaces |= spaces;
        std::string label = strip_marker(trim(raw.substr(i)));
        if (label.empty()) continue;
        lines.push_back({i, std::move(label)});
    }
    if (lines.empty()) throw EmptyInput("no non-blank lines");
    if (saw_tabs && saw_spaces)
        throw AmbiguousIndent("document mixes tab and space indentation");
    if (lines.front().indent > 0)
        throw OrphanLine("first line is indented; no root to attach to");

    struct Raw {
        std::string label;
        std::size_t parent; // index into nodes; root points at itself
    };
    std::vector<Raw> nodes;
    nodes.push_back({lines.front().label, 0});
    // stack of (indent, node index) along the current rightmost path
    std::vector<std::pair<std::size_t, std::size_t>> stack{{0, 0}};

    for (std::size_t li = 1; li < lines.size(); ++li) {
        const auto& ln = lines[li];
        while (stack.size() > 1 && stack.back().first >= ln.indent) stack.pop_back();
        // a second zero-indent line has no shallower predecessor; attach to root
        std::size_t parent = stack.back().second;
        nodes.push_back({ln.label, parent});
        stack.emplace_back(ln.indent, nodes.size() - 1);
    }

    // assemble children in encounter order
    std::vector<std::vector<std::size_t>> kids(nodes.size());
    for (std::size_t i = 1; i < nodes.size(); ++i) kids[nodes[i].parent].push_back(i);
    auto build = [&](auto&& self, std::size_t idx) -> TaxonomyNode {
        TaxonomyNode n(nodes[idx].label);
        for (std::size_t k : kids[idx]) n.children.push_back(self(self, k));
        return n;
    };
    return TaxonomyTree(build(build, 0));
}

std::string serialize_tree(const TaxonomyTree& tree) {
    std::string out;
    auto emit = [&](auto&& self, const TaxonomyNode& n, std::size_t depth) -> void {
        if (depth == 0) {
            out += n.label;
        } else {
            out.append(2 * depth, ' ');
            out += "- ";
            out += n.label;
        }
        out += '\n';
        for (const auto& c : n.children) self(self, c, depth + 1);
    };
    emit(emit, tree.root(), 0);
    return out;
}

nlohmann::json tree_to_json(const TaxonomyTree& tree) {
    auto encode = [](auto&& self, const TaxonomyNode& n) -> nlohmann::json {
        nlohmann::json j;
        j["label"] = n.label;
        j["children"] = nlohmann::json::array();
        for (const auto& c : n.children) j["children"].push_back(self(self, c));
        return j;
    };
    return encode(encode, tree.root());
}

TaxonomyTree tree_from_json(const nlohmann::json& j) {
    auto decode = [](auto&& self, const nlohmann::json& node) -> TaxonomyNode {
        TaxonomyNode n(node.at("label").get<std::string>());
        if (node.contains("children"))
            for (const auto& c : node.at("children")) n.children.push_back(self(self, c));
        return n;
    };
    return TaxonomyTree(decode(decode, j));
}

} // namespace taxoalign

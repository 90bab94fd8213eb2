#include "taxoalign/pipeline.hpp"
#include "taxoalign/errors.hpp"
#include "taxoalign/prompts.hpp"
#include "taxoalign/text.hpp"

#include <algorithm>
#include <cctype>
#include <future>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

namespace taxoalign {

namespace {

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

bool is_header_echo(const std::string& content) {
    static const std::set<std::string> headers = {
        "knowledge-slices", "your response", "document", "topic", "knowledge slices"};
    return headers.count(to_lower(trim(content))) > 0;
}

// rough token estimate used for the context budget; ~4 chars per token
std::size_t estimate_tokens(std::size_t chars) { return chars / 4; }

std::string strip_item_marker(std::string item) {
    item = trim(item);
    while (!item.empty() && (item.front() == '-' || item.front() == '*'))
        item = trim(item.substr(1));
    if (!item.empty() && item.back() == ',') item = trim(item.substr(0, item.size() - 1));
    return item;
}

ChatRequest make_slice_request(const ReferenceDocument& doc, const std::string& topic,
                               const PipelineConfig& config) {
    ChatRequest req;
    req.model_id = config.slice_model;
    std::string document = doc.title.empty() ? doc.abstract_or_text
                                             : doc.title + "\n\n" + doc.abstract_or_text;
    req.user_content = fill_template(prompts::knowledge_slice(),
                                     {{"document", document}, {"topic", topic}});
    return req;
}

ChatRequest make_verbalize_request(const std::string& topic, const std::string& slices_block,
                                   const PipelineConfig& config) {
    ChatRequest req;
    req.model_id = config.verbalize_model;
    if (config.alpaca_verbalization) {
        // split the template at the slices slot so instruction and input
        // together reproduce the full prompt
        const std::string& tmpl = prompts::verbalization();
        std::size_t at = tmpl.find("{slices}");
        std::string instruction = fill_template(tmpl.substr(0, at), {{"topic", topic}});
        std::string tail = tmpl.substr(at + std::string("{slices}").size());
        req.user_content = fill_template(prompts::alpaca_instruction(),
                                         {{"instruction", instruction},
                                          {"input", slices_block + tail}});
    } else {
        req.user_content = fill_template(prompts::verbalization(),
                                         {{"topic", topic}, {"slices", slices_block}});
    }
    return req;
}

ChatRequest make_refine_request(const TaxonomyTree& tree, const std::string& topic,
                                const std::string& slices_block, const PipelineConfig& config) {
    ChatRequest req;
    req.model_id = config.refine_model;
    req.user_content = fill_template(prompts::refinement(), {{"tree", serialize_tree(tree)},
                                                            {"topic", topic},
                                                            {"slices", slices_block}});
    return req;
}

// Model tree responses must look like the canonical outline: every line
// after the first indented or carrying a list marker.
TaxonomyTree parse_model_tree(const std::string& response) {
    std::vector<std::string> lines;
    std::istringstream in(response);
    std::string line;
    while (std::getline(in, line))
        if (!trim(line).empty()) lines.push_back(line);
    if (lines.empty()) throw UnparseableTree("empty model response");

    for (std::size_t i = 1; i < lines.size(); ++i) {
        const std::string& l = lines[i];
        char c = l[0];
        bool indented = c == ' ' || c == '\t';
        bool markered = c == '-' || c == '*' || c == '+' ||
                        std::isdigit(static_cast<unsigned char>(c));
        if (!indented && !markered)
            throw UnparseableTree("line is neither indented nor markered: " + l);
    }
    std::string joined;
    for (const auto& l : lines) joined += l + "\n";
    try {
        return parse_tree_text(joined);
    } catch (const Error& e) {
        throw UnparseableTree(std::string("cannot parse model tree: ") + e.what());
    }
}

bool grounding_ok(const std::string& slice, const std::set<std::string>& doc_tokens) {
    std::size_t content = 0, found = 0;
    for (const auto& tok : tokenize(slice)) {
        if (is_stopword(tok)) continue;
        ++content;
        found += doc_tokens.count(tok);
    }
    if (content == 0) return true;
    return double(found) / double(content) >= 0.6;
}

} // namespace

std::vector<std::string> parse_slice_list(const std::string& response) {
    // collect bracketed blocks, ignoring header echoes like [Knowledge-Slices]
    std::vector<std::string> blocks;
    std::size_t pos = 0;
    while ((pos = response.find('[', pos)) != std::string::npos) {
        std::size_t close = response.find(']', pos + 1);
        if (close == std::string::npos) break;
        std::string content = response.substr(pos + 1, close - pos - 1);
        if (!is_header_echo(content)) blocks.push_back(content);
        pos = close + 1;
    }
    if (blocks.empty()) throw UnparseableSliceList("no bracketed list in response");

    const std::string& content = blocks.back();
    if (trim(content).empty()) return {};

    std::vector<std::string> items;
    auto split_on = [&](char sep) {
        std::vector<std::string> out;
        std::stringstream ss(content);
        std::string item;
        while (std::getline(ss, item, sep)) {
            item = strip_item_marker(item);
            if (!item.empty()) out.push_back(item);
        }
        return out;
    };
    // line-separated lists win when they yield multiple entries, so slices
    // containing commas survive intact
    auto by_line = split_on('\n');
    items = by_line.size() >= 2 ? by_line : split_on(',');
    return items;
}

std::string format_slices(const std::vector<KnowledgeSlice>& slices) {
    std::vector<std::string> order;
    std::map<std::string, std::vector<const KnowledgeSlice*>> groups;
    for (const auto& s : slices) {
        if (!groups.count(s.document_id)) order.push_back(s.document_id);
        groups[s.document_id].push_back(&s);
    }
    std::string out;
    for (std::size_t i = 0; i < order.size(); ++i) {
        if (i > 0) out += "\n";
        out += "Doc-" + std::to_string(i + 1) + ":\n";
        for (const auto* s : groups[order[i]]) out += "- " + s->text + "\n";
    }
    return out;
}

std::vector<KnowledgeSlice> fit_to_context_budget(std::vector<KnowledgeSlice> slices,
                                                  int budget_tokens) {
    auto total_chars = [&] {
        std::size_t sum = 0;
        for (const auto& s : slices) sum += s.text.size();
        return sum;
    };
    while (slices.size() > 1 &&
           estimate_tokens(total_chars()) > std::size_t(budget_tokens)) {
        // drop the last slice of the document with the largest pooled text
        std::map<std::string, std::size_t> chars_per_doc;
        for (const auto& s : slices) chars_per_doc[s.document_id] += s.text.size();
        auto longest = std::max_element(chars_per_doc.begin(), chars_per_doc.end(),
                                        [](const auto& a, const auto& b) {
                                            return a.second < b.second;
                                        });
        for (auto it = slices.rbegin(); it != slices.rend(); ++it) {
            if (it->document_id == longest->first) {
                slices.erase(std::next(it).base());
                break;
            }
        }
    }
    if (slices.size() == 1 && estimate_tokens(total_chars()) > std::size_t(budget_tokens))
        slices.front().text.resize(std::size_t(budget_tokens) * 4);
    return slices;
}

std::vector<KnowledgeSlice> create_knowledge_slices(const ReferenceDocument& document,
                                                    const std::string& topic,
                                                    Gateway& gateway,
                                                    const PipelineConfig& config) {
    if (document.abstract_or_text.empty() && document.title.empty())
        throw EmptyText("document has no text: " + document.id);
    ChatRequest req = make_slice_request(document, topic, config);
    ChatResponse resp = gateway.chat_complete(req);
    auto texts = parse_slice_list(resp.text);

    std::set<std::string> doc_tokens;
    for (const auto& tok : tokenize(document.title + " " + document.abstract_or_text))
        doc_tokens.insert(tok);

    std::vector<KnowledgeSlice> slices;
    for (auto& t : texts) {
        KnowledgeSlice s;
        s.document_id = document.id;
        s.grounding_flagged = !grounding_ok(t, doc_tokens);
        s.text = std::move(t);
        slices.push_back(std::move(s));
    }
    return slices;
}

TaxonomyTree verbalize_taxonomy(const std::string& topic,
                                const std::vector<KnowledgeSlice>& slices,
                                Gateway& gateway, const PipelineConfig& config) {
    if (slices.empty()) throw EmptyCorpus("verbalization needs at least one slice");
    auto fitted = fit_to_context_budget(slices, config.input_context_budget);
    ChatRequest req = make_verbalize_request(topic, format_slices(fitted), config);
    ChatResponse resp = gateway.chat_complete(req);
    TaxonomyTree tree = parse_model_tree(resp.text);
    tree = tree.clipped_to_depth(std::size_t(config.max_depth));
    if (tree.root().label != topic) tree = tree.with_root_label(topic);
    return tree;
}

TaxonomyTree refine_taxonomy(const TaxonomyTree& tree, const std::string& topic,
                             const std::vector<KnowledgeSlice>& slices,
                             Gateway& gateway, const PipelineConfig& config,
                             std::vector<TranscriptEntry>* transcript) {
    auto fitted = fit_to_context_budget(slices, config.input_context_budget);
    std::string slices_block = format_slices(fitted);

    auto one_round = [&](const TaxonomyTree& input) {
        ChatRequest req = make_refine_request(input, topic, slices_block, config);
        ChatResponse resp = gateway.chat_complete(req);
        if (transcript)
            transcript->push_back(
                {"refine", "", request_hash(req), text_hash(resp.text), ""});
        TaxonomyTree out = parse_model_tree(resp.text);
        out = out.clipped_to_depth(std::size_t(config.max_depth));
        if (out.root().label != topic) out = out.with_root_label(topic);
        return out;
    };

    TaxonomyTree refined = one_round(tree);
    // the prompt already asks the model to regenerate undersized trees; one
    // extra invocation bounds the cost of it not complying
    if (refined.node_count() < std::size_t(config.min_nodes_for_keep))
        refined = one_round(refined);
    return refined;
}

PipelineResult run_pipeline(const BenchmarkInstance& instance, const PipelineConfig& config,
                            Gateway& gateway) {
    if (instance.references.empty())
        throw EmptyCorpus("instance has no reference documents: " + instance.instance_id);

    struct DocResult {
        std::vector<KnowledgeSlice> slices;
        TranscriptEntry entry;
    };
    std::vector<std::future<DocResult>> futures;
    for (const auto& doc : instance.references) {
        futures.push_back(std::async(std::launch::async, [&, doc] {
            DocResult r;
            ChatRequest req = make_slice_request(doc, instance.topic, config);
            r.entry = {"slice", doc.id, request_hash(req), "", ""};
            try {
                ChatResponse resp = gateway.chat_complete(req);
                r.entry.response_hash = text_hash(resp.text);
                auto texts = parse_slice_list(resp.text);
                std::set<std::string> doc_tokens;
                for (const auto& tok : tokenize(doc.title + " " + doc.abstract_or_text))
                    doc_tokens.insert(tok);
                for (auto& t : texts) {
                    KnowledgeSlice s;
                    s.document_id = doc.id;
                    s.grounding_flagged = !grounding_ok(t, doc_tokens);
                    s.text = std::move(t);
                    r.slices.push_back(std::move(s));
                }
            } catch (const Error& e) {
                r.entry.error = e.what(); // document skipped, run continues
            }
            return r;
        }));
    }

    std::vector<KnowledgeSlice> slices;
    std::vector<TranscriptEntry> transcript;
    for (auto& f : futures) {
        DocResult r = f.get();
        transcript.push_back(std::move(r.entry));
        for (auto& s : r.slices) slices.push_back(std::move(s));
    }
    if (slices.empty())
        throw EmptyCorpus("no knowledge slices survived for: " + instance.instance_id);

    auto fitted = fit_to_context_budget(slices, config.input_context_budget);
    ChatRequest vreq = make_verbalize_request(instance.topic, format_slices(fitted), config);
    ChatResponse vresp = gateway.chat_complete(vreq);
    transcript.push_back({"verbalize", "", request_hash(vreq), text_hash(vresp.text), ""});
    TaxonomyTree tree = parse_model_tree(vresp.text)
                            .clipped_to_depth(std::size_t(config.max_depth));
    if (tree.root().label != instance.topic) tree = tree.with_root_label(instance.topic);

    tree = refine_taxonomy(tree, instance.topic, slices, gateway, config, &transcript);

    return PipelineResult{std::move(tree), std::move(slices), std::move(transcript)};
}

} // namespace taxoalign

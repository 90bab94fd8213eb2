#include "taxoalign/prompts.hpp"

namespace taxoalign {

std::string fill_template(const std::string& tmpl,
                          const std::map<std::string, std::string>& values) {
    // single pass over the template, so substituted text is never re-expanded
    std::string out;
    std::size_t pos = 0;
    while (pos < tmpl.size()) {
        std::size_t open = tmpl.find('{', pos);
        if (open == std::string::npos) break;
        std::size_t close = tmpl.find('}', open + 1);
        if (close == std::string::npos) break;
        auto it = values.find(tmpl.substr(open + 1, close - open - 1));
        if (it == values.end()) {
            out += tmpl.substr(pos, open + 1 - pos);
            pos = open + 1;
            continue;
        }
        out += tmpl.substr(pos, open - pos);
        out += it->second;
        pos = close + 1;
    }
    out += tmpl.substr(pos);
    return out;
}

namespace prompts {

namespace {

const char* const kExampleTree =
    "Topic Name\n"
    "  - Subtopic A\n"
    "    - Fine-grained Topic A1\n"
    "    - Fine-grained Topic A2\n"
    "  - Subtopic B\n"
    "    - Fine-grained Topic B1\n";

} // namespace

const std::string& knowledge_slice() {
    static const std::string text =
        "You will receive a document and a topic. Your task is to identify the "
        "knowledge-slices within the document that are very relevant to the given topic. "
        "A knowledge-slice is a piece of information representing the highlights of the "
        "document related to the given topic i.e. each knowledge-slice should be such "
        "that it both represents an important point in the document, but at the same "
        "time, the knowledge-slice should pertain closely to the given topic. Also, the "
        "knowledge-slice should not represent any additional information that is not "
        "present in the document.\n"
        "\n"
        "[Document]\n"
        "\n"
        "{document}\n"
        "\n"
        "[Topic]\n"
        "\n"
        "{topic}\n"
        "\n"
        "Please ONLY return the relevant knowledge-slices in the form of a list enclosed "
        "within square brackets. Your response should be in the following format:\n"
        "\n"
        "[Knowledge-Slices]\n"
        "\n"
        "[Knowledge-Slice 1, Knowledge-Slice 2,..., Knowledge-Slice n]\n"
        "\n"
        "[Your response]\n";
    return text;
}

const std::string& verbalization() {
    static const std::string text =
        "A taxonomy is a tree-structured semantic hierarchy that establishes a "
        "classification of the existing literature under a common topic. You will "
        "receive a taxonomy topic along with a collection of documents. Your task is to "
        "create a taxonomy tree using the given topic and based on the highlights of the "
        "documents i.e. create new child nodes by identifying generalizable sub-level "
        "topics from the document highlights that can act as child nodes to the taxonomy "
        "topic, which acts as the root node. The taxonomy tree should be created such "
        "that it looks as if all the given documents are a part of the taxonomy. There "
        "may be several levels in the tree i.e. each node may contain child nodes, but "
        "the total depth of the tree should not exceed three. The topics in all the "
        "levels of the tree except the last level must not be too specific so that it "
        "can accommodate future sub-topics i.e. child nodes.\n"
        "\n"
        "- The nodes at the last level of the hierarchy i.e. the leaf nodes should "
        "reflect a single topic instead of a combination of topics.\n"
        "\n"
        "- Each node label is a small and concise phrase.\n"
        "\n"
        "[Response Format Instructions]\n"
        "\n"
        "- The output tree is to be formatted as shown in the example such that the root "
        "node is the taxonomy topic and each child node is connected to its parent.\n"
        "\n"
        "[Example Output]\n"
        "\n" +
        std::string(kExampleTree) +
        "\n"
        "[Taxonomy Topic]\n"
        "\n"
        "{topic}\n"
        "\n"
        "[Documents]\n"
        "\n"
        "{slices}\n"
        "\n"
        "Please ONLY return the taxonomy tree in the output format as shown in the "
        "example above.\n"
        "\n"
        "[Your response]\n";
    return text;
}

const std::string& refinement() {
    static const std::string text =
        "A taxonomy is a tree-structured semantic hierarchy that establishes a "
        "classification of the existing literature under a common topic. You will "
        "receive a taxonomy tree along with a collection of documents. The root node of "
        "the taxonomy tree is the overall taxonomy topic. Your task is to refine the "
        "taxonomy tree such that there is a clear connection between the parent node and "
        "the subsequent child nodes. Each node must be a well-defined topic that is "
        "grounded in the input document highlights. Do not alter the root node of the "
        "tree i.e. the taxonomy topic. Your task is to alter the other nodes only if "
        "deemed necessary i.e. only if a better viable replacement is found. Please try "
        "to adhere to the structure of the given taxonomy tree as much as possible. Only "
        "if the given taxonomy tree is restricted to less than five nodes, then generate "
        "the taxonomy tree on your own. Strictly adhere to the format of the tree shown "
        "here.\n"
        "\n"
        "[Example Output]\n"
        "\n" +
        std::string(kExampleTree) +
        "\n"
        "[Taxonomy Tree]\n"
        "\n"
        "{tree}\n"
        "\n"
        "[Taxonomy Topic]\n"
        "\n"
        "{topic}\n"
        "\n"
        "[Documents]\n"
        "\n"
        "{slices}\n"
        "\n"
        "Please ONLY return the edited taxonomy tree in the output format as shown in "
        "the example above.\n"
        "\n"
        "[Your response]\n";
    return text;
}

const std::string& judge() {
    static const std::string text =
        "A taxonomy is a tree-structured semantic hierarchy that establishes a "
        "classification of the existing literature under a common topic. You are given a "
        "gold standard taxonomy tree and a generated taxonomy tree and your task is to "
        "respond with an appropriate score after comparing the two. Two taxonomy trees "
        "are said to be structurally similar if the number of nodes and branches are "
        "similar in number. If one tree has too many or too less nodes and branches than "
        "the gold tree, then they are said to be structurally dissimilar. Two taxonomy "
        "trees are said to be semantically similar if their nodes have values with close "
        "meanings or are matching entirely. Please respond with only the score based on "
        "the following criteria:\n"
        "\n"
        "Score 1: The generated taxonomy has no similarity at all with the gold standard "
        "taxonomy i.e. the structure and the intent of the generated taxonomy is totally "
        "different from that of the gold standard taxonomy.\n"
        "\n"
        "Score 2: The generated taxonomy have only a few nodes that has a semantic match "
        "with the nodes in the gold standard taxonomy and the structure of the generated "
        "taxonomy is a little similar to that of the gold standard taxonomy. The "
        "structure of the generated tree is very less similar to the gold standard tree "
        "but the intent of both taxonomies is similar.\n"
        "\n"
        "Score 3: The generated taxonomy has a reasonable similarity to the generated "
        "taxonomy in terms of structural similarity and semantic similarity. The "
        "structure of both trees are similar but some nodes are different in the two "
        "taxonomies.\n"
        "\n"
        "Score 4: The generated taxonomy has good logical consistency with that of the "
        "gold standard taxonomy in terms of semantic matching of the nodes between the "
        "two with the structure of the generated taxonomy is very similar to that of the "
        "gold standard taxonomy. The two taxonomies only differ for a small number of "
        "instances.\n"
        "\n"
        "Score 5: The generated taxonomy is fully similar in terms of semantic matching "
        "and structure to the gold standard taxonomy.\n"
        "\n"
        "Gold Standard Taxonomy:\n"
        "\n"
        "{gold_tree}\n"
        "\n"
        "Generated Taxonomy:\n"
        "\n"
        "{generated_tree}\n"
        "\n"
        "[Your Response]\n";
    return text;
}

const std::string& alpaca_instruction() {
    static const std::string text =
        "Below is an instruction that describes a task, paired with an input that "
        "provides further context. Write a response that appropriately completes the "
        "request.\n"
        "\n"
        "### Instruction:\n"
        "\n"
        "{instruction}\n"
        "\n"
        "### Input:\n"
        "\n"
        "{input}\n"
        "\n"
        "### Response:\n";
    return text;
}

} // namespace prompts
} // namespace taxoalign

#include "taxoalign/errors.hpp"
#include "taxoalign/outline.hpp"
#include "test_support.hpp"

#include <doctest.h>

using namespace taxoalign;

namespace {

OutlineHeading h(int level, std::string text, std::vector<std::string> refs = {}) {
    return OutlineHeading{std::move(text), level, std::move(refs)};
}

std::size_t surviving_nodes(const std::vector<OutlineHeading>& headings,
                            const ExtractionConfig& config) {
    try {
        return build_outline_tree("T", headings, config).node_count() - 1;
    } catch (const NoHeadingsSurvive&) {
        return 0;
    }
}

} // namespace

TEST_CASE("stop terms filter headings") {
    auto tree = build_outline_tree(
        "T", {h(1, "Introduction"), h(1, "Generative Models"), h(2, "GANs")});
    CHECK(tree.root().label == "T");
    REQUIRE(tree.root().children.size() == 1);
    CHECK(tree.root().children[0].label == "Generative Models");
    REQUIRE(tree.root().children[0].children.size() == 1);
    CHECK(tree.root().children[0].children[0].label == "GANs");
}

TEST_CASE("stop-term match is case-insensitive substring") {
    auto tree = build_outline_tree("T", {h(1, "Results and Discussion"), h(1, "Methods")});
    CHECK(tree.node_count() == 2);
    CHECK(tree.root().children[0].label == "Methods");
}

TEST_CASE("dropping a heading drops its subtree") {
    auto tree = build_outline_tree("T", {h(1, "Related Work"), h(2, "Prior Surveys"),
                                         h(3, "Deep Dives"), h(1, "Methods"), h(2, "GANs")});
    CHECK(tree.node_count() == 3);
    CHECK(tree.root().children[0].label == "Methods");
}

TEST_CASE("all headings filtered") {
    CHECK_THROWS_AS(build_outline_tree("T", {h(1, "Introduction"), h(1, "Conclusion")}),
                    NoHeadingsSurvive);
}

TEST_CASE("require_references drops unreferenced headings") {
    ExtractionConfig config;
    config.require_references = true;
    auto tree = build_outline_tree(
        "T", {h(1, "Methods", {"p1"}), h(2, "No refs here"), h(2, "GANs", {"p2"})}, config);
    CHECK(tree.node_count() == 3);
    CHECK(tree.root().children[0].children[0].label == "GANs");
}

TEST_CASE("level skips and deep levels") {
    // a level-3 right after a level-1 attaches to that level-1
    auto tree = build_outline_tree("T", {h(1, "Methods"), h(3, "GAN variants")});
    CHECK(tree.root().children[0].children[0].label == "GAN variants");

    // levels beyond 3 clip to 3
    auto clipped = build_outline_tree(
        "T", {h(1, "A"), h(2, "B"), h(3, "C"), h(7, "D")});
    CHECK(clipped.depth() == 3);
    CHECK(clipped.node_count() == 5);
}

TEST_CASE("filtering is monotone in the stop list") {
    std::vector<OutlineHeading> headings = {
        h(1, "Generative Models"), h(2, "GANs"), h(2, "Diffusion"), h(1, "Applications"),
        h(2, "Image Editing"),     h(1, "Summary")};
    ExtractionConfig base;
    std::size_t before = surviving_nodes(headings, base);
    for (const char* extra : {"gan", "image", "models", "applications"}) {
        ExtractionConfig grown = base;
        grown.stop_terms.push_back(extra);
        CHECK(surviving_nodes(headings, grown) <= before);
    }
}

TEST_CASE("no survivor contains a stop term") {
    auto tree = build_outline_tree(
        "T", {h(1, "Generative Models"), h(1, "Overview of Results"), h(2, "GANs"),
              h(1, "Applications"), h(2, "Background Material")});
    ExtractionConfig config;
    for (const auto& label : tree.level_order()) {
        if (label == "T") continue;
        std::string lower = label;
        for (auto& c : lower) c = char(std::tolower(c));
        for (const auto& term : config.stop_terms)
            CHECK(lower.find(term) == std::string::npos);
    }
}

TEST_CASE("path precision/recall/f1") {
    auto gold = TaxonomyTree(TaxonomyNode("A", {TaxonomyNode("B"), TaxonomyNode("C")}));
    auto same = path_prf(gold, gold);
    CHECK(same.precision == doctest::Approx(1.0));
    CHECK(same.recall == doctest::Approx(1.0));
    CHECK(same.f1 == doctest::Approx(1.0));

    auto extracted = TaxonomyTree(TaxonomyNode("A", {TaxonomyNode("B")}));
    auto prf = path_prf(gold, extracted);
    CHECK(prf.precision == doctest::Approx(1.0));
    CHECK(prf.recall == doctest::Approx(2.0 / 3.0));
    CHECK(prf.f1 == doctest::Approx(0.8));

    // swapping arguments swaps precision and recall
    auto swapped = path_prf(extracted, gold);
    CHECK(swapped.precision == doctest::Approx(prf.recall));
    CHECK(swapped.recall == doctest::Approx(prf.precision));

    // whitespace normalization before comparison
    auto spaced = TaxonomyTree(TaxonomyNode("A ", {TaxonomyNode("  B")}));
    CHECK(path_prf(extracted, spaced).f1 == doctest::Approx(1.0));

    auto disjoint = TaxonomyTree(TaxonomyNode("X", {TaxonomyNode("Y")}));
    CHECK(path_prf(gold, disjoint).f1 == doctest::Approx(0.0));
}

TEST_CASE("path_prf is identity on random trees") {
    std::mt19937 rng(21);
    for (int i = 0; i < 50; ++i) {
        auto tree = testsupport::random_tree(rng);
        auto prf = path_prf(tree, tree);
        CHECK(prf.f1 == doctest::Approx(1.0));
    }
}

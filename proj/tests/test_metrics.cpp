#include "taxoalign/errors.hpp"
#include "taxoalign/gateway.hpp"
#include "taxoalign/metrics.hpp"
#include "taxoalign/prompts.hpp"
#include "test_support.hpp"

#include <doctest.h>

#include <filesystem>
#include <random>

using namespace taxoalign;

namespace {

TaxonomyNode n(std::string label, std::vector<TaxonomyNode> kids = {}) {
    return TaxonomyNode(std::move(label), std::move(kids));
}

TokenSequence seq(std::vector<std::string> tokens) { return TokenSequence{std::move(tokens)}; }

struct FixtureDir {
    std::filesystem::path path;
    FixtureDir() {
        path = std::filesystem::temp_directory_path() /
               ("taxoalign_fixtures_" + std::to_string(std::random_device{}()));
        std::filesystem::create_directories(path);
    }
    ~FixtureDir() { std::filesystem::remove_all(path); }
};

} // namespace

TEST_CASE("average degree score") {
    auto five = TaxonomyTree(n("A", {n("B"), n("C"), n("D"), n("E")}));
    CHECK(average_degree_score(five, five) == doctest::Approx(1.0));

    auto nine = TaxonomyTree(n("A", {n("B", {n("C"), n("D"), n("E")}),
                                     n("F", {n("G"), n("H"), n("I")})}));
    CHECK(average_degree_score(five, nine) == doctest::Approx(2.0));

    auto single = TaxonomyTree(n("A"));
    CHECK_THROWS_AS(average_degree_score(single, five), DegenerateTree);
    CHECK_THROWS_AS(average_degree_score(five, single), DegenerateTree);
}

TEST_CASE("average degree score closed form and reciprocal symmetry") {
    std::mt19937 rng(41);
    for (int i = 0; i < 200; ++i) {
        auto gold = testsupport::random_tree_min2(rng);
        auto gen = testsupport::random_tree_min2(rng);
        double delta = average_degree_score(gold, gen);
        double closed = double(gen.node_count() - 1) / double(gold.node_count() - 1);
        CHECK(delta == doctest::Approx(closed).epsilon(1e-12));
        CHECK(average_degree_score(gen, gold) == doctest::Approx(1.0 / delta));
    }
}

TEST_CASE("corpus bleu-2") {
    auto gold = seq({"a", "b", "d"});
    auto hyp = seq({"a", "b", "c"});
    CHECK(bleu2_corpus({gold}, {gold}) == doctest::Approx(1.0));
    CHECK(bleu2_corpus({gold}, {hyp}) == doctest::Approx(std::sqrt(1.0 / 3.0)).epsilon(1e-9));
    CHECK(bleu2_corpus({gold}, {seq({})}) == doctest::Approx(0.0));
    CHECK(bleu2_corpus({gold}, {seq({"x", "y", "z"})}) == doctest::Approx(0.0));
    CHECK_THROWS_AS(bleu2_corpus({}, {}), EmptyCorpus);
    CHECK_THROWS_AS(bleu2_corpus({gold}, {}), EmptyCorpus);
}

TEST_CASE("bleu-2 matches the brute-force oracle") {
    std::mt19937 rng(42);
    for (int round = 0; round < 20; ++round) {
        std::vector<TokenSequence> gold, hyp;
        std::uniform_int_distribution<int> pairs(1, 5);
        int k = pairs(rng);
        for (int i = 0; i < k; ++i) {
            gold.push_back(testsupport::random_token_sequence(rng));
            hyp.push_back(testsupport::random_token_sequence(rng));
        }
        CHECK(bleu2_corpus(gold, hyp) ==
              doctest::Approx(testsupport::oracle_bleu2(gold, hyp)).epsilon(1e-9));
    }
}

TEST_CASE("rouge-l") {
    auto gold = seq({"a", "c", "b", "d"});
    auto hyp = seq({"a", "b", "c", "d"});
    CHECK(rouge_l_corpus({gold}, {gold}) == doctest::Approx(1.0));
    CHECK(rouge_l_corpus({gold}, {hyp}) == doctest::Approx(0.75)); // LCS length 3
    CHECK(rouge_l_corpus({seq({"a"})}, {seq({"b"})}) == doctest::Approx(0.0));

    std::mt19937 rng(43);
    for (int round = 0; round < 20; ++round) {
        std::vector<TokenSequence> g{testsupport::random_token_sequence(rng)};
        std::vector<TokenSequence> h{testsupport::random_token_sequence(rng)};
        CHECK(rouge_l_corpus(g, h) ==
              doctest::Approx(testsupport::oracle_rouge_l(g, h)).epsilon(1e-9));
    }
}

TEST_CASE("embedding match score") {
    BasisEmbedder emb(64);
    auto same = seq({"x", "y"});
    CHECK(embed_score_corpus({same}, {same}, emb) == doctest::Approx(1.0));
    CHECK(embed_score_corpus({seq({"x"})}, {seq({"y"})}, emb) == doctest::Approx(0.0));

    HashEmbedder hash_emb;
    auto gold = seq({"neural", "networks"});
    CHECK(embed_score_corpus({gold}, {gold}, hash_emb) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("soft cardinality hand values") {
    BasisEmbedder emb(64);
    CHECK(soft_cardinality({"only"}, emb) == doctest::Approx(1.0));
    CHECK(soft_cardinality({"a", "b", "c", "d"}, emb) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(soft_cardinality({"a", "a", "a", "a"}, emb) == doctest::Approx(0.25).epsilon(1e-9));
}

TEST_CASE("node soft recall") {
    BasisEmbedder emb(128);
    auto tree = TaxonomyTree(n("root node", {n("left topic"), n("right topic")}));
    // identical trees with mutually orthogonal labels: c = 1, union halves
    CHECK(node_soft_recall(tree, tree, emb) == doctest::Approx(1.5).epsilon(1e-9));

    BasisEmbedder emb2(16);
    auto single = TaxonomyTree(n("same label"));
    CHECK(node_soft_recall(single, single, emb2) == doctest::Approx(1.5).epsilon(1e-9));

    HashEmbedder hash_emb;
    std::mt19937 rng(44);
    for (int i = 0; i < 30; ++i) {
        auto gold = testsupport::random_tree(rng);
        auto gen = testsupport::random_tree(rng);
        CHECK(node_soft_recall(gold, gen, hash_emb) ==
              doctest::Approx(testsupport::oracle_nsr(gold, gen, hash_emb)).epsilon(1e-9));
    }
}

TEST_CASE("node entity recall") {
    HeuristicChunker chunker;
    auto gold = TaxonomyTree(n("Neural Networks", {n("Image Generation")}));
    CHECK(node_entity_recall(gold, gold, chunker) == doctest::Approx(1.0));

    auto gen = TaxonomyTree(n("Image Generation", {n("unrelated stuff")}));
    CHECK(node_entity_recall(gold, gen, chunker) == doctest::Approx(0.5));

    auto disjoint = TaxonomyTree(n("robotics", {n("planning")}));
    CHECK(node_entity_recall(gold, disjoint, chunker) == doctest::Approx(0.0));

    auto stopword_tree = TaxonomyTree(n("the", {n("of")}));
    CHECK_THROWS_AS(node_entity_recall(stopword_tree, gold, chunker), NoGoldEntities);
}

TEST_CASE("node entity recall monotonicity") {
    HeuristicChunker chunker;
    auto gold = TaxonomyTree(
        n("image synthesis", {n("diffusion models"), n("adversarial training")}));
    auto gen = TaxonomyTree(n("image synthesis", {n("style transfer")}));
    double before = node_entity_recall(gold, gen, chunker);
    auto augmented = TaxonomyTree(
        n("image synthesis", {n("style transfer"), n("diffusion models")}));
    CHECK(node_entity_recall(gold, augmented, chunker) >= before);
}

TEST_CASE("llm judge parses the first in-range integer") {
    FixtureDir dir;
    auto gold = TaxonomyTree(n("A", {n("B")}));
    auto gen = TaxonomyTree(n("A", {n("C")}));

    auto make_gateway = [&] {
        return Gateway(std::make_shared<ReplayBackend>(dir.path.string()), {0, 0.0, 2});
    };
    auto record = [&](const TaxonomyTree& g, const TaxonomyTree& h, const std::string& text) {
        ChatRequest req;
        req.model_id = "judge";
        req.user_content = fill_template(
            prompts::judge(),
            {{"gold_tree", serialize_tree(g)}, {"generated_tree", serialize_tree(h)}});
        ReplayBackend::write_fixture(dir.path.string(), req, {text, true});
    };

    record(gold, gen, "3");
    auto gateway = make_gateway();
    CHECK(llm_judge(gold, gen, gateway, "judge") == 3);

    record(gold, gen, "Score: 4 because the structures align");
    CHECK(llm_judge(gold, gen, gateway, "judge") == 4);

    record(gold, gen, "The trees are similar.");
    CHECK_THROWS_AS(llm_judge(gold, gen, gateway, "judge"), UnparseableJudgeResponse);

    record(gold, gen, "out of 10 I'd say 5");
    CHECK(llm_judge(gold, gen, gateway, "judge") == 5);
}

TEST_CASE("aggregate reports") {
    BasisEmbedder emb(64);
    HeuristicChunker chunker;
    auto t1 = TaxonomyTree(n("image synthesis", {n("diffusion models")}));
    auto r1 = evaluate_pair(t1, t1, emb, chunker);
    auto only = aggregate_reports({r1});
    CHECK(only.delta == doctest::Approx(r1.delta));
    CHECK(only.bleu2 == doctest::Approx(r1.bleu2));
    CHECK(only.nsr == doctest::Approx(r1.nsr));

    MetricReport a, b;
    a.delta = 1.0;
    b.delta = 3.0;
    CHECK(aggregate_reports({a, b}).delta == doctest::Approx(2.0));
    CHECK_THROWS_AS(aggregate_reports({}), EmptyCorpus);
}

TEST_CASE("aggregate bleu pools counts instead of averaging") {
    // short pair scores 0 alone, long pair scores high; the mean of the two
    // per-pair scores differs from the pooled corpus score
    auto short_gold = seq({"p", "q", "r"});
    auto short_hyp = seq({"x", "y", "z"});
    std::vector<std::string> long_tokens;
    for (int i = 0; i < 30; ++i) long_tokens.push_back("w" + std::to_string(i));
    auto long_gold = seq(long_tokens);

    MetricReport a, b;
    a.bleu_counts = bleu2_counts(short_gold, short_hyp);
    a.bleu2 = a.bleu_counts.score();
    b.bleu_counts = bleu2_counts(long_gold, long_gold);
    b.bleu2 = b.bleu_counts.score();

    double pooled = bleu2_corpus({short_gold, long_gold}, {short_hyp, long_gold});
    double mean = (a.bleu2 + b.bleu2) / 2.0;
    CHECK(pooled != doctest::Approx(mean));
    CHECK(aggregate_reports({a, b}).bleu2 == doctest::Approx(pooled).epsilon(1e-12));
}

TEST_CASE("evaluate_pair is deterministic") {
    HashEmbedder emb;
    HeuristicChunker chunker;
    std::mt19937 rng(45);
    auto gold = testsupport::random_tree_min2(rng);
    auto gen = testsupport::random_tree_min2(rng);
    auto r1 = evaluate_pair(gold, gen, emb, chunker);
    auto r2 = evaluate_pair(gold, gen, emb, chunker);
    CHECK(r1.delta == r2.delta);
    CHECK(r1.bleu2 == r2.bleu2);
    CHECK(r1.rouge_l == r2.rouge_l);
    CHECK(r1.embed_score == r2.embed_score);
    CHECK(r1.nsr == r2.nsr);
    CHECK(r1.ner == r2.ner);
}

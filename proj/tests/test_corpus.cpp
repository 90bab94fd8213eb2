#include "taxoalign/corpus.hpp"
#include "taxoalign/errors.hpp"
#include "test_support.hpp"

#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <random>

using namespace taxoalign;

namespace {

struct TempDir {
    std::filesystem::path path;
    TempDir() {
        path = std::filesystem::temp_directory_path() /
               ("taxoalign_corpus_" + std::to_string(std::random_device{}()));
        std::filesystem::create_directories(path);
    }
    ~TempDir() { std::filesystem::remove_all(path); }
};

BenchmarkInstance sample_instance(const std::string& id, int refs, const std::string& split) {
    BenchmarkInstance inst;
    inst.instance_id = id;
    inst.topic = "Topic " + id;
    inst.gold_tree = parse_tree_text("Topic " + id + "\n  - A\n    - B\n  - C\n");
    inst.split = split;
    for (int i = 0; i < refs; ++i)
        inst.references.push_back({id + "-r" + std::to_string(i), "Title " + std::to_string(i),
                                   "Abstract text number " + std::to_string(i)});
    return inst;
}

} // namespace

TEST_CASE("instance save/load round trip") {
    TempDir dir;
    auto file = (dir.path / "i1.json").string();
    auto inst = sample_instance("i1", 3, "train");
    save_instance_file(file, inst);
    auto loaded = load_instance_file(file);
    CHECK(loaded.instance_id == inst.instance_id);
    CHECK(loaded.topic == inst.topic);
    CHECK(loaded.split == "train");
    REQUIRE(loaded.gold_tree.has_value());
    CHECK(serialize_tree(*loaded.gold_tree) == serialize_tree(*inst.gold_tree));
    REQUIRE(loaded.references.size() == 3);
    CHECK(loaded.references[1].id == "i1-r1");
    CHECK(loaded.references[1].abstract_or_text == "Abstract text number 1");
}

TEST_CASE("instances without a gold tree load fine") {
    TempDir dir;
    auto inst = sample_instance("i2", 1, "test");
    inst.gold_tree.reset();
    auto file = (dir.path / "i2.json").string();
    save_instance_file(file, inst);
    CHECK(!load_instance_file(file).gold_tree.has_value());
}

TEST_CASE("load_corpus keeps valid files and reports broken ones") {
    TempDir dir;
    save_instance_file((dir.path / "a.json").string(), sample_instance("a", 2, "test"));
    save_instance_file((dir.path / "b.json").string(), sample_instance("b", 4, "train"));
    save_instance_file((dir.path / "c.json").string(), sample_instance("c", 6, "test"));
    {
        std::ofstream bad(dir.path / "broken.json");
        bad << "{not json at all";
    }
    {
        std::ofstream norefs(dir.path / "norefs.json");
        norefs << R"({"instance_id": "x", "topic": "X", "references": []})";
    }
    std::ofstream(dir.path / "notes.txt") << "ignored";

    auto result = load_corpus(dir.path.string());
    CHECK(result.instances.size() == 3);
    CHECK(result.issues.size() == 2);
    for (const auto& issue : result.issues)
        CHECK(!issue.message.empty());

    // sorted by filename so runs are order-stable
    CHECK(result.instances[0].instance_id == "a");
    CHECK(result.instances[2].instance_id == "c");
}

TEST_CASE("load_corpus flags shallow gold trees") {
    TempDir dir;
    auto inst = sample_instance("flat", 1, "test");
    inst.gold_tree = parse_tree_text("Flat\n  - only child\n");
    save_instance_file((dir.path / "flat.json").string(), inst);
    auto result = load_corpus(dir.path.string());
    CHECK(result.instances.size() == 1);
    REQUIRE(result.issues.size() == 1);
    CHECK(result.issues[0].message.find("two levels") != std::string::npos);
}

TEST_CASE("empty or missing directories throw") {
    TempDir dir;
    CHECK_THROWS_AS(load_corpus(dir.path.string()), NoInstancesFound);
    CHECK_THROWS_AS(load_corpus((dir.path / "missing").string()), NoInstancesFound);
}

TEST_CASE("corpus stats") {
    std::vector<BenchmarkInstance> instances = {
        sample_instance("a", 2, "train"),
        sample_instance("b", 4, "test"),
        sample_instance("c", 6, "test"),
    };
    instances[2].references[0].abstract_or_text.clear();

    auto stats = corpus_stats(instances);
    CHECK(stats.total_references == 12);
    CHECK(stats.mean_references_per_instance == doctest::Approx(4.0));
    CHECK(stats.reference_availability_fraction == doctest::Approx(11.0 / 12.0));
    REQUIRE(stats.count_per_split.size() == 2);
    CHECK(stats.count_per_split[0] == std::pair<std::string, std::size_t>{"test", 2});
    CHECK(stats.count_per_split[1] == std::pair<std::string, std::size_t>{"train", 1});

    // order of instances must not matter
    std::reverse(instances.begin(), instances.end());
    auto again = corpus_stats(instances);
    CHECK(again.total_references == stats.total_references);
    CHECK(again.mean_references_per_instance ==
          doctest::Approx(stats.mean_references_per_instance));
    CHECK(again.reference_availability_fraction ==
          doctest::Approx(stats.reference_availability_fraction));

    auto empty = corpus_stats({});
    CHECK(empty.total_references == 0);
    CHECK(empty.mean_references_per_instance == doctest::Approx(0.0));
}

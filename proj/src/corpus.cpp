#include "taxoalign/corpus.hpp"
#include "taxoalign/errors.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>

#include <nlohmann/json.hpp>

namespace taxoalign {

BenchmarkInstance load_instance_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open instance file: " + path);
    auto j = nlohmann::json::parse(in);

    BenchmarkInstance inst;
    inst.instance_id = j.at("instance_id").get<std::string>();
    inst.topic = j.at("topic").get<std::string>();
    if (j.contains("gold_tree") && !j.at("gold_tree").is_null())
        inst.gold_tree = tree_from_json(j.at("gold_tree"));
    inst.split = j.value("split", "test");
    for (const auto& r : j.at("references")) {
        ReferenceDocument doc;
        doc.id = r.at("id").get<std::string>();
        doc.title = r.value("title", "");
        doc.abstract_or_text = r.value("abstract_or_text", "");
        inst.references.push_back(std::move(doc));
    }
    if (inst.references.empty())
        throw Error("instance has no references: " + inst.instance_id);
    return inst;
}

void save_instance_file(const std::string& path, const BenchmarkInstance& instance) {
    nlohmann::json j;
    j["instance_id"] = instance.instance_id;
    j["topic"] = instance.topic;
    j["gold_tree"] = instance.gold_tree ? tree_to_json(*instance.gold_tree)
                                        : nlohmann::json();
    j["split"] = instance.split;
    j["references"] = nlohmann::json::array();
    for (const auto& r : instance.references)
        j["references"].push_back({{"id", r.id},
                                   {"title", r.title},
                                   {"abstract_or_text", r.abstract_or_text}});
    std::ofstream out(path);
    if (!out) throw Error("cannot write instance file: " + path);
    out << j.dump(2) << "\n";
}

CorpusLoadResult load_corpus(const std::string& directory) {
    CorpusLoadResult result;
    std::vector<std::filesystem::path> files;
    std::error_code ec;
    for (const auto& entry : std::filesystem::directory_iterator(directory, ec))
        if (entry.path().extension() == ".json") files.push_back(entry.path());
    if (ec) throw NoInstancesFound("cannot read directory: " + directory);
    std::sort(files.begin(), files.end());

    for (const auto& file : files) {
        try {
            BenchmarkInstance inst = load_instance_file(file.string());
            // benchmark desiderata: gold trees should be multi-layered
            if (inst.gold_tree && inst.gold_tree->depth() < 2)
                result.issues.push_back({file.string(), "gold tree has fewer than two levels"});
            result.instances.push_back(std::move(inst));
        } catch (const std::exception& e) {
            result.issues.push_back({file.string(), e.what()});
        }
    }
    if (result.instances.empty())
        throw NoInstancesFound("no valid instance files in " + directory);
    return result;
}

CorpusStats corpus_stats(const std::vector<BenchmarkInstance>& instances) {
    CorpusStats stats;
    std::map<std::string, std::size_t> per_split;
    std::size_t available = 0;
    for (const auto& inst : instances) {
        ++per_split[inst.split];
        stats.total_references += inst.references.size();
        for (const auto& r : inst.references)
            if (!r.abstract_or_text.empty()) ++available;
    }
    stats.count_per_split.assign(per_split.begin(), per_split.end());
    if (!instances.empty())
        stats.mean_references_per_instance =
            double(stats.total_references) / double(instances.size());
    if (stats.total_references > 0)
        stats.reference_availability_fraction =
            double(available) / double(stats.total_references);
    return stats;
}

} // namespace taxoalign

#include "taxoalign/corpus.hpp"
#include "taxoalign/errors.hpp"
#include "taxoalign/gateway.hpp"
#include "taxoalign/metrics.hpp"
#include "taxoalign/outline.hpp"
#include "taxoalign/pipeline.hpp"
#include "taxoalign/providers.hpp"
#include "taxoalign/report.hpp"
#include "taxoalign/tree.hpp"

#include <CLI11.hpp>

#include <condition_variable>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <thread>
#include <vector>

namespace fs = std::filesystem;
using namespace taxoalign;

namespace {

struct CommonOptions {
    std::string corpus_dir;
    std::string out_dir = "results";
    std::string replay_dir;
    std::string record_dir;
    std::string endpoint = "http://localhost:8000";
    std::string auth_env;
    int parallelism = 1;
    bool keep_going = false;
    bool force = false;
    int max_retries = 3;
    int max_concurrent = 4;

    std::string embedder = "hash";
    std::string vectors_file;
    std::string embed_endpoint;
    std::string embed_model;
    std::string embed_auth_env;
    std::string chunker = "heuristic";
    std::string chunks_file;
};

std::shared_ptr<Gateway> make_gateway(const CommonOptions& opt) {
    std::shared_ptr<ChatBackend> backend;
    if (!opt.replay_dir.empty()) {
        backend = std::make_shared<ReplayBackend>(opt.replay_dir);
    } else {
        HttpBackendConfig http;
        http.base_url = opt.endpoint;
        http.auth_token_env = opt.auth_env;
        backend = std::make_shared<HttpChatBackend>(http);
    }
    if (!opt.record_dir.empty())
        backend = std::make_shared<RecordingBackend>(backend, opt.record_dir);
    GatewayConfig cfg;
    cfg.max_retries = opt.replay_dir.empty() ? opt.max_retries : 0;
    cfg.max_concurrent_requests = opt.max_concurrent;
    return std::make_shared<Gateway>(backend, cfg);
}

std::unique_ptr<Embedder> make_embedder(const CommonOptions& opt) {
    if (opt.embedder == "hash") return std::make_unique<HashEmbedder>();
    if (opt.embedder == "file") {
        if (opt.vectors_file.empty())
            throw CLI::ValidationError("--vectors-file is required with --embedder file");
        return std::make_unique<FileEmbedder>(opt.vectors_file);
    }
    if (opt.embedder == "remote") {
        RemoteEmbedderConfig cfg;
        cfg.base_url = opt.embed_endpoint.empty() ? opt.endpoint : opt.embed_endpoint;
        cfg.model = opt.embed_model;
        cfg.auth_token_env = opt.embed_auth_env;
        return std::make_unique<RemoteEmbedder>(cfg);
    }
    throw CLI::ValidationError("unknown embedder: " + opt.embedder);
}

std::unique_ptr<Chunker> make_chunker(const CommonOptions& opt) {
    if (opt.chunker == "heuristic") return std::make_unique<HeuristicChunker>();
    if (opt.chunker == "file") {
        if (opt.chunks_file.empty())
            throw CLI::ValidationError("--chunks-file is required with --chunker file");
        return std::make_unique<FileChunker>(opt.chunks_file);
    }
    throw CLI::ValidationError("unknown chunker: " + opt.chunker);
}

void add_common_flags(CLI::App* cmd, CommonOptions& opt) {
    cmd->add_option("--corpus", opt.corpus_dir, "Directory of instance JSON files");
    cmd->add_option("--out", opt.out_dir, "Results directory");
    cmd->add_option("--replay", opt.replay_dir, "Answer model calls from this fixture directory");
    cmd->add_option("--record", opt.record_dir, "Record model calls as fixtures here");
    cmd->add_option("--endpoint", opt.endpoint, "Chat-completions endpoint base URL");
    cmd->add_option("--auth-env", opt.auth_env, "Env var holding the API token");
    cmd->add_option("--parallelism", opt.parallelism, "Concurrent instances")
        ->check(CLI::PositiveNumber);
    cmd->add_flag("--keep-going", opt.keep_going, "Continue past per-instance failures");
    cmd->add_flag("--force", opt.force, "Regenerate outputs that already exist");
    cmd->add_option("--max-retries", opt.max_retries, "Gateway retry cap");
    cmd->add_option("--max-concurrent", opt.max_concurrent, "Gateway in-flight request cap");
    cmd->add_option("--embedder", opt.embedder, "remote|file|hash")
        ->check(CLI::IsMember({"remote", "file", "hash"}));
    cmd->add_option("--vectors-file", opt.vectors_file, "Precomputed vectors JSONL");
    cmd->add_option("--embed-endpoint", opt.embed_endpoint, "Embedding endpoint base URL");
    cmd->add_option("--embed-model", opt.embed_model, "Embedding model name");
    cmd->add_option("--embed-auth-env", opt.embed_auth_env, "Env var for embedding token");
    cmd->add_option("--chunker", opt.chunker, "heuristic|file")
        ->check(CLI::IsMember({"heuristic", "file"}));
    cmd->add_option("--chunks-file", opt.chunks_file, "Precomputed chunks JSONL");
}

int cmd_extract(const std::string& outline_dir, const CommonOptions& opt,
                bool require_references, const std::string& split) {
    if (!fs::is_directory(outline_dir)) {
        std::cerr << "extract: no such directory: " << outline_dir << "\n";
        return 1;
    }
    fs::create_directories(opt.out_dir);
    ExtractionConfig config;
    config.require_references = require_references;
    std::size_t written = 0;
    for (const auto& entry : fs::directory_iterator(outline_dir)) {
        if (entry.path().extension() != ".json") continue;
        const std::string name = entry.path().stem().string();
        try {
            OutlineDocument doc = load_outline_file(entry.path().string());
            TaxonomyTree tree = build_outline_tree(doc.title, doc.headings, config);
            BenchmarkInstance inst;
            inst.instance_id = name;
            inst.topic = doc.title;
            inst.gold_tree = tree;
            inst.split = split;
            std::vector<std::string> seen;
            for (const auto& h : doc.headings)
                for (const auto& id : h.reference_ids)
                    if (std::find(seen.begin(), seen.end(), id) == seen.end()) {
                        seen.push_back(id);
                        inst.references.push_back({id, "", ""});
                    }
            save_instance_file((fs::path(opt.out_dir) / (name + ".json")).string(), inst);
            std::cout << name << ": " << doc.headings.size() << " headings -> "
                      << tree.node_count() - 1 << " nodes kept\n";
            ++written;
        } catch (const NoHeadingsSurvive&) {
            std::cout << name << ": all headings filtered, skipped\n";
        } catch (const std::exception& e) {
            std::cerr << name << ": " << e.what() << "\n";
            if (!opt.keep_going) return 1;
        }
    }
    if (written == 0) {
        std::cerr << "extract: no instances written\n";
        return 1;
    }
    return 0;
}

int cmd_generate(const CommonOptions& opt, const PipelineConfig& pipeline_config) {
    CorpusLoadResult corpus;
    try {
        corpus = load_corpus(opt.corpus_dir);
    } catch (const std::exception& e) {
        std::cerr << "generate: " << e.what() << "\n";
        return 1;
    }
    for (const auto& issue : corpus.issues)
        std::cerr << "warning: " << issue.file << ": " << issue.message << "\n";

    fs::path trees_dir = fs::path(opt.out_dir) / "generated_trees";
    fs::path transcripts_dir = fs::path(opt.out_dir) / "transcripts";
    fs::create_directories(trees_dir);
    fs::create_directories(transcripts_dir);

    auto gateway = make_gateway(opt);
    std::mutex io_mutex;
    std::atomic<int> failures{0};
    std::vector<std::thread> workers;
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= corpus.instances.size()) return;
            const auto& inst = corpus.instances[i];
            fs::path tree_file = trees_dir / (inst.instance_id + ".txt");
            if (!opt.force && fs::exists(tree_file)) {
                std::lock_guard lock(io_mutex);
                std::cout << inst.instance_id << ": output exists, skipped\n";
                continue;
            }
            try {
                PipelineResult result = run_pipeline(inst, pipeline_config, *gateway);
                std::ofstream(tree_file) << serialize_tree(result.tree);
                write_transcript_file(
                    (transcripts_dir / (inst.instance_id + ".jsonl")).string(),
                    result.transcript);
                std::lock_guard lock(io_mutex);
                std::cout << inst.instance_id << ": " << result.tree.node_count()
                          << " nodes, depth " << result.tree.depth() << "\n";
            } catch (const std::exception& e) {
                ++failures;
                std::lock_guard lock(io_mutex);
                std::cerr << inst.instance_id << ": " << e.what() << "\n";
                if (!opt.keep_going) {
                    next = corpus.instances.size(); // stop handing out work
                    return;
                }
            }
        }
    };
    for (int t = 0; t < opt.parallelism; ++t) workers.emplace_back(worker);
    for (auto& w : workers) w.join();
    return (failures > 0 && !opt.keep_going) ? 1 : 0;
}

int cmd_evaluate(const CommonOptions& opt, bool with_judge, const std::string& judge_model,
                 const std::string& run_id) {
    CorpusLoadResult corpus;
    try {
        corpus = load_corpus(opt.corpus_dir);
    } catch (const std::exception& e) {
        std::cerr << "evaluate: " << e.what() << "\n";
        return 1;
    }
    auto embedder = make_embedder(opt);
    auto chunker = make_chunker(opt);
    std::shared_ptr<Gateway> gateway;
    if (with_judge) gateway = make_gateway(opt);

    fs::path trees_dir = fs::path(opt.out_dir) / "generated_trees";
    std::vector<InstanceRow> rows;
    std::vector<MetricReport> reports;
    for (const auto& inst : corpus.instances) {
        InstanceRow row;
        row.instance_id = inst.instance_id;
        fs::path tree_file = trees_dir / (inst.instance_id + ".txt");
        if (!inst.gold_tree) {
            std::cerr << "warning: " << inst.instance_id << ": no gold tree, skipped\n";
            rows.push_back(row);
            continue;
        }
        std::ifstream in(tree_file);
        if (!in) {
            std::cerr << "warning: " << inst.instance_id
                      << ": missing generated tree, row marked absent\n";
            rows.push_back(row);
            continue;
        }
        std::string text((std::istreambuf_iterator<char>(in)),
                         std::istreambuf_iterator<char>());
        try {
            TaxonomyTree generated = parse_tree_text(text);
            MetricReport report =
                evaluate_pair(*inst.gold_tree, generated, *embedder, *chunker);
            if (with_judge)
                report.judge = llm_judge(*inst.gold_tree, generated, *gateway, judge_model);
            reports.push_back(report);
            row.report = std::move(report);
        } catch (const std::exception& e) {
            std::cerr << "warning: " << inst.instance_id << ": " << e.what() << "\n";
        }
        rows.push_back(std::move(row));
    }
    if (reports.empty()) {
        std::cerr << "evaluate: no instance could be scored\n";
        return 1;
    }
    MetricReport aggregate = aggregate_reports(reports);
    fs::path reports_dir = fs::path(opt.out_dir) / "reports";
    fs::create_directories(reports_dir);
    std::string base = (reports_dir / run_id).string();
    write_report_files(base, rows, aggregate);
    std::cout << "aggregate: delta=" << aggregate.delta << " bleu2=" << aggregate.bleu2
              << " rouge_l=" << aggregate.rouge_l << " bertscore=" << aggregate.embed_score
              << " nsr=" << aggregate.nsr << " ner=" << aggregate.ner;
    if (aggregate.judge) std::cout << " judge=" << *aggregate.judge;
    std::cout << "\nwrote " << base << ".json and " << base << ".csv\n";
    return 0;
}

int cmd_stats(const CommonOptions& opt) {
    CorpusLoadResult corpus;
    try {
        corpus = load_corpus(opt.corpus_dir);
    } catch (const std::exception& e) {
        std::cerr << "stats: " << e.what() << "\n";
        return 1;
    }
    for (const auto& issue : corpus.issues)
        std::cerr << "warning: " << issue.file << ": " << issue.message << "\n";
    CorpusStats stats = corpus_stats(corpus.instances);
    std::cout << "Statistics\n";
    for (const auto& [split, count] : stats.count_per_split)
        std::cout << "  No. of taxonomies in " << split << " set: " << count << "\n";
    std::cout << "  Total no. of cited papers: " << stats.total_references << "\n"
              << "  Mean references per taxonomy: " << stats.mean_references_per_instance
              << "\n"
              << "  % of available cited papers: "
              << 100.0 * stats.reference_availability_fraction << " %\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Scholarly taxonomy generation and evaluation"};
    app.require_subcommand(1);

    CommonOptions opt;
    PipelineConfig pipeline_config;
    std::string outline_dir;
    bool require_references = false;
    std::string split = "test";
    bool with_judge = false;
    std::string judge_model = "judge-model";
    std::string run_id = "report";

    auto* extract = app.add_subcommand("extract", "Build gold trees from outline files");
    extract->add_option("outline_dir", outline_dir, "Directory of outline JSON files")
        ->required();
    extract->add_flag("--require-references", require_references,
                      "Drop headings without reference papers");
    extract->add_option("--split", split, "Split label for written instances");
    add_common_flags(extract, opt);

    auto* generate = app.add_subcommand("generate", "Run the three-phase pipeline");
    add_common_flags(generate, opt);
    generate->add_option("--slice-model", pipeline_config.slice_model, "Knowledge-slice model id");
    generate->add_option("--verbalize-model", pipeline_config.verbalize_model,
                         "Verbalization model id");
    generate->add_option("--refine-model", pipeline_config.refine_model, "Refinement model id");
    generate->add_option("--context-budget", pipeline_config.input_context_budget,
                         "Approximate token budget for pooled slices");
    generate->add_flag("--alpaca", pipeline_config.alpaca_verbalization,
                       "Send the verbalization prompt in single-string instruction format");

    auto* evaluate = app.add_subcommand("evaluate", "Score generated trees against gold trees");
    add_common_flags(evaluate, opt);
    evaluate->add_flag("--judge", with_judge, "Fill the LLM-judge column");
    evaluate->add_option("--judge-model", judge_model, "Judge model id");
    evaluate->add_option("--run-id", run_id, "Report file base name");

    auto* judge = app.add_subcommand("judge", "evaluate --judge alias");
    add_common_flags(judge, opt);
    judge->add_option("--judge-model", judge_model, "Judge model id");
    judge->add_option("--run-id", run_id, "Report file base name");

    auto* stats = app.add_subcommand("stats", "Print corpus statistics");
    add_common_flags(stats, opt);

    CLI11_PARSE(app, argc, argv);

    try {
        if (extract->parsed()) return cmd_extract(outline_dir, opt, require_references, split);
        if (generate->parsed()) return cmd_generate(opt, pipeline_config);
        if (evaluate->parsed()) return cmd_evaluate(opt, with_judge, judge_model, run_id);
        if (judge->parsed()) return cmd_evaluate(opt, true, judge_model, run_id);
        if (stats->parsed()) return cmd_stats(opt);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

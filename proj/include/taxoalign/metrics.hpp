#pragma once

#include "taxoalign/gateway.hpp"
#include "taxoalign/providers.hpp"
#include "taxoalign/tree.hpp"

#include <optional>
#include <string>
#include <vector>

namespace taxoalign {

/// Level-order labels lowered and tokenized into a flat token list.
struct TokenSequence {
    std::vector<std::string> tokens;
};

TokenSequence tree_token_sequence(const TaxonomyTree& tree);

/// Pooled 1-/2-gram counts, kept so corpus BLEU can be re-derived from
/// per-instance reports without re-tokenizing.
struct BleuCounts {
    std::size_t match1 = 0, total1 = 0;
    std::size_t match2 = 0, total2 = 0;
    std::size_t ref_len = 0, hyp_len = 0;

    BleuCounts& operator+=(const BleuCounts& other);
    double score() const;
};

BleuCounts bleu2_counts(const TokenSequence& gold, const TokenSequence& generated);

struct MetricReport {
    double delta = 0;          // average degree score
    double bleu2 = 0;
    double rouge_l = 0;
    double embed_score = 0;    // BERTScore slot
    double nsr = 0;
    double ner = 0;
    std::optional<double> judge; // integer 1..5 per instance, mean in aggregates
    BleuCounts bleu_counts;    // pooled on aggregation
};

/// Degree-sum ratio generated / gold; 1 is ideal, > 1 means the generated
/// tree is more branched out. Throws DegenerateTree on single-node input.
double average_degree_score(const TaxonomyTree& gold, const TaxonomyTree& generated);

/// Corpus BLEU with uniform weights over 1- and 2-grams: clipped matches
/// pooled across the corpus, geometric mean of the two precisions, corpus
/// brevity penalty. No smoothing.
double bleu2_corpus(const std::vector<TokenSequence>& gold_seqs,
                    const std::vector<TokenSequence>& generated_seqs);

/// Mean over pairs of the LCS F-measure (beta = 1).
double rouge_l_corpus(const std::vector<TokenSequence>& gold_seqs,
                      const std::vector<TokenSequence>& generated_seqs);

/// Greedy token-embedding matching F1 averaged over pairs; negative cosines
/// are floored at 0.
double embed_score_corpus(const std::vector<TokenSequence>& gold_seqs,
                          const std::vector<TokenSequence>& generated_seqs,
                          Embedder& embedder);
double embed_score_pair(const TokenSequence& gold, const TokenSequence& generated,
                        Embedder& embedder);

struct NsrOptions {
    bool deduplicate_union = false; // default is multiset concatenation
};

/// Similarity-discounted label count: sum_i 1 / (n * sum_j Sim(l_i, l_j)),
/// cosines floored at 0 so each inner sum is >= 1.
double soft_cardinality(const std::vector<std::string>& labels, Embedder& embedder);

/// (c(gold) + c(generated) - c(union)) / c(generated) over level-order label
/// lists; unbounded above 1.
double node_soft_recall(const TaxonomyTree& gold, const TaxonomyTree& generated,
                        Embedder& embedder, const NsrOptions& options = {});

/// Fraction of gold-tree noun phrases that also occur in the generated tree.
/// Throws NoGoldEntities when the gold tree yields no phrases.
double node_entity_recall(const TaxonomyTree& gold, const TaxonomyTree& generated,
                          Chunker& chunker);

/// Fills the judge rubric prompt with both serialized trees and parses the
/// first integer 1..5 from the completion.
int llm_judge(const TaxonomyTree& gold, const TaxonomyTree& generated, Gateway& gateway,
              const std::string& model_id);

/// Evaluates one gold/generated pair with every metric except the judge.
MetricReport evaluate_pair(const TaxonomyTree& gold, const TaxonomyTree& generated,
                           Embedder& embedder, Chunker& chunker);

/// Corpus aggregate: arithmetic means everywhere except BLEU-2, which is
/// recomputed from the pooled counts.
MetricReport aggregate_reports(const std::vector<MetricReport>& reports);

} // namespace taxoalign

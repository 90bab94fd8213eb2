#include "taxoalign/metrics.hpp"
#include "taxoalign/errors.hpp"
#include "taxoalign/prompts.hpp"
#include "taxoalign/text.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

namespace taxoalign {

TokenSequence tree_token_sequence(const TaxonomyTree& tree) {
    TokenSequence seq;
    for (const auto& label : tree.level_order()) {
        auto toks = tokenize(label);
        seq.tokens.insert(seq.tokens.end(), toks.begin(), toks.end());
    }
    return seq;
}

double average_degree_score(const TaxonomyTree& gold, const TaxonomyTree& generated) {
    if (gold.node_count() < 2 || generated.node_count() < 2)
        throw DegenerateTree("single-node tree has degree sum 0");
    return double(generated.degree_sum()) / double(gold.degree_sum());
}

namespace {

using Ngram = std::vector<std::string>;

std::map<Ngram, std::size_t> ngram_counts(const std::vector<std::string>& tokens, std::size_t n) {
    std::map<Ngram, std::size_t> counts;
    if (tokens.size() < n) return counts;
    for (std::size_t i = 0; i + n <= tokens.size(); ++i)
        ++counts[Ngram(tokens.begin() + i, tokens.begin() + i + n)];
    return counts;
}

std::size_t lcs_length(const std::vector<std::string>& a, const std::vector<std::string>& b) {
    std::vector<std::size_t> prev(b.size() + 1, 0), curr(b.size() + 1, 0);
    for (std::size_t i = 1; i <= a.size(); ++i) {
        for (std::size_t j = 1; j <= b.size(); ++j)
            curr[j] = a[i - 1] == b[j - 1] ? prev[j - 1] + 1 : std::max(prev[j], curr[j - 1]);
        std::swap(prev, curr);
    }
    return prev[b.size()];
}

void require_paired(const std::vector<TokenSequence>& gold,
                    const std::vector<TokenSequence>& generated) {
    if (gold.empty() || gold.size() != generated.size())
        throw EmptyCorpus("need equal-length non-empty sequence lists");
}

} // namespace

BleuCounts& BleuCounts::operator+=(const BleuCounts& other) {
    match1 += other.match1;
    total1 += other.total1;
    match2 += other.match2;
    total2 += other.total2;
    ref_len += other.ref_len;
    hyp_len += other.hyp_len;
    return *this;
}

double BleuCounts::score() const {
    if (total1 == 0 || total2 == 0 || match1 == 0 || match2 == 0) return 0.0;
    double p1 = double(match1) / double(total1);
    double p2 = double(match2) / double(total2);
    double bp = hyp_len >= ref_len
                    ? 1.0
                    : std::exp(1.0 - double(ref_len) / double(hyp_len));
    return bp * std::exp(0.5 * (std::log(p1) + std::log(p2)));
}

BleuCounts bleu2_counts(const TokenSequence& gold, const TokenSequence& generated) {
    BleuCounts c;
    c.ref_len = gold.tokens.size();
    c.hyp_len = generated.tokens.size();
    for (std::size_t n = 1; n <= 2; ++n) {
        auto ref = ngram_counts(gold.tokens, n);
        auto hyp = ngram_counts(generated.tokens, n);
        std::size_t matched = 0, total = 0;
        for (const auto& [gram, count] : hyp) {
            total += count;
            auto it = ref.find(gram);
            if (it != ref.end()) matched += std::min(count, it->second); // clipped
        }
        if (n == 1) {
            c.match1 = matched;
            c.total1 = total;
        } else {
            c.match2 = matched;
            c.total2 = total;
        }
    }
    return c;
}

double bleu2_corpus(const std::vector<TokenSequence>& gold_seqs,
                    const std::vector<TokenSequence>& generated_seqs) {
    require_paired(gold_seqs, generated_seqs);
    BleuCounts pooled;
    for (std::size_t i = 0; i < gold_seqs.size(); ++i)
        pooled += bleu2_counts(gold_seqs[i], generated_seqs[i]);
    return pooled.score();
}

double rouge_l_corpus(const std::vector<TokenSequence>& gold_seqs,
                      const std::vector<TokenSequence>& generated_seqs) {
    require_paired(gold_seqs, generated_seqs);
    double sum = 0;
    for (std::size_t i = 0; i < gold_seqs.size(); ++i) {
        const auto& gold = gold_seqs[i].tokens;
        const auto& hyp = generated_seqs[i].tokens;
        double f = 0;
        if (!gold.empty() && !hyp.empty()) {
            double lcs = double(lcs_length(gold, hyp));
            double p = lcs / double(hyp.size());
            double r = lcs / double(gold.size());
            f = (p + r) > 0 ? 2 * p * r / (p + r) : 0.0;
        }
        sum += f;
    }
    return sum / double(gold_seqs.size());
}

namespace {

double clamped_cosine(const EmbeddingVector& a, const EmbeddingVector& b) {
    return std::max(0.0, cosine(a, b));
}

} // namespace

double embed_score_pair(const TokenSequence& gold, const TokenSequence& generated,
                        Embedder& embedder) {
    if (gold.tokens.empty() || generated.tokens.empty()) return 0.0;
    auto gold_vecs = embedder.embed_texts(gold.tokens);
    auto gen_vecs = embedder.embed_texts(generated.tokens);

    auto greedy = [&](const std::vector<EmbeddingVector>& from,
                      const std::vector<EmbeddingVector>& against) {
        double sum = 0;
        for (const auto& v : from) {
            double best = 0;
            for (const auto& w : against) best = std::max(best, clamped_cosine(v, w));
            sum += best;
        }
        return sum / double(from.size());
    };
    double recall = greedy(gold_vecs, gen_vecs);
    double precision = greedy(gen_vecs, gold_vecs);
    return (precision + recall) > 0 ? 2 * precision * recall / (precision + recall) : 0.0;
}

double embed_score_corpus(const std::vector<TokenSequence>& gold_seqs,
                          const std::vector<TokenSequence>& generated_seqs,
                          Embedder& embedder) {
    require_paired(gold_seqs, generated_seqs);
    double sum = 0;
    for (std::size_t i = 0; i < gold_seqs.size(); ++i)
        sum += embed_score_pair(gold_seqs[i], generated_seqs[i], embedder);
    return sum / double(gold_seqs.size());
}

double soft_cardinality(const std::vector<std::string>& labels, Embedder& embedder) {
    if (labels.empty()) throw EmptyCorpus("soft cardinality of an empty label list");
    auto vecs = embedder.embed_texts(labels);
    const double n = double(labels.size());
    double c = 0;
    for (std::size_t i = 0; i < vecs.size(); ++i) {
        double inner = 0;
        for (std::size_t j = 0; j < vecs.size(); ++j)
            inner += i == j ? 1.0 : clamped_cosine(vecs[i], vecs[j]);
        if (inner <= 0) throw NonPositiveInnerSum("inner similarity sum <= 0");
        c += 1.0 / (n * inner);
    }
    return c;
}

double node_soft_recall(const TaxonomyTree& gold, const TaxonomyTree& generated,
                        Embedder& embedder, const NsrOptions& options) {
    auto gold_labels = gold.level_order();
    auto gen_labels = generated.level_order();
    std::vector<std::string> combined = gold_labels;
    combined.insert(combined.end(), gen_labels.begin(), gen_labels.end());
    if (options.deduplicate_union) {
        std::vector<std::string> unique;
        std::set<std::string> seen;
        for (auto& l : combined)
            if (seen.insert(normalize_whitespace(l)).second) unique.push_back(l);
        combined = std::move(unique);
    }
    double c_gold = soft_cardinality(gold_labels, embedder);
    double c_gen = soft_cardinality(gen_labels, embedder);
    double c_union = soft_cardinality(combined, embedder);
    return (c_gold + c_gen - c_union) / c_gen;
}

double node_entity_recall(const TaxonomyTree& gold, const TaxonomyTree& generated,
                          Chunker& chunker) {
    auto entities = [&](const TaxonomyTree& t) {
        NounPhraseSet set;
        for (const auto& label : t.level_order()) {
            auto chunks = chunker.chunk_noun_phrases(label);
            for (const auto& p : chunks) set.insert(normalize_whitespace(p));
        }
        return set;
    };
    auto gold_ents = entities(gold);
    if (gold_ents.empty()) throw NoGoldEntities("gold tree yields no noun phrases");
    auto gen_ents = entities(generated);
    std::size_t common = 0;
    for (const auto& e : gold_ents) common += gen_ents.count(e);
    return double(common) / double(gold_ents.size());
}

int llm_judge(const TaxonomyTree& gold, const TaxonomyTree& generated, Gateway& gateway,
              const std::string& model_id) {
    ChatRequest request;
    request.model_id = model_id;
    request.user_content = fill_template(prompts::judge(),
                                         {{"gold_tree", serialize_tree(gold)},
                                          {"generated_tree", serialize_tree(generated)}});
    ChatResponse response = gateway.chat_complete(request);

    // first integer in 1..5 wins
    const std::string& text = response.text;
    for (std::size_t i = 0; i < text.size(); ++i) {
        if (!std::isdigit(static_cast<unsigned char>(text[i]))) continue;
        bool multi_digit = i + 1 < text.size() &&
                           std::isdigit(static_cast<unsigned char>(text[i + 1]));
        if (multi_digit) {
            while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
            continue;
        }
        int value = text[i] - '0';
        if (value >= 1 && value <= 5) return value;
    }
    throw UnparseableJudgeResponse("no integer 1..5 in: " + text);
}

MetricReport evaluate_pair(const TaxonomyTree& gold, const TaxonomyTree& generated,
                           Embedder& embedder, Chunker& chunker) {
    MetricReport r;
    r.delta = average_degree_score(gold, generated);
    auto gold_seq = tree_token_sequence(gold);
    auto gen_seq = tree_token_sequence(generated);
    r.bleu_counts = bleu2_counts(gold_seq, gen_seq);
    r.bleu2 = r.bleu_counts.score();
    r.rouge_l = rouge_l_corpus({gold_seq}, {gen_seq});
    r.embed_score = embed_score_pair(gold_seq, gen_seq, embedder);
    r.nsr = node_soft_recall(gold, generated, embedder);
    r.ner = node_entity_recall(gold, generated, chunker);
    return r;
}

MetricReport aggregate_reports(const std::vector<MetricReport>& reports) {
    if (reports.empty()) throw EmptyCorpus("no reports to aggregate");
    MetricReport agg;
    double judge_sum = 0;
    std::size_t judge_count = 0;
    for (const auto& r : reports) {
        agg.delta += r.delta;
        agg.rouge_l += r.rouge_l;
        agg.embed_score += r.embed_score;
        agg.nsr += r.nsr;
        agg.ner += r.ner;
        agg.bleu_counts += r.bleu_counts;
        if (r.judge) {
            judge_sum += *r.judge;
            ++judge_count;
        }
    }
    const double n = double(reports.size());
    agg.delta /= n;
    agg.rouge_l /= n;
    agg.embed_score /= n;
    agg.nsr /= n;
    agg.ner /= n;
    agg.bleu2 = agg.bleu_counts.score(); // pooled, not averaged
    if (judge_count > 0) agg.judge = judge_sum / double(judge_count);
    return agg;
}

} // namespace taxoalign

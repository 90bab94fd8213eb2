#include "taxoalign/providers.hpp"
#include "taxoalign/errors.hpp"
#include "taxoalign/text.hpp"

#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <random>

#include <nlohmann/json.hpp>

#ifdef TAXOALIGN_WITH_HTTP
#include <httplib.h>
#endif

namespace taxoalign {

double cosine(const EmbeddingVector& a, const EmbeddingVector& b) {
    if (a.dimension() != b.dimension())
        throw ProviderUnavailable("embedding dimension mismatch");
    double dot = 0, na = 0, nb = 0;
    for (std::size_t i = 0; i < a.values.size(); ++i) {
        dot += a.values[i] * b.values[i];
        na += a.values[i] * a.values[i];
        nb += b.values[i] * b.values[i];
    }
    if (na == 0 || nb == 0) throw ProviderUnavailable("zero embedding vector");
    return dot / (std::sqrt(na) * std::sqrt(nb));
}

EmbeddingVector Embedder::embed(const std::string& text) {
    return embed_texts({text}).front();
}

namespace {

std::uint64_t fnv1a64(const std::string& s) {
    std::uint64_t h = 14695981039346656037ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

void require_non_empty(const std::vector<std::string>& texts) {
    for (const auto& t : texts)
        if (normalize_whitespace(t).empty()) throw EmptyText("empty input text");
}

} // namespace

HashEmbedder::HashEmbedder(std::size_t dimension) : dim_(dimension) {}

std::vector<EmbeddingVector> HashEmbedder::embed_texts(const std::vector<std::string>& texts) {
    require_non_empty(texts);
    std::vector<EmbeddingVector> out;
    out.reserve(texts.size());
    for (const auto& t : texts) {
        std::mt19937_64 rng(fnv1a64(normalize_whitespace(t)));
        std::normal_distribution<double> gauss(0.0, 1.0);
        EmbeddingVector v;
        v.values.resize(dim_);
        double norm = 0;
        for (auto& x : v.values) {
            x = gauss(rng);
            norm += x * x;
        }
        norm = std::sqrt(norm);
        for (auto& x : v.values) x /= norm;
        out.push_back(std::move(v));
    }
    return out;
}

BasisEmbedder::BasisEmbedder(std::size_t capacity) : capacity_(capacity) {}

std::vector<EmbeddingVector> BasisEmbedder::embed_texts(const std::vector<std::string>& texts) {
    require_non_empty(texts);
    std::vector<EmbeddingVector> out;
    for (const auto& t : texts) {
        std::string key = normalize_whitespace(t);
        auto [it, inserted] = index_.try_emplace(key, index_.size());
        if (inserted && it->second >= capacity_)
            throw ProviderUnavailable("basis embedder capacity exhausted");
        EmbeddingVector v;
        v.values.assign(capacity_, 0.0);
        v.values[it->second] = 1.0;
        out.push_back(std::move(v));
    }
    return out;
}

FileEmbedder::FileEmbedder(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ProviderUnavailable("cannot open vectors file: " + path);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto j = nlohmann::json::parse(line);
        EmbeddingVector v;
        v.values = j.at("vector").get<std::vector<double>>();
        table_[normalize_whitespace(j.at("text").get<std::string>())] = std::move(v);
    }
}

std::vector<EmbeddingVector> FileEmbedder::embed_texts(const std::vector<std::string>& texts) {
    require_non_empty(texts);
    std::vector<EmbeddingVector> out;
    for (const auto& t : texts) {
        auto it = table_.find(normalize_whitespace(t));
        if (it == table_.end())
            throw ProviderUnavailable("no precomputed vector for: " + t);
        out.push_back(it->second);
    }
    return out;
}

RemoteEmbedder::RemoteEmbedder(RemoteEmbedderConfig config) : config_(std::move(config)) {}

std::vector<EmbeddingVector> RemoteEmbedder::embed_texts(const std::vector<std::string>& texts) {
    require_non_empty(texts);
#ifndef TAXOALIGN_WITH_HTTP
    throw ProviderUnavailable("built without HTTP support");
#else
    nlohmann::json body;
    body["model"] = config_.model;
    body["input"] = texts;
    httplib::Client client(config_.base_url);
    httplib::Headers headers;
    if (!config_.auth_token_env.empty()) {
        const char* token = std::getenv(config_.auth_token_env.c_str());
        if (token) headers.emplace("Authorization", std::string("Bearer ") + token);
    }
    auto res = client.Post("/v1/embeddings", headers, body.dump(), "application/json");
    if (!res || res->status != 200)
        throw ProviderUnavailable("embedding endpoint error: " +
                                  (res ? std::to_string(res->status) : "no response"));
    auto j = nlohmann::json::parse(res->body);
    std::vector<EmbeddingVector> out(texts.size());
    for (const auto& item : j.at("data")) {
        std::size_t idx = item.at("index").get<std::size_t>();
        out.at(idx).values = item.at("embedding").get<std::vector<double>>();
    }
    for (const auto& v : out)
        if (v.values.empty()) throw ProviderUnavailable("missing embedding in response");
    return out;
#endif
}

NounPhraseSet HeuristicChunker::chunk_noun_phrases(const std::string& text) {
    NounPhraseSet phrases;
    std::vector<std::string> run;
    auto flush = [&] {
        if (run.empty()) return;
        std::string phrase = run.front();
        for (std::size_t i = 1; i < run.size(); ++i) phrase += " " + run[i];
        phrases.insert(phrase);
        run.clear();
    };
    // split into word / separator segments; punctuation splits runs too
    std::string word;
    auto end_word = [&] {
        if (word.empty()) return;
        if (is_stopword(word))
            flush();
        else
            run.push_back(word);
        word.clear();
    };
    for (unsigned char c : to_lower(text)) {
        if (std::isalnum(c) || c == '-') {
            word += static_cast<char>(c);
        } else if (std::isspace(c)) {
            end_word();
        } else {
            end_word();
            flush();
        }
    }
    end_word();
    flush();
    return phrases;
}

FileChunker::FileChunker(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ProviderUnavailable("cannot open chunks file: " + path);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto j = nlohmann::json::parse(line);
        NounPhraseSet set;
        for (const auto& p : j.at("phrases")) {
            std::string phrase = normalize_whitespace(p.get<std::string>());
            if (!phrase.empty()) set.insert(phrase);
        }
        table_[normalize_whitespace(j.at("text").get<std::string>())] = std::move(set);
    }
}

NounPhraseSet FileChunker::chunk_noun_phrases(const std::string& text) {
    auto it = table_.find(normalize_whitespace(text));
    if (it == table_.end())
        throw ProviderUnavailable("no precomputed chunks for: " + text);
    return it->second;
}

} // namespace taxoalign

#pragma once

#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

namespace taxoalign {

struct EmbeddingVector {
    std::vector<double> values;
    std::size_t dimension() const { return values.size(); }
};

/// Cosine similarity; throws ProviderUnavailable on a zero vector.
double cosine(const EmbeddingVector& a, const EmbeddingVector& b);

using NounPhraseSet = std::set<std::string>;

/// Text-embedding backend. All vectors from one provider share a dimension;
/// embed_texts is deterministic and order-preserving.
class Embedder {
public:
    virtual ~Embedder() = default;
    virtual std::vector<EmbeddingVector> embed_texts(const std::vector<std::string>& texts) = 0;
    EmbeddingVector embed(const std::string& text);
};

/// Deterministic test embedder: each distinct (whitespace-normalized) string
/// maps to a pseudo-random unit vector seeded by its hash.
class HashEmbedder : public Embedder {
public:
    explicit HashEmbedder(std::size_t dimension = 64);
    std::vector<EmbeddingVector> embed_texts(const std::vector<std::string>& texts) override;

private:
    std::size_t dim_;
};

/// Test embedder where distinct strings get exactly orthogonal one-hot
/// vectors (assigned by first appearance) and equal strings get equal ones.
class BasisEmbedder : public Embedder {
public:
    explicit BasisEmbedder(std::size_t capacity = 1024);
    std::vector<EmbeddingVector> embed_texts(const std::vector<std::string>& texts) override;

private:
    std::size_t capacity_;
    std::map<std::string, std::size_t> index_;
};

/// Reads a JSON-lines file of {"text": str, "vector": [float]} records.
class FileEmbedder : public Embedder {
public:
    explicit FileEmbedder(const std::string& path);
    std::vector<EmbeddingVector> embed_texts(const std::vector<std::string>& texts) override;

private:
    std::map<std::string, EmbeddingVector> table_;
};

struct RemoteEmbedderConfig {
    std::string base_url;      // e.g. http://localhost:8080
    std::string model;
    std::string auth_token_env; // name of the env var holding the token
};

/// POSTs {"model", "input": [...]} to <base_url>/v1/embeddings.
class RemoteEmbedder : public Embedder {
public:
    explicit RemoteEmbedder(RemoteEmbedderConfig config);
    std::vector<EmbeddingVector> embed_texts(const std::vector<std::string>& texts) override;

private:
    RemoteEmbedderConfig config_;
};

/// Noun-phrase chunking backend.
class Chunker {
public:
    virtual ~Chunker() = default;
    virtual NounPhraseSet chunk_noun_phrases(const std::string& text) = 0;
};

/// Splits on stopwords and punctuation, keeping maximal runs of content
/// words, lowercased.
class HeuristicChunker : public Chunker {
public:
    NounPhraseSet chunk_noun_phrases(const std::string& text) override;
};

/// Reads a JSON-lines file of {"text": str, "phrases": [str]} records.
class FileChunker : public Chunker {
public:
    explicit FileChunker(const std::string& path);
    NounPhraseSet chunk_noun_phrases(const std::string& text) override;

private:
    std::map<std::string, NounPhraseSet> table_;
};

} // namespace taxoalign

#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "ticket/preprocess.hpp"

namespace ticket {

struct SparseEntry {
    std::uint32_t col;
    double weight;
};

// L2-normalized sparse row; columns strictly increasing, weights > 0.
struct SparseVector {
    std::vector<SparseEntry> entries;

    double dot(const SparseVector& other) const;
    double value_at(std::uint32_t col) const;  // 0 when absent
    double l2_norm() const;
    bool empty() const { return entries.empty(); }
};

// Frozen text -> vector contract: vocabulary in lexicographic order plus the
// idf weights and the selection mask.
struct FeatureSpace {
    std::vector<std::string> terms;
    std::unordered_map<std::string, std::uint32_t> term_index;
    std::vector<std::uint64_t> doc_freq;
    std::uint64_t n_docs = 0;
    std::vector<double> idf;           // ln((1 + n_docs)/(1 + df)) + 1
    std::vector<std::uint32_t> mask;   // sorted selected columns

    std::size_t size() const { return terms.size(); }
    bool is_selected(std::uint32_t col) const;
    void rebuild_index();
};

struct DesignMatrix {
    std::vector<SparseVector> rows;
    std::vector<int> labels;
    std::size_t n_features = 0;
    int n_classes = 0;
};

// Builds the vocabulary from terms appearing in at least min_df documents.
// Document frequency counts presence, not occurrences.
FeatureSpace fit_feature_space(const std::vector<TokenDoc>& docs, std::uint64_t min_df = 1);

// Term-count x idf over in-vocabulary, in-mask terms, then L2-normalized.
// Unknown-only documents map to the empty (zero) vector.
SparseVector vectorize(const TokenDoc& doc, const FeatureSpace& space);

DesignMatrix vectorize_matrix(const std::vector<TokenDoc>& docs, const std::vector<int>& labels,
                              const FeatureSpace& space, int n_classes);

// Per-term chi-square score: one-vs-rest 2x2 presence tables per class,
// max-pooled across classes. Degenerate marginals score 0.
std::vector<double> chi2_scores(const std::vector<TokenDoc>& docs, const std::vector<int>& labels,
                                const FeatureSpace& space, int n_classes);

// Keeps the k highest-scoring columns (ties to the lexicographically smaller
// term). The mask filters columns; indices are never re-numbered.
FeatureSpace select_top_k(const FeatureSpace& space, const std::vector<double>& scores, std::size_t k);

}  // namespace ticket

#include "ticket/features.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <stdexcept>
#include <unordered_set>

namespace ticket {

double SparseVector::dot(const SparseVector& other) const {
    double sum = 0.0;
    std::size_t i = 0, j = 0;
    while (i < entries.size() && j < other.entries.size()) {
        if (entries[i].col == other.entries[j].col) {
            sum += entries[i].weight * other.entries[j].weight;
            ++i;
            ++j;
        } else if (entries[i].col < other.entries[j].col) {
            ++i;
        } else {
            ++j;
        }
    }
    return sum;
}

double SparseVector::value_at(std::uint32_t col) const {
    auto it = std::lower_bound(entries.begin(), entries.end(), col,
                               [](const SparseEntry& e, std::uint32_t c) { return e.col < c; });
    if (it != entries.end() && it->col == col) return it->weight;
    return 0.0;
}

double SparseVector::l2_norm() const {
    double sum = 0.0;
    for (const auto& e : entries) sum += e.weight * e.weight;
    return std::sqrt(sum);
}

bool FeatureSpace::is_selected(std::uint32_t col) const {
    if (mask.size() == terms.size()) return true;
    return std::binary_search(mask.begin(), mask.end(), col);
}

void FeatureSpace::rebuild_index() {
    term_index.clear();
    term_index.reserve(terms.size());
    for (std::uint32_t i = 0; i < terms.size(); ++i) term_index.emplace(terms[i], i);
}

FeatureSpace fit_feature_space(const std::vector<TokenDoc>& docs, std::uint64_t min_df) {
    if (min_df < 1) throw std::invalid_argument("features: min_df must be >= 1");

    // std::map keeps the vocabulary in lexicographic order.
    std::map<std::string, std::uint64_t> df;
    for (const auto& doc : docs) {
        std::unordered_set<std::string> seen;
        for (const auto& token : doc) seen.insert(token);
        for (const auto& token : seen) df[token]++;
    }

    FeatureSpace space;
    space.n_docs = docs.size();
    for (const auto& [term, count] : df) {
        if (count < min_df) continue;
        space.terms.push_back(term);
        space.doc_freq.push_back(count);
    }
    if (space.terms.empty()) throw std::runtime_error("features: empty vocabulary after fitting");

    space.rebuild_index();
    space.idf.resize(space.terms.size());
    for (std::size_t t = 0; t < space.terms.size(); ++t) {
        space.idf[t] = std::log((1.0 + static_cast<double>(space.n_docs)) /
                                (1.0 + static_cast<double>(space.doc_freq[t]))) +
                       1.0;
    }
    space.mask.resize(space.terms.size());
    std::iota(space.mask.begin(), space.mask.end(), 0u);
    return space;
}

SparseVector vectorize(const TokenDoc& doc, const FeatureSpace& space) {
    std::unordered_map<std::uint32_t, double> counts;
    for (const auto& token : doc) {
        auto it = space.term_index.find(token);
        if (it == space.term_index.end()) continue;
        if (!space.is_selected(it->second)) continue;
        counts[it->second] += 1.0;
    }

    SparseVector v;
    v.entries.reserve(counts.size());
    for (const auto& [col, count] : counts) v.entries.push_back({col, count * space.idf[col]});
    std::sort(v.entries.begin(), v.entries.end(),
              [](const SparseEntry& a, const SparseEntry& b) { return a.col < b.col; });

    double norm = v.l2_norm();
    if (norm > 0.0)
        for (auto& e : v.entries) e.weight /= norm;
    return v;
}

DesignMatrix vectorize_matrix(const std::vector<TokenDoc>& docs, const std::vector<int>& labels,
                              const FeatureSpace& space, int n_classes) {
    if (docs.size() != labels.size())
        throw std::invalid_argument("features: docs/labels length mismatch");
    DesignMatrix m;
    m.rows.reserve(docs.size());
    for (const auto& doc : docs) m.rows.push_back(vectorize(doc, space));
    m.labels = labels;
    m.n_features = space.size();
    m.n_classes = n_classes;
    return m;
}

std::vector<double> chi2_scores(const std::vector<TokenDoc>& docs, const std::vector<int>& labels,
                                const FeatureSpace& space, int n_classes) {
    if (docs.size() != labels.size())
        throw std::invalid_argument("features: docs/labels length mismatch");
    if (n_classes < 2) throw std::invalid_argument("features: chi2 needs at least 2 classes");

    const std::size_t v = space.size();
    const std::size_t k = static_cast<std::size_t>(n_classes);
    const double n = static_cast<double>(docs.size());

    std::vector<std::uint64_t> class_count(k, 0);
    for (int label : labels) class_count.at(static_cast<std::size_t>(label))++;

    // presence[t*k + c] = number of class-c documents containing term t
    std::vector<std::uint64_t> presence(v * k, 0);
    for (std::size_t i = 0; i < docs.size(); ++i) {
        std::unordered_set<std::uint32_t> seen;
        for (const auto& token : docs[i]) {
            auto it = space.term_index.find(token);
            if (it != space.term_index.end()) seen.insert(it->second);
        }
        for (std::uint32_t col : seen)
            presence[static_cast<std::size_t>(col) * k + static_cast<std::size_t>(labels[i])]++;
    }

    std::vector<double> scores(v, 0.0);
    for (std::size_t t = 0; t < v; ++t) {
        std::uint64_t total_presence = 0;
        for (std::size_t c = 0; c < k; ++c) total_presence += presence[t * k + c];
        double best = 0.0;
        for (std::size_t c = 0; c < k; ++c) {
            const double a = static_cast<double>(presence[t * k + c]);
            const double b = static_cast<double>(total_presence) - a;
            const double cc = static_cast<double>(class_count[c]) - a;  // class docs lacking t
            const double d = n - a - b - cc;
            const double m1 = a + b, m2 = cc + d, m3 = a + cc, m4 = b + d;
            if (m1 <= 0.0 || m2 <= 0.0 || m3 <= 0.0 || m4 <= 0.0) continue;
            const double diff = a * d - b * cc;
            best = std::max(best, n * diff * diff / (m1 * m2 * m3 * m4));
        }
        scores[t] = best;
    }
    return scores;
}

FeatureSpace select_top_k(const FeatureSpace& space, const std::vector<double>& scores, std::size_t k) {
    if (scores.size() != space.size())
        throw std::invalid_argument("features: score vector length must match vocabulary");
    if (k < 1) throw std::invalid_argument("features: k must be >= 1");

    FeatureSpace out = space;
    if (k >= space.size()) {
        out.mask.resize(space.size());
        std::iota(out.mask.begin(), out.mask.end(), 0u);
        return out;
    }

    // Columns are in lexicographic term order, so the ascending-column
    // tie-break is exactly the lexicographic tie-break.
    std::vector<std::uint32_t> order(space.size());
    std::iota(order.begin(), order.end(), 0u);
    std::stable_sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
        if (scores[a] != scores[b]) return scores[a] > scores[b];
        return a < b;
    });
    out.mask.assign(order.begin(), order.begin() + static_cast<long>(k));
    std::sort(out.mask.begin(), out.mask.end());
    return out;
}

}  // namespace ticket

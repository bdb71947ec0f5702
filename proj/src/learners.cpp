#include "ticket/learners.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "ticket/rng.hpp"

namespace ticket {

int argmax_lowest(const std::vector<double>& values) {
    if (values.empty()) throw std::invalid_argument("argmax of empty vector");
    std::size_t best = 0;
    for (std::size_t i = 1; i < values.size(); ++i)
        if (values[i] > values[best]) best = i;
    return static_cast<int>(best);
}

int Model::predict(const SparseVector& query) const {
    return argmax_lowest(predict_distribution(query));
}

namespace {

void check_dims(const SparseVector& query, std::size_t n_features, const char* kind) {
    if (!query.entries.empty() && query.entries.back().col >= n_features)
        throw std::invalid_argument(std::string(kind) + ": query dimension exceeds feature space (" +
                                    std::to_string(query.entries.back().col + 1) + " > " +
                                    std::to_string(n_features) + ")");
}

std::vector<double> softmax(std::vector<double> scores) {
    double peak = *std::max_element(scores.begin(), scores.end());
    double sum = 0.0;
    for (double& s : scores) {
        s = std::exp(s - peak);
        sum += s;
    }
    for (double& s : scores) s /= sum;
    return scores;
}

}  // namespace

std::vector<double> MnbModel::predict_distribution(const SparseVector& query) const {
    check_dims(query, n_features, "mnb");
    std::vector<double> scores(log_priors);
    for (std::size_t c = 0; c < scores.size(); ++c)
        for (const auto& e : query.entries) scores[c] += e.weight * log_likelihoods[c][e.col];
    return softmax(std::move(scores));
}

double LinearModel::margin(int cls, const SparseVector& query) const {
    const auto& w = weights[static_cast<std::size_t>(cls)];
    double m = biases[static_cast<std::size_t>(cls)];
    for (const auto& e : query.entries) m += w[e.col] * e.weight;
    return m;
}

std::vector<double> LinearModel::predict_distribution(const SparseVector& query) const {
    if (!weights.empty()) check_dims(query, weights[0].size(), "linear");
    std::vector<double> scores(biases.size());
    for (std::size_t c = 0; c < scores.size(); ++c) scores[c] = margin(static_cast<int>(c), query);
    return softmax(std::move(scores));
}

std::vector<double> TreeModel::predict_distribution(const SparseVector& query) const {
    check_dims(query, n_features, "tree");
    std::size_t node = 0;
    while (nodes[node].feature >= 0) {
        double value = query.value_at(static_cast<std::uint32_t>(nodes[node].feature));
        node = static_cast<std::size_t>(value <= nodes[node].threshold ? nodes[node].left
                                                                       : nodes[node].right);
    }
    return nodes[node].dist;
}

int TreeModel::depth() const {
    // iterative depth over the preorder array
    std::vector<std::pair<std::size_t, int>> stack{{0, 0}};
    int deepest = 0;
    while (!stack.empty()) {
        auto [node, d] = stack.back();
        stack.pop_back();
        deepest = std::max(deepest, d);
        if (nodes[node].feature >= 0) {
            stack.push_back({static_cast<std::size_t>(nodes[node].left), d + 1});
            stack.push_back({static_cast<std::size_t>(nodes[node].right), d + 1});
        }
    }
    return deepest;
}

std::vector<double> KnnModel::predict_distribution(const SparseVector& query) const {
    check_dims(query, n_features, "knn");
    const std::size_t n = rows.size();
    std::vector<std::pair<double, std::size_t>> sims(n);
    for (std::size_t i = 0; i < n; ++i) sims[i] = {rows[i].dot(query), i};
    const std::size_t kk = static_cast<std::size_t>(k);
    std::partial_sort(sims.begin(), sims.begin() + static_cast<long>(kk), sims.end(),
                      [](const auto& a, const auto& b) {
                          if (a.first != b.first) return a.first > b.first;
                          return a.second < b.second;
                      });
    std::vector<double> dist(static_cast<std::size_t>(n_classes_), 0.0);
    for (std::size_t i = 0; i < kk; ++i)
        dist[static_cast<std::size_t>(labels[sims[i].second])] += 1.0 / static_cast<double>(kk);
    return dist;
}

std::string to_string(LearnerKind kind) {
    switch (kind) {
        case LearnerKind::mnb: return "mnb";
        case LearnerKind::logreg: return "logreg";
        case LearnerKind::svm: return "svm";
        case LearnerKind::knn: return "knn";
        case LearnerKind::dtree: return "dtree";
        case LearnerKind::stump: return "stump";
    }
    return "mnb";
}

LearnerKind learner_kind_from_string(const std::string& name) {
    if (name == "mnb") return LearnerKind::mnb;
    if (name == "logreg") return LearnerKind::logreg;
    if (name == "svm") return LearnerKind::svm;
    if (name == "knn") return LearnerKind::knn;
    if (name == "dtree") return LearnerKind::dtree;
    if (name == "stump") return LearnerKind::stump;
    throw std::runtime_error("learners: unknown learner kind '" + name + "'");
}

MnbModel train_mnb(const DesignMatrix& data, double alpha) {
    if (!(alpha > 0.0)) throw std::invalid_argument("mnb: alpha must be > 0");
    if (data.rows.empty()) throw std::invalid_argument("mnb: empty training data");

    const std::size_t k = static_cast<std::size_t>(data.n_classes);
    const std::size_t v = data.n_features;
    const double n = static_cast<double>(data.rows.size());

    std::vector<double> class_count(k, 0.0);
    std::vector<std::vector<double>> feature_mass(k, std::vector<double>(v, 0.0));
    std::vector<double> total_mass(k, 0.0);
    for (std::size_t i = 0; i < data.rows.size(); ++i) {
        const auto c = static_cast<std::size_t>(data.labels[i]);
        class_count[c] += 1.0;
        for (const auto& e : data.rows[i].entries) {
            feature_mass[c][e.col] += e.weight;
            total_mass[c] += e.weight;
        }
    }

    MnbModel model;
    model.n_features = v;
    model.log_priors.resize(k);
    model.log_likelihoods.assign(k, std::vector<double>(v));
    for (std::size_t c = 0; c < k; ++c) {
        model.log_priors[c] = class_count[c] > 0.0 ? std::log(class_count[c] / n) : kLogZero;
        const double denom = total_mass[c] + alpha * static_cast<double>(v);
        for (std::size_t t = 0; t < v; ++t)
            model.log_likelihoods[c][t] = std::log((feature_mass[c][t] + alpha) / denom);
    }
    return model;
}

double logreg_loss(const std::vector<std::vector<double>>& weights, const std::vector<double>& biases,
                   const DesignMatrix& data, double l2) {
    const std::size_t k = biases.size();
    const double n = static_cast<double>(data.rows.size());
    double loss = 0.0;
    std::vector<double> logits(k);
    for (std::size_t i = 0; i < data.rows.size(); ++i) {
        for (std::size_t c = 0; c < k; ++c) {
            double z = biases[c];
            for (const auto& e : data.rows[i].entries) z += weights[c][e.col] * e.weight;
            logits[c] = z;
        }
        double peak = *std::max_element(logits.begin(), logits.end());
        double sum = 0.0;
        for (double z : logits) sum += std::exp(z - peak);
        loss -= logits[static_cast<std::size_t>(data.labels[i])] - peak - std::log(sum);
    }
    loss /= n;
    double reg = 0.0;
    for (const auto& row : weights)
        for (double w : row) reg += w * w;
    return loss + 0.5 * l2 * reg;
}

void logreg_gradient(const std::vector<std::vector<double>>& weights, const std::vector<double>& biases,
                     const DesignMatrix& data, double l2,
                     std::vector<std::vector<double>>& grad_w, std::vector<double>& grad_b) {
    const std::size_t k = biases.size();
    const std::size_t v = data.n_features;
    const double n = static_cast<double>(data.rows.size());

    grad_w.assign(k, std::vector<double>(v, 0.0));
    grad_b.assign(k, 0.0);
    std::vector<double> logits(k);
    for (std::size_t i = 0; i < data.rows.size(); ++i) {
        for (std::size_t c = 0; c < k; ++c) {
            double z = biases[c];
            for (const auto& e : data.rows[i].entries) z += weights[c][e.col] * e.weight;
            logits[c] = z;
        }
        auto probs = [&] {
            double peak = *std::max_element(logits.begin(), logits.end());
            double sum = 0.0;
            std::vector<double> p(k);
            for (std::size_t c = 0; c < k; ++c) {
                p[c] = std::exp(logits[c] - peak);
                sum += p[c];
            }
            for (double& x : p) x /= sum;
            return p;
        }();
        for (std::size_t c = 0; c < k; ++c) {
            double residual = probs[c] - (data.labels[i] == static_cast<int>(c) ? 1.0 : 0.0);
            for (const auto& e : data.rows[i].entries) grad_w[c][e.col] += residual * e.weight / n;
            grad_b[c] += residual / n;
        }
    }
    for (std::size_t c = 0; c < k; ++c)
        for (std::size_t t = 0; t < v; ++t) grad_w[c][t] += l2 * weights[c][t];
}

LinearModel train_logreg(const DesignMatrix& data, double step, int epochs, double l2) {
    if (data.rows.empty()) throw std::invalid_argument("logreg: empty training data");
    const std::size_t k = static_cast<std::size_t>(data.n_classes);
    const std::size_t v = data.n_features;

    LinearModel model;
    model.link = LinearLink::softmax;
    model.weights.assign(k, std::vector<double>(v, 0.0));
    model.biases.assign(k, 0.0);

    std::vector<std::vector<double>> grad_w;
    std::vector<double> grad_b;
    for (int epoch = 1; epoch <= epochs; ++epoch) {
        double loss = logreg_loss(model.weights, model.biases, data, l2);
        if (!std::isfinite(loss))
            throw std::runtime_error("logreg: non-finite loss at epoch " + std::to_string(epoch));
        logreg_gradient(model.weights, model.biases, data, l2, grad_w, grad_b);
        for (std::size_t c = 0; c < k; ++c) {
            for (std::size_t t = 0; t < v; ++t) model.weights[c][t] -= step * grad_w[c][t];
            model.biases[c] -= step * grad_b[c];
        }
    }
    return model;
}

LinearModel train_svm(const DesignMatrix& data, double lambda, int epochs, std::uint64_t seed) {
    if (data.rows.empty()) throw std::invalid_argument("svm: empty training data");
    if (!(lambda > 0.0)) throw std::invalid_argument("svm: lambda must be > 0");
    const std::size_t k = static_cast<std::size_t>(data.n_classes);
    const std::size_t v = data.n_features;
    const std::size_t n = data.rows.size();

    LinearModel model;
    model.link = LinearLink::margin;
    model.weights.assign(k, std::vector<double>(v, 0.0));
    model.biases.assign(k, 0.0);

    const std::uint64_t steps = static_cast<std::uint64_t>(epochs) * n;
    for (std::size_t c = 0; c < k; ++c) {
        // w is kept as scale * direction so the per-step shrink is O(1)
        std::vector<double> direction(v, 0.0);
        double scale = 1.0;
        double bias = 0.0;
        Rng rng(derive_seed(seed, c));
        for (std::uint64_t t = 1; t <= steps; ++t) {
            const std::size_t i = static_cast<std::size_t>(rng.below(n));
            const double y = data.labels[i] == static_cast<int>(c) ? 1.0 : -1.0;
            double dot = 0.0;
            for (const auto& e : data.rows[i].entries) dot += direction[e.col] * e.weight;
            const double margin = y * (scale * dot + bias);
            const double rate = 1.0 / (lambda * static_cast<double>(t));

            scale *= 1.0 - 1.0 / static_cast<double>(t);
            if (scale == 0.0) {  // t == 1 zeroes the weight vector
                std::fill(direction.begin(), direction.end(), 0.0);
                scale = 1.0;
            }
            if (margin < 1.0) {
                const double coeff = rate * y / scale;
                for (const auto& e : data.rows[i].entries) direction[e.col] += coeff * e.weight;
                bias += rate * y;
            }
            if (!std::isfinite(scale) || !std::isfinite(bias))
                throw std::runtime_error("svm: non-finite parameters during training");
        }
        for (std::size_t t = 0; t < v; ++t) model.weights[c][t] = scale * direction[t];
        model.biases[c] = bias;
    }
    return model;
}

KnnModel train_knn(const DesignMatrix& data, int k) {
    if (k < 1) throw std::invalid_argument("knn: k must be >= 1");
    if (static_cast<std::size_t>(k) > data.rows.size())
        throw std::invalid_argument("knn: k (" + std::to_string(k) + ") exceeds training rows (" +
                                    std::to_string(data.rows.size()) + ")");
    KnnModel model;
    model.rows = data.rows;
    model.labels = data.labels;
    model.k = k;
    model.n_classes_ = data.n_classes;
    model.n_features = data.n_features;
    return model;
}

namespace {

struct TreeBuilder {
    const DesignMatrix& data;
    const std::vector<double>& weights;
    const TreeOptions& options;
    std::vector<std::uint32_t> universe;  // columns present in the training rows
    std::vector<std::int32_t> col_slot;   // column -> candidate slot for the current node
    Rng rng;
    std::vector<TreeNode> nodes;
    int k;

    TreeBuilder(const DesignMatrix& d, const std::vector<double>& w, const TreeOptions& o)
        : data(d), weights(w), options(o), col_slot(d.n_features, -1), rng(o.seed), k(d.n_classes) {
        std::vector<bool> present(data.n_features, false);
        for (const auto& row : data.rows)
            for (const auto& e : row.entries) present[e.col] = true;
        for (std::uint32_t col = 0; col < data.n_features; ++col)
            if (present[col]) universe.push_back(col);
    }

    std::vector<double> leaf_distribution(const std::vector<double>& class_w, double total_w) const {
        std::vector<double> dist(static_cast<std::size_t>(k), 0.0);
        if (total_w > 0.0) {
            for (std::size_t c = 0; c < dist.size(); ++c) dist[c] = class_w[c] / total_w;
        } else {
            for (double& d : dist) d = 1.0 / static_cast<double>(k);
        }
        return dist;
    }

    std::vector<std::uint32_t> candidate_features() {
        if (options.max_features == 0 || options.max_features >= universe.size()) return universe;
        std::vector<std::uint32_t> pool = universe;
        for (std::size_t i = 0; i < options.max_features; ++i) {
            std::size_t j = i + static_cast<std::size_t>(rng.below(pool.size() - i));
            std::swap(pool[i], pool[j]);
        }
        pool.resize(options.max_features);
        std::sort(pool.begin(), pool.end());
        return pool;
    }

    std::int32_t build(std::vector<std::size_t> rows, int depth) {
        std::vector<double> class_w(static_cast<std::size_t>(k), 0.0);
        double total_w = 0.0;
        for (std::size_t r : rows) {
            class_w[static_cast<std::size_t>(data.labels[r])] += weights[r];
            total_w += weights[r];
        }
        int live_classes = 0;
        for (double w : class_w)
            if (w > 0.0) ++live_classes;

        const bool stop = live_classes <= 1 || rows.size() < options.min_split ||
                          (options.max_depth > 0 && depth >= options.max_depth) || total_w <= 0.0;

        std::int32_t id = static_cast<std::int32_t>(nodes.size());
        nodes.emplace_back();
        if (stop) {
            nodes[static_cast<std::size_t>(id)].dist = leaf_distribution(class_w, total_w);
            return id;
        }

        double parent_quality = 0.0;  // sum of squared class weights over total
        for (double w : class_w) parent_quality += w * w;
        parent_quality /= total_w;

        // Bucket nonzero feature values by candidate column in one pass over
        // the node's sparse entries; rows absent from a bucket form the
        // column's zero block.
        const auto candidates = candidate_features();
        std::vector<std::vector<std::pair<double, std::size_t>>> buckets(candidates.size());
        for (std::size_t slot = 0; slot < candidates.size(); ++slot)
            col_slot[candidates[slot]] = static_cast<std::int32_t>(slot);
        for (std::size_t r : rows)
            for (const auto& e : data.rows[r].entries)
                if (col_slot[e.col] >= 0)
                    buckets[static_cast<std::size_t>(col_slot[e.col])].push_back({e.weight, r});
        for (std::uint32_t col : candidates) col_slot[col] = -1;

        double best_quality = parent_quality + 1e-12;
        std::int32_t best_feature = -1;
        double best_threshold = 0.0;

        std::vector<double> left_w(static_cast<std::size_t>(k));
        for (std::size_t slot = 0; slot < candidates.size(); ++slot) {
            auto& nonzero = buckets[slot];
            if (nonzero.empty()) continue;
            std::sort(nonzero.begin(), nonzero.end());

            // feature values are nonnegative, so the zero block sweeps first
            std::fill(left_w.begin(), left_w.end(), 0.0);
            double left_total = 0.0;
            double prev_value = 0.0;
            bool have_left = nonzero.size() < rows.size();  // zero block exists
            if (have_left) {
                for (std::size_t c = 0; c < left_w.size(); ++c) left_w[c] = class_w[c];
                left_total = total_w;
                for (const auto& [value, r] : nonzero) {
                    left_w[static_cast<std::size_t>(data.labels[r])] -= weights[r];
                    left_total -= weights[r];
                }
            }

            std::size_t i = 0;
            while (i < nonzero.size()) {
                const double value = nonzero[i].first;
                if (have_left) {
                    const double threshold = 0.5 * (prev_value + value);
                    const double right_total = total_w - left_total;
                    if (left_total > 0.0 && right_total > 0.0) {
                        double q_left = 0.0, q_right = 0.0;
                        for (std::size_t c = 0; c < left_w.size(); ++c) {
                            q_left += left_w[c] * left_w[c];
                            const double rw = class_w[c] - left_w[c];
                            q_right += rw * rw;
                        }
                        const double quality = q_left / left_total + q_right / right_total;
                        if (quality > best_quality) {
                            best_quality = quality;
                            best_feature = static_cast<std::int32_t>(candidates[slot]);
                            best_threshold = threshold;
                        }
                    }
                }
                while (i < nonzero.size() && nonzero[i].first == value) {
                    left_w[static_cast<std::size_t>(data.labels[nonzero[i].second])] +=
                        weights[nonzero[i].second];
                    left_total += weights[nonzero[i].second];
                    ++i;
                }
                prev_value = value;
                have_left = true;
            }
        }

        if (best_feature < 0) {
            nodes[static_cast<std::size_t>(id)].dist = leaf_distribution(class_w, total_w);
            return id;
        }

        std::vector<std::size_t> left_rows, right_rows;
        for (std::size_t r : rows) {
            if (data.rows[r].value_at(static_cast<std::uint32_t>(best_feature)) <= best_threshold)
                left_rows.push_back(r);
            else
                right_rows.push_back(r);
        }
        rows.clear();
        rows.shrink_to_fit();

        nodes[static_cast<std::size_t>(id)].feature = best_feature;
        nodes[static_cast<std::size_t>(id)].threshold = best_threshold;
        std::int32_t left = build(std::move(left_rows), depth + 1);
        std::int32_t right = build(std::move(right_rows), depth + 1);
        nodes[static_cast<std::size_t>(id)].left = left;
        nodes[static_cast<std::size_t>(id)].right = right;
        return id;
    }
};

}  // namespace

TreeModel train_tree(const DesignMatrix& data, const std::vector<double>& weights,
                     const TreeOptions& options) {
    if (data.rows.empty()) throw std::invalid_argument("tree: empty training data");
    if (weights.size() != data.rows.size())
        throw std::invalid_argument("tree: weight vector length must match rows");
    double sum = 0.0;
    for (double w : weights) {
        if (w < 0.0) throw std::invalid_argument("tree: negative instance weight");
        sum += w;
    }
    if (sum <= 0.0) throw std::invalid_argument("tree: all instance weights are zero");
    if (options.min_split < 2) throw std::invalid_argument("tree: min_split must be >= 2");

    TreeBuilder builder(data, weights, options);
    std::vector<std::size_t> rows(data.rows.size());
    std::iota(rows.begin(), rows.end(), std::size_t{0});
    builder.build(std::move(rows), 0);

    TreeModel model;
    model.nodes = std::move(builder.nodes);
    model.n_classes_ = data.n_classes;
    model.n_features = data.n_features;
    return model;
}

TreeModel train_tree(const DesignMatrix& data, const TreeOptions& options) {
    std::vector<double> uniform(data.rows.size(),
                                1.0 / static_cast<double>(data.rows.empty() ? 1 : data.rows.size()));
    return train_tree(data, uniform, options);
}

std::unique_ptr<Model> train_learner(const LearnerSpec& spec, const DesignMatrix& data) {
    switch (spec.kind) {
        case LearnerKind::mnb:
            return std::make_unique<MnbModel>(train_mnb(data, spec.alpha));
        case LearnerKind::logreg:
            return std::make_unique<LinearModel>(
                train_logreg(data, spec.step, spec.logreg_epochs, spec.l2));
        case LearnerKind::svm:
            return std::make_unique<LinearModel>(
                train_svm(data, spec.svm_lambda, spec.svm_epochs, spec.seed));
        case LearnerKind::knn:
            return std::make_unique<KnnModel>(train_knn(data, spec.knn_k));
        case LearnerKind::dtree: {
            TreeOptions options{spec.max_depth, static_cast<std::size_t>(spec.min_split),
                                static_cast<std::size_t>(spec.max_features), spec.seed};
            return std::make_unique<TreeModel>(train_tree(data, options));
        }
        case LearnerKind::stump: {
            TreeOptions options{1, 2, 0, spec.seed};
            return std::make_unique<TreeModel>(train_tree(data, options));
        }
    }
    throw std::logic_error("learners: unreachable learner kind");
}

}  // namespace ticket

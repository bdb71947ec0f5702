#include "ticket/ensembles.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ticket/rng.hpp"
#include "ticket/util.hpp"

namespace ticket {

std::string to_string(VoteMode mode) { return mode == VoteMode::hard ? "hard" : "soft"; }

VoteMode vote_mode_from_string(const std::string& name) {
    if (name == "hard") return VoteMode::hard;
    if (name == "soft") return VoteMode::soft;
    throw std::runtime_error("ensembles: unknown vote mode '" + name + "'");
}

namespace {

std::vector<double> aggregate(const std::vector<std::unique_ptr<Model>>& members, VoteMode vote,
                              int n_classes, const SparseVector& query) {
    std::vector<double> dist(static_cast<std::size_t>(n_classes), 0.0);
    const double share = 1.0 / static_cast<double>(members.size());
    for (const auto& member : members) {
        if (vote == VoteMode::soft) {
            const auto member_dist = member->predict_distribution(query);
            for (std::size_t c = 0; c < dist.size(); ++c) dist[c] += share * member_dist[c];
        } else {
            dist[static_cast<std::size_t>(member->predict(query))] += share;
        }
    }
    return dist;
}

}  // namespace

std::vector<double> BaggingModel::predict_distribution(const SparseVector& query) const {
    return aggregate(members, vote, n_classes_, query);
}

std::vector<double> AdaBoostModel::predict_distribution(const SparseVector& query) const {
    std::vector<double> scores(static_cast<std::size_t>(n_classes_), 0.0);
    double total = 0.0;
    for (std::size_t t = 0; t < members.size(); ++t) {
        scores[static_cast<std::size_t>(members[t].predict(query))] += alphas[t];
        total += alphas[t];
    }
    for (double& s : scores) s /= total;
    return scores;
}

std::vector<double> VotingModel::predict_distribution(const SparseVector& query) const {
    return aggregate(members, vote, n_classes_, query);
}

int VotingModel::predict(const SparseVector& query) const {
    if (vote == VoteMode::soft) return argmax_lowest(predict_distribution(query));

    std::vector<int> votes(static_cast<std::size_t>(n_classes_), 0);
    std::vector<double> mean(static_cast<std::size_t>(n_classes_), 0.0);
    const double share = 1.0 / static_cast<double>(members.size());
    for (const auto& member : members) {
        const auto dist = member->predict_distribution(query);
        votes[static_cast<std::size_t>(argmax_lowest(dist))] += 1;
        for (std::size_t c = 0; c < mean.size(); ++c) mean[c] += share * dist[c];
    }
    const int top = *std::max_element(votes.begin(), votes.end());
    int best = -1;
    for (std::size_t c = 0; c < votes.size(); ++c) {
        if (votes[c] != top) continue;
        if (best < 0 || mean[c] > mean[static_cast<std::size_t>(best)]) best = static_cast<int>(c);
    }
    return best;
}

std::uint64_t member_seed(std::uint64_t seed, std::size_t i) { return derive_seed(seed, i); }

BaggingModel train_bagging(const LearnerSpec& spec, const DesignMatrix& data,
                           std::size_t n_estimators, std::uint64_t seed, VoteMode vote,
                           unsigned max_threads) {
    if (n_estimators < 1) throw std::invalid_argument("bagging: n_estimators must be >= 1");
    if (data.rows.empty()) throw std::invalid_argument("bagging: empty training data");

    BaggingModel model;
    model.vote = vote;
    model.n_classes_ = data.n_classes;
    model.members.resize(n_estimators);
    model.member_seeds.resize(n_estimators);
    for (std::size_t i = 0; i < n_estimators; ++i) model.member_seeds[i] = member_seed(seed, i);

    const std::size_t n = data.rows.size();
    parallel_for(n_estimators, max_threads, [&](std::size_t i) {
        Rng boot(model.member_seeds[i]);
        DesignMatrix sample;
        sample.n_features = data.n_features;
        sample.n_classes = data.n_classes;
        sample.rows.reserve(n);
        sample.labels.reserve(n);
        for (std::size_t j = 0; j < n; ++j) {
            const std::size_t row = static_cast<std::size_t>(boot.below(n));
            sample.rows.push_back(data.rows[row]);
            sample.labels.push_back(data.labels[row]);
        }
        LearnerSpec member_spec = spec;
        member_spec.seed = derive_seed(model.member_seeds[i], 0);
        model.members[i] = train_learner(member_spec, sample);
    });
    return model;
}

std::size_t forest_max_features(const DesignMatrix& data) {
    std::vector<bool> present(data.n_features, false);
    for (const auto& row : data.rows)
        for (const auto& e : row.entries) present[e.col] = true;
    std::size_t active = 0;
    for (bool p : present)
        if (p) ++active;
    const auto root = static_cast<std::size_t>(std::sqrt(static_cast<double>(active)));
    return std::max<std::size_t>(1, root);
}

BaggingModel train_random_forest(const DesignMatrix& data, std::size_t n_estimators,
                                 std::uint64_t seed, VoteMode vote, unsigned max_threads) {
    LearnerSpec spec;
    spec.kind = LearnerKind::dtree;
    spec.max_depth = 0;
    spec.min_split = 2;
    spec.max_features = static_cast<int>(forest_max_features(data));
    return train_bagging(spec, data, n_estimators, seed, vote, max_threads);
}

double samme_alpha(double err, int n_classes) {
    return std::log((1.0 - err) / err) + std::log(static_cast<double>(n_classes) - 1.0);
}

AdaBoostModel train_adaboost(const DesignMatrix& data, std::size_t n_rounds, std::uint64_t seed,
                             BoostTrace* trace) {
    if (n_rounds < 1) throw std::invalid_argument("adaboost: n_rounds must be >= 1");
    if (data.rows.empty()) throw std::invalid_argument("adaboost: empty training data");

    const std::size_t n = data.rows.size();
    const double k = static_cast<double>(data.n_classes);
    const double ceiling = 1.0 - 1.0 / k;

    AdaBoostModel model;
    model.n_classes_ = data.n_classes;

    std::vector<double> weights(n, 1.0 / static_cast<double>(n));
    std::vector<int> predicted(n);
    for (std::size_t round = 0; round < n_rounds; ++round) {
        TreeOptions options{1, 2, 0, derive_seed(seed, round)};
        TreeModel stump = train_tree(data, weights, options);

        double err = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            predicted[i] = stump.predict(data.rows[i]);
            if (predicted[i] != data.labels[i]) err += weights[i];
        }
        if (err >= ceiling) break;
        if (err < 1e-10) err = 1e-10;

        const double alpha = samme_alpha(err, data.n_classes);
        model.members.push_back(std::move(stump));
        model.alphas.push_back(alpha);

        double sum = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            if (predicted[i] != data.labels[i]) weights[i] *= std::exp(alpha);
            sum += weights[i];
        }
        for (double& w : weights) w /= sum;

        if (trace) {
            trace->errors.push_back(err);
            double renormalized = 0.0;
            for (double w : weights) renormalized += w;
            trace->weight_sums.push_back(renormalized);
            trace->weights.push_back(weights);
        }
    }

    if (model.members.empty())
        throw std::runtime_error("adaboost: weak learner no better than chance");
    return model;
}

VotingModel train_voting(const std::vector<LearnerSpec>& specs, const DesignMatrix& data,
                         VoteMode vote, unsigned max_threads) {
    if (specs.size() < 2) throw std::invalid_argument("voting: at least 2 members required");
    if (data.rows.empty()) throw std::invalid_argument("voting: empty training data");

    VotingModel model;
    model.vote = vote;
    model.n_classes_ = data.n_classes;
    model.members.resize(specs.size());
    parallel_for(specs.size(), max_threads,
                 [&](std::size_t i) { model.members[i] = train_learner(specs[i], data); });
    return model;
}

std::vector<LearnerSpec> default_voting_specs(std::uint64_t seed) {
    std::vector<LearnerSpec> specs(4);
    specs[0].kind = LearnerKind::logreg;
    specs[1].kind = LearnerKind::knn;
    specs[1].knn_k = 5;
    specs[2].kind = LearnerKind::mnb;
    specs[3].kind = LearnerKind::svm;
    for (std::size_t i = 0; i < specs.size(); ++i) specs[i].seed = derive_seed(seed, i);
    return specs;
}

}  // namespace ticket

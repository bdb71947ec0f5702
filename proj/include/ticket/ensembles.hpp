#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "ticket/learners.hpp"

namespace ticket {

enum class VoteMode { hard, soft };

std::string to_string(VoteMode mode);
VoteMode vote_mode_from_string(const std::string& name);

// Bootstrap aggregation of one learner kind. Hard mode counts member
// predictions, soft mode averages member distributions; either way the
// distribution is what predict() argmaxes (ties to the lower class index).
struct BaggingModel : Model {
    std::vector<std::unique_ptr<Model>> members;
    std::vector<std::uint64_t> member_seeds;
    VoteMode vote = VoteMode::hard;
    int n_classes_ = 0;

    const char* kind() const override { return "bagging"; }
    int num_classes() const override { return n_classes_; }
    std::vector<double> predict_distribution(const SparseVector& query) const override;
};

// SAMME boosting over depth-1 stumps.
struct AdaBoostModel : Model {
    std::vector<TreeModel> members;
    std::vector<double> alphas;  // stage weights, all > 0
    int n_classes_ = 0;

    const char* kind() const override { return "adaboost"; }
    int num_classes() const override { return n_classes_; }
    // Alpha-weighted vote shares over member predictions.
    std::vector<double> predict_distribution(const SparseVector& query) const override;
};

// Heterogeneous members trained on the full data. Soft mode averages member
// distributions. Hard mode counts member argmaxes and, unlike every other
// model here, breaks vote ties by the highest mean probability among the
// tied classes before falling back to the lower class index, so predict()
// is overridden rather than derived from the vote-share distribution.
struct VotingModel : Model {
    std::vector<std::unique_ptr<Model>> members;
    VoteMode vote = VoteMode::soft;
    int n_classes_ = 0;

    const char* kind() const override { return "voting"; }
    int num_classes() const override { return n_classes_; }
    std::vector<double> predict_distribution(const SparseVector& query) const override;
    int predict(const SparseVector& query) const override;
};

// Per-member seed for ensemble member i.
std::uint64_t member_seed(std::uint64_t seed, std::size_t i);

// Member i draws a size-N bootstrap from Rng(member_seed(seed, i)) and
// trains spec with seed derive_seed(member_seed, 0). Members are
// independent, so training order (or thread count) never changes the model.
BaggingModel train_bagging(const LearnerSpec& spec, const DesignMatrix& data,
                           std::size_t n_estimators, std::uint64_t seed,
                           VoteMode vote = VoteMode::hard, unsigned max_threads = 0);

// Number of split candidates a forest tree samples: max(1, floor(sqrt(A)))
// where A counts the distinct columns present in the data.
std::size_t forest_max_features(const DesignMatrix& data);

// Bagged unlimited-depth trees with per-split feature sampling.
BaggingModel train_random_forest(const DesignMatrix& data, std::size_t n_estimators,
                                 std::uint64_t seed, VoteMode vote = VoteMode::hard,
                                 unsigned max_threads = 0);

// SAMME stage weight: ln((1-err)/err) + ln(K-1).
double samme_alpha(double err, int n_classes);

// Per-round diagnostics, filled when a caller passes a trace.
struct BoostTrace {
    std::vector<double> errors;       // weighted error of each accepted stump
    std::vector<double> weight_sums;  // instance-weight sum after each renormalization
    std::vector<std::vector<double>> weights;  // post-update instance weights per round
};

// SAMME schedule: fit a stump on the instance weights, stop when its
// weighted error reaches 1 - 1/K, clamp errors below 1e-10, stage weight
// alpha = ln((1-err)/err) + ln(K-1), then upweight the misses and
// renormalize. A first stump already at the ceiling is an error.
AdaBoostModel train_adaboost(const DesignMatrix& data, std::size_t n_rounds, std::uint64_t seed,
                             BoostTrace* trace = nullptr);

// Trains every spec on the full data (specs carry their own seeds).
VotingModel train_voting(const std::vector<LearnerSpec>& specs, const DesignMatrix& data,
                         VoteMode vote = VoteMode::soft, unsigned max_threads = 0);

// The default voting composition: logreg, knn (k=5), mnb, svm, with
// per-member seeds derived from seed.
std::vector<LearnerSpec> default_voting_specs(std::uint64_t seed);

}  // namespace ticket

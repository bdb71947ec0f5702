#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "ticket/features.hpp"

namespace ticket {

// Shared tie-break: ties go to the lower class index.
int argmax_lowest(const std::vector<double>& values);

// Finite stand-in for log(0); exp() of it is exactly 0 and it survives
// serialization, unlike -inf.
inline constexpr double kLogZero = -1e30;

// Uniform contract every learner and ensemble implements. Distributions are
// nonnegative and sum to 1 within 1e-9; predict is the argmax with ties to
// the lower class index.
class Model {
  public:
    virtual ~Model() = default;
    virtual const char* kind() const = 0;
    virtual int num_classes() const = 0;
    virtual std::vector<double> predict_distribution(const SparseVector& query) const = 0;
    virtual int predict(const SparseVector& query) const;
};

struct MnbModel : Model {
    std::vector<double> log_priors;                  // K
    std::vector<std::vector<double>> log_likelihoods;  // K x V, rows sum to 1 in prob space
    std::size_t n_features = 0;

    const char* kind() const override { return "mnb"; }
    int num_classes() const override { return static_cast<int>(log_priors.size()); }
    std::vector<double> predict_distribution(const SparseVector& query) const override;
};

enum class LinearLink { softmax, margin };

struct LinearModel : Model {
    std::vector<std::vector<double>> weights;  // K x V
    std::vector<double> biases;                // K
    LinearLink link = LinearLink::softmax;

    const char* kind() const override { return "linear"; }
    int num_classes() const override { return static_cast<int>(biases.size()); }
    double margin(int cls, const SparseVector& query) const;
    // softmax over logits; for the margin link this is the probability
    // surrogate soft voting composes over.
    std::vector<double> predict_distribution(const SparseVector& query) const override;
};

struct TreeNode {
    std::int32_t feature = -1;  // -1 marks a leaf
    double threshold = 0.0;
    std::int32_t left = -1;
    std::int32_t right = -1;
    std::vector<double> dist;  // leaf class distribution, sums to 1
};

struct TreeModel : Model {
    std::vector<TreeNode> nodes;  // preorder, root at 0
    int n_classes_ = 0;
    std::size_t n_features = 0;

    const char* kind() const override { return "tree"; }
    int num_classes() const override { return n_classes_; }
    std::vector<double> predict_distribution(const SparseVector& query) const override;
    int depth() const;
};

struct KnnModel : Model {
    std::vector<SparseVector> rows;
    std::vector<int> labels;
    int k = 5;
    int n_classes_ = 0;
    std::size_t n_features = 0;

    const char* kind() const override { return "knn"; }
    int num_classes() const override { return n_classes_; }
    // Cosine similarity (rows and queries are L2-normalized, so this is the
    // dot product); neighbour ties go to the lower row index. A zero query
    // is similar to nothing and falls back to the k lowest-index rows.
    std::vector<double> predict_distribution(const SparseVector& query) const override;
};

enum class LearnerKind { mnb, logreg, svm, knn, dtree, stump };

std::string to_string(LearnerKind kind);
LearnerKind learner_kind_from_string(const std::string& name);

struct LearnerSpec {
    LearnerKind kind = LearnerKind::mnb;
    double alpha = 1.0;         // mnb smoothing
    double step = 0.1;          // logreg learning rate
    int logreg_epochs = 200;
    double l2 = 1e-4;           // logreg ridge penalty
    double svm_lambda = 1e-4;   // pegasos regularization
    int svm_epochs = 20;
    int knn_k = 5;
    int max_depth = 0;          // dtree; 0 = unlimited
    int min_split = 2;
    int max_features = 0;       // dtree; 0 = all columns
    std::uint64_t seed = 0;
};

std::unique_ptr<Model> train_learner(const LearnerSpec& spec, const DesignMatrix& data);

MnbModel train_mnb(const DesignMatrix& data, double alpha = 1.0);

LinearModel train_logreg(const DesignMatrix& data, double step = 0.1, int epochs = 200,
                         double l2 = 1e-4);

// Multinomial cross-entropy plus (l2/2)*||W||^2; exposed for gradient checks.
double logreg_loss(const std::vector<std::vector<double>>& weights, const std::vector<double>& biases,
                   const DesignMatrix& data, double l2);
void logreg_gradient(const std::vector<std::vector<double>>& weights, const std::vector<double>& biases,
                     const DesignMatrix& data, double l2,
                     std::vector<std::vector<double>>& grad_w, std::vector<double>& grad_b);

// One-vs-rest hinge loss on the Pegasos schedule; bias is unregularized.
LinearModel train_svm(const DesignMatrix& data, double lambda = 1e-4, int epochs = 20,
                      std::uint64_t seed = 0);

KnnModel train_knn(const DesignMatrix& data, int k = 5);

struct TreeOptions {
    int max_depth = 0;             // 0 = unlimited
    std::size_t min_split = 2;
    std::size_t max_features = 0;  // 0 = all candidate columns
    std::uint64_t seed = 0;
};

// Weighted CART with Gini impurity and midpoint thresholds. Candidate
// features are sampled per split from the columns present in the training
// rows when max_features is set.
TreeModel train_tree(const DesignMatrix& data, const std::vector<double>& weights,
                     const TreeOptions& options);
TreeModel train_tree(const DesignMatrix& data, const TreeOptions& options);  // uniform weights

}  // namespace ticket

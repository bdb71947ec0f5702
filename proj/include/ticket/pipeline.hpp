#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ticket/corpus.hpp"
#include "ticket/ensembles.hpp"
#include "ticket/evaluate.hpp"
#include "ticket/store.hpp"

namespace ticket {

// Flat dotted-key config ("key = value" lines, # comments). Every field has
// a default, so an empty document is a valid config.
struct RunConfig {
    std::string model_kind = "mnb";     // base kinds, bagging, forest, adaboost, voting
    std::string model_base = "dtree";   // bagging member kind
    int n_estimators = -1;              // -1 = kind default (25 bagging, 100 forest)
    int rounds = 100;                   // adaboost
    std::string vote;                   // "" = kind default (hard bagging/forest, soft voting)
    std::vector<std::string> members{"logreg", "knn", "mnb", "svm"};
    double alpha = 1.0;
    double step = 0.1;
    int epochs = 200;
    double l2 = 1e-4;
    double lambda = 1e-4;
    int svm_epochs = 20;
    int knn_k = 5;
    int max_depth = 0;
    int min_split = 2;
    int max_features = 0;
    double split_fraction = 0.7;
    std::uint64_t seed = 0;
    std::string resample_mode = "none";
    std::optional<std::uint64_t> resample_seed;  // defaults to seed
    std::size_t features_k = 0;                  // 0 = keep all features
    std::uint64_t min_df = 1;
    std::string text_column = "description";
    std::string label_column = "category";
    char delimiter = ',';
    std::string created;                // fingerprint stamp, never wall clock
    std::string stopwords_path;         // "" = built-in list
    unsigned threads = 0;               // 0 = hardware default

    std::uint64_t effective_resample_seed() const { return resample_seed.value_or(seed); }
};

RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

// Canonical "key = value" block covering every key with its effective value;
// parse_config(echo_config(c)) reproduces c's behavior exactly.
std::string echo_config(const RunConfig& config);

// Short model description used in fingerprints and report rows,
// e.g. "bagging(base=dtree,n=25,vote=hard)".
std::string model_spec_string(const RunConfig& config);

struct ClassifyResult {
    std::string category;
    double confidence = 0.0;
    std::vector<std::pair<std::string, double>> top;  // descending, at most 5
    std::vector<double> distribution;                 // full, over label-map order
    int predicted = -1;
};

// Reusable classification handle; compiles the cleaning patterns once. The
// artifact must outlive the classifier.
class TicketClassifier {
  public:
    explicit TicketClassifier(const PipelineArtifact& artifact);
    ClassifyResult classify(const std::string& text) const;

  private:
    const PipelineArtifact* artifact_;
    Cleaner cleaner_;
};

ClassifyResult classify(const PipelineArtifact& artifact, const std::string& text);

struct TrainOutcome {
    PipelineArtifact artifact;
    EvaluationReport report;
};

// ingest -> split -> resample(train) -> fit features -> select -> train ->
// evaluate on the held-out test rows.
TrainOutcome train_pipeline(const LabeledCorpus& corpus, const RunConfig& config);

// Same path on a caller-provided split; bench uses this to hold one split
// fixed across a model roster. report.model_name is display_name when given,
// otherwise the model spec string.
TrainOutcome train_on_split(const LabeledCorpus& train, const LabeledCorpus& test,
                            const RunConfig& config, const std::string& display_name = "");

}  // namespace ticket

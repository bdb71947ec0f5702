#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ticket/corpus.hpp"
#include "ticket/store.hpp"

namespace ticket {

inline constexpr int kReportFormatVersion = 1;

// Rows are true classes, columns are predicted classes.
struct ConfusionMatrix {
    std::vector<std::vector<std::uint64_t>> counts;

    int num_classes() const { return static_cast<int>(counts.size()); }
    std::uint64_t total() const;
    std::uint64_t trace() const;
};

ConfusionMatrix confusion(const std::vector<int>& y_true, const std::vector<int>& y_pred,
                          int n_classes);

struct ClassMetrics {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    std::uint64_t support = 0;
};

// Weighted averages are support-weighted, so weighted recall equals accuracy
// by construction. Zero denominators score 0 rather than erroring.
struct EvaluationReport {
    std::string model_name;
    double accuracy = 0.0;
    double weighted_precision = 0.0;
    double weighted_recall = 0.0;
    double weighted_f1 = 0.0;
    std::vector<ClassMetrics> per_class;
    ConfusionMatrix confusion;
};

EvaluationReport metrics(const ConfusionMatrix& cm, const std::string& model_name = "");

// One row per report, columns Accuracy / Precision / Recall / F-score,
// six decimal places.
std::string comparison_table(const std::vector<EvaluationReport>& reports);

// Per-class breakdown for terminals.
std::string report_table(const EvaluationReport& report, const std::vector<std::string>& class_names);

// Machine-readable form of the report; carries kReportFormatVersion.
std::string report_json(const EvaluationReport& report, const std::vector<std::string>& class_names);

// Runs the artifact's full clean -> tokenize -> vectorize -> predict path
// over every ticket. Test labels are matched to the artifact's label map by
// name; a label the artifact has never seen is an error.
EvaluationReport evaluate_model(const PipelineArtifact& artifact, const LabeledCorpus& test,
                                const std::string& model_name = "", unsigned max_threads = 0);

}  // namespace ticket

#include "ticket/evaluate.hpp"

#include <iomanip>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "ticket/util.hpp"

namespace ticket {

std::uint64_t ConfusionMatrix::total() const {
    std::uint64_t sum = 0;
    for (const auto& row : counts)
        for (std::uint64_t cell : row) sum += cell;
    return sum;
}

std::uint64_t ConfusionMatrix::trace() const {
    std::uint64_t sum = 0;
    for (std::size_t c = 0; c < counts.size(); ++c) sum += counts[c][c];
    return sum;
}

ConfusionMatrix confusion(const std::vector<int>& y_true, const std::vector<int>& y_pred,
                          int n_classes) {
    if (y_true.size() != y_pred.size())
        throw std::invalid_argument("evaluate: y_true and y_pred lengths differ (" +
                                    std::to_string(y_true.size()) + " vs " +
                                    std::to_string(y_pred.size()) + ")");
    if (y_true.empty()) throw std::invalid_argument("evaluate: nothing to evaluate");

    ConfusionMatrix cm;
    cm.counts.assign(static_cast<std::size_t>(n_classes),
                     std::vector<std::uint64_t>(static_cast<std::size_t>(n_classes), 0));
    for (std::size_t i = 0; i < y_true.size(); ++i) {
        const int t = y_true[i];
        const int p = y_pred[i];
        if (t < 0 || t >= n_classes || p < 0 || p >= n_classes)
            throw std::invalid_argument("evaluate: class index out of range at row " +
                                        std::to_string(i));
        cm.counts[static_cast<std::size_t>(t)][static_cast<std::size_t>(p)] += 1;
    }
    return cm;
}

EvaluationReport metrics(const ConfusionMatrix& cm, const std::string& model_name) {
    const auto k = cm.counts.size();
    const auto total = cm.total();
    if (total == 0) throw std::invalid_argument("evaluate: empty confusion matrix");

    EvaluationReport report;
    report.model_name = model_name;
    report.confusion = cm;
    report.accuracy = static_cast<double>(cm.trace()) / static_cast<double>(total);
    report.per_class.resize(k);

    for (std::size_t c = 0; c < k; ++c) {
        std::uint64_t tp = cm.counts[c][c];
        std::uint64_t support = 0;   // row sum: tp + fn
        std::uint64_t predicted = 0; // column sum: tp + fp
        for (std::size_t j = 0; j < k; ++j) {
            support += cm.counts[c][j];
            predicted += cm.counts[j][c];
        }
        auto& m = report.per_class[c];
        m.support = support;
        m.precision = predicted == 0 ? 0.0 : static_cast<double>(tp) / static_cast<double>(predicted);
        m.recall = support == 0 ? 0.0 : static_cast<double>(tp) / static_cast<double>(support);
        m.f1 = (m.precision + m.recall) == 0.0
                   ? 0.0
                   : 2.0 * m.precision * m.recall / (m.precision + m.recall);

        const double share = static_cast<double>(support) / static_cast<double>(total);
        report.weighted_precision += share * m.precision;
        report.weighted_recall += share * m.recall;
        report.weighted_f1 += share * m.f1;
    }
    return report;
}

namespace {

constexpr int kMetricWidth = 11;

void print_metric_row(std::ostringstream& out, double accuracy, double precision, double recall,
                      double f1) {
    out << std::fixed << std::setprecision(6);
    out << std::setw(kMetricWidth) << accuracy << std::setw(kMetricWidth) << precision
        << std::setw(kMetricWidth) << recall << std::setw(kMetricWidth) << f1 << '\n';
}

}  // namespace

std::string comparison_table(const std::vector<EvaluationReport>& reports) {
    if (reports.empty()) throw std::invalid_argument("evaluate: no reports to tabulate");
    std::size_t name_width = std::string("Classifier").size();
    for (const auto& r : reports) name_width = std::max(name_width, r.model_name.size());
    name_width += 2;

    std::ostringstream out;
    out << std::left << std::setw(static_cast<int>(name_width)) << "Classifier" << std::right
        << std::setw(kMetricWidth) << "Accuracy" << std::setw(kMetricWidth) << "Precision"
        << std::setw(kMetricWidth) << "Recall" << std::setw(kMetricWidth) << "F-score" << '\n';
    for (const auto& r : reports) {
        out << std::left << std::setw(static_cast<int>(name_width)) << r.model_name << std::right;
        print_metric_row(out, r.accuracy, r.weighted_precision, r.weighted_recall, r.weighted_f1);
    }
    return out.str();
}

std::string report_table(const EvaluationReport& report, const std::vector<std::string>& class_names) {
    if (class_names.size() != report.per_class.size())
        throw std::invalid_argument("evaluate: class name count does not match report");

    std::size_t name_width = std::string("weighted").size();
    for (const auto& name : class_names) name_width = std::max(name_width, name.size());
    name_width += 2;

    std::ostringstream out;
    out << "report v" << kReportFormatVersion;
    if (!report.model_name.empty()) out << ": " << report.model_name;
    out << '\n';
    out << "instances: " << report.confusion.total() << "  accuracy: " << std::fixed
        << std::setprecision(6) << report.accuracy << '\n';
    out << std::left << std::setw(static_cast<int>(name_width)) << "class" << std::right
        << std::setw(kMetricWidth) << "Precision" << std::setw(kMetricWidth) << "Recall"
        << std::setw(kMetricWidth) << "F-score" << std::setw(kMetricWidth) << "Support" << '\n';
    for (std::size_t c = 0; c < class_names.size(); ++c) {
        const auto& m = report.per_class[c];
        out << std::left << std::setw(static_cast<int>(name_width)) << class_names[c] << std::right
            << std::fixed << std::setprecision(6) << std::setw(kMetricWidth) << m.precision
            << std::setw(kMetricWidth) << m.recall << std::setw(kMetricWidth) << m.f1
            << std::setw(kMetricWidth) << m.support << '\n';
    }
    out << std::left << std::setw(static_cast<int>(name_width)) << "weighted" << std::right
        << std::fixed << std::setprecision(6) << std::setw(kMetricWidth) << report.weighted_precision
        << std::setw(kMetricWidth) << report.weighted_recall << std::setw(kMetricWidth)
        << report.weighted_f1 << std::setw(kMetricWidth) << report.confusion.total() << '\n';
    return out.str();
}

std::string report_json(const EvaluationReport& report, const std::vector<std::string>& class_names) {
    if (class_names.size() != report.per_class.size())
        throw std::invalid_argument("evaluate: class name count does not match report");

    nlohmann::json per_class = nlohmann::json::array();
    for (std::size_t c = 0; c < class_names.size(); ++c) {
        const auto& m = report.per_class[c];
        per_class.push_back({{"class", class_names[c]},
                             {"f1", m.f1},
                             {"precision", m.precision},
                             {"recall", m.recall},
                             {"support", m.support}});
    }
    nlohmann::json doc{{"accuracy", report.accuracy},
                       {"confusion", report.confusion.counts},
                       {"format_version", kReportFormatVersion},
                       {"model", report.model_name},
                       {"per_class", std::move(per_class)},
                       {"weighted_f1", report.weighted_f1},
                       {"weighted_precision", report.weighted_precision},
                       {"weighted_recall", report.weighted_recall}};
    return doc.dump();
}

EvaluationReport evaluate_model(const PipelineArtifact& artifact, const LabeledCorpus& test,
                                const std::string& model_name, unsigned max_threads) {
    if (test.size() == 0) throw std::invalid_argument("evaluate: empty test corpus");

    const int k = artifact.labels.size();
    std::vector<int> y_true(test.size());
    for (std::size_t i = 0; i < test.size(); ++i) {
        const auto index = artifact.labels.index_of(test.tickets[i].label);
        if (!index)
            throw std::runtime_error("evaluate: unknown label '" + test.tickets[i].label +
                                     "' in test data");
        y_true[i] = *index;
    }

    Cleaner cleaner(artifact.cleaning);
    std::vector<int> y_pred(test.size());
    parallel_for(test.size(), max_threads, [&](std::size_t i) {
        const auto tokens = cleaner.process(test.tickets[i].description);
        const auto vec = vectorize(tokens, artifact.space);
        y_pred[i] = artifact.model->predict(vec);
    });

    return metrics(confusion(y_true, y_pred, k), model_name);
}

}  // namespace ticket

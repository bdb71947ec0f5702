#include "ticket/commands.hpp"

#include <iomanip>
#include <ostream>
#include <sstream>

#include "httplib.h"
#include "ticket/evaluate.hpp"
#include "ticket/pipeline.hpp"
#include "ticket/serve.hpp"
#include "ticket/util.hpp"

namespace ticket {

namespace {

RunConfig config_or_default(const std::string& config_path) {
    return config_path.empty() ? RunConfig{} : load_config(config_path);
}

LoadResult load_data(const std::string& data_path, const RunConfig& config, std::ostream& out) {
    auto loaded = load_csv(data_path, config.text_column, config.label_column, config.delimiter);
    out << "loaded " << loaded.corpus.size() << " rows";
    if (loaded.skipped > 0) out << " (skipped " << loaded.skipped << " unusable)";
    out << '\n';
    return loaded;
}

std::uint64_t split_fingerprint(const LabeledCorpus& test) {
    std::string ids;
    for (const auto& ticket : test.tickets) {
        ids += ticket.id;
        ids += '\n';
    }
    return fnv1a(ids);
}

}  // namespace

int cmd_train(const std::string& data_path, const std::string& config_path,
              const std::string& out_path, std::ostream& out) {
    const RunConfig config = config_or_default(config_path);
    const auto loaded = load_data(data_path, config, out);
    auto outcome = train_pipeline(loaded.corpus, config);
    save_artifact(outcome.artifact, out_path);

    out << "config:\n";
    std::istringstream echo(echo_config(config));
    for (std::string line; std::getline(echo, line);) out << "  " << line << '\n';
    out << comparison_table({outcome.report});
    out << report_table(outcome.report, outcome.artifact.labels.names());
    out << "artifact written: " << out_path << '\n';
    return 0;
}

int cmd_evaluate(const std::string& data_path, const std::string& model_path, std::ostream& out) {
    std::vector<std::string> warnings;
    const auto artifact = load_artifact(model_path, &warnings);
    for (const auto& w : warnings) out << "warning: " << w << '\n';

    const RunConfig defaults;
    const auto loaded = load_data(data_path, defaults, out);
    const auto report = evaluate_model(artifact, loaded.corpus, artifact.fingerprint.spec);
    out << comparison_table({report});
    out << report_table(report, artifact.labels.names());
    return 0;
}

int cmd_predict(const std::string& model_path, const std::string& text, std::ostream& out) {
    std::vector<std::string> warnings;
    const auto artifact = load_artifact(model_path, &warnings);
    for (const auto& w : warnings) out << "warning: " << w << '\n';

    const auto result = classify(artifact, text);
    out << result.category << '\t' << std::fixed << std::setprecision(4) << result.confidence
        << '\n';
    return 0;
}

int cmd_bench(const std::string& data_path, const std::string& config_path, std::ostream& out) {
    const RunConfig config = config_or_default(config_path);
    const auto loaded = load_data(data_path, config, out);
    const auto [train, test] = stratified_split(loaded.corpus, config.split_fraction, config.seed);
    out << "train rows: " << train.size() << "  test rows: " << test.size()
        << "  test-split fingerprint: " << std::hex << std::setw(16) << std::setfill('0')
        << split_fingerprint(test) << std::dec << std::setfill(' ') << '\n';

    // Every row shares the split; the preset only swaps the model selection.
    auto preset = [&](const std::string& kind, const std::string& base = "") {
        RunConfig row = config;
        row.model_kind = kind;
        row.model_base = base.empty() ? "dtree" : base;
        row.n_estimators = -1;
        row.vote.clear();
        row.members = {"logreg", "knn", "mnb", "svm"};
        return row;
    };
    auto run = [&](const std::string& name, const RunConfig& row) {
        return train_on_split(train, test, row, name).report;
    };

    std::vector<EvaluationReport> bagged;
    bagged.push_back(run("DTree", preset("dtree")));
    bagged.push_back(run("Bagging-Dtree", preset("bagging", "dtree")));
    bagged.push_back(run("MNB", preset("mnb")));
    bagged.push_back(run("Bagging-MNB", preset("bagging", "mnb")));
    bagged.push_back(run("RandomForest", preset("forest")));
    bagged.push_back(run("SVM", preset("svm")));
    bagged.push_back(run("Bagging-SVM", preset("bagging", "svm")));
    out << "\nBagged classifiers vs base classifiers\n" << comparison_table(bagged);

    std::vector<EvaluationReport> boosted;
    boosted.push_back(run("Decision stump tree", preset("stump")));
    boosted.push_back(run("Adaboost classifier", preset("adaboost")));
    out << "\nBoosting over decision stumps\n" << comparison_table(boosted);

    std::vector<EvaluationReport> voted;
    voted.push_back(run("Logistic Regression (LR)", preset("logreg")));
    voted.push_back(run("KNN", preset("knn")));
    voted.push_back(run("MNB", preset("mnb")));
    voted.push_back(run("SVM", preset("svm")));
    voted.push_back(run("Voting-Classifier", preset("voting")));
    out << "\nVoting over heterogeneous classifiers\n" << comparison_table(voted);
    return 0;
}

int cmd_serve(const std::string& model_path, int port, std::ostream& out) {
    std::vector<std::string> warnings;
    const auto artifact = load_artifact(model_path, &warnings);
    for (const auto& w : warnings) out << "warning: " << w << '\n';

    httplib::Server server;
    configure_classify_routes(server, artifact);
    out << "serving " << artifact.fingerprint.summary() << " on port " << port << std::endl;
    if (!server.listen("0.0.0.0", port))
        throw std::runtime_error("serve: cannot listen on port " + std::to_string(port));
    return 0;
}

}  // namespace ticket

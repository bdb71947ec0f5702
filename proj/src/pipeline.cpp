#include "ticket/pipeline.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "ticket/rng.hpp"
#include "ticket/util.hpp"

namespace ticket {

namespace {

const std::vector<std::string> kBaseKinds{"mnb", "logreg", "svm", "knn", "dtree", "stump"};
const std::vector<std::string> kModelKinds{"mnb",  "logreg", "svm",      "knn",      "dtree",
                                           "stump", "bagging", "forest", "adaboost", "voting"};

bool is_base_kind(const std::string& kind) {
    return std::find(kBaseKinds.begin(), kBaseKinds.end(), kind) != kBaseKinds.end();
}

std::string trim(const std::string& text) {
    std::size_t begin = text.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return "";
    std::size_t end = text.find_last_not_of(" \t\r");
    return text.substr(begin, end - begin + 1);
}

[[noreturn]] void bad_value(const std::string& key, const std::string& value) {
    throw std::runtime_error("config: invalid value for '" + key + "': '" + value + "'");
}

double parse_double(const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        double parsed = std::stod(value, &used);
        if (used != value.size()) bad_value(key, value);
        return parsed;
    } catch (const std::logic_error&) {
        bad_value(key, value);
    }
}

long long parse_int(const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        long long parsed = std::stoll(value, &used);
        if (used != value.size()) bad_value(key, value);
        return parsed;
    } catch (const std::logic_error&) {
        bad_value(key, value);
    }
}

std::uint64_t parse_u64(const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        unsigned long long parsed = std::stoull(value, &used);
        if (used != value.size() || value.find('-') != std::string::npos) bad_value(key, value);
        return parsed;
    } catch (const std::logic_error&) {
        bad_value(key, value);
    }
}

std::vector<std::string> split_list(const std::string& value) {
    std::vector<std::string> items;
    std::string item;
    std::istringstream in(value);
    while (std::getline(in, item, ',')) {
        item = trim(item);
        if (!item.empty()) items.push_back(item);
    }
    return items;
}

void apply_key(RunConfig& config, const std::string& key, const std::string& value) {
    if (key == "model.kind") config.model_kind = value;
    else if (key == "model.base") config.model_base = value;
    else if (key == "model.n_estimators") config.n_estimators = static_cast<int>(parse_int(key, value));
    else if (key == "model.rounds") config.rounds = static_cast<int>(parse_int(key, value));
    else if (key == "model.vote") config.vote = value;
    else if (key == "model.members") config.members = split_list(value);
    else if (key == "model.alpha") config.alpha = parse_double(key, value);
    else if (key == "model.step") config.step = parse_double(key, value);
    else if (key == "model.epochs") config.epochs = static_cast<int>(parse_int(key, value));
    else if (key == "model.l2") config.l2 = parse_double(key, value);
    else if (key == "model.lambda") config.lambda = parse_double(key, value);
    else if (key == "model.svm_epochs") config.svm_epochs = static_cast<int>(parse_int(key, value));
    else if (key == "model.k") config.knn_k = static_cast<int>(parse_int(key, value));
    else if (key == "model.max_depth") config.max_depth = static_cast<int>(parse_int(key, value));
    else if (key == "model.min_split") config.min_split = static_cast<int>(parse_int(key, value));
    else if (key == "model.max_features") config.max_features = static_cast<int>(parse_int(key, value));
    else if (key == "split.fraction") config.split_fraction = parse_double(key, value);
    else if (key == "seed") config.seed = parse_u64(key, value);
    else if (key == "resample.mode") config.resample_mode = value;
    else if (key == "resample.seed") config.resample_seed = parse_u64(key, value);
    else if (key == "features.k") config.features_k = static_cast<std::size_t>(parse_u64(key, value));
    else if (key == "features.min_df") config.min_df = parse_u64(key, value);
    else if (key == "columns.text") config.text_column = value;
    else if (key == "columns.label") config.label_column = value;
    else if (key == "csv.delimiter") {
        if (value.size() != 1) bad_value(key, value);
        config.delimiter = value[0];
    } else if (key == "created") config.created = value;
    else if (key == "stopwords.path") config.stopwords_path = value;
    else if (key == "threads") config.threads = static_cast<unsigned>(parse_u64(key, value));
    else throw std::runtime_error("config: unknown key '" + key + "'");
}

void validate(const RunConfig& config) {
    if (std::find(kModelKinds.begin(), kModelKinds.end(), config.model_kind) == kModelKinds.end())
        throw std::runtime_error("config: unknown model kind '" + config.model_kind + "'");
    if (!is_base_kind(config.model_base))
        throw std::runtime_error("config: bagging base must be a base learner, got '" +
                                 config.model_base + "'");
    if (!config.vote.empty() && config.vote != "hard" && config.vote != "soft")
        throw std::runtime_error("config: model.vote must be 'hard' or 'soft', got '" + config.vote +
                                 "'");
    if (config.resample_mode != "none" && config.resample_mode != "oversample" &&
        config.resample_mode != "undersample")
        throw std::runtime_error("config: unknown resample mode '" + config.resample_mode + "'");
    if (!(config.split_fraction > 0.0) || !(config.split_fraction < 1.0))
        throw std::runtime_error("config: split.fraction must be in (0, 1)");
    if (config.model_kind == "voting") {
        if (config.members.size() < 2)
            throw std::runtime_error("config: voting requires at least 2 members");
        for (const auto& member : config.members)
            if (!is_base_kind(member))
                throw std::runtime_error("config: unknown voting member '" + member + "'");
    }
    if (!(config.alpha > 0.0)) throw std::runtime_error("config: model.alpha must be > 0");
    if (!(config.step > 0.0)) throw std::runtime_error("config: model.step must be > 0");
    if (!(config.lambda > 0.0)) throw std::runtime_error("config: model.lambda must be > 0");
    if (config.l2 < 0.0) throw std::runtime_error("config: model.l2 must be >= 0");
    if (config.epochs < 1) throw std::runtime_error("config: model.epochs must be >= 1");
    if (config.svm_epochs < 1) throw std::runtime_error("config: model.svm_epochs must be >= 1");
    if (config.rounds < 1) throw std::runtime_error("config: model.rounds must be >= 1");
    if (config.n_estimators != -1 && config.n_estimators < 1)
        throw std::runtime_error("config: model.n_estimators must be >= 1");
    if (config.knn_k < 1) throw std::runtime_error("config: model.k must be >= 1");
    if (config.max_depth < 0) throw std::runtime_error("config: model.max_depth must be >= 0");
    if (config.min_split < 2) throw std::runtime_error("config: model.min_split must be >= 2");
    if (config.max_features < 0) throw std::runtime_error("config: model.max_features must be >= 0");
    if (config.min_df < 1) throw std::runtime_error("config: features.min_df must be >= 1");
    if (config.text_column.empty()) throw std::runtime_error("config: columns.text must be set");
    if (config.label_column.empty()) throw std::runtime_error("config: columns.label must be set");
}

int resolved_n_estimators(const RunConfig& config) {
    if (config.n_estimators != -1) return config.n_estimators;
    return config.model_kind == "forest" ? 100 : 25;
}

std::string resolved_vote(const RunConfig& config) {
    if (!config.vote.empty()) return config.vote;
    return config.model_kind == "voting" ? "soft" : "hard";
}

// Shortest form that parses back to the same double.
std::string format_double(double value) {
    std::ostringstream out;
    out << value;
    if (std::stod(out.str()) == value) return out.str();
    std::ostringstream precise;
    precise.precision(17);
    precise << value;
    return precise.str();
}

std::string join(const std::vector<std::string>& items, char sep) {
    std::string out;
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (i > 0) out += sep;
        out += items[i];
    }
    return out;
}

LearnerSpec base_spec(const RunConfig& config, const std::string& kind) {
    LearnerSpec spec;
    spec.kind = learner_kind_from_string(kind);
    spec.alpha = config.alpha;
    spec.step = config.step;
    spec.logreg_epochs = config.epochs;
    spec.l2 = config.l2;
    spec.svm_lambda = config.lambda;
    spec.svm_epochs = config.svm_epochs;
    spec.knn_k = config.knn_k;
    spec.max_depth = config.max_depth;
    spec.min_split = config.min_split;
    spec.max_features = config.max_features;
    spec.seed = config.seed;
    return spec;
}

std::unique_ptr<Model> build_model(const DesignMatrix& design, const RunConfig& config) {
    const auto& kind = config.model_kind;
    if (is_base_kind(kind)) return train_learner(base_spec(config, kind), design);

    const auto vote = vote_mode_from_string(resolved_vote(config));
    if (kind == "bagging") {
        auto spec = base_spec(config, config.model_base);
        return std::make_unique<BaggingModel>(
            train_bagging(spec, design, static_cast<std::size_t>(resolved_n_estimators(config)),
                          config.seed, vote, config.threads));
    }
    if (kind == "forest")
        return std::make_unique<BaggingModel>(
            train_random_forest(design, static_cast<std::size_t>(resolved_n_estimators(config)),
                                config.seed, vote, config.threads));
    if (kind == "adaboost")
        return std::make_unique<AdaBoostModel>(
            train_adaboost(design, static_cast<std::size_t>(config.rounds), config.seed));
    if (kind == "voting") {
        std::vector<LearnerSpec> specs;
        for (std::size_t i = 0; i < config.members.size(); ++i) {
            auto spec = base_spec(config, config.members[i]);
            spec.seed = derive_seed(config.seed, i);
            specs.push_back(spec);
        }
        return std::make_unique<VotingModel>(train_voting(specs, design, vote, config.threads));
    }
    throw std::runtime_error("config: unknown model kind '" + kind + "'");
}

}  // namespace

RunConfig parse_config(const std::string& text) {
    RunConfig config;
    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string stripped = trim(line);
        if (stripped.empty() || stripped[0] == '#') continue;
        const auto eq = stripped.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error("config: line " + std::to_string(line_no) +
                                     " is not a 'key = value' pair");
        apply_key(config, trim(stripped.substr(0, eq)), trim(stripped.substr(eq + 1)));
    }
    validate(config);
    return config;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("config: cannot open file: " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_config(buffer.str());
}

std::string echo_config(const RunConfig& config) {
    std::ostringstream out;
    out << "columns.label = " << config.label_column << '\n';
    out << "columns.text = " << config.text_column << '\n';
    out << "created = " << config.created << '\n';
    out << "csv.delimiter = " << config.delimiter << '\n';
    out << "features.k = " << config.features_k << '\n';
    out << "features.min_df = " << config.min_df << '\n';
    out << "model.alpha = " << format_double(config.alpha) << '\n';
    out << "model.base = " << config.model_base << '\n';
    out << "model.epochs = " << config.epochs << '\n';
    out << "model.k = " << config.knn_k << '\n';
    out << "model.kind = " << config.model_kind << '\n';
    out << "model.l2 = " << format_double(config.l2) << '\n';
    out << "model.lambda = " << format_double(config.lambda) << '\n';
    out << "model.max_depth = " << config.max_depth << '\n';
    out << "model.max_features = " << config.max_features << '\n';
    out << "model.members = " << join(config.members, ',') << '\n';
    out << "model.min_split = " << config.min_split << '\n';
    out << "model.n_estimators = " << resolved_n_estimators(config) << '\n';
    out << "model.rounds = " << config.rounds << '\n';
    out << "model.svm_epochs = " << config.svm_epochs << '\n';
    out << "model.step = " << format_double(config.step) << '\n';
    out << "model.vote = " << resolved_vote(config) << '\n';
    out << "resample.mode = " << config.resample_mode << '\n';
    out << "resample.seed = " << config.effective_resample_seed() << '\n';
    out << "seed = " << config.seed << '\n';
    out << "split.fraction = " << format_double(config.split_fraction) << '\n';
    out << "stopwords.path = " << config.stopwords_path << '\n';
    out << "threads = " << config.threads << '\n';
    return out.str();
}

std::string model_spec_string(const RunConfig& config) {
    const auto& kind = config.model_kind;
    std::ostringstream out;
    if (kind == "mnb") out << "mnb(alpha=" << format_double(config.alpha) << ")";
    else if (kind == "logreg")
        out << "logreg(step=" << format_double(config.step) << ",epochs=" << config.epochs
            << ",l2=" << format_double(config.l2) << ")";
    else if (kind == "svm")
        out << "svm(lambda=" << format_double(config.lambda) << ",epochs=" << config.svm_epochs << ")";
    else if (kind == "knn") out << "knn(k=" << config.knn_k << ")";
    else if (kind == "dtree") {
        out << "dtree(max_depth=" << config.max_depth << ",min_split=" << config.min_split;
        if (config.max_features > 0) out << ",max_features=" << config.max_features;
        out << ")";
    } else if (kind == "stump") out << "stump";
    else if (kind == "bagging")
        out << "bagging(base=" << config.model_base << ",n=" << resolved_n_estimators(config)
            << ",vote=" << resolved_vote(config) << ")";
    else if (kind == "forest")
        out << "forest(n=" << resolved_n_estimators(config) << ",vote=" << resolved_vote(config)
            << ")";
    else if (kind == "adaboost") out << "adaboost(rounds=" << config.rounds << ")";
    else if (kind == "voting")
        out << "voting(members=" << join(config.members, '+') << ",vote=" << resolved_vote(config)
            << ")";
    else throw std::runtime_error("config: unknown model kind '" + kind + "'");
    return out.str();
}

TicketClassifier::TicketClassifier(const PipelineArtifact& artifact)
    : artifact_(&artifact), cleaner_(artifact.cleaning) {}

ClassifyResult TicketClassifier::classify(const std::string& text) const {
    const auto tokens = cleaner_.process(text);
    const auto vec = vectorize(tokens, artifact_->space);

    ClassifyResult result;
    result.distribution = artifact_->model->predict_distribution(vec);
    result.predicted = artifact_->model->predict(vec);
    result.category = artifact_->labels.name(result.predicted);
    result.confidence = result.distribution[static_cast<std::size_t>(result.predicted)];

    std::vector<int> order(result.distribution.size());
    std::iota(order.begin(), order.end(), 0);
    // predicted class leads any probability tie so top[0] matches the answer
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        const double pa = result.distribution[static_cast<std::size_t>(a)];
        const double pb = result.distribution[static_cast<std::size_t>(b)];
        if (pa != pb) return pa > pb;
        if ((a == result.predicted) != (b == result.predicted)) return a == result.predicted;
        return a < b;
    });
    const std::size_t top_n = std::min<std::size_t>(5, order.size());
    for (std::size_t i = 0; i < top_n; ++i)
        result.top.push_back({artifact_->labels.name(order[i]),
                              result.distribution[static_cast<std::size_t>(order[i])]});
    return result;
}

ClassifyResult classify(const PipelineArtifact& artifact, const std::string& text) {
    return TicketClassifier(artifact).classify(text);
}

TrainOutcome train_on_split(const LabeledCorpus& train, const LabeledCorpus& test,
                            const RunConfig& config, const std::string& display_name) {
    if (train.size() == 0) throw std::invalid_argument("pipeline: empty training split");
    if (test.size() == 0) throw std::invalid_argument("pipeline: empty test split");

    CleaningConfig cleaning = default_cleaning_config();
    if (!config.stopwords_path.empty()) cleaning.stopwords = load_stopwords(config.stopwords_path);
    Cleaner cleaner(std::move(cleaning));

    const int k = train.label_map.size();
    std::vector<TokenDoc> docs(train.size());
    std::vector<int> labels(train.size());
    parallel_for(train.size(), config.threads, [&](std::size_t i) {
        docs[i] = cleaner.process(train.tickets[i].description);
        labels[i] = train.label_index(i);
    });

    if (config.resample_mode != "none") {
        std::vector<std::pair<TokenDoc, int>> dataset(docs.size());
        for (std::size_t i = 0; i < docs.size(); ++i)
            dataset[i] = {std::move(docs[i]), labels[i]};
        ResampleStrategy strategy{resample_mode_from_string(config.resample_mode),
                                  config.effective_resample_seed()};
        dataset = resample(dataset, strategy);
        docs.resize(dataset.size());
        labels.resize(dataset.size());
        for (std::size_t i = 0; i < dataset.size(); ++i) {
            docs[i] = std::move(dataset[i].first);
            labels[i] = dataset[i].second;
        }
    }

    FeatureSpace space = fit_feature_space(docs, config.min_df);
    if (config.features_k > 0) {
        const auto scores = chi2_scores(docs, labels, space, k);
        space = select_top_k(space, scores, config.features_k);
    }
    const DesignMatrix design = vectorize_matrix(docs, labels, space, k);

    PipelineArtifact artifact;
    artifact.cleaning = cleaner.config();
    artifact.space = std::move(space);
    artifact.model = build_model(design, config);
    artifact.labels = train.label_map;
    artifact.fingerprint.seed = config.seed;
    artifact.fingerprint.spec = model_spec_string(config);
    artifact.fingerprint.data_rows = train.size() + test.size();
    artifact.fingerprint.created = config.created;

    const std::string name = display_name.empty() ? model_spec_string(config) : display_name;
    EvaluationReport report = evaluate_model(artifact, test, name, config.threads);
    return {std::move(artifact), std::move(report)};
}

TrainOutcome train_pipeline(const LabeledCorpus& corpus, const RunConfig& config) {
    auto [train, test] = stratified_split(corpus, config.split_fraction, config.seed);
    return train_on_split(train, test, config);
}

}  // namespace ticket

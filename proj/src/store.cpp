#include "ticket/store.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace ticket {

using nlohmann::json;

std::string TrainingFingerprint::summary() const {
    std::ostringstream out;
    out << "seed=" << seed << ";spec=" << spec << ";rows=" << data_rows << ";created=" << created;
    return out.str();
}

namespace {

json cleaning_to_json(const CleaningConfig& cleaning) {
    json patterns = json::array();
    for (const auto& p : cleaning.patterns) patterns.push_back({{"name", p.name}, {"pattern", p.pattern}});
    return json{{"min_token_length", cleaning.min_token_length},
                {"patterns", std::move(patterns)},
                {"stopword_hash", cleaning.stopword_hash()},
                {"stopwords", cleaning.stopwords}};
}

CleaningConfig cleaning_from_json(const json& doc, std::vector<std::string>* warnings) {
    CleaningConfig cleaning;
    cleaning.min_token_length = doc.at("min_token_length").get<std::size_t>();
    for (const auto& p : doc.at("patterns"))
        cleaning.patterns.push_back({p.at("name").get<std::string>(), p.at("pattern").get<std::string>()});
    cleaning.stopwords = doc.at("stopwords").get<std::vector<std::string>>();
    const auto stored_hash = doc.at("stopword_hash").get<std::uint64_t>();
    if (stored_hash != cleaning.stopword_hash() && warnings)
        warnings->push_back(
            "store: stopword list hash mismatch; the embedded list differs from the one hashed at "
            "training time");
    return cleaning;
}

json space_to_json(const FeatureSpace& space) {
    return json{{"doc_freq", space.doc_freq}, {"idf", space.idf},     {"mask", space.mask},
                {"n_docs", space.n_docs},     {"terms", space.terms}};
}

FeatureSpace space_from_json(const json& doc) {
    FeatureSpace space;
    space.terms = doc.at("terms").get<std::vector<std::string>>();
    space.doc_freq = doc.at("doc_freq").get<std::vector<std::uint64_t>>();
    space.n_docs = doc.at("n_docs").get<std::uint64_t>();
    space.idf = doc.at("idf").get<std::vector<double>>();
    space.mask = doc.at("mask").get<std::vector<std::uint32_t>>();
    space.rebuild_index();
    return space;
}

json rows_to_json(const std::vector<SparseVector>& rows) {
    json out = json::array();
    for (const auto& row : rows) {
        json entries = json::array();
        for (const auto& e : row.entries) entries.push_back({e.col, e.weight});
        out.push_back(std::move(entries));
    }
    return out;
}

std::vector<SparseVector> rows_from_json(const json& doc) {
    std::vector<SparseVector> rows;
    rows.reserve(doc.size());
    for (const auto& encoded : doc) {
        SparseVector row;
        row.entries.reserve(encoded.size());
        for (const auto& e : encoded)
            row.entries.push_back({e.at(0).get<std::uint32_t>(), e.at(1).get<double>()});
        rows.push_back(std::move(row));
    }
    return rows;
}

json model_to_json(const Model& model);

json tree_to_json(const TreeModel& tree) {
    json nodes = json::array();
    for (const auto& n : tree.nodes)
        nodes.push_back({{"dist", n.dist},
                         {"feature", n.feature},
                         {"left", n.left},
                         {"right", n.right},
                         {"threshold", n.threshold}});
    return json{{"kind", "tree"},
                {"n_classes", tree.n_classes_},
                {"n_features", tree.n_features},
                {"nodes", std::move(nodes)}};
}

TreeModel tree_from_json(const json& doc) {
    TreeModel tree;
    tree.n_classes_ = doc.at("n_classes").get<int>();
    tree.n_features = doc.at("n_features").get<std::size_t>();
    for (const auto& n : doc.at("nodes")) {
        TreeNode node;
        node.feature = n.at("feature").get<std::int32_t>();
        node.threshold = n.at("threshold").get<double>();
        node.left = n.at("left").get<std::int32_t>();
        node.right = n.at("right").get<std::int32_t>();
        node.dist = n.at("dist").get<std::vector<double>>();
        tree.nodes.push_back(std::move(node));
    }
    return tree;
}

json members_to_json(const std::vector<std::unique_ptr<Model>>& members) {
    json out = json::array();
    for (const auto& member : members) out.push_back(model_to_json(*member));
    return out;
}

json model_to_json(const Model& model) {
    const std::string kind = model.kind();
    if (kind == "mnb") {
        const auto& mnb = static_cast<const MnbModel&>(model);
        return json{{"kind", "mnb"},
                    {"log_likelihoods", mnb.log_likelihoods},
                    {"log_priors", mnb.log_priors},
                    {"n_features", mnb.n_features}};
    }
    if (kind == "linear") {
        const auto& linear = static_cast<const LinearModel&>(model);
        return json{{"biases", linear.biases},
                    {"kind", "linear"},
                    {"link", linear.link == LinearLink::softmax ? "softmax" : "margin"},
                    {"weights", linear.weights}};
    }
    if (kind == "tree") return tree_to_json(static_cast<const TreeModel&>(model));
    if (kind == "knn") {
        const auto& knn = static_cast<const KnnModel&>(model);
        return json{{"k", knn.k},
                    {"kind", "knn"},
                    {"labels", knn.labels},
                    {"n_classes", knn.n_classes_},
                    {"n_features", knn.n_features},
                    {"rows", rows_to_json(knn.rows)}};
    }
    if (kind == "bagging") {
        const auto& bagging = static_cast<const BaggingModel&>(model);
        return json{{"kind", "bagging"},
                    {"member_seeds", bagging.member_seeds},
                    {"members", members_to_json(bagging.members)},
                    {"n_classes", bagging.n_classes_},
                    {"vote", to_string(bagging.vote)}};
    }
    if (kind == "adaboost") {
        const auto& boost = static_cast<const AdaBoostModel&>(model);
        json members = json::array();
        for (const auto& stump : boost.members) members.push_back(tree_to_json(stump));
        return json{{"alphas", boost.alphas},
                    {"kind", "adaboost"},
                    {"members", std::move(members)},
                    {"n_classes", boost.n_classes_}};
    }
    if (kind == "voting") {
        const auto& voting = static_cast<const VotingModel&>(model);
        return json{{"kind", "voting"},
                    {"members", members_to_json(voting.members)},
                    {"n_classes", voting.n_classes_},
                    {"vote", to_string(voting.vote)}};
    }
    throw std::runtime_error("store: unknown model kind '" + kind + "'");
}

std::unique_ptr<Model> model_from_json(const json& doc) {
    const auto kind = doc.at("kind").get<std::string>();
    if (kind == "mnb") {
        auto mnb = std::make_unique<MnbModel>();
        mnb->log_priors = doc.at("log_priors").get<std::vector<double>>();
        mnb->log_likelihoods = doc.at("log_likelihoods").get<std::vector<std::vector<double>>>();
        mnb->n_features = doc.at("n_features").get<std::size_t>();
        return mnb;
    }
    if (kind == "linear") {
        auto linear = std::make_unique<LinearModel>();
        linear->weights = doc.at("weights").get<std::vector<std::vector<double>>>();
        linear->biases = doc.at("biases").get<std::vector<double>>();
        linear->link =
            doc.at("link").get<std::string>() == "margin" ? LinearLink::margin : LinearLink::softmax;
        return linear;
    }
    if (kind == "tree") return std::make_unique<TreeModel>(tree_from_json(doc));
    if (kind == "knn") {
        auto knn = std::make_unique<KnnModel>();
        knn->k = doc.at("k").get<int>();
        knn->labels = doc.at("labels").get<std::vector<int>>();
        knn->n_classes_ = doc.at("n_classes").get<int>();
        knn->n_features = doc.at("n_features").get<std::size_t>();
        knn->rows = rows_from_json(doc.at("rows"));
        return knn;
    }
    if (kind == "bagging") {
        auto bagging = std::make_unique<BaggingModel>();
        bagging->member_seeds = doc.at("member_seeds").get<std::vector<std::uint64_t>>();
        bagging->n_classes_ = doc.at("n_classes").get<int>();
        bagging->vote = vote_mode_from_string(doc.at("vote").get<std::string>());
        for (const auto& member : doc.at("members")) bagging->members.push_back(model_from_json(member));
        return bagging;
    }
    if (kind == "adaboost") {
        auto boost = std::make_unique<AdaBoostModel>();
        boost->alphas = doc.at("alphas").get<std::vector<double>>();
        boost->n_classes_ = doc.at("n_classes").get<int>();
        for (const auto& member : doc.at("members")) boost->members.push_back(tree_from_json(member));
        return boost;
    }
    if (kind == "voting") {
        auto voting = std::make_unique<VotingModel>();
        voting->n_classes_ = doc.at("n_classes").get<int>();
        voting->vote = vote_mode_from_string(doc.at("vote").get<std::string>());
        for (const auto& member : doc.at("members")) voting->members.push_back(model_from_json(member));
        return voting;
    }
    throw std::runtime_error("store: unknown model kind '" + kind + "'");
}

}  // namespace

std::string artifact_to_string(const PipelineArtifact& artifact) {
    json doc{{"cleaning", cleaning_to_json(artifact.cleaning)},
             {"feature_space", space_to_json(artifact.space)},
             {"fingerprint",
              {{"created", artifact.fingerprint.created},
               {"data_rows", artifact.fingerprint.data_rows},
               {"seed", artifact.fingerprint.seed},
               {"spec", artifact.fingerprint.spec}}},
             {"format_version", artifact.format_version},
             {"labels", artifact.labels.names()},
             {"model", model_to_json(*artifact.model)}};
    return doc.dump();
}

PipelineArtifact artifact_from_string(const std::string& text, std::vector<std::string>* warnings) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        throw std::runtime_error(std::string("store: corrupt artifact document: ") + e.what());
    }

    try {
        const int version = doc.at("format_version").get<int>();
        if (version != kArtifactFormatVersion)
            throw std::runtime_error("store: unsupported format version " + std::to_string(version) +
                                     " (supported: " + std::to_string(kArtifactFormatVersion) + ")");

        PipelineArtifact artifact;
        artifact.format_version = version;
        artifact.cleaning = cleaning_from_json(doc.at("cleaning"), warnings);
        artifact.space = space_from_json(doc.at("feature_space"));
        artifact.model = model_from_json(doc.at("model"));
        for (const auto& name : doc.at("labels"))
            artifact.labels.add_or_get(name.get<std::string>());
        const auto& fp = doc.at("fingerprint");
        artifact.fingerprint.seed = fp.at("seed").get<std::uint64_t>();
        artifact.fingerprint.spec = fp.at("spec").get<std::string>();
        artifact.fingerprint.data_rows = fp.at("data_rows").get<std::uint64_t>();
        artifact.fingerprint.created = fp.at("created").get<std::string>();
        return artifact;
    } catch (const json::exception& e) {
        throw std::runtime_error(std::string("store: corrupt artifact document: ") + e.what());
    }
}

void save_artifact(const PipelineArtifact& artifact, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("store: cannot write file: " + path);
    const std::string text = artifact_to_string(artifact);
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    out.put('\n');
    if (!out) throw std::runtime_error("store: cannot write file: " + path);
}

PipelineArtifact load_artifact(const std::string& path, std::vector<std::string>* warnings) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("store: cannot open file: " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return artifact_from_string(buffer.str(), warnings);
}

std::string model_to_string(const Model& model) { return model_to_json(model).dump(); }

std::unique_ptr<Model> model_from_string(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        throw std::runtime_error(std::string("store: corrupt model document: ") + e.what());
    }
    try {
        return model_from_json(doc);
    } catch (const json::exception& e) {
        throw std::runtime_error(std::string("store: corrupt model document: ") + e.what());
    }
}

}  // namespace ticket

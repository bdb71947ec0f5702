#include <filesystem>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "doctest.h"
#include "httplib.h"
#include "json.hpp"
#include "support/synth.hpp"
#include "support/tmpfiles.hpp"
#include "ticket/commands.hpp"
#include "ticket/pipeline.hpp"
#include "ticket/serve.hpp"

using namespace ticket;

namespace {

LabeledCorpus interface_corpus() {
    return synth::keyword_corpus({.n_classes = 3,
                                  .n_docs = 30,
                                  .keywords_per_class = 4,
                                  .noise_terms = 6,
                                  .noise_fraction = 0.2,
                                  .tokens_per_doc = 6,
                                  .seed = 3});
}

std::string corpus_csv(const LabeledCorpus& corpus) {
    std::ostringstream out;
    out << "description,category\n";
    for (std::size_t i = 0; i < corpus.size(); ++i)
        out << corpus.tickets[i].description << ',' << corpus.tickets[i].label << '\n';
    return out.str();
}

// Live /classify endpoint over a loopback port picked by the OS.
struct TestServer {
    httplib::Server server;
    std::thread thread;
    int port = 0;

    explicit TestServer(const PipelineArtifact& artifact) {
        configure_classify_routes(server, artifact);
        port = server.bind_to_any_port("127.0.0.1");
        REQUIRE(port > 0);
        thread = std::thread([this] { server.listen_after_bind(); });
        server.wait_until_ready();
    }
    ~TestServer() {
        server.stop();
        if (thread.joinable()) thread.join();
    }
};

}  // namespace

TEST_SUITE("interface") {

TEST_CASE("an empty config document yields the defaults") {
    const auto config = parse_config("");
    CHECK(config.model_kind == "mnb");
    CHECK(config.split_fraction == 0.7);
    CHECK(config.members == std::vector<std::string>{"logreg", "knn", "mnb", "svm"});
    CHECK(config.n_estimators == -1);
    CHECK(config.seed == 0);
    CHECK(config.effective_resample_seed() == 0);
    CHECK(config.text_column == "description");
    CHECK(config.label_column == "category");
}

TEST_CASE("config lines parse with comments, blanks and spacing") {
    const auto config = parse_config(
        "# a comment\n"
        "\n"
        "  model.kind = bagging  \n"
        "model.base=svm\n"
        "model.n_estimators = 40\n"
        "model.vote = soft\n"
        "seed = 9\n"
        "resample.mode = oversample\n"
        "resample.seed = 12\n"
        "features.k = 500\n"
        "csv.delimiter = ;\n"
        "created = 2026-02-03\n");
    CHECK(config.model_kind == "bagging");
    CHECK(config.model_base == "svm");
    CHECK(config.n_estimators == 40);
    CHECK(config.vote == "soft");
    CHECK(config.seed == 9);
    CHECK(config.resample_mode == "oversample");
    CHECK(config.effective_resample_seed() == 12);
    CHECK(config.features_k == 500);
    CHECK(config.delimiter == ';');
    CHECK(config.created == "2026-02-03");
}

TEST_CASE("config errors carry the key, the value or the line") {
    CHECK_THROWS_WITH_AS(parse_config("model.flavor = mild"), "config: unknown key 'model.flavor'",
                         std::runtime_error);
    CHECK_THROWS_WITH_AS(parse_config("# fine\nbogus line\n"),
                         "config: line 2 is not a 'key = value' pair", std::runtime_error);
    CHECK_THROWS_WITH_AS(parse_config("model.epochs = many"),
                         "config: invalid value for 'model.epochs': 'many'", std::runtime_error);
    CHECK_THROWS_WITH_AS(parse_config("seed = -4"), "config: invalid value for 'seed': '-4'",
                         std::runtime_error);
    CHECK_THROWS_WITH_AS(parse_config("csv.delimiter = ;;"),
                         "config: invalid value for 'csv.delimiter': ';;'", std::runtime_error);
    CHECK_THROWS_WITH_AS(parse_config("model.kind = tarot"), "config: unknown model kind 'tarot'",
                         std::runtime_error);
    CHECK_THROWS_WITH_AS(parse_config("model.vote = loud"),
                         "config: model.vote must be 'hard' or 'soft', got 'loud'",
                         std::runtime_error);
    CHECK_THROWS_WITH_AS(parse_config("split.fraction = 1"),
                         "config: split.fraction must be in (0, 1)", std::runtime_error);
    CHECK_THROWS_WITH_AS(parse_config("model.min_split = 1"),
                         "config: model.min_split must be >= 2", std::runtime_error);
    CHECK_THROWS_WITH_AS(parse_config("model.kind = voting\nmodel.members = mnb\n"),
                         "config: voting requires at least 2 members", std::runtime_error);
    CHECK_THROWS_WITH_AS(parse_config("model.kind = voting\nmodel.members = mnb, alien\n"),
                         "config: unknown voting member 'alien'", std::runtime_error);
    CHECK_THROWS_WITH_AS(load_config("/nonexistent/ticket.conf"),
                         "config: cannot open file: /nonexistent/ticket.conf", std::runtime_error);
}

TEST_CASE("echo_config is a parse fixed point") {
    for (const std::string text :
         {std::string(""), std::string("model.kind = forest\nmodel.vote = soft\n"),
          std::string("model.kind = voting\nseed = 5\nresample.mode = undersample\n"),
          std::string("model.kind = bagging\nmodel.base = svm\nmodel.n_estimators = 7\n")}) {
        CAPTURE(text);
        const auto echoed = echo_config(parse_config(text));
        CHECK(echo_config(parse_config(echoed)) == echoed);
    }

    const auto echoed = echo_config(parse_config(""));
    CHECK(echoed.find("model.kind = mnb\n") != std::string::npos);
    CHECK(echoed.find("model.n_estimators = 25\n") != std::string::npos);
    CHECK(echoed.find("split.fraction = 0.7\n") != std::string::npos);
    CHECK(echo_config(parse_config("model.kind = forest")).find("model.n_estimators = 100\n") !=
          std::string::npos);
}

TEST_CASE("model_spec_string names the composition") {
    auto spec_of = [](const std::string& text) { return model_spec_string(parse_config(text)); };
    CHECK(spec_of("") == "mnb(alpha=1)");
    CHECK(spec_of("model.alpha = 0.5") == "mnb(alpha=0.5)");
    CHECK(spec_of("model.kind = knn\nmodel.k = 7") == "knn(k=7)");
    CHECK(spec_of("model.kind = stump") == "stump");
    CHECK(spec_of("model.kind = bagging") == "bagging(base=dtree,n=25,vote=hard)");
    CHECK(spec_of("model.kind = forest") == "forest(n=100,vote=hard)");
    CHECK(spec_of("model.kind = adaboost\nmodel.rounds = 60") == "adaboost(rounds=60)");
    CHECK(spec_of("model.kind = voting") == "voting(members=logreg+knn+mnb+svm,vote=soft)");
    CHECK(spec_of("model.kind = logreg") == "logreg(step=0.1,epochs=200,l2=0.0001)");
    CHECK(spec_of("model.kind = svm") == "svm(lambda=0.0001,epochs=20)");
}

TEST_CASE("train_pipeline stamps the fingerprint and names the report") {
    const auto corpus = interface_corpus();
    RunConfig config;
    config.seed = 4;
    const auto outcome = train_pipeline(corpus, config);
    CHECK(outcome.report.model_name == "mnb(alpha=1)");
    CHECK(outcome.artifact.fingerprint.spec == "mnb(alpha=1)");
    CHECK(outcome.artifact.fingerprint.seed == 4);
    CHECK(outcome.artifact.fingerprint.data_rows == corpus.size());
    CHECK(outcome.artifact.labels.names() == corpus.label_map.names());
    CHECK(outcome.report.confusion.total() < corpus.size());

    RunConfig selected = config;
    selected.features_k = 5;
    const auto trimmed = train_pipeline(corpus, selected);
    REQUIRE(trimmed.artifact.space.terms.size() >= 5);
    CHECK(trimmed.artifact.space.mask.size() == 5);

    RunConfig resampled = config;
    resampled.resample_mode = "oversample";
    CHECK(train_pipeline(corpus, resampled).report.confusion.total() ==
          outcome.report.confusion.total());
}

TEST_CASE("train_on_split honors the display name and rejects empty splits") {
    const auto corpus = interface_corpus();
    const auto [train, test] = stratified_split(corpus, 0.7, 1);
    RunConfig config;
    CHECK(train_on_split(train, test, config, "Row").report.model_name == "Row");
    CHECK_THROWS_WITH_AS(train_on_split(LabeledCorpus{}, test, config),
                         "pipeline: empty training split", std::invalid_argument);
    CHECK_THROWS_WITH_AS(train_on_split(train, LabeledCorpus{}, config),
                         "pipeline: empty test split", std::invalid_argument);
}

TEST_CASE("thread count never changes the trained artifact") {
    const auto corpus = interface_corpus();
    RunConfig config;
    config.model_kind = "bagging";
    config.n_estimators = 6;
    config.seed = 2;
    auto serialized = [&](unsigned threads) {
        RunConfig run = config;
        run.threads = threads;
        return artifact_to_string(train_pipeline(corpus, run).artifact);
    };
    const auto baseline = serialized(1);
    CHECK(serialized(3) == baseline);
    CHECK(serialized(0) == baseline);
}

TEST_CASE("classify ranks categories and reports the winner's confidence") {
    const auto corpus = interface_corpus();
    RunConfig config;
    const auto outcome = train_pipeline(corpus, config);
    const TicketClassifier classifier(outcome.artifact);

    const auto& sample = corpus.tickets[0].description;
    const auto result = classifier.classify(sample);
    CHECK(result.predicted >= 0);
    CHECK(result.category == outcome.artifact.labels.name(result.predicted));
    CHECK(result.confidence ==
          result.distribution[static_cast<std::size_t>(result.predicted)]);
    REQUIRE(result.top.size() == 3);  // three classes, so all of them fit in the top five
    CHECK(result.top[0].first == result.category);
    CHECK(result.top[0].second == result.confidence);
    for (std::size_t i = 1; i < result.top.size(); ++i)
        CHECK(result.top[i - 1].second >= result.top[i].second);
    double sum = 0.0;
    for (double p : result.distribution) sum += p;
    CHECK(sum == doctest::Approx(1.0));

    const auto free_result = classify(outcome.artifact, sample);
    CHECK(free_result.category == result.category);
    CHECK(free_result.distribution == result.distribution);

    // a ticket that cleans to nothing still gets a ranked answer
    const auto blank = classifier.classify("!!! 42 ???");
    CHECK(blank.top.size() == 3);
}

TEST_CASE("cmd_train writes a deterministic artifact and prints the report") {
    const auto csv = testsupport::write_file("iface_train.csv", corpus_csv(interface_corpus()));
    const auto first_path = testsupport::temp_path("iface_first.model");
    const auto second_path = testsupport::temp_path("iface_second.model");

    std::ostringstream out;
    CHECK(cmd_train(csv, "", first_path, out) == 0);
    const auto text = out.str();
    CHECK(text.find("loaded 30 rows") != std::string::npos);
    CHECK(text.find("config:") != std::string::npos);
    CHECK(text.find("Classifier") != std::string::npos);
    CHECK(text.find("report v1") != std::string::npos);
    CHECK(text.find("artifact written: " + first_path) != std::string::npos);

    std::ostringstream again;
    CHECK(cmd_train(csv, "", second_path, again) == 0);
    CHECK(testsupport::read_file(first_path) == testsupport::read_file(second_path));

    std::vector<std::string> warnings;
    const auto artifact = load_artifact(first_path, &warnings);
    CHECK(warnings.empty());
    CHECK(artifact.fingerprint.spec == "mnb(alpha=1)");

    std::filesystem::remove(second_path);

    const auto bad_config = testsupport::write_file("iface_bad.conf",
                                                    "model.kind = voting\nmodel.members = mnb\n");
    std::ostringstream sink;
    CHECK_THROWS_WITH_AS(cmd_train(csv, bad_config, second_path, sink),
                         "config: voting requires at least 2 members", std::runtime_error);
    CHECK(!std::filesystem::exists(second_path));
}

TEST_CASE("cmd_predict prints category and four-decimal confidence") {
    const auto csv = testsupport::write_file("iface_predict.csv", corpus_csv(interface_corpus()));
    const auto model_path = testsupport::temp_path("iface_predict.model");
    std::ostringstream train_out;
    REQUIRE(cmd_train(csv, "", model_path, train_out) == 0);

    std::ostringstream out;
    CHECK(cmd_predict(model_path, interface_corpus().tickets[0].description, out) == 0);
    const auto line = out.str();
    const auto tab = line.find('\t');
    REQUIRE(tab != std::string::npos);
    CHECK(line.substr(0, tab).rfind("class-", 0) == 0);
    const auto confidence = line.substr(tab + 1);
    REQUIRE(confidence.size() == 7);  // "0.xxxx\n"
    CHECK(confidence[1] == '.');
    CHECK(confidence.back() == '\n');

    // stopword-only text cleans to nothing but still classifies
    std::ostringstream blank;
    CHECK(cmd_predict(model_path, "the of and", blank) == 0);
    CHECK(blank.str().find('\t') != std::string::npos);
}

TEST_CASE("cmd_evaluate reports and surfaces artifact warnings") {
    const auto csv = testsupport::write_file("iface_eval.csv", corpus_csv(interface_corpus()));
    const auto model_path = testsupport::temp_path("iface_eval.model");
    std::ostringstream train_out;
    REQUIRE(cmd_train(csv, "", model_path, train_out) == 0);

    std::ostringstream out;
    CHECK(cmd_evaluate(csv, model_path, out) == 0);
    CHECK(out.str().find("report v1") != std::string::npos);
    CHECK(out.str().find("instances: 30") != std::string::npos);
    CHECK(out.str().find("warning:") == std::string::npos);

    auto doc = nlohmann::json::parse(testsupport::read_file(model_path));
    doc["cleaning"]["stopwords"].erase(0);
    const auto tampered = testsupport::write_file("iface_tampered.model", doc.dump());
    std::ostringstream warned;
    CHECK(cmd_evaluate(csv, tampered, warned) == 0);
    CHECK(warned.str().find("warning: store: stopword list hash mismatch") != std::string::npos);
}

TEST_CASE("cmd_bench prints the three comparison tables") {
    const auto csv = testsupport::write_file("iface_bench.csv", corpus_csv(interface_corpus()));
    std::ostringstream out;
    CHECK(cmd_bench(csv, "", out) == 0);
    const auto text = out.str();

    CHECK(text.find("test-split fingerprint:") != std::string::npos);
    CHECK(text.find("Bagged classifiers vs base classifiers") != std::string::npos);
    CHECK(text.find("Boosting over decision stumps") != std::string::npos);
    CHECK(text.find("Voting over heterogeneous classifiers") != std::string::npos);
    for (const auto* name :
         {"DTree", "Bagging-Dtree", "MNB", "Bagging-MNB", "RandomForest", "SVM", "Bagging-SVM",
          "Decision stump tree", "Adaboost classifier", "Logistic Regression (LR)", "KNN",
          "Voting-Classifier"})
        CHECK(text.find(name) != std::string::npos);
}

TEST_CASE("the classify endpoint answers health, happy path and abuse") {
    const auto corpus = interface_corpus();
    RunConfig config;
    const auto outcome = train_pipeline(corpus, config);
    TestServer live(outcome.artifact);
    httplib::Client client("127.0.0.1", live.port);

    auto health = client.Get("/health");
    REQUIRE(health);
    CHECK(health->status == 200);
    const auto health_doc = nlohmann::json::parse(health->body);
    CHECK(health_doc.at("version").get<int>() == 1);
    CHECK(health_doc.at("fingerprint").get<std::string>() ==
          outcome.artifact.fingerprint.summary());

    const auto& sample = corpus.tickets[1].description;
    auto ok = client.Post("/classify", nlohmann::json{{"description", sample}}.dump(),
                          "application/json");
    REQUIRE(ok);
    CHECK(ok->status == 200);
    const auto body = nlohmann::json::parse(ok->body);
    const auto expected = classify(outcome.artifact, sample);
    CHECK(body.at("category").get<std::string>() == expected.category);
    CHECK(body.at("confidence").get<double>() == expected.confidence);
    REQUIRE(body.at("top").size() == expected.top.size());
    CHECK(body.at("top")[0][0].get<std::string>() == expected.top[0].first);

    for (const auto* bad : {"not json", "[1,2]", "{}", R"({"description": 42})"}) {
        CAPTURE(bad);
        auto res = client.Post("/classify", bad, "application/json");
        REQUIRE(res);
        CHECK(res->status == 400);
        CHECK(nlohmann::json::parse(res->body).at("error").get<std::string>() ==
              "body must be a JSON object with a string 'description'");
    }

    const std::string pad(kMaxRequestBytes, 'x');
    auto oversize = client.Post("/classify", "{\"description\":\"" + pad + "\"}",
                                "application/json");
    REQUIRE(oversize);
    CHECK(oversize->status == 413);

    // a body exactly at the cap is still served
    const std::string fitting(kMaxRequestBytes - 18, 'x');
    auto at_cap = client.Post("/classify", "{\"description\":\"" + fitting + "\"}",
                              "application/json");
    REQUIRE(at_cap);
    CHECK(at_cap->status == 200);
}

TEST_CASE("served answers match in-process classification") {
    const auto corpus = interface_corpus();
    RunConfig config;
    config.model_kind = "voting";
    const auto outcome = train_pipeline(corpus, config);
    TestServer live(outcome.artifact);
    httplib::Client client("127.0.0.1", live.port);

    Rng rng(88);
    for (int round = 0; round < 10; ++round) {
        const auto& sample = corpus.tickets[rng.below(corpus.size())].description;
        auto res = client.Post("/classify", nlohmann::json{{"description", sample}}.dump(),
                               "application/json");
        REQUIRE(res);
        REQUIRE(res->status == 200);
        const auto body = nlohmann::json::parse(res->body);
        const auto expected = classify(outcome.artifact, sample);
        CHECK(body.at("category").get<std::string>() == expected.category);
        CHECK(body.at("confidence").get<double>() == expected.confidence);
    }
}

}  // TEST_SUITE

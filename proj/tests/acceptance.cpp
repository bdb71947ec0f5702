// Acceptance gate: one line per criterion, nonzero exit if any fails.
// Tolerances and thresholds are pinned here, not configurable.

#include <cmath>
#include <cstdint>
#include <cstring>
#include <iostream>
#include <memory>
#include <string>
#include <thread>
#include <vector>

#include "httplib.h"
#include "json.hpp"
#include "support/synth.hpp"
#include "ticket/pipeline.hpp"
#include "ticket/rng.hpp"
#include "ticket/serve.hpp"

using namespace ticket;

namespace {

constexpr double kValueTol = 1e-6;     // frozen tf-idf reference values
constexpr double kExactTol = 1e-9;     // closed-form identities
constexpr double kIdentityTol = 1e-12; // accuracy == weighted recall
constexpr double kGradTol = 1e-5;      // analytic vs numeric gradient
constexpr double kRosterFloor = 0.95;  // separable-corpus accuracy floor

bool approx(double actual, double expected, double tol) {
    return std::abs(actual - expected) <= tol;
}

std::uint64_t bits(double value) {
    std::uint64_t out = 0;
    std::memcpy(&out, &value, sizeof out);
    return out;
}

double accuracy(const EvaluationReport& report) { return report.accuracy; }

// 1. Reference values for the feature pipeline and the boosting stage weight.
bool check_frozen_values() {
    const std::vector<TokenDoc> docs{{"aa", "bb"}, {"aa"}};
    const auto space = fit_feature_space(docs);
    if (!approx(space.idf[0], 1.0, kValueTol)) return false;
    if (!approx(space.idf[1], std::log(3.0 / 2.0) + 1.0, kValueTol)) return false;

    const auto vec = vectorize({"aa", "bb"}, space);
    if (vec.entries.size() != 2) return false;
    if (!approx(vec.entries[0].weight, 0.579739, kValueTol)) return false;
    if (!approx(vec.entries[1].weight, 0.814802, kValueTol)) return false;

    // a term covering one class exactly scores N on the 2x2 table
    std::vector<TokenDoc> chi_docs;
    std::vector<int> labels;
    for (int d = 0; d < 5; ++d) {
        chi_docs.push_back({"kw", "filler"});
        labels.push_back(0);
        chi_docs.push_back({"filler"});
        labels.push_back(1);
    }
    const auto chi_space = fit_feature_space(chi_docs);
    const auto scores = chi2_scores(chi_docs, labels, chi_space, 2);
    double kw_score = 0.0;
    for (std::size_t t = 0; t < chi_space.terms.size(); ++t)
        if (chi_space.terms[t] == "kw") kw_score = scores[t];
    if (!approx(kw_score, 10.0, kExactTol)) return false;

    return approx(samme_alpha(0.25, 18), std::log(3.0) + std::log(17.0), kExactTol);
}

// 2. The naive Bayes decision agrees with a probability-space oracle.
bool check_mnb_oracle() {
    Rng rng(4001);
    for (int round = 0; round < 500; ++round) {
        const auto data = synth::random_count_corpus(rng, 10, 5, 3);
        const double alpha = (round % 3 == 0) ? 0.5 : (round % 3 == 1) ? 1.0 : 2.0;
        const auto model = train_mnb(data, alpha);
        for (int probe = 0; probe < 5; ++probe) {
            SparseVector query;
            for (std::uint32_t col = 0; col < data.n_features; ++col) {
                const auto count = rng.below(4);
                if (count > 0) query.entries.push_back({col, static_cast<double>(count)});
            }
            const auto oracle = synth::mnb_oracle_scores(data, alpha, query);
            if (model.predict(query) != argmax_lowest(oracle)) return false;
        }
    }
    return true;
}

// 3. Support-weighted recall is accuracy, on arbitrary confusion matrices.
bool check_weighted_recall_identity() {
    Rng rng(4002);
    for (int round = 0; round < 100; ++round) {
        const std::size_t k = 2 + rng.below(9);
        ConfusionMatrix cm;
        cm.counts.assign(k, std::vector<std::uint64_t>(k, 0));
        for (auto& row : cm.counts)
            for (auto& cell : row) cell = rng.below(51);
        cm.counts[0][0] += 1;
        const auto report = metrics(cm);
        if (std::abs(report.weighted_recall - report.accuracy) > kIdentityTol) return false;
    }
    return true;
}

// 4. The logreg gradient matches central differences.
bool check_logreg_gradient() {
    Rng rng(4003);
    const auto data = synth::random_design(12, 4, 3, rng);
    const double l2 = 0.05;

    std::vector<std::vector<double>> weights(3, std::vector<double>(4));
    std::vector<double> biases(3);
    for (auto& row : weights)
        for (double& w : row) w = rng.unit() - 0.5;
    for (double& b : biases) b = rng.unit() - 0.5;

    std::vector<std::vector<double>> grad_w(3, std::vector<double>(4, 0.0));
    std::vector<double> grad_b(3, 0.0);
    logreg_gradient(weights, biases, data, l2, grad_w, grad_b);

    const double h = 1e-6;
    for (int probe = 0; probe < 10; ++probe) {
        const auto c = static_cast<std::size_t>(rng.below(3));
        const auto v = static_cast<std::size_t>(rng.below(5));  // slot 4 probes the bias
        double analytic = 0.0;
        double plus = 0.0, minus = 0.0;
        if (v < 4) {
            analytic = grad_w[c][v];
            auto w = weights;
            w[c][v] += h;
            plus = logreg_loss(w, biases, data, l2);
            w[c][v] -= 2 * h;
            minus = logreg_loss(w, biases, data, l2);
        } else {
            analytic = grad_b[c];
            auto b = biases;
            b[c] += h;
            plus = logreg_loss(weights, b, data, l2);
            b[c] -= 2 * h;
            minus = logreg_loss(weights, b, data, l2);
        }
        const double numeric = (plus - minus) / (2 * h);
        const double scale = std::max({1.0, std::abs(analytic), std::abs(numeric)});
        if (std::abs(analytic - numeric) / scale > kGradTol) return false;
    }
    return true;
}

// 5. Both vote modes agree with a direct aggregation oracle.
bool check_vote_oracle() {
    Rng rng(4004);
    const SparseVector query;
    for (int round = 0; round < 1000; ++round) {
        const int k = 2 + static_cast<int>(rng.below(4));
        const std::size_t n_members = 1 + rng.below(6);
        std::vector<std::vector<double>> dists;
        VotingModel model;
        model.n_classes_ = k;
        model.vote = (round % 2 == 0) ? VoteMode::soft : VoteMode::hard;
        for (std::size_t m = 0; m < n_members; ++m) {
            dists.push_back(synth::random_distribution(k, rng));
            model.members.push_back(std::make_unique<synth::FixedModel>(dists.back()));
        }

        std::vector<double> mean(static_cast<std::size_t>(k), 0.0);
        for (const auto& d : dists)
            for (int c = 0; c < k; ++c) mean[static_cast<std::size_t>(c)] += d[static_cast<std::size_t>(c)];
        for (double& v : mean) v /= static_cast<double>(n_members);

        int expected = -1;
        if (model.vote == VoteMode::soft) {
            expected = argmax_lowest(mean);
        } else {
            std::vector<int> votes(static_cast<std::size_t>(k), 0);
            for (const auto& d : dists) ++votes[static_cast<std::size_t>(argmax_lowest(d))];
            int best_votes = -1;
            for (int c = 0; c < k; ++c) {
                const auto ci = static_cast<std::size_t>(c);
                if (votes[ci] > best_votes) {
                    best_votes = votes[ci];
                    expected = c;
                } else if (votes[ci] == best_votes && mean[ci] > mean[static_cast<std::size_t>(expected)]) {
                    expected = c;
                }
            }
        }
        if (model.predict(query) != expected) return false;
    }
    return true;
}

struct PairedRun {
    double base = 0.0;
    double ensemble = 0.0;
};

std::vector<PairedRun> paired_runs(const std::string& base_config,
                                   const std::string& ensemble_config) {
    std::vector<PairedRun> runs;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const auto corpus = synth::keyword_corpus({.n_classes = 18,
                                                   .n_docs = 2000,
                                                   .keywords_per_class = 10,
                                                   .noise_terms = 60,
                                                   .noise_fraction = 0.3,
                                                   .tokens_per_doc = 12,
                                                   .seed = seed});
        const auto [train, test] = stratified_split(corpus, 0.7, seed);
        auto run = [&](const std::string& text) {
            auto config = parse_config(text);
            config.seed = seed;
            return accuracy(train_on_split(train, test, config).report);
        };
        runs.push_back({run(base_config), run(ensemble_config)});
    }
    return runs;
}

// 6. Bagged trees beat a single tree across seeds.
bool check_bagging_wins(const std::vector<PairedRun>& runs, std::string& detail) {
    int wins = 0;
    for (const auto& r : runs)
        if (r.ensemble >= r.base) ++wins;
    detail = " (wins " + std::to_string(wins) + "/10)";
    return wins >= 8;
}

// 7. Boosting clears the stump by a margin across seeds.
bool check_boosting_margin(const std::vector<PairedRun>& runs, std::string& detail) {
    int wins = 0;
    for (const auto& r : runs)
        if (r.ensemble >= r.base + 0.10) ++wins;
    detail = " (wins " + std::to_string(wins) + "/10)";
    return wins >= 9;
}

// 8. Every roster model masters a separable corpus on one shared split.
bool check_roster_floor(std::string& detail) {
    const auto corpus = synth::separable_corpus(60, 4, 77);
    const auto [train, test] = stratified_split(corpus, 0.7, 77);
    const std::vector<std::string> roster{
        "",
        "model.kind = logreg",
        "model.kind = svm",
        "model.kind = knn",
        "model.kind = dtree",
        "model.kind = stump",
        "model.kind = bagging",
        "model.kind = forest",
        "model.kind = adaboost",
        "model.kind = voting",
    };
    for (const auto& text : roster) {
        auto config = parse_config(text);
        config.seed = 77;
        const auto report = train_on_split(train, test, config).report;
        if (accuracy(report) < kRosterFloor) {
            detail = " (" + report.model_name + " at " + std::to_string(accuracy(report)) + ")";
            return false;
        }
    }
    return true;
}

// 9. Training is byte-reproducible and artifacts reload bit-exactly.
bool check_artifact_stability(std::string& detail) {
    const auto corpus = synth::keyword_corpus({.n_classes = 3,
                                               .n_docs = 30,
                                               .keywords_per_class = 4,
                                               .noise_terms = 6,
                                               .noise_fraction = 0.2,
                                               .tokens_per_doc = 6,
                                               .seed = 5});
    const std::vector<std::string> roster{
        "",
        "model.kind = logreg",
        "model.kind = svm",
        "model.kind = knn",
        "model.kind = dtree",
        "model.kind = stump",
        "model.kind = bagging\nmodel.n_estimators = 5",
        "model.kind = forest\nmodel.n_estimators = 5",
        "model.kind = adaboost\nmodel.rounds = 10",
        "model.kind = voting",
    };
    Rng rng(4009);
    for (const auto& text : roster) {
        auto config = parse_config(text);
        config.seed = 6;
        const auto outcome = train_pipeline(corpus, config);
        const auto serialized = artifact_to_string(outcome.artifact);
        if (artifact_to_string(train_pipeline(corpus, config).artifact) != serialized) {
            detail = " (unstable bytes for " + outcome.report.model_name + ")";
            return false;
        }
        const auto loaded = artifact_from_string(serialized);
        for (int probe = 0; probe < 5; ++probe) {
            const auto query = synth::random_row(outcome.artifact.space.terms.size(), 4, rng);
            const auto expected = outcome.artifact.model->predict_distribution(query);
            const auto actual = loaded.model->predict_distribution(query);
            if (actual.size() != expected.size()) return false;
            for (std::size_t c = 0; c < expected.size(); ++c)
                if (bits(actual[c]) != bits(expected[c])) {
                    detail = " (dist drift for " + outcome.report.model_name + ")";
                    return false;
                }
        }
    }
    return true;
}

// 10. The HTTP endpoint answers exactly like in-process classification.
bool check_serve_parity() {
    const auto corpus = synth::keyword_corpus({.n_classes = 5,
                                               .n_docs = 100,
                                               .keywords_per_class = 6,
                                               .noise_terms = 12,
                                               .noise_fraction = 0.25,
                                               .tokens_per_doc = 8,
                                               .seed = 11});
    RunConfig config;
    config.seed = 11;
    const auto outcome = train_pipeline(corpus, config);

    httplib::Server server;
    configure_classify_routes(server, outcome.artifact);
    const int port = server.bind_to_any_port("127.0.0.1");
    if (port <= 0) return false;
    std::thread listener([&server] { server.listen_after_bind(); });
    server.wait_until_ready();

    bool ok = true;
    {
        httplib::Client client("127.0.0.1", port);
        Rng rng(4010);
        for (int round = 0; round < 100 && ok; ++round) {
            std::string text;
            for (int t = 0; t < 8; ++t) {
                if (!text.empty()) text += ' ';
                text += (rng.unit() < 0.25) ? synth::word("nz", rng.below(12))
                                            : synth::word("kw", rng.below(30));
            }
            const auto res =
                client.Post("/classify", nlohmann::json{{"description", text}}.dump(),
                            "application/json");
            if (!res || res->status != 200) {
                ok = false;
                break;
            }
            const auto body = nlohmann::json::parse(res->body);
            const auto expected = classify(outcome.artifact, text);
            ok = body.at("category").get<std::string>() == expected.category &&
                 body.at("confidence").get<double>() == expected.confidence;
        }
    }
    server.stop();
    listener.join();
    return ok;
}

int report(int number, const std::string& name, bool passed, const std::string& detail = "") {
    std::cout << (passed ? "[PASS] " : "[FAIL] ") << number << " " << name << detail << "\n";
    return passed ? 0 : 1;
}

}  // namespace

int main() {
    int failures = 0;
    std::string detail;

    failures += report(1, "frozen reference values", check_frozen_values());
    failures += report(2, "naive bayes matches the probability oracle", check_mnb_oracle());
    failures += report(3, "weighted recall equals accuracy", check_weighted_recall_identity());
    failures += report(4, "logreg gradient matches central differences", check_logreg_gradient());
    failures += report(5, "vote aggregation matches the oracle", check_vote_oracle());

    const auto bagging_runs = paired_runs("model.kind = dtree", "model.kind = bagging");
    failures += report(6, "bagged trees beat a single tree",
                       check_bagging_wins(bagging_runs, detail), detail);
    detail.clear();
    const auto boosting_runs = paired_runs("model.kind = stump", "model.kind = adaboost");
    failures += report(7, "boosting clears the stump by 0.10",
                       check_boosting_margin(boosting_runs, detail), detail);
    detail.clear();

    failures += report(8, "full roster reaches 0.95 on separable data", check_roster_floor(detail),
                       detail);
    detail.clear();
    failures += report(9, "artifacts are byte-stable and reload bit-exactly",
                       check_artifact_stability(detail), detail);
    detail.clear();
    failures += report(10, "served answers equal in-process answers", check_serve_parity());

    if (failures > 0) {
        std::cout << failures << " criteria failed\n";
        return 1;
    }
    std::cout << "all criteria passed\n";
    return 0;
}

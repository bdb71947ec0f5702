#include "ticket/serve.hpp"

#include <memory>

#include "httplib.h"
#include "json.hpp"
#include "ticket/pipeline.hpp"

namespace ticket {

using nlohmann::json;

void configure_classify_routes(httplib::Server& server, const PipelineArtifact& artifact) {
    auto classifier = std::make_shared<TicketClassifier>(artifact);
    const int version = artifact.format_version;
    const std::string fingerprint = artifact.fingerprint.summary();

    server.set_payload_max_length(kMaxRequestBytes);

    server.Post("/classify", [classifier](const httplib::Request& req, httplib::Response& res) {
        const json body = json::parse(req.body, nullptr, false);
        if (body.is_discarded() || !body.is_object() || !body.contains("description") ||
            !body["description"].is_string()) {
            res.status = 400;
            res.set_content(
                json{{"error", "body must be a JSON object with a string 'description'"}}.dump(),
                "application/json");
            return;
        }
        try {
            const auto result = classifier->classify(body["description"].get<std::string>());
            json top = json::array();
            for (const auto& [name, p] : result.top) top.push_back(json::array({name, p}));
            res.set_content(json{{"category", result.category},
                                 {"confidence", result.confidence},
                                 {"top", std::move(top)}}
                                .dump(),
                            "application/json");
        } catch (const std::exception& e) {
            res.status = 500;
            res.set_content(json{{"error", e.what()}}.dump(), "application/json");
        }
    });

    server.Get("/health", [version, fingerprint](const httplib::Request&, httplib::Response& res) {
        res.set_content(json{{"fingerprint", fingerprint}, {"version", version}}.dump(),
                        "application/json");
    });
}

}  // namespace ticket

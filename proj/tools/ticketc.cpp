#include <exception>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "ticket/commands.hpp"

int main(int argc, char** argv) {
    CLI::App app{"ticketc - helpdesk ticket classification engine"};
    app.require_subcommand(1);

    std::string data, config, out, model, text;
    int port = 8080;

    auto* train = app.add_subcommand("train", "Train a pipeline and write the model artifact");
    train->add_option("--data", data, "labeled CSV file")->required();
    train->add_option("--config", config, "run config file (dotted key = value lines)");
    train->add_option("--out", out, "artifact output path")->required();

    auto* evaluate = app.add_subcommand("evaluate", "Evaluate a stored artifact on labeled data");
    evaluate->add_option("--data", data, "labeled CSV file")->required();
    evaluate->add_option("--model", model, "artifact path")->required();

    auto* predict = app.add_subcommand("predict", "Classify a single ticket description");
    predict->add_option("--model", model, "artifact path")->required();
    predict->add_option("--text", text, "ticket description")->required();

    auto* bench = app.add_subcommand("bench", "Train the comparison roster and print the tables");
    bench->add_option("--data", data, "labeled CSV file")->required();
    bench->add_option("--config", config, "run config file");

    auto* serve = app.add_subcommand("serve", "Serve POST /classify and GET /health");
    serve->add_option("--model", model, "artifact path")->required();
    serve->add_option("--port", port, "TCP port (default 8080)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (train->parsed()) return ticket::cmd_train(data, config, out, std::cout);
        if (evaluate->parsed()) return ticket::cmd_evaluate(data, model, std::cout);
        if (predict->parsed()) return ticket::cmd_predict(model, text, std::cout);
        if (bench->parsed()) return ticket::cmd_bench(data, config, std::cout);
        if (serve->parsed()) return ticket::cmd_serve(model, port, std::cout);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << std::endl;
        return 1;
    }
    return 0;
}

#pragma once

#include <iosfwd>
#include <string>

namespace ticket {

// CLI subcommand bodies. Each returns 0 on success and reports failure by
// throwing; the binary turns exceptions into single-line diagnostics and a
// nonzero exit. Output goes to the stream so tests can capture it.

// ingest -> split -> resample -> features -> train -> evaluate -> save.
// An empty config_path means all defaults.
int cmd_train(const std::string& data_path, const std::string& config_path,
              const std::string& out_path, std::ostream& out);

int cmd_evaluate(const std::string& data_path, const std::string& model_path, std::ostream& out);

int cmd_predict(const std::string& model_path, const std::string& text, std::ostream& out);

// Trains the fixed comparison roster (bagged pairs, boosting, voting) on one
// shared split and prints the three tables.
int cmd_bench(const std::string& data_path, const std::string& config_path, std::ostream& out);

// Blocks serving POST /classify and GET /health until the process exits.
int cmd_serve(const std::string& model_path, int port, std::ostream& out);

}  // namespace ticket

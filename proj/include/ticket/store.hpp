#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "ticket/corpus.hpp"
#include "ticket/ensembles.hpp"
#include "ticket/features.hpp"
#include "ticket/learners.hpp"
#include "ticket/preprocess.hpp"

namespace ticket {

inline constexpr int kArtifactFormatVersion = 1;

struct TrainingFingerprint {
    std::uint64_t seed = 0;
    std::string spec;           // model description, e.g. "bagging(base=dtree,n=25,vote=hard)"
    std::uint64_t data_rows = 0;
    std::string created;        // caller-supplied stamp; empty unless configured

    // One-line form echoed by the health endpoint.
    std::string summary() const;
};

// The complete frozen pipeline: everything classification needs, nothing
// tied to the training machine. The stopword list is embedded so prediction
// works without the data file; its hash detects drift at load time.
struct PipelineArtifact {
    int format_version = kArtifactFormatVersion;
    CleaningConfig cleaning;
    FeatureSpace space;
    std::unique_ptr<Model> model;
    LabelMap labels;
    TrainingFingerprint fingerprint;
};

// Canonical serialized form: sorted keys, shortest round-trip numbers, so
// identical artifacts produce identical bytes.
std::string artifact_to_string(const PipelineArtifact& artifact);

// Inverse of artifact_to_string. Appends non-fatal findings (currently only
// a stopword-hash mismatch) to warnings when given.
PipelineArtifact artifact_from_string(const std::string& text,
                                      std::vector<std::string>* warnings = nullptr);

void save_artifact(const PipelineArtifact& artifact, const std::string& path);
PipelineArtifact load_artifact(const std::string& path,
                               std::vector<std::string>* warnings = nullptr);

// Model-level (de)serialization, exposed for round-trip tests. The encoded
// form carries a "kind" tag matching Model::kind().
std::string model_to_string(const Model& model);
std::unique_ptr<Model> model_from_string(const std::string& text);

}  // namespace ticket

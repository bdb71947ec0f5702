#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace ticket {

using TokenDoc = std::vector<std::string>;

struct CleaningPattern {
    std::string name;
    std::string pattern;  // expression naming a built-in mask, replaced by a space
};

struct CleaningConfig {
    std::vector<CleaningPattern> patterns;  // applied in listed order
    std::vector<std::string> stopwords;     // lowercase, sorted, unique
    std::size_t min_token_length = 2;

    bool is_stopword(const std::string& token) const;
    // Hash of the canonical stopword set (sorted terms joined by newlines),
    // stored in artifacts so a loaded model detects stoplist drift.
    std::uint64_t stopword_hash() const;
};

// Pattern set + built-in stopword list; the shipped data/stopwords.txt file
// carries the same terms.
CleaningConfig default_cleaning_config();

const std::vector<std::string>& builtin_stopwords();

// Reads one lowercase term per line, UTF-8; result is sorted and deduplicated.
std::vector<std::string> load_stopwords(const std::string& path);

// Applies the config's patterns in order, strips remaining non-alphabetic
// characters, lowercases, and collapses whitespace. Idempotent.
std::string clean_text(const std::string& raw, const CleaningConfig& config);

// Splits cleaned text on whitespace and drops short tokens and stopwords.
TokenDoc tokenize_and_filter(const std::string& cleaned, const CleaningConfig& config);

// Compiled form of the cleaning pipeline for bulk use. Construction rejects
// pattern expressions outside the built-in mask set.
class Cleaner {
  public:
    explicit Cleaner(CleaningConfig config);
    const CleaningConfig& config() const { return config_; }
    std::string clean(const std::string& raw) const;
    TokenDoc process(const std::string& raw) const;  // clean + tokenize

  private:
    CleaningConfig config_;
    std::vector<std::string (*)(const std::string&)> passes_;
};

enum class ResampleMode { none, oversample_to_max, undersample_to_min };

struct ResampleStrategy {
    ResampleMode mode = ResampleMode::none;
    std::uint64_t seed = 0;
};

std::string to_string(ResampleMode mode);
ResampleMode resample_mode_from_string(const std::string& name);

// Rebalances class counts. Oversampling appends seeded with-replacement
// duplicates of minority rows until every class matches the max count;
// undersampling keeps a seeded without-replacement subset of each majority
// class equal to the min count, preserving original row order.
std::vector<std::pair<TokenDoc, int>> resample(const std::vector<std::pair<TokenDoc, int>>& dataset,
                                               const ResampleStrategy& strategy);

}  // namespace ticket

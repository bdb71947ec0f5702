#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace ticket {

struct RawTicket {
    std::string id;
    std::string description;
    std::string label;
};

// Category name <-> index, indices assigned in first-seen order and frozen.
class LabelMap {
  public:
    int add_or_get(const std::string& name);
    std::optional<int> index_of(const std::string& name) const;
    const std::string& name(int index) const { return names_.at(static_cast<std::size_t>(index)); }
    const std::vector<std::string>& names() const { return names_; }
    int size() const { return static_cast<int>(names_.size()); }

  private:
    std::vector<std::string> names_;
    std::unordered_map<std::string, int> index_;
};

struct LabeledCorpus {
    std::vector<RawTicket> tickets;
    LabelMap label_map;

    std::size_t size() const { return tickets.size(); }
    int label_index(std::size_t row) const;
};

struct LoadResult {
    LabeledCorpus corpus;
    std::size_t skipped = 0;  // rows dropped for empty description or label
};

// Reads a delimited UTF-8 file with a header row. Quoted fields may contain
// the delimiter and newlines; embedded quotes are doubled.
LoadResult load_csv(const std::string& path, const std::string& text_column,
                    const std::string& label_column, char delimiter = ',');

// Builds a corpus from in-memory (description, label) rows; ids are row numbers.
LabeledCorpus corpus_from_rows(const std::vector<std::pair<std::string, std::string>>& rows);

// Instance counts per class index; sums to corpus size.
std::vector<std::size_t> class_histogram(const LabeledCorpus& corpus);

// Seeded stratified split. Per class, a seeded shuffle is taken and the first
// max(1, floor(train_fraction * n_c)) rows go to train, always keeping at
// least one row of every class in test. Row order within each side follows
// the original corpus order.
std::pair<LabeledCorpus, LabeledCorpus> stratified_split(const LabeledCorpus& corpus,
                                                         double train_fraction,
                                                         std::uint64_t seed);

// Low-level field splitter for one record (used by load_csv; exposed for tests).
std::vector<std::string> split_csv_record(const std::string& record, char delimiter);

}  // namespace ticket

#include "ticket/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

#include "ticket/rng.hpp"

namespace ticket {

int LabelMap::add_or_get(const std::string& name) {
    auto it = index_.find(name);
    if (it != index_.end()) return it->second;
    int idx = static_cast<int>(names_.size());
    names_.push_back(name);
    index_.emplace(name, idx);
    return idx;
}

std::optional<int> LabelMap::index_of(const std::string& name) const {
    auto it = index_.find(name);
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

int LabeledCorpus::label_index(std::size_t row) const {
    auto idx = label_map.index_of(tickets.at(row).label);
    if (!idx) throw std::logic_error("corpus: ticket label missing from label map");
    return *idx;
}

namespace {

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

// Pulls one logical record from the stream, honouring quoted fields that
// span lines. Returns false at end of input.
bool read_record(std::istream& in, std::string& record) {
    record.clear();
    bool in_quotes = false;
    bool any = false;
    int c;
    while ((c = in.get()) != EOF) {
        any = true;
        char ch = static_cast<char>(c);
        if (ch == '"') {
            in_quotes = !in_quotes;
            record.push_back(ch);
        } else if (ch == '\n' && !in_quotes) {
            if (!record.empty() && record.back() == '\r') record.pop_back();
            return true;
        } else {
            record.push_back(ch);
        }
    }
    if (!record.empty() && record.back() == '\r') record.pop_back();
    return any;
}

}  // namespace

std::vector<std::string> split_csv_record(const std::string& record, char delimiter) {
    std::vector<std::string> fields;
    std::string cur;
    bool in_quotes = false;
    for (std::size_t i = 0; i < record.size(); ++i) {
        char c = record[i];
        if (c == '"') {
            if (in_quotes && i + 1 < record.size() && record[i + 1] == '"') {
                cur.push_back('"');
                ++i;
            } else {
                in_quotes = !in_quotes;
            }
        } else if (c == delimiter && !in_quotes) {
            fields.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    fields.push_back(cur);
    return fields;
}

LoadResult load_csv(const std::string& path, const std::string& text_column,
                    const std::string& label_column, char delimiter) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("corpus: cannot open file: " + path);

    std::string header;
    if (!read_record(in, header)) throw std::runtime_error("corpus: empty file: " + path);
    auto columns = split_csv_record(header, delimiter);

    auto find_column = [&](const std::string& name) {
        for (std::size_t i = 0; i < columns.size(); ++i)
            if (trim(columns[i]) == name) return static_cast<long>(i);
        return -1L;
    };
    long text_col = find_column(text_column);
    if (text_col < 0) throw std::runtime_error("corpus: missing column '" + text_column + "' in " + path);
    long label_col = find_column(label_column);
    if (label_col < 0) throw std::runtime_error("corpus: missing column '" + label_column + "' in " + path);

    LoadResult out;
    std::string record;
    std::size_t row = 0;
    while (read_record(in, record)) {
        ++row;
        if (record.empty()) continue;
        auto fields = split_csv_record(record, delimiter);
        std::string description =
            static_cast<std::size_t>(text_col) < fields.size() ? trim(fields[static_cast<std::size_t>(text_col)]) : "";
        std::string label =
            static_cast<std::size_t>(label_col) < fields.size() ? trim(fields[static_cast<std::size_t>(label_col)]) : "";
        if (description.empty() || label.empty()) {
            ++out.skipped;
            continue;
        }
        out.corpus.label_map.add_or_get(label);
        out.corpus.tickets.push_back({"row-" + std::to_string(row), description, label});
    }
    if (out.corpus.tickets.empty())
        throw std::runtime_error("corpus: no usable rows in " + path);
    return out;
}

LabeledCorpus corpus_from_rows(const std::vector<std::pair<std::string, std::string>>& rows) {
    LabeledCorpus corpus;
    std::size_t row = 0;
    for (const auto& [description, label] : rows) {
        ++row;
        std::string d = trim(description);
        std::string l = trim(label);
        if (d.empty()) throw std::runtime_error("corpus: empty description at row " + std::to_string(row));
        if (l.empty()) throw std::runtime_error("corpus: empty label at row " + std::to_string(row));
        corpus.label_map.add_or_get(l);
        corpus.tickets.push_back({"row-" + std::to_string(row), d, l});
    }
    if (corpus.tickets.empty()) throw std::runtime_error("corpus: no rows given");
    return corpus;
}

std::vector<std::size_t> class_histogram(const LabeledCorpus& corpus) {
    std::vector<std::size_t> counts(static_cast<std::size_t>(corpus.label_map.size()), 0);
    for (std::size_t i = 0; i < corpus.size(); ++i)
        counts[static_cast<std::size_t>(corpus.label_index(i))]++;
    return counts;
}

std::pair<LabeledCorpus, LabeledCorpus> stratified_split(const LabeledCorpus& corpus,
                                                         double train_fraction,
                                                         std::uint64_t seed) {
    if (!(train_fraction > 0.0 && train_fraction < 1.0))
        throw std::invalid_argument("corpus: train_fraction must be in (0,1)");
    const int k = corpus.label_map.size();

    std::vector<std::vector<std::size_t>> by_class(static_cast<std::size_t>(k));
    for (std::size_t i = 0; i < corpus.size(); ++i)
        by_class[static_cast<std::size_t>(corpus.label_index(i))].push_back(i);
    for (int c = 0; c < k; ++c) {
        if (by_class[static_cast<std::size_t>(c)].size() < 2)
            throw std::runtime_error("corpus: class '" + corpus.label_map.name(c) +
                                     "' has fewer than 2 instances; cannot split");
    }

    Rng rng(seed);
    std::vector<bool> in_train(corpus.size(), false);
    for (int c = 0; c < k; ++c) {
        auto& rows = by_class[static_cast<std::size_t>(c)];
        rng.shuffle(rows);
        std::size_t n_c = rows.size();
        std::size_t take = std::max<std::size_t>(
            1, static_cast<std::size_t>(std::floor(train_fraction * static_cast<double>(n_c))));
        if (take >= n_c) take = n_c - 1;  // keep one in test
        for (std::size_t i = 0; i < take; ++i) in_train[rows[i]] = true;
    }

    LabeledCorpus train, test;
    train.label_map = corpus.label_map;
    test.label_map = corpus.label_map;
    for (std::size_t i = 0; i < corpus.size(); ++i)
        (in_train[i] ? train : test).tickets.push_back(corpus.tickets[i]);
    return {std::move(train), std::move(test)};
}

}  // namespace ticket

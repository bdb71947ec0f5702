#include "ticket/preprocess.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <stdexcept>

#include "ticket/rng.hpp"
#include "ticket/util.hpp"

namespace ticket {

bool CleaningConfig::is_stopword(const std::string& token) const {
    return std::binary_search(stopwords.begin(), stopwords.end(), token);
}

std::uint64_t CleaningConfig::stopword_hash() const {
    std::string joined;
    for (const auto& w : stopwords) {
        joined += w;
        joined += '\n';
    }
    return fnv1a(joined);
}

CleaningConfig default_cleaning_config() {
    CleaningConfig config;
    config.patterns = {
        {"email", R"([A-Za-z0-9._%+-]+@[A-Za-z0-9.-]+\.[A-Za-z]{2,})"},
        {"phone", R"(\+?\d[\d\-\.\s\(\)]{6,}\d)"},
        {"date", R"(\d{1,4}[-/]\d{1,2}[-/]\d{1,4})"},
        {"time", R"(\d{1,2}:\d{2}(:\d{2})?(\s?[AaPp][Mm])?)"},
    };
    config.stopwords = builtin_stopwords();
    config.min_token_length = 2;
    return config;
}

std::vector<std::string> load_stopwords(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("preprocess: cannot open stopword file: " + path);
    std::vector<std::string> words;
    std::string line;
    while (std::getline(in, line)) {
        while (!line.empty() && (line.back() == '\r' || line.back() == ' ' || line.back() == '\t'))
            line.pop_back();
        if (line.empty()) continue;
        for (char& c : line) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        words.push_back(line);
    }
    std::sort(words.begin(), words.end());
    words.erase(std::unique(words.begin(), words.end()), words.end());
    return words;
}

namespace {

// The mask scanners below reproduce the greedy match semantics of the shipped
// expressions with explicit loops. Matching is linear in the input and uses
// no recursion, so arbitrarily long tickets cannot exhaust the stack.

bool ascii_digit(char c) { return c >= '0' && c <= '9'; }
bool ascii_alpha(char c) { return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z'); }
bool ascii_space(char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\v' || c == '\f' || c == '\r';
}
bool local_char(char c) {
    return ascii_alpha(c) || ascii_digit(c) || c == '.' || c == '_' || c == '%' || c == '+' ||
           c == '-';
}
bool domain_char(char c) {
    return ascii_alpha(c) || ascii_digit(c) || c == '.' || c == '-';
}
bool phone_mid(char c) {
    return ascii_digit(c) || c == '-' || c == '.' || ascii_space(c) || c == '(' || c == ')';
}
bool date_sep(char c) { return c == '-' || c == '/'; }
bool ap_char(char c) { return c == 'A' || c == 'a' || c == 'P' || c == 'p'; }
bool m_char(char c) { return c == 'M' || c == 'm'; }

constexpr std::size_t npos = std::string::npos;
using Span = std::pair<std::size_t, std::size_t>;

// user@host where host holds a dot followed by two or more letters. On a
// failed candidate the search resumes right after the '@', never earlier,
// because every start inside the user run fails the same way.
Span find_email(const std::string& t, std::size_t from) {
    const std::size_t n = t.size();
    std::size_t pos = from;
    while (pos < n) {
        if (!local_char(t[pos])) {
            ++pos;
            continue;
        }
        std::size_t j = pos;
        while (j < n && local_char(t[j])) ++j;
        if (j == n || t[j] != '@') {
            pos = j;
            continue;
        }
        const std::size_t s = j + 1;
        std::size_t e = s;
        while (e < n && domain_char(t[e])) ++e;
        // latest qualifying dot wins, as greedy evaluation would choose
        for (std::size_t p = e; p-- > s + 1;) {
            if (t[p] != '.') continue;
            std::size_t q = p + 1;
            while (q < n && ascii_alpha(t[q])) ++q;
            if (q - p - 1 >= 2) return {pos, q};
        }
        pos = s;
    }
    return {npos, npos};
}

// optional '+', a digit, six or more connector characters, a closing digit
Span find_phone(const std::string& t, std::size_t from) {
    const std::size_t n = t.size();
    for (std::size_t pos = from; pos < n; ++pos) {
        std::size_t d0 = npos;
        if (ascii_digit(t[pos])) d0 = pos;
        else if (t[pos] == '+' && pos + 1 < n && ascii_digit(t[pos + 1])) d0 = pos + 1;
        else continue;
        std::size_t b = d0 + 1;
        while (b < n && phone_mid(t[b])) ++b;
        // latest closing digit wins; it must sit past six connector chars
        for (std::size_t q = b; q-- > d0 + 7;) {
            if (ascii_digit(t[q])) return {pos, q + 1};
        }
    }
    return {npos, npos};
}

std::size_t digits_at(const std::string& t, std::size_t pos, std::size_t cap) {
    std::size_t k = 0;
    while (pos + k < t.size() && k < cap && ascii_digit(t[pos + k])) ++k;
    return k;
}

// 1-4 digits, separator, 1-2 digits, separator, 1-4 digits; a group followed
// by excess digits cannot match because the separator slot would hold a digit
std::size_t match_date(const std::string& t, std::size_t pos) {
    const std::size_t n = t.size();
    const std::size_t a = digits_at(t, pos, 5);
    if (a == 0 || a > 4) return 0;
    const std::size_t p = pos + a;
    if (p >= n || !date_sep(t[p])) return 0;
    const std::size_t b = digits_at(t, p + 1, 3);
    if (b == 0 || b > 2) return 0;
    const std::size_t q = p + 1 + b;
    if (q >= n || !date_sep(t[q])) return 0;
    const std::size_t c = digits_at(t, q + 1, 4);
    if (c == 0) return 0;
    return q + 1 + c;
}

// 1-2 digits, colon, two digits, optional :ss, optional am/pm marker
std::size_t match_time(const std::string& t, std::size_t pos) {
    const std::size_t n = t.size();
    const std::size_t h = digits_at(t, pos, 3);
    if (h == 0 || h > 2) return 0;
    const std::size_t c = pos + h;
    if (c >= n || t[c] != ':') return 0;
    if (c + 2 >= n || !ascii_digit(t[c + 1]) || !ascii_digit(t[c + 2])) return 0;
    std::size_t end = c + 3;
    if (end + 2 < n && t[end] == ':' && ascii_digit(t[end + 1]) && ascii_digit(t[end + 2]))
        end += 3;
    if (end + 2 < n && ascii_space(t[end]) && ap_char(t[end + 1]) && m_char(t[end + 2]))
        end += 3;
    else if (end + 1 < n && ap_char(t[end]) && m_char(t[end + 1]))
        end += 2;
    return end;
}

Span find_date(const std::string& t, std::size_t from) {
    for (std::size_t pos = from; pos < t.size(); ++pos) {
        const std::size_t end = match_date(t, pos);
        if (end != 0) return {pos, end};
    }
    return {npos, npos};
}

Span find_time(const std::string& t, std::size_t from) {
    for (std::size_t pos = from; pos < t.size(); ++pos) {
        const std::size_t end = match_time(t, pos);
        if (end != 0) return {pos, end};
    }
    return {npos, npos};
}

// leftmost non-overlapping matches become single spaces
std::string mask_matches(const std::string& text, Span (*next)(const std::string&, std::size_t)) {
    std::string out;
    out.reserve(text.size());
    std::size_t i = 0;
    while (i < text.size()) {
        const auto [begin, end] = next(text, i);
        if (begin == npos) break;
        out.append(text, i, begin - i);
        out.push_back(' ');
        i = end;
    }
    out.append(text, i, npos);
    return out;
}

std::string mask_emails(const std::string& text) { return mask_matches(text, find_email); }
std::string mask_phones(const std::string& text) { return mask_matches(text, find_phone); }
std::string mask_dates(const std::string& text) { return mask_matches(text, find_date); }
std::string mask_times(const std::string& text) { return mask_matches(text, find_time); }

std::string (*lookup_mask(const CleaningPattern& p))(const std::string&) {
    if (p.pattern == R"([A-Za-z0-9._%+-]+@[A-Za-z0-9.-]+\.[A-Za-z]{2,})") return mask_emails;
    if (p.pattern == R"(\+?\d[\d\-\.\s\(\)]{6,}\d)") return mask_phones;
    if (p.pattern == R"(\d{1,4}[-/]\d{1,2}[-/]\d{1,4})") return mask_dates;
    if (p.pattern == R"(\d{1,2}:\d{2}(:\d{2})?(\s?[AaPp][Mm])?)") return mask_times;
    throw std::runtime_error("preprocess: unsupported cleaning pattern '" + p.name + "'");
}

std::string strip_and_collapse(const std::string& text) {
    std::string out;
    out.reserve(text.size());
    bool pending_space = false;
    for (unsigned char c : text) {
        if (std::isalpha(c)) {
            if (pending_space && !out.empty()) out.push_back(' ');
            pending_space = false;
            out.push_back(static_cast<char>(std::tolower(c)));
        } else {
            pending_space = true;
        }
    }
    return out;
}

}  // namespace

Cleaner::Cleaner(CleaningConfig config) : config_(std::move(config)) {
    passes_.reserve(config_.patterns.size());
    for (const auto& p : config_.patterns) passes_.push_back(lookup_mask(p));
}

std::string Cleaner::clean(const std::string& raw) const {
    std::string text = raw;
    for (const auto pass : passes_) text = pass(text);
    return strip_and_collapse(text);
}

TokenDoc Cleaner::process(const std::string& raw) const {
    return tokenize_and_filter(clean(raw), config_);
}

std::string clean_text(const std::string& raw, const CleaningConfig& config) {
    return Cleaner(config).clean(raw);
}

TokenDoc tokenize_and_filter(const std::string& cleaned, const CleaningConfig& config) {
    TokenDoc tokens;
    std::size_t i = 0;
    while (i < cleaned.size()) {
        while (i < cleaned.size() && cleaned[i] == ' ') ++i;
        std::size_t start = i;
        while (i < cleaned.size() && cleaned[i] != ' ') ++i;
        if (i == start) continue;
        std::string token = cleaned.substr(start, i - start);
        if (token.size() < config.min_token_length) continue;
        if (config.is_stopword(token)) continue;
        tokens.push_back(std::move(token));
    }
    return tokens;
}

std::string to_string(ResampleMode mode) {
    switch (mode) {
        case ResampleMode::none: return "none";
        case ResampleMode::oversample_to_max: return "oversample";
        case ResampleMode::undersample_to_min: return "undersample";
    }
    return "none";
}

ResampleMode resample_mode_from_string(const std::string& name) {
    if (name == "none") return ResampleMode::none;
    if (name == "oversample" || name == "oversample-to-max") return ResampleMode::oversample_to_max;
    if (name == "undersample" || name == "undersample-to-min") return ResampleMode::undersample_to_min;
    throw std::runtime_error("preprocess: unknown resample mode '" + name + "'");
}

std::vector<std::pair<TokenDoc, int>> resample(const std::vector<std::pair<TokenDoc, int>>& dataset,
                                               const ResampleStrategy& strategy) {
    if (strategy.mode == ResampleMode::none) return dataset;
    if (dataset.empty()) throw std::invalid_argument("preprocess: cannot resample an empty dataset");

    int k = 0;
    for (const auto& [doc, label] : dataset) k = std::max(k, label + 1);
    std::vector<std::vector<std::size_t>> by_class(static_cast<std::size_t>(k));
    for (std::size_t i = 0; i < dataset.size(); ++i)
        by_class[static_cast<std::size_t>(dataset[i].second)].push_back(i);

    std::size_t max_count = 0;
    std::size_t min_count = dataset.size();
    for (const auto& rows : by_class) {
        if (rows.empty()) continue;
        max_count = std::max(max_count, rows.size());
        min_count = std::min(min_count, rows.size());
    }

    Rng rng(strategy.seed);
    if (strategy.mode == ResampleMode::oversample_to_max) {
        auto out = dataset;
        for (const auto& rows : by_class) {
            if (rows.empty()) continue;
            for (std::size_t n = rows.size(); n < max_count; ++n)
                out.push_back(dataset[rows[rng.below(rows.size())]]);
        }
        return out;
    }

    // undersample-to-min
    std::vector<bool> keep(dataset.size(), false);
    for (auto rows : by_class) {
        if (rows.empty()) continue;
        rng.shuffle(rows);
        for (std::size_t i = 0; i < min_count; ++i) keep[rows[i]] = true;
    }
    std::vector<std::pair<TokenDoc, int>> out;
    for (std::size_t i = 0; i < dataset.size(); ++i)
        if (keep[i]) out.push_back(dataset[i]);
    return out;
}

}  // namespace ticket

#include <algorithm>
#include <string>
#include <vector>

namespace ticket {

// Mirrors data/stopwords.txt; a unit test keeps the two in sync.
const std::vector<std::string>& builtin_stopwords() {
    static const std::vector<std::string> words = [] {
        std::vector<std::string> w = {
            "me", "my", "myself", "we", "our", "ours", "ourselves",
            "you", "your", "yours", "yourself", "yourselves",
            "he", "him", "his", "himself", "she", "her", "hers", "herself",
            "it", "its", "itself", "they", "them", "their", "theirs", "themselves",
            "what", "which", "who", "whom", "this", "that", "these", "those",
            "am", "is", "are", "was", "were", "be", "been", "being",
            "have", "has", "had", "having", "do", "does", "did", "doing",
            "an", "the", "and", "but", "if", "or", "because", "as", "until", "while",
            "of", "at", "by", "for", "with", "about", "against", "between", "into",
            "through", "during", "before", "after", "above", "below", "to", "from",
            "up", "down", "in", "out", "on", "off", "over", "under",
            "again", "further", "then", "once", "here", "there", "when", "where",
            "why", "how", "all", "any", "both", "each", "few", "more", "most",
            "other", "some", "such", "no", "nor", "not", "only", "own", "same",
            "so", "than", "too", "very", "can", "will", "just", "should", "now",
            "don", "ain", "aren", "couldn", "didn", "doesn", "hadn", "hasn",
            "haven", "isn", "ma", "mightn", "mustn", "needn", "shan", "shouldn",
            "wasn", "weren", "won", "wouldn",
            "could", "would", "might", "must", "shall", "may", "ought",
            "ever", "never", "either", "neither", "whether",
            "however", "therefore", "hence", "thus", "yet", "else",
            "upon", "within", "without", "across", "onto", "beside", "besides",
            "unless", "since", "though", "although", "whereas", "per", "via", "also",
        };
        std::sort(w.begin(), w.end());
        w.erase(std::unique(w.begin(), w.end()), w.end());
        return w;
    }();
    return words;
}

}  // namespace ticket

#ifndef RHETOR_TEXT_HPP
#define RHETOR_TEXT_HPP

// Text ingestion: paragraph and sentence splitting, relation tagging from the
// connective lexicon, and detection of segmentation constraints.

#include <algorithm>
#include <array>
#include <cctype>
#include <compare>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "rhetor/catalog.hpp"
#include "rhetor/error.hpp"

namespace rhetor {

/// A connective matched by the lexicon, with its byte range inside the sentence text.
struct Connective {
    std::string surface;
    std::size_t begin = 0;
    std::size_t end = 0;
    MatchPosition position = MatchPosition::Start;

    bool operator==(const Connective&) const = default;
};

struct Sentence {
    int index = 1;                // 1-based within its paragraph
    std::string text;             // verbatim, without surrounding whitespace
    std::string trailing;         // whitespace that followed the sentence in the source
    std::optional<Connective> connective;
    std::string tag{RelationCatalog::kDefaultTag};
};

struct Paragraph {
    int index = 1;
    std::string leading;          // whitespace before the first sentence
    std::vector<Sentence> sentences;

    std::size_t size() const noexcept { return sentences.size(); }

    /// Reassembles the paragraph source from sentences and recorded separators.
    std::string text() const {
        std::string out = leading;
        for (const auto& s : sentences) {
            out += s.text;
            out += s.trailing;
        }
        return out;
    }
};

struct Document {
    std::vector<Paragraph> paragraphs;

    std::size_t sentence_count() const noexcept {
        std::size_t n = 0;
        for (const auto& p : paragraphs) n += p.size();
        return n;
    }
};

/// (paragraph, sentence) address, both 1-based.
struct SentenceId {
    int paragraph = 1;
    int sentence = 1;

    auto operator<=>(const SentenceId&) const = default;
};

/// A span of sentences that candidate structures must keep together as one subtree.
struct SegmentConstraint {
    int start = 1;
    int end = 1;
    std::string kind;

    bool operator==(const SegmentConstraint&) const = default;
};

namespace detail {

inline bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v'; }

inline bool is_blank_line(std::string_view line) {
    return std::all_of(line.begin(), line.end(), is_space);
}

/// Paragraph blocks: maximal runs of non-blank lines, returned as substrings of `raw`.
inline std::vector<std::string_view> paragraph_blocks(std::string_view raw) {
    std::vector<std::string_view> blocks;
    std::size_t block_begin = std::string_view::npos;
    std::size_t block_end = 0;
    std::size_t pos = 0;
    while (pos < raw.size()) {
        auto nl = raw.find('\n', pos);
        const std::size_t line_end = nl == std::string_view::npos ? raw.size() : nl;
        const auto line = raw.substr(pos, line_end - pos);
        if (is_blank_line(line)) {
            if (block_begin != std::string_view::npos) {
                blocks.push_back(raw.substr(block_begin, block_end - block_begin));
                block_begin = std::string_view::npos;
            }
        } else {
            if (block_begin == std::string_view::npos) block_begin = pos;
            block_end = line_end;
        }
        pos = nl == std::string_view::npos ? raw.size() : nl + 1;
    }
    if (block_begin != std::string_view::npos) blocks.push_back(raw.substr(block_begin, block_end - block_begin));
    return blocks;
}

inline Paragraph paragraph_from_spans(std::string_view block, const std::vector<std::pair<std::size_t, std::size_t>>& spans,
                                      int index) {
    Paragraph p;
    p.index = index;
    p.leading = std::string(block.substr(0, spans.front().first));
    for (std::size_t i = 0; i < spans.size(); ++i) {
        Sentence s;
        s.index = static_cast<int>(i) + 1;
        s.text = std::string(block.substr(spans[i].first, spans[i].second - spans[i].first));
        const std::size_t next = i + 1 < spans.size() ? spans[i + 1].first : block.size();
        s.trailing = std::string(block.substr(spans[i].second, next - spans[i].second));
        p.sentences.push_back(std::move(s));
    }
    return p;
}

inline bool is_abbreviation(std::string_view word) {
    static constexpr std::array<std::string_view, 26> kStopList = {
        "mr.", "mrs.", "ms.", "dr.", "prof.", "st.", "jr.", "sr.", "e.g.", "i.e.", "vs.", "cf.", "al.",
        "fig.", "figs.", "eq.", "eqs.", "no.", "nos.", "p.", "pp.", "vol.", "inc.", "ltd.", "co.", "approx.",
    };
    while (!word.empty() && (word.front() == '(' || word.front() == '[' || word.front() == '"' || word.front() == '\''))
        word.remove_prefix(1);
    const auto lw = lower_ascii(word);
    return std::find(kStopList.begin(), kStopList.end(), lw) != kStopList.end();
}

inline bool is_closer(char c) { return c == '"' || c == '\'' || c == ')' || c == ']'; }

/// Sentence spans [begin, end) inside a paragraph block.
inline std::vector<std::pair<std::size_t, std::size_t>> sentence_spans(std::string_view block) {
    std::vector<std::pair<std::size_t, std::size_t>> spans;
    std::size_t i = 0;
    const std::size_t n = block.size();
    while (i < n && is_space(block[i])) ++i;
    std::size_t start = i;
    while (i < n) {
        const char c = block[i];
        if (c == '.' || c == '!' || c == '?') {
            std::size_t end = i + 1;
            while (end < n && (block[end] == '.' || block[end] == '!' || block[end] == '?')) ++end;
            while (end < n && is_closer(block[end])) ++end;
            if (end == n || is_space(block[end])) {
                bool boundary = true;
                if (c == '.' && end == i + 1) {
                    std::size_t w = i;
                    while (w > start && !is_space(block[w - 1])) --w;
                    boundary = !is_abbreviation(block.substr(w, i + 1 - w));
                }
                if (boundary) {
                    spans.emplace_back(start, end);
                    i = end;
                    while (i < n && is_space(block[i])) ++i;
                    start = i;
                    continue;
                }
            }
            i = end;
            continue;
        }
        ++i;
    }
    if (start < n) {
        std::size_t end = n;
        while (end > start && is_space(block[end - 1])) --end;
        if (end > start) spans.emplace_back(start, end);
    }
    return spans;
}

inline std::vector<std::pair<std::size_t, std::size_t>> line_spans(std::string_view block) {
    std::vector<std::pair<std::size_t, std::size_t>> spans;
    std::size_t pos = 0;
    while (pos < block.size()) {
        auto nl = block.find('\n', pos);
        const std::size_t line_end = nl == std::string_view::npos ? block.size() : nl;
        std::size_t b = pos, e = line_end;
        while (b < e && is_space(block[b])) ++b;
        while (e > b && is_space(block[e - 1])) --e;
        if (e > b) spans.emplace_back(b, e);
        pos = nl == std::string_view::npos ? block.size() : nl + 1;
    }
    return spans;
}

} // namespace detail

enum class SplitMode { Sentences, Lines };

/// Splits raw text into blank-line separated paragraphs and then into sentences
/// (terminal punctuation followed by whitespace, minus a stop-list of
/// abbreviations), or into one sentence per non-blank line.
inline Document split_document(std::string_view raw, SplitMode mode = SplitMode::Sentences) {
    Document doc;
    for (const auto block : detail::paragraph_blocks(raw)) {
        const auto spans = mode == SplitMode::Lines ? detail::line_spans(block) : detail::sentence_spans(block);
        if (spans.empty()) continue;
        doc.paragraphs.push_back(detail::paragraph_from_spans(block, spans, static_cast<int>(doc.paragraphs.size()) + 1));
    }
    if (doc.paragraphs.empty()) throw InputError("empty input: no sentences found");
    return doc;
}

namespace detail {

struct WordToken {
    std::string lower;
    std::size_t begin;
    std::size_t end;
};

inline bool is_word_char(char c) {
    const auto u = static_cast<unsigned char>(c);
    return std::isalnum(u) || u >= 0x80 || c == '\'' || c == '-';
}

inline std::vector<WordToken> word_tokens(std::string_view text) {
    std::vector<WordToken> out;
    std::size_t i = 0;
    while (i < text.size()) {
        if (!is_word_char(text[i])) {
            ++i;
            continue;
        }
        const std::size_t b = i;
        while (i < text.size() && is_word_char(text[i])) ++i;
        out.push_back({lower_ascii(text.substr(b, i - b)), b, i});
    }
    return out;
}

/// Matches pattern tokens against sentence tokens starting at `at`. "..." matches
/// zero or more tokens (shortest first). Returns the index one past the last
/// matched token.
inline std::optional<std::size_t> match_at(const std::vector<std::string>& pat, std::size_t pi,
                                           const std::vector<WordToken>& toks, std::size_t at) {
    if (pi == pat.size()) return at;
    if (pat[pi] == "...") {
        for (std::size_t skip = at; skip <= toks.size(); ++skip) {
            if (auto r = match_at(pat, pi + 1, toks, skip)) return r;
        }
        return std::nullopt;
    }
    if (at < toks.size() && toks[at].lower == pat[pi]) return match_at(pat, pi + 1, toks, at + 1);
    return std::nullopt;
}

} // namespace detail

/// Finds the lexicon connective for one sentence: longest pattern first, then
/// highest priority, then earliest catalog entry.
inline std::optional<std::pair<Connective, std::string>> match_connective(std::string_view text,
                                                                          const RelationCatalog& catalog) {
    const auto toks = detail::word_tokens(text);
    if (toks.empty()) return std::nullopt;

    const LexiconEntry* best = nullptr;
    std::size_t best_len = 0;
    Connective best_conn;
    for (const auto& entry : catalog.lexicon()) {
        const auto pat = detail::pattern_tokens(entry.pattern);
        const std::size_t len = detail::pattern_length(entry.pattern);
        if (best != nullptr && (len < best_len || (len == best_len && entry.priority <= best->priority))) continue;

        const std::size_t last_start = entry.position == MatchPosition::Start ? 0 : toks.size() - 1;
        for (std::size_t s = 0; s <= last_start; ++s) {
            // A leading gap would let a predicate pattern start anywhere; anchor on the first word.
            const auto end = detail::match_at(pat, 0, toks, s);
            if (!end || *end == s) continue;
            best = &entry;
            best_len = len;
            best_conn.begin = toks[s].begin;
            best_conn.end = toks[*end - 1].end;
            best_conn.surface = std::string(text.substr(best_conn.begin, best_conn.end - best_conn.begin));
            best_conn.position = entry.position;
            break;
        }
    }
    if (best == nullptr) return std::nullopt;
    return std::make_pair(best_conn, best->tag);
}

/// Assigns each sentence its relation to the preceding text. Sentences without
/// a lexicon match get EX and no connective.
inline Document tag_relations(Document doc, const RelationCatalog& catalog) {
    for (auto& para : doc.paragraphs) {
        for (auto& s : para.sentences) {
            if (auto m = match_connective(s.text, catalog)) {
                s.connective = std::move(m->first);
                s.tag = std::move(m->second);
            } else {
                s.connective.reset();
                s.tag = std::string(RelationCatalog::kDefaultTag);
            }
        }
    }
    return doc;
}

namespace detail {

inline int ordinal_of(std::string_view word) {
    static constexpr std::array<std::string_view, 5> kOrdinals = {"first", "second", "third", "fourth", "fifth"};
    for (std::size_t i = 0; i < kOrdinals.size(); ++i) {
        if (word == kOrdinals[i] || word == std::string(kOrdinals[i]) + "ly") return static_cast<int>(i) + 1;
    }
    return 0;
}

inline std::vector<WordToken> leading_words(const Sentence& s, std::size_t count) {
    auto toks = word_tokens(s.text);
    if (toks.size() > count) toks.resize(count);
    return toks;
}

inline bool laminar(const SegmentConstraint& a, const SegmentConstraint& b) {
    const bool disjoint = a.end < b.start || b.end < a.start;
    const bool a_in_b = b.start <= a.start && a.end <= b.end;
    const bool b_in_a = a.start <= b.start && b.end <= a.end;
    return disjoint || a_in_b || b_in_a;
}

} // namespace detail

/// True when every constraint is a valid span of an n-unit sequence and the set is laminar.
inline bool constraints_valid(const std::vector<SegmentConstraint>& constraints, int n) {
    for (std::size_t i = 0; i < constraints.size(); ++i) {
        const auto& c = constraints[i];
        if (c.start < 1 || c.start >= c.end || c.end > n) return false;
        for (std::size_t j = 0; j < i; ++j) {
            if (!detail::laminar(c, constraints[j])) return false;
        }
    }
    return true;
}

/// Detects multi-sentence rhetorical patterns that must form one chunk:
/// enumerations ("First, ... Second, ... Third, ...") spanning the first to the
/// last enumerator sentence, and concessions ("Of course, ... But, ...")
/// spanning the opener to the nearest following NG-tagged sentence.
/// Partially overlapping detections keep the longer span; each dropped span
/// appends a message to `warnings` when given.
inline std::vector<SegmentConstraint> detect_segments(const Paragraph& para, const RelationCatalog& catalog,
                                                      std::vector<std::string>* warnings = nullptr) {
    const int n = static_cast<int>(para.size());
    std::vector<SegmentConstraint> found;

    // enumerations
    for (int i = 0; i < n; ++i) {
        const auto head = detail::leading_words(para.sentences[i], 1);
        if (head.empty() || detail::ordinal_of(head[0].lower) != 1) continue;
        int expected = 2;
        int last = i;
        for (int j = i + 1; j < n; ++j) {
            const auto h = detail::leading_words(para.sentences[j], 1);
            const int ord = h.empty() ? 0 : detail::ordinal_of(h[0].lower);
            if (ord == 0) continue;
            if (ord != expected) break;
            last = j;
            ++expected;
        }
        if (last > i) {
            found.push_back({i + 1, last + 1, "enumeration"});
            i = last;
        }
    }

    // concessions
    for (int i = 0; i < n; ++i) {
        const auto head = detail::leading_words(para.sentences[i], 2);
        if (head.size() < 2 || head[0].lower != "of" || head[1].lower != "course") continue;
        for (int j = i + 1; j < n; ++j) {
            const auto h = detail::leading_words(para.sentences[j], 2);
            if (h.size() == 2 && h[0].lower == "of" && h[1].lower == "course") break;
            if (catalog.contains(para.sentences[j].tag) && para.sentences[j].tag == "NG") {
                found.push_back({i + 1, j + 1, "concession"});
                break;
            }
        }
    }

    std::stable_sort(found.begin(), found.end(), [](const auto& a, const auto& b) {
        const int la = a.end - a.start, lb = b.end - b.start;
        return la != lb ? la > lb : a.start < b.start;
    });
    std::vector<SegmentConstraint> kept;
    for (auto& c : found) {
        const bool ok = std::all_of(kept.begin(), kept.end(), [&](const auto& k) { return detail::laminar(c, k); });
        if (ok) {
            if (std::find(kept.begin(), kept.end(), c) == kept.end()) kept.push_back(std::move(c));
        } else if (warnings != nullptr) {
            warnings->push_back("paragraph " + std::to_string(para.index) + ": dropped " + c.kind + " segment [" +
                                std::to_string(c.start) + "," + std::to_string(c.end) +
                                "] overlapping a longer segment");
        }
    }
    std::sort(kept.begin(), kept.end(), [](const auto& a, const auto& b) {
        return a.start != b.start ? a.start < b.start : a.end > b.end;
    });
    return kept;
}

} // namespace rhetor

#endif

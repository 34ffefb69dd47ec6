#ifndef RHETOR_PARSER_HPP
#define RHETOR_PARSER_HPP

// Structure parsing: picks the minimum-penalty binary tree over a tagged unit
// sequence, subject to segmentation constraints.
//
// A node joining spans [i..k] and [k+1..j] always carries the tag of unit k+1.
// Preference rules look at a node's relation and the root relation of one of
// its children, so the penalty of a subtree depends only on its span and top
// split. `parse` runs a chart over (span, split); `enumerate_candidates` is the
// exhaustive reference used by the tests.

#include <algorithm>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "rhetor/catalog.hpp"
#include "rhetor/error.hpp"
#include "rhetor/text.hpp"
#include "rhetor/tree.hpp"

namespace rhetor {

/// Relation sequence of a paragraph (or of a document's paragraphs):
/// element k-1 is the tag of unit k. The tag of unit 1 is never used.
using TagSequence = std::vector<std::string>;

/// Evaluates preference rules. Class selectors are resolved through the catalog.
class PreferenceScorer {
public:
    PreferenceScorer(const RelationCatalog& catalog, std::vector<PreferenceRule> rules)
        : catalog_(&catalog), rules_(std::move(rules)) {}

    explicit PreferenceScorer(const RelationCatalog& catalog)
        : PreferenceScorer(catalog, catalog.preferences()) {}

    const std::vector<PreferenceRule>& rules() const noexcept { return rules_; }

    /// Penalty of a node with relation `parent` whose child on `side` is rooted
    /// at `child_root`. Leaf children (nullopt) match no rule.
    int penalty(std::string_view parent, Side side, std::optional<std::string_view> child_root) const {
        if (!child_root) return 0;
        int total = 0;
        for (const auto& r : rules_) {
            if (r.child_side == side && catalog_->matches(r.parent, parent) && catalog_->matches(r.child_root, *child_root))
                total += r.penalty;
        }
        return total;
    }

private:
    const RelationCatalog* catalog_;
    std::vector<PreferenceRule> rules_;
};

/// Sum over internal nodes of the penalties of all matching rules.
inline int score_tree(const RhetoricalTree& tree, const PreferenceScorer& scorer) {
    int total = 0;
    tree.visit([&](const RhetoricalTree& n) {
        if (n.is_leaf()) return;
        const auto l = n.left(), r = n.right();
        total += scorer.penalty(n.relation(), Side::Left,
                                l.is_leaf() ? std::nullopt : std::optional<std::string_view>(l.relation()));
        total += scorer.penalty(n.relation(), Side::Right,
                                r.is_leaf() ? std::nullopt : std::optional<std::string_view>(r.relation()));
    });
    return total;
}

struct ParseResult {
    RhetoricalTree tree = RhetoricalTree::leaf(1);
    int penalty = 0;
    std::optional<std::size_t> candidate_count;  // set by the exhaustive parser only
};

namespace detail {

/// A span crosses a constraint when they overlap without nesting.
inline bool span_allowed(int i, int j, std::span<const SegmentConstraint> constraints) {
    for (const auto& c : constraints) {
        const bool overlap = i <= c.end && c.start <= j;
        const bool nested = (c.start <= i && j <= c.end) || (i <= c.start && c.end <= j);
        if (overlap && !nested) return false;
    }
    return true;
}

inline void check_parse_input(const TagSequence& tags, std::span<const SegmentConstraint> constraints) {
    if (tags.empty()) throw ArgumentError("parse: empty relation sequence");
    const std::vector<SegmentConstraint> cs(constraints.begin(), constraints.end());
    if (!constraints_valid(cs, static_cast<int>(tags.size())))
        throw ArgumentError("parse: constraints must be laminar spans with 1 <= start < end <= n");
}

} // namespace detail

inline constexpr int kMaxEnumerationUnits = 12;

/// Every constraint-respecting binary tree over units 1..n, in a fixed order:
/// larger left sub-span first at each node, recursively.
inline std::vector<RhetoricalTree> enumerate_candidates(const TagSequence& tags,
                                                        std::span<const SegmentConstraint> constraints = {},
                                                        int max_units = kMaxEnumerationUnits) {
    detail::check_parse_input(tags, constraints);
    const int n = static_cast<int>(tags.size());
    if (n > max_units)
        throw ArgumentError("enumerate_candidates: " + std::to_string(n) + " units exceeds the limit of " +
                            std::to_string(max_units));

    std::map<std::pair<int, int>, std::vector<RhetoricalTree>> memo;
    std::function<const std::vector<RhetoricalTree>&(int, int)> build = [&](int i, int j) -> const std::vector<RhetoricalTree>& {
        const auto key = std::make_pair(i, j);
        if (auto it = memo.find(key); it != memo.end()) return it->second;
        std::vector<RhetoricalTree> out;
        if (detail::span_allowed(i, j, constraints)) {
            if (i == j) {
                out.push_back(RhetoricalTree::leaf(i));
            } else {
                for (int k = j - 1; k >= i; --k) {
                    const auto& ls = build(i, k);
                    const auto& rs = build(k + 1, j);
                    for (const auto& l : ls)
                        for (const auto& r : rs) out.push_back(RhetoricalTree::join(tags[k], l, r));
                }
            }
        }
        return memo.emplace(key, std::move(out)).first->second;
    };
    return build(1, n);
}

/// Reference parser: scores every candidate and keeps the first minimum in
/// enumeration order.
inline ParseResult parse_exhaustive(const TagSequence& tags, std::span<const SegmentConstraint> constraints,
                                    const PreferenceScorer& scorer, int max_units = kMaxEnumerationUnits) {
    const auto candidates = enumerate_candidates(tags, constraints, max_units);
    if (candidates.empty()) throw InvariantError("parse_exhaustive: no candidate satisfies the constraints");
    std::size_t best = 0;
    int best_penalty = std::numeric_limits<int>::max();
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        const int p = score_tree(candidates[i], scorer);
        if (p < best_penalty) {
            best_penalty = p;
            best = i;
        }
    }
    return {candidates[best], best_penalty, candidates.size()};
}

/// Chart parser. Returns a globally minimal tree; among equal-penalty trees it
/// takes the largest left sub-span at the root, then recursively in each child.
inline ParseResult parse(const TagSequence& tags, std::span<const SegmentConstraint> constraints,
                         const PreferenceScorer& scorer) {
    detail::check_parse_input(tags, constraints);
    const int n = static_cast<int>(tags.size());
    if (n == 1) return {RhetoricalTree::leaf(1), 0, std::nullopt};

    constexpr int kInf = std::numeric_limits<int>::max() / 4;

    // Distinct relations and the rule table over them.
    std::vector<std::string> distinct;
    std::vector<int> tag_id(n + 1, 0);
    for (int u = 2; u <= n; ++u) {
        auto it = std::find(distinct.begin(), distinct.end(), tags[u - 1]);
        if (it == distinct.end()) {
            distinct.push_back(tags[u - 1]);
            it = distinct.end() - 1;
        }
        tag_id[u] = static_cast<int>(it - distinct.begin());
    }
    const int d = static_cast<int>(distinct.size());
    std::vector<int> rule(static_cast<std::size_t>(d) * 2 * d);
    auto rule_at = [&](int parent, Side side, int child) -> int& {
        return rule[(static_cast<std::size_t>(parent) * 2 + (side == Side::Left ? 0 : 1)) * d + child];
    };
    for (int p = 0; p < d; ++p)
        for (int c = 0; c < d; ++c)
            for (Side s : {Side::Left, Side::Right}) rule_at(p, s, c) = scorer.penalty(distinct[p], s, distinct[c]);

    // split[i][j][k - i]: best penalty of a tree over [i..j] whose top split is after k.
    auto span_index = [n](int i, int j) { return static_cast<std::size_t>(i) * (n + 1) + j; };
    std::vector<std::vector<int>> split(static_cast<std::size_t>(n + 1) * (n + 1));
    std::vector<char> allowed(static_cast<std::size_t>(n + 1) * (n + 1), 0);
    for (int i = 1; i <= n; ++i)
        for (int j = i; j <= n; ++j) allowed[span_index(i, j)] = detail::span_allowed(i, j, constraints) ? 1 : 0;

    // cost[(span, side, parent)]: best penalty of the span as a child, including the parent-child rule.
    std::vector<int> child_cost(static_cast<std::size_t>(n + 1) * (n + 1) * 2 * d, -1);
    auto child_cost_of = [&](int i, int j, Side side, int parent) -> int {
        if (!allowed[span_index(i, j)]) return kInf;
        if (i == j) return 0;
        int& memo = child_cost[(span_index(i, j) * 2 + (side == Side::Left ? 0 : 1)) * d + parent];
        if (memo >= 0) return memo;
        int best = kInf;
        const auto& row = split[span_index(i, j)];
        for (int k = i; k < j; ++k) {
            if (row[k - i] >= kInf) continue;
            best = std::min(best, row[k - i] + rule_at(parent, side, tag_id[k + 1]));
        }
        memo = best;
        return best;
    };

    for (int len = 2; len <= n; ++len) {
        for (int i = 1; i + len - 1 <= n; ++i) {
            const int j = i + len - 1;
            auto& row = split[span_index(i, j)];
            row.assign(len - 1, kInf);
            if (!allowed[span_index(i, j)]) continue;
            for (int k = i; k < j; ++k) {
                const int rel = tag_id[k + 1];
                const int l = child_cost_of(i, k, Side::Left, rel);
                const int r = child_cost_of(k + 1, j, Side::Right, rel);
                if (l >= kInf || r >= kInf) continue;
                row[k - i] = l + r;
            }
        }
    }

    const auto& top = split[span_index(1, n)];
    const int best = *std::min_element(top.begin(), top.end());
    if (best >= kInf) throw InvariantError("parse: no tree satisfies the constraints");

    // Top-down reconstruction, largest left sub-span first.
    std::function<RhetoricalTree(int, int, int)> build_split = [&](int i, int j, int k) {
        const int rel = tag_id[k + 1];
        std::function<RhetoricalTree(int, int, Side)> child = [&](int a, int b, Side side) {
            if (a == b) return RhetoricalTree::leaf(a);
            const int want = child_cost_of(a, b, side, rel);
            const auto& row = split[span_index(a, b)];
            for (int m = b - 1; m >= a; --m) {
                if (row[m - a] < kInf && row[m - a] + rule_at(rel, side, tag_id[m + 1]) == want)
                    return build_split(a, b, m);
            }
            throw InvariantError("parse: chart reconstruction failed");
        };
        return RhetoricalTree::join(tags[k], child(i, k, Side::Left), child(k + 1, j, Side::Right));
    };
    int root_split = 0;
    for (int k = n - 1; k >= 1; --k) {
        if (top[k - 1] == best) {
            root_split = k;
            break;
        }
    }
    return {build_split(1, n, root_split), best, std::nullopt};
}

inline ParseResult parse(const TagSequence& tags, std::span<const SegmentConstraint> constraints,
                         const RelationCatalog& catalog) {
    return parse(tags, constraints, PreferenceScorer(catalog));
}

inline TagSequence tag_sequence(const Paragraph& para) {
    TagSequence tags;
    tags.reserve(para.size());
    for (const auto& s : para.sentences) tags.push_back(s.tag);
    return tags;
}

/// Inter-paragraph units carry the tag of each paragraph's first sentence.
inline TagSequence paragraph_tag_sequence(const Document& doc) {
    TagSequence tags;
    tags.reserve(doc.paragraphs.size());
    for (const auto& p : doc.paragraphs) tags.push_back(p.sentences.front().tag);
    return tags;
}

struct DocumentParse {
    std::vector<ParseResult> paragraphs;
    std::vector<std::vector<SegmentConstraint>> constraints;
    ParseResult inter;
};

/// Parses each paragraph over its sentences, then the paragraph sequence itself.
inline DocumentParse parse_document(const Document& doc, const RelationCatalog& catalog,
                                    std::vector<std::string>* warnings = nullptr) {
    if (doc.paragraphs.empty()) throw ArgumentError("parse_document: document has no paragraphs");
    const PreferenceScorer scorer(catalog);
    DocumentParse out;
    for (const auto& para : doc.paragraphs) {
        auto cs = detect_segments(para, catalog, warnings);
        out.paragraphs.push_back(parse(tag_sequence(para), cs, scorer));
        out.constraints.push_back(std::move(cs));
    }
    out.inter = parse(paragraph_tag_sequence(doc), {}, scorer);
    return out;
}

} // namespace rhetor

#endif

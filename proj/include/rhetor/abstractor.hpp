#ifndef RHETOR_ABSTRACTOR_HPP
#define RHETOR_ABSTRACTOR_HPP

// Abstract generation: importance penalties pushed from the root down to the
// sentences, structure reduction to a requested length, and rendering.

#include <algorithm>
#include <cctype>
#include <cmath>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rhetor/catalog.hpp"
#include "rhetor/error.hpp"
#include "rhetor/parser.hpp"
#include "rhetor/text.hpp"
#include "rhetor/tree.hpp"

namespace rhetor {

/// Penalty of every node of one tree, addressed by the node's unit span.
class PenaltyAnnotation {
public:
    struct Entry {
        int first;
        int last;
        int penalty;
    };

    PenaltyAnnotation() = default;
    PenaltyAnnotation(int first_unit, std::vector<Entry> nodes) : first_unit_(first_unit), nodes_(std::move(nodes)) {
        int last_unit = first_unit_ - 1;
        for (const auto& e : nodes_) last_unit = std::max(last_unit, e.last);
        leaves_.assign(static_cast<std::size_t>(last_unit - first_unit_ + 1), 0);
        for (const auto& e : nodes_) {
            if (e.first == e.last) leaves_[e.first - first_unit_] = e.penalty;
        }
    }

    /// Pre-order node entries.
    const std::vector<Entry>& nodes() const noexcept { return nodes_; }

    std::optional<int> at(int first, int last) const {
        for (const auto& e : nodes_) {
            if (e.first == first && e.last == last) return e.penalty;
        }
        return std::nullopt;
    }

    int leaf(int unit) const {
        if (unit < first_unit_ || unit >= first_unit_ + static_cast<int>(leaves_.size()))
            throw ArgumentError("no leaf for unit " + std::to_string(unit));
        return leaves_[unit - first_unit_];
    }

    int unit_count() const noexcept { return static_cast<int>(leaves_.size()); }
    int first_unit() const noexcept { return first_unit_; }

    /// Leaf penalties in unit order.
    const std::vector<int>& leaves() const noexcept { return leaves_; }

private:
    int first_unit_ = 1;
    std::vector<Entry> nodes_;
    std::vector<int> leaves_;
};

/// Root gets 0. Each relation adds 1 to its satellite child: the left child of a
/// RightNucleus relation, the right child of a LeftNucleus relation, neither
/// child of a BothNucleus relation.
inline PenaltyAnnotation propagate_penalties(const RhetoricalTree& tree, const RelationCatalog& catalog) {
    std::vector<PenaltyAnnotation::Entry> nodes;
    std::function<void(const RhetoricalTree&, int)> walk = [&](const RhetoricalTree& t, int penalty) {
        nodes.push_back({t.first(), t.last(), penalty});
        if (t.is_leaf()) return;
        int left = penalty, right = penalty;
        switch (catalog.nucleus_of(t.relation())) {
        case NucleusClass::Right: ++left; break;
        case NucleusClass::Left: ++right; break;
        case NucleusClass::Both: break;
        }
        walk(t.left(), left);
        walk(t.right(), right);
    };
    walk(tree, 0);
    return PenaltyAnnotation(tree.first(), std::move(nodes));
}

/// Set when more than half of the leaves share one penalty value, i.e. the
/// structure is too flat to rank sentences smoothly.
inline std::optional<std::string> gradation_warning(const PenaltyAnnotation& annotation) {
    const auto& leaves = annotation.leaves();
    if (leaves.size() < 2) return std::nullopt;
    std::map<int, int> counts;
    for (int p : leaves) ++counts[p];
    for (const auto& [penalty, count] : counts) {
        if (2 * count > static_cast<int>(leaves.size())) {
            return std::to_string(count) + " of " + std::to_string(leaves.size()) +
                   " sentences share penalty " + std::to_string(penalty) + "; reduction cannot grade them";
        }
    }
    return std::nullopt;
}

struct AbstractSelection {
    std::vector<int> kept;  // ascending unit indices
    int threshold = 0;      // highest penalty among kept units
};

/// Repeatedly cuts every leaf at the current highest penalty. When cutting a
/// whole level would undershoot `target`, only that level's last units (by
/// document position) are cut, so the result has exactly `target` units.
inline AbstractSelection reduce(const PenaltyAnnotation& annotation, int target) {
    const int n = annotation.unit_count();
    if (target < 1 || target > n)
        throw ArgumentError("reduce: target " + std::to_string(target) + " outside 1.." + std::to_string(n));

    std::vector<int> kept;
    for (int u = annotation.first_unit(); u < annotation.first_unit() + n; ++u) kept.push_back(u);

    while (static_cast<int>(kept.size()) > target) {
        int level = 0;
        for (int u : kept) level = std::max(level, annotation.leaf(u));
        const auto at_level = static_cast<int>(std::count_if(kept.begin(), kept.end(), [&](int u) { return annotation.leaf(u) == level; }));
        const int excess = static_cast<int>(kept.size()) - target;
        if (at_level <= excess) {
            std::erase_if(kept, [&](int u) { return annotation.leaf(u) == level; });
        } else {
            int to_cut = excess;
            for (auto it = kept.end(); it != kept.begin() && to_cut > 0;) {
                --it;
                if (annotation.leaf(*it) == level) {
                    it = kept.erase(it);
                    --to_cut;
                }
            }
        }
    }

    AbstractSelection sel;
    sel.kept = std::move(kept);
    for (int u : sel.kept) sel.threshold = std::max(sel.threshold, annotation.leaf(u));
    return sel;
}

inline AbstractSelection reduce(const RhetoricalTree& tree, const PenaltyAnnotation& annotation, int target) {
    if (annotation.first_unit() != tree.first() || annotation.unit_count() != tree.size())
        throw ArgumentError("reduce: annotation does not belong to this tree");
    return reduce(annotation, target);
}

/// Requested abstract length: a fraction of the sentences or an absolute count.
class Budget {
public:
    static Budget ratio(double r) {
        if (!(r > 0.0 && r <= 1.0)) throw ArgumentError("ratio must lie in (0, 1]");
        Budget b;
        b.ratio_ = r;
        return b;
    }

    static Budget sentences(int count) {
        if (count < 1) throw ArgumentError("sentence count must be at least 1");
        Budget b;
        b.count_ = count;
        return b;
    }

    bool is_count() const noexcept { return count_ > 0; }

    /// Sentences to keep out of `n`, as a nearest-integer share (halves round up), at least 1.
    int share_of(int n, int total) const {
        long long k = 0;
        if (is_count()) {
            const long long c = std::min(count_, total);
            k = (2LL * c * n + total) / (2LL * total);
        } else {
            k = static_cast<long long>(std::floor(ratio_ * n + 0.5 + 1e-9));
        }
        return static_cast<int>(std::clamp<long long>(k, 1, n));
    }

    /// Document-level sentence budget for `total` sentences.
    int document_budget(int total) const {
        if (is_count()) return std::clamp(count_, 1, total);
        return share_of(total, total);
    }

private:
    double ratio_ = 1.0;
    int count_ = 0;
};

struct DocumentSelection {
    std::vector<SentenceId> kept;               // document order
    std::vector<AbstractSelection> paragraphs;  // stage-one result per paragraph
    PenaltyAnnotation paragraph_penalties;      // over the inter-paragraph tree
    std::vector<int> dropped_paragraphs;        // stage-two drops, in drop order
    int budget = 0;
};

/// Two-stage reduction: each paragraph is reduced to its share of the budget,
/// then whole paragraphs are dropped from the inter-paragraph structure,
/// highest penalty (and, within a level, latest position) first, until the
/// document budget is met. The last remaining paragraph is never dropped.
inline DocumentSelection reduce_document(const Document& doc, const DocumentParse& parsed, const RelationCatalog& catalog,
                                         const Budget& budget) {
    if (parsed.paragraphs.size() != doc.paragraphs.size())
        throw ArgumentError("reduce_document: parse does not match document");
    const int total = static_cast<int>(doc.sentence_count());

    DocumentSelection out;
    out.budget = budget.document_budget(total);

    std::vector<int> kept_per_para;
    for (std::size_t p = 0; p < doc.paragraphs.size(); ++p) {
        const int n = static_cast<int>(doc.paragraphs[p].size());
        const auto annotation = propagate_penalties(parsed.paragraphs[p].tree, catalog);
        out.paragraphs.push_back(reduce(annotation, budget.share_of(n, total)));
        kept_per_para.push_back(static_cast<int>(out.paragraphs.back().kept.size()));
    }

    out.paragraph_penalties = propagate_penalties(parsed.inter.tree, catalog);
    std::vector<int> order(doc.paragraphs.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i) + 1;
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        const int pa = out.paragraph_penalties.leaf(a), pb = out.paragraph_penalties.leaf(b);
        return pa != pb ? pa > pb : a > b;
    });

    int kept_total = 0;
    for (int k : kept_per_para) kept_total += k;
    std::vector<bool> dropped(doc.paragraphs.size(), false);
    for (int para : order) {
        if (kept_total <= out.budget || out.dropped_paragraphs.size() + 1 >= doc.paragraphs.size()) break;
        dropped[para - 1] = true;
        kept_total -= kept_per_para[para - 1];
        out.dropped_paragraphs.push_back(para);
    }

    for (std::size_t p = 0; p < doc.paragraphs.size(); ++p) {
        if (dropped[p]) continue;
        for (int s : out.paragraphs[p].kept) out.kept.push_back({static_cast<int>(p) + 1, s});
    }
    return out;
}

namespace detail {

inline std::string capitalize_first(std::string s) {
    for (char& c : s) {
        if (std::isalpha(static_cast<unsigned char>(c))) {
            c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
            break;
        }
    }
    return s;
}

} // namespace detail

/// A sentence as it appears in an abstract: a sentence-initial connective is
/// re-emitted in front of the rest of the sentence with its first letter capitalized.
inline std::string render_sentence(const Sentence& s) {
    if (!s.connective || s.connective->position != MatchPosition::Start) return s.text;
    const auto& c = *s.connective;
    return s.text.substr(0, c.begin) + detail::capitalize_first(c.surface) + s.text.substr(c.end);
}

/// Kept sentences in document order: single spaces inside a paragraph, a blank
/// line between paragraphs.
inline std::string render_abstract(const std::vector<SentenceId>& kept, const Document& doc) {
    std::vector<SentenceId> ids = kept;
    std::sort(ids.begin(), ids.end());
    std::string out;
    int last_para = 0;
    for (const auto& id : ids) {
        if (id.paragraph < 1 || id.paragraph > static_cast<int>(doc.paragraphs.size()))
            throw ArgumentError("render_abstract: paragraph " + std::to_string(id.paragraph) + " out of range");
        const auto& para = doc.paragraphs[id.paragraph - 1];
        if (id.sentence < 1 || id.sentence > static_cast<int>(para.size()))
            throw ArgumentError("render_abstract: sentence " + std::to_string(id.paragraph) + ":" +
                                std::to_string(id.sentence) + " out of range");
        if (last_para != 0) out += id.paragraph == last_para ? " " : "\n\n";
        out += render_sentence(para.sentences[id.sentence - 1]);
        last_para = id.paragraph;
    }
    return out;
}

/// Single-paragraph form.
inline std::string render_abstract(const AbstractSelection& selection, const Document& doc, int paragraph = 1) {
    std::vector<SentenceId> ids;
    for (int s : selection.kept) ids.push_back({paragraph, s});
    return render_abstract(ids, doc);
}

/// Bracket notation with each node's penalty in braces, e.g. "[1{1} <SR> 2{0}]{0}".
inline std::string annotated_bracket(const RhetoricalTree& tree, const PenaltyAnnotation& annotation) {
    return to_bracket(tree, [&](const RhetoricalTree& t, std::string& out) {
        out += '{';
        out += std::to_string(annotation.at(t.first(), t.last()).value_or(0));
        out += '}';
    });
}

} // namespace rhetor

#endif

#ifndef RHETOR_TREE_HPP
#define RHETOR_TREE_HPP

// Binary rhetorical trees and their bracket notation:
//
//   tree := index | "[" tree " <" TAG "> " tree "]"
//
// e.g. "[[[1 <EX> 2] <ES> [3 <EG> [4 <EX> 5]]] <SR> 6]".

#include <cctype>
#include <functional>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "rhetor/error.hpp"

namespace rhetor {

/// Immutable binary tree over consecutive units. Copies share structure.
class RhetoricalTree {
public:
    static RhetoricalTree leaf(int unit) {
        auto n = std::make_shared<Node>();
        n->first = n->last = unit;
        return RhetoricalTree(std::move(n));
    }

    /// Joins two adjacent subtrees. The right subtree must start right after the left one ends.
    static RhetoricalTree join(std::string relation, RhetoricalTree left, RhetoricalTree right) {
        if (left.last() + 1 != right.first())
            throw ArgumentError("join: subtrees are not adjacent (" + std::to_string(left.last()) + " / " +
                                std::to_string(right.first()) + ")");
        auto n = std::make_shared<Node>();
        n->first = left.first();
        n->last = right.last();
        n->relation = std::move(relation);
        n->left = std::move(left.node_);
        n->right = std::move(right.node_);
        return RhetoricalTree(std::move(n));
    }

    bool is_leaf() const noexcept { return node_->left == nullptr; }
    int first() const noexcept { return node_->first; }
    int last() const noexcept { return node_->last; }
    int size() const noexcept { return node_->last - node_->first + 1; }
    /// Leaf unit index; meaningful only for leaves.
    int unit() const noexcept { return node_->first; }
    /// Empty for leaves.
    const std::string& relation() const noexcept { return node_->relation; }

    RhetoricalTree left() const { return RhetoricalTree(node_->left); }
    RhetoricalTree right() const { return RhetoricalTree(node_->right); }

    /// Pre-order visit of every node.
    void visit(const std::function<void(const RhetoricalTree&)>& fn) const {
        fn(*this);
        if (!is_leaf()) {
            left().visit(fn);
            right().visit(fn);
        }
    }

    std::vector<int> leaves() const {
        std::vector<int> out;
        visit([&](const RhetoricalTree& t) {
            if (t.is_leaf()) out.push_back(t.unit());
        });
        return out;
    }

    bool operator==(const RhetoricalTree& other) const {
        if (node_ == other.node_) return true;
        if (first() != other.first() || last() != other.last() || is_leaf() != other.is_leaf()) return false;
        if (is_leaf()) return true;
        return relation() == other.relation() && left() == other.left() && right() == other.right();
    }

private:
    struct Node {
        int first = 0;
        int last = 0;
        std::string relation;
        std::shared_ptr<const Node> left;
        std::shared_ptr<const Node> right;
    };

    explicit RhetoricalTree(std::shared_ptr<const Node> n) : node_(std::move(n)) {}

    std::shared_ptr<const Node> node_;
};

namespace detail {

inline void emit_bracket(const RhetoricalTree& t, std::string& out,
                         const std::function<void(const RhetoricalTree&, std::string&)>& suffix) {
    if (t.is_leaf()) {
        out += std::to_string(t.unit());
    } else {
        out += '[';
        emit_bracket(t.left(), out, suffix);
        out += " <";
        out += t.relation();
        out += "> ";
        emit_bracket(t.right(), out, suffix);
        out += ']';
    }
    if (suffix) suffix(t, out);
}

class BracketReader {
public:
    explicit BracketReader(std::string_view s) : s_(s) {}

    RhetoricalTree read() {
        auto t = tree();
        if (pos_ != s_.size()) fail("trailing characters");
        return t;
    }

private:
    RhetoricalTree tree() {
        if (pos_ < s_.size() && s_[pos_] == '[') {
            ++pos_;
            auto l = tree();
            expect(" <");
            const std::size_t b = pos_;
            while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
            if (pos_ == b) fail("expected relation tag");
            std::string rel(s_.substr(b, pos_ - b));
            expect("> ");
            auto r = tree();
            expect("]");
            if (l.last() + 1 != r.first()) fail("leaf indices are not consecutive");
            return RhetoricalTree::join(std::move(rel), std::move(l), std::move(r));
        }
        const std::size_t b = pos_;
        int v = 0;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
            v = v * 10 + (s_[pos_] - '0');
            if (v > 1'000'000) fail("index too large");
            ++pos_;
        }
        if (pos_ == b) fail("expected index or '['");
        if (v < 1) fail("unit indices start at 1");
        return RhetoricalTree::leaf(v);
    }

    void expect(std::string_view tok) {
        if (s_.substr(pos_, tok.size()) != tok) fail("expected '" + std::string(tok) + "'");
        pos_ += tok.size();
    }

    [[noreturn]] void fail(const std::string& what) const {
        throw ArgumentError("bracket notation, offset " + std::to_string(pos_) + ": " + what);
    }

    std::string_view s_;
    std::size_t pos_ = 0;
};

} // namespace detail

inline std::string to_bracket(const RhetoricalTree& t) {
    std::string out;
    detail::emit_bracket(t, out, nullptr);
    return out;
}

/// Bracket string with `suffix` appended after every node's own text.
inline std::string to_bracket(const RhetoricalTree& t,
                              const std::function<void(const RhetoricalTree&, std::string&)>& suffix) {
    std::string out;
    detail::emit_bracket(t, out, suffix);
    return out;
}

/// Parses the exact grammar emitted by to_bracket. Throws ArgumentError on malformed input.
inline RhetoricalTree parse_bracket(std::string_view s) { return detail::BracketReader(s).read(); }

/// Every node relation equals the tag of the first unit of its right span.
/// `tags[k - 1]` is the tag of unit k.
inline bool relations_consistent(const RhetoricalTree& t, const std::vector<std::string>& tags) {
    bool ok = true;
    t.visit([&](const RhetoricalTree& n) {
        if (n.is_leaf()) return;
        const int k = n.right().first();
        if (k < 1 || k > static_cast<int>(tags.size()) || tags[k - 1] != n.relation()) ok = false;
    });
    return ok;
}

} // namespace rhetor

#endif

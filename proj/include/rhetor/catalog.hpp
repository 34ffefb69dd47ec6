#ifndef RHETOR_CATALOG_HPP
#define RHETOR_CATALOG_HPP

// Relation catalog: relation tags, their nucleus classes, the connective
// lexicon and the preference rules used to rank candidate structures.
//
// Catalog files are line oriented UTF-8 text with three sections:
//
//   [relations]
//   # id  nucleus(right|left|both)  display name (rest of line)
//   SR right serial
//
//   [lexicon]
//   # "pattern"  tag  priority  position(start|predicate)
//   "for example" EG 0 start
//   "here ... is described" DI 0 predicate
//
//   [preferences]
//   # parent  child-side(left|right)  child-root  penalty
//   @left right @right 1
//
// Selectors in [preferences] are a tag id, `*` (any relation), or a nucleus
// class `@right`, `@left`, `@both`. A leaf child has no relation and is
// matched by no selector. `#` starts a comment outside quoted patterns.

#include <algorithm>
#include <cctype>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "rhetor/error.hpp"

namespace rhetor {

enum class NucleusClass { Right, Left, Both };

inline std::string_view to_string(NucleusClass c) {
    switch (c) {
    case NucleusClass::Right: return "right";
    case NucleusClass::Left: return "left";
    case NucleusClass::Both: return "both";
    }
    return "both";
}

inline std::optional<NucleusClass> parse_nucleus_class(std::string_view s) {
    if (s == "right") return NucleusClass::Right;
    if (s == "left") return NucleusClass::Left;
    if (s == "both") return NucleusClass::Both;
    return std::nullopt;
}

struct RelationTag {
    std::string id;
    std::string name;
    NucleusClass nucleus = NucleusClass::Both;

    bool operator==(const RelationTag&) const = default;
};

/// Where a lexicon pattern may match: anchored at the start of the sentence,
/// or anywhere inside it (sentence predicates, inner adverbs).
enum class MatchPosition { Start, Predicate };

struct LexiconEntry {
    std::string pattern;
    std::string tag;
    int priority = 0;
    MatchPosition position = MatchPosition::Start;

    bool operator==(const LexiconEntry&) const = default;
};

enum class Side { Left, Right };

/// Matches the relation at a tree node: any relation, one tag, or every tag of a nucleus class.
struct TagSelector {
    enum class Kind { Any, Tag, Class };

    Kind kind = Kind::Any;
    std::string tag;
    NucleusClass nucleus = NucleusClass::Both;

    static TagSelector any() { return {}; }
    static TagSelector of_tag(std::string id) { return {Kind::Tag, std::move(id), NucleusClass::Both}; }
    static TagSelector of_class(NucleusClass c) { return {Kind::Class, {}, c}; }

    std::string to_string() const {
        switch (kind) {
        case Kind::Any: return "*";
        case Kind::Tag: return tag;
        case Kind::Class: return "@" + std::string(rhetor::to_string(nucleus));
        }
        return "*";
    }

    bool operator==(const TagSelector&) const = default;
};

struct PreferenceRule {
    TagSelector parent;
    Side child_side = Side::Right;
    TagSelector child_root;
    int penalty = 1;

    bool operator==(const PreferenceRule&) const = default;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
    const auto ws = [](char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; };
    while (!s.empty() && ws(s.front())) s.remove_prefix(1);
    while (!s.empty() && ws(s.back())) s.remove_suffix(1);
    return s;
}

inline bool valid_tag_id(std::string_view id) {
    if (id.empty() || !std::isalpha(static_cast<unsigned char>(id.front()))) return false;
    return std::all_of(id.begin(), id.end(), [](char c) {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
    });
}

inline std::string lower_ascii(std::string_view s) {
    std::string out(s);
    for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

/// Splits a lexicon pattern into lower-cased word tokens; "..." is kept as a gap marker.
inline std::vector<std::string> pattern_tokens(std::string_view pattern) {
    std::vector<std::string> out;
    std::istringstream in{std::string(pattern)};
    std::string word;
    while (in >> word) {
        if (word == "..." || word == "\xE2\x80\xA6") {
            out.emplace_back("...");
        } else {
            out.push_back(lower_ascii(word));
        }
    }
    return out;
}

/// Number of non-gap tokens. Used as the pattern length for longest-match resolution.
inline std::size_t pattern_length(std::string_view pattern) {
    const auto toks = pattern_tokens(pattern);
    return static_cast<std::size_t>(std::count_if(toks.begin(), toks.end(), [](const std::string& t) { return t != "..."; }));
}

} // namespace detail

class RelationCatalog {
public:
    RelationCatalog() = default;

    /// Validates referential integrity; throws CatalogError(Semantic) on failure.
    RelationCatalog(std::vector<RelationTag> relations, std::vector<LexiconEntry> lexicon,
                    std::vector<PreferenceRule> preferences)
        : relations_(std::move(relations)), lexicon_(std::move(lexicon)), preferences_(std::move(preferences)) {
        validate();
    }

    const std::vector<RelationTag>& relations() const noexcept { return relations_; }
    const std::vector<LexiconEntry>& lexicon() const noexcept { return lexicon_; }
    const std::vector<PreferenceRule>& preferences() const noexcept { return preferences_; }

    const RelationTag* find(std::string_view id) const noexcept {
        for (const auto& r : relations_) {
            if (r.id == id) return &r;
        }
        return nullptr;
    }

    bool contains(std::string_view id) const noexcept { return find(id) != nullptr; }

    NucleusClass nucleus_of(std::string_view id) const {
        if (const auto* r = find(id)) return r->nucleus;
        throw ArgumentError("unknown relation tag '" + std::string(id) + "'");
    }

    bool matches(const TagSelector& sel, std::string_view id) const {
        switch (sel.kind) {
        case TagSelector::Kind::Any: return true;
        case TagSelector::Kind::Tag: return sel.tag == id;
        case TagSelector::Kind::Class: {
            const auto* r = find(id);
            return r != nullptr && r->nucleus == sel.nucleus;
        }
        }
        return false;
    }

    /// Copy with a different preference rule set (validated against this catalog's tags).
    RelationCatalog with_preferences(std::vector<PreferenceRule> rules) const {
        return RelationCatalog(relations_, lexicon_, std::move(rules));
    }

    /// Copy with a different lexicon.
    RelationCatalog with_lexicon(std::vector<LexiconEntry> lexicon) const {
        return RelationCatalog(relations_, std::move(lexicon), preferences_);
    }

    bool operator==(const RelationCatalog&) const = default;

    static constexpr std::string_view kDefaultTag = "EX";

private:
    void validate() const {
        using K = CatalogError::Kind;
        for (std::size_t i = 0; i < relations_.size(); ++i) {
            const auto& r = relations_[i];
            if (!detail::valid_tag_id(r.id)) throw CatalogError(K::Semantic, "invalid relation id '" + r.id + "'");
            if (r.name.find_first_of("#\n") != std::string::npos)
                throw CatalogError(K::Semantic, "relation name for " + r.id + " contains '#' or a newline");
            for (std::size_t j = 0; j < i; ++j) {
                if (relations_[j].id == r.id) throw CatalogError(K::Semantic, "duplicate relation id '" + r.id + "'");
            }
        }
        if (!contains(kDefaultTag)) throw CatalogError(K::Semantic, "catalog must declare the EX (extension) relation");

        for (const auto& e : lexicon_) {
            if (detail::pattern_length(e.pattern) == 0)
                throw CatalogError(K::Semantic, "lexicon pattern must contain at least one word");
            if (e.pattern.find_first_of("\"\n") != std::string::npos)
                throw CatalogError(K::Semantic, "lexicon pattern may not contain quotes or newlines");
            if (!contains(e.tag))
                throw CatalogError(K::Semantic, "lexicon entry \"" + e.pattern + "\" references unknown tag '" + e.tag + "'");
        }
        for (const auto& p : preferences_) {
            for (const auto* sel : {&p.parent, &p.child_root}) {
                if (sel->kind == TagSelector::Kind::Tag && !contains(sel->tag))
                    throw CatalogError(K::Semantic, "preference rule references unknown tag '" + sel->tag + "'");
            }
            if (p.penalty < 0) throw CatalogError(K::Semantic, "preference penalty must be non-negative");
        }
    }

    std::vector<RelationTag> relations_;
    std::vector<LexiconEntry> lexicon_;
    std::vector<PreferenceRule> preferences_;
};

inline NucleusClass nucleus_of(const RelationCatalog& catalog, std::string_view tag) {
    return catalog.nucleus_of(tag);
}

namespace detail {

inline std::optional<TagSelector> parse_selector(std::string_view s) {
    if (s == "*") return TagSelector::any();
    if (!s.empty() && s.front() == '@') {
        if (auto c = parse_nucleus_class(s.substr(1))) return TagSelector::of_class(*c);
        return std::nullopt;
    }
    if (valid_tag_id(s)) return TagSelector::of_tag(std::string(s));
    return std::nullopt;
}

/// Removes a trailing comment that is not inside a double-quoted span.
inline std::string_view strip_comment(std::string_view line) {
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        if (line[i] == '"') quoted = !quoted;
        else if (line[i] == '#' && !quoted) return line.substr(0, i);
    }
    return line;
}

inline std::vector<std::string> split_ws(std::string_view s) {
    std::vector<std::string> out;
    std::istringstream in{std::string(s)};
    std::string w;
    while (in >> w) out.push_back(std::move(w));
    return out;
}

inline std::optional<int> parse_int(std::string_view s) {
    if (s.empty()) return std::nullopt;
    std::size_t i = (s.front() == '-' || s.front() == '+') ? 1 : 0;
    if (i == s.size()) return std::nullopt;
    long long v = 0;
    for (; i < s.size(); ++i) {
        if (!std::isdigit(static_cast<unsigned char>(s[i]))) return std::nullopt;
        v = v * 10 + (s[i] - '0');
        if (v > 1'000'000'000) return std::nullopt;
    }
    return static_cast<int>(s.front() == '-' ? -v : v);
}

} // namespace detail

/// Parses catalog text. Throws CatalogError (Parse for syntax, Semantic for integrity).
inline RelationCatalog load_catalog(std::string_view source) {
    using K = CatalogError::Kind;
    enum class Section { None, Relations, Lexicon, Preferences } section = Section::None;

    std::vector<RelationTag> relations;
    std::vector<LexiconEntry> lexicon;
    std::vector<PreferenceRule> preferences;

    int lineno = 0;
    std::size_t pos = 0;
    while (pos <= source.size()) {
        const auto nl = source.find('\n', pos);
        const auto raw = source.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        pos = nl == std::string_view::npos ? source.size() + 1 : nl + 1;
        ++lineno;

        const auto line = detail::trim(detail::strip_comment(raw));
        if (line.empty()) continue;

        if (line.front() == '[') {
            if (line == "[relations]") section = Section::Relations;
            else if (line == "[lexicon]") section = Section::Lexicon;
            else if (line == "[preferences]") section = Section::Preferences;
            else throw CatalogError(K::Parse, "unknown section " + std::string(line), lineno);
            continue;
        }

        switch (section) {
        case Section::None:
            throw CatalogError(K::Parse, "entry outside of any section", lineno);

        case Section::Relations: {
            const auto fields = detail::split_ws(line);
            if (fields.size() < 2) throw CatalogError(K::Parse, "expected: ID NUCLEUS [NAME]", lineno);
            if (!detail::valid_tag_id(fields[0])) throw CatalogError(K::Parse, "invalid relation id '" + fields[0] + "'", lineno);
            const auto nucleus = parse_nucleus_class(fields[1]);
            if (!nucleus) throw CatalogError(K::Parse, "nucleus must be right, left or both", lineno);
            // Name is the remainder of the line after the second field.
            auto rest = line;
            for (int f = 0; f < 2; ++f) {
                rest = detail::trim(rest);
                const auto sp = rest.find_first_of(" \t");
                rest = sp == std::string_view::npos ? std::string_view{} : rest.substr(sp);
            }
            relations.push_back({fields[0], std::string(detail::trim(rest)), *nucleus});
            break;
        }

        case Section::Lexicon: {
            if (line.front() != '"') throw CatalogError(K::Parse, "lexicon pattern must be double-quoted", lineno);
            const auto close = line.find('"', 1);
            if (close == std::string_view::npos) throw CatalogError(K::Parse, "unterminated pattern", lineno);
            LexiconEntry e;
            e.pattern = std::string(detail::trim(line.substr(1, close - 1)));
            const auto fields = detail::split_ws(line.substr(close + 1));
            if (fields.empty() || fields.size() > 3)
                throw CatalogError(K::Parse, "expected: \"PATTERN\" TAG [PRIORITY] [start|predicate]", lineno);
            e.tag = fields[0];
            if (fields.size() >= 2) {
                const auto prio = detail::parse_int(fields[1]);
                if (!prio) throw CatalogError(K::Parse, "priority must be an integer", lineno);
                e.priority = *prio;
            }
            if (fields.size() == 3) {
                if (fields[2] == "start") e.position = MatchPosition::Start;
                else if (fields[2] == "predicate") e.position = MatchPosition::Predicate;
                else throw CatalogError(K::Parse, "position must be start or predicate", lineno);
            }
            lexicon.push_back(std::move(e));
            break;
        }

        case Section::Preferences: {
            const auto fields = detail::split_ws(line);
            if (fields.size() != 4) throw CatalogError(K::Parse, "expected: PARENT left|right CHILD PENALTY", lineno);
            PreferenceRule r;
            const auto parent = detail::parse_selector(fields[0]);
            const auto child = detail::parse_selector(fields[2]);
            if (!parent || !child) throw CatalogError(K::Parse, "invalid selector", lineno);
            r.parent = *parent;
            r.child_root = *child;
            if (fields[1] == "left") r.child_side = Side::Left;
            else if (fields[1] == "right") r.child_side = Side::Right;
            else throw CatalogError(K::Parse, "child side must be left or right", lineno);
            const auto pen = detail::parse_int(fields[3]);
            if (!pen || *pen < 0) throw CatalogError(K::Parse, "penalty must be a non-negative integer", lineno);
            r.penalty = *pen;
            preferences.push_back(std::move(r));
            break;
        }
        }
    }

    return RelationCatalog(std::move(relations), std::move(lexicon), std::move(preferences));
}

/// Canonical text form; load_catalog(serialize_catalog(c)) == c.
inline std::string serialize_catalog(const RelationCatalog& catalog) {
    std::ostringstream out;
    out << "[relations]\n";
    for (const auto& r : catalog.relations()) {
        out << r.id << ' ' << to_string(r.nucleus);
        if (!r.name.empty()) out << ' ' << r.name;
        out << '\n';
    }
    out << "\n[lexicon]\n";
    for (const auto& e : catalog.lexicon()) {
        out << '"' << e.pattern << "\" " << e.tag << ' ' << e.priority << ' '
            << (e.position == MatchPosition::Start ? "start" : "predicate") << '\n';
    }
    out << "\n[preferences]\n";
    for (const auto& p : catalog.preferences()) {
        out << p.parent.to_string() << ' ' << (p.child_side == Side::Left ? "left" : "right") << ' '
            << p.child_root.to_string() << ' ' << p.penalty << '\n';
    }
    return out.str();
}

/// Built-in catalog: the twelve relations of the standard relation table with
/// their nucleus classes, an English connective lexicon and the default rules.
inline constexpr std::string_view kDefaultCatalogText = R"(# Default relation catalog (English demo lexicon).

[relations]
# id nucleus name
SR right serial
SM right summarization
NG right negative
EG left example
ES left especial
RS left reason
SP left supplement
# background sets up the point that follows
BI right background
PA both parallel
EX both extension
RF both rephrase
# a directive sentence governs what follows it
DI left direction

[lexicon]
# "pattern" tag priority position
"thus" SR 0 start
"therefore" SR 0 start
"hence" SR 0 start
"consequently" SR 0 start
"as a result" SR 0 start
"after all" SM 0 start
"in short" SM 0 start
"in summary" SM 0 start
"to sum up" SM 0 start
"in conclusion" SM 0 start
"but" NG 0 start
"however" NG 0 start
"nevertheless" NG 0 start
"for example" EG 0 start
"for instance" EG 0 start
"particularly" ES 0 predicate
"especially" ES 0 predicate
"in particular" ES 0 start
"because" RS 0 start
"the reason is" RS 0 start
"of course" SP 0 start
"hitherto" BI 0 start
"traditionally" BI 0 start
"until now" BI 0 start
"and" PA 0 start
"also" PA 0 start
"in addition" PA 0 start
"similarly" PA 0 start
"likewise" PA 0 start
"that is to say" RF 0 start
"that is" RF 0 start
"in other words" RF 0 start
"namely" RF 0 start
"here ... is described" DI 0 predicate
"here ... are described" DI 0 predicate

[preferences]
# parent child-side child-root penalty
# a concluding relation takes the whole closed discussion, never the inside of a satellite
@left right @right 1
# stacked satellite relations nest to the right
@left left @left 1
# a satellite relation outscopes the both-nucleus relations around it
@both left @left 1
@both right @left 1
)";

inline const RelationCatalog& default_catalog() {
    static const RelationCatalog catalog = load_catalog(kDefaultCatalogText);
    return catalog;
}

} // namespace rhetor

#endif

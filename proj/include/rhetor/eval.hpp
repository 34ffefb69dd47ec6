#ifndef RHETOR_EVAL_HPP
#define RHETOR_EVAL_HPP

// Key-sentence coverage evaluation over an annotated corpus.
//
// Manifest format, one document per line (`#` starts a comment):
//
//   PATH  KEY[,KEY...]  MOST_IMPORTANT
//
// where each id is PARAGRAPH:SENTENCE (1-based) and PATH is relative to the
// manifest's directory. Example:
//
//   editorial_01.txt  1:2,1:6,3:1  1:6

#include <algorithm>
#include <cstdio>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "rhetor/abstractor.hpp"
#include "rhetor/catalog.hpp"
#include "rhetor/error.hpp"
#include "rhetor/pipeline.hpp"
#include "rhetor/text.hpp"

namespace rhetor {

struct GoldAnnotation {
    std::string document;
    std::set<SentenceId> keys;
    SentenceId most_important;
};

struct ManifestEntry {
    std::string path;
    GoldAnnotation gold;
};

/// Raised for malformed manifests and annotations that do not fit their document.
class AnnotationError : public Error {
public:
    using Error::Error;
};

inline std::optional<SentenceId> parse_sentence_id(std::string_view s) {
    const auto colon = s.find(':');
    if (colon == std::string_view::npos) return std::nullopt;
    const auto p = detail::parse_int(s.substr(0, colon));
    const auto q = detail::parse_int(s.substr(colon + 1));
    if (!p || !q || *p < 1 || *q < 1) return std::nullopt;
    return SentenceId{*p, *q};
}

inline std::string to_string(const SentenceId& id) {
    return std::to_string(id.paragraph) + ":" + std::to_string(id.sentence);
}

inline std::vector<ManifestEntry> parse_manifest(std::string_view text) {
    std::vector<ManifestEntry> out;
    std::istringstream in{std::string(text)};
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto body = detail::trim(std::string_view(line).substr(0, line.find('#')));
        if (body.empty()) continue;
        const auto fields = detail::split_ws(body);
        const auto where = "manifest line " + std::to_string(lineno) + ": ";
        if (fields.size() != 3) throw AnnotationError(where + "expected: PATH KEYS MOST_IMPORTANT");

        ManifestEntry e;
        e.path = fields[0];
        e.gold.document = fields[0];
        std::string_view keys = fields[1];
        while (!keys.empty()) {
            const auto comma = keys.find(',');
            const auto item = keys.substr(0, comma);
            const auto id = parse_sentence_id(item);
            if (!id) throw AnnotationError(where + "bad sentence id '" + std::string(item) + "'");
            e.gold.keys.insert(*id);
            keys = comma == std::string_view::npos ? std::string_view{} : keys.substr(comma + 1);
        }
        const auto mi = parse_sentence_id(fields[2]);
        if (!mi) throw AnnotationError(where + "bad sentence id '" + fields[2] + "'");
        e.gold.most_important = *mi;
        if (e.gold.keys.empty()) throw AnnotationError(where + "no key sentences");
        if (!e.gold.keys.contains(*mi)) throw AnnotationError(where + "most important sentence is not a key sentence");
        out.push_back(std::move(e));
    }
    return out;
}

enum class LengthUnit { Sentences, Characters };

struct DocumentScore {
    std::string document;
    int sentences = 0;
    std::vector<SentenceId> kept;
    double length_ratio = 0;
    double key_coverage = 0;
    double most_important_coverage = 0;
};

struct CoverageReport {
    std::vector<DocumentScore> documents;
    double length_ratio = 0;
    double key_coverage = 0;
    double most_important_coverage = 0;
};

inline void check_annotation(const Document& doc, const GoldAnnotation& gold) {
    auto valid = [&](const SentenceId& id) {
        return id.paragraph >= 1 && id.paragraph <= static_cast<int>(doc.paragraphs.size()) && id.sentence >= 1 &&
               id.sentence <= static_cast<int>(doc.paragraphs[id.paragraph - 1].size());
    };
    for (const auto& k : gold.keys) {
        if (!valid(k)) throw AnnotationError(gold.document + ": key sentence " + to_string(k) + " does not exist");
    }
    if (!valid(gold.most_important))
        throw AnnotationError(gold.document + ": most important sentence " + to_string(gold.most_important) +
                              " does not exist");
}

/// Scores one abstract against its annotation.
inline DocumentScore score_document(const Document& doc, const GoldAnnotation& gold, std::vector<SentenceId> kept,
                                    LengthUnit unit = LengthUnit::Sentences) {
    check_annotation(doc, gold);
    std::sort(kept.begin(), kept.end());
    DocumentScore row;
    row.document = gold.document;
    row.sentences = static_cast<int>(doc.sentence_count());

    if (unit == LengthUnit::Sentences) {
        row.length_ratio = static_cast<double>(kept.size()) / static_cast<double>(row.sentences);
    } else {
        std::size_t all = 0, part = 0;
        for (const auto& p : doc.paragraphs)
            for (const auto& s : p.sentences) all += s.text.size();
        for (const auto& id : kept) part += doc.paragraphs[id.paragraph - 1].sentences[id.sentence - 1].text.size();
        row.length_ratio = static_cast<double>(part) / static_cast<double>(all);
    }

    const std::set<SentenceId> kept_set(kept.begin(), kept.end());
    int hit = 0;
    for (const auto& k : gold.keys) hit += kept_set.contains(k) ? 1 : 0;
    row.key_coverage = static_cast<double>(hit) / static_cast<double>(gold.keys.size());
    row.most_important_coverage = kept_set.contains(gold.most_important) ? 1.0 : 0.0;
    row.kept = std::move(kept);
    return row;
}

/// Corpus averages are unweighted means over documents.
inline CoverageReport aggregate(std::vector<DocumentScore> rows) {
    CoverageReport r;
    r.documents = std::move(rows);
    if (r.documents.empty()) return r;
    for (const auto& d : r.documents) {
        r.length_ratio += d.length_ratio;
        r.key_coverage += d.key_coverage;
        r.most_important_coverage += d.most_important_coverage;
    }
    const auto n = static_cast<double>(r.documents.size());
    r.length_ratio /= n;
    r.key_coverage /= n;
    r.most_important_coverage /= n;
    return r;
}

/// Runs the full pipeline on every document at `budget` and scores the abstracts.
inline CoverageReport evaluate(const std::vector<std::pair<Document, GoldAnnotation>>& corpus,
                               const RelationCatalog& catalog, const Budget& budget,
                               LengthUnit unit = LengthUnit::Sentences) {
    std::vector<DocumentScore> rows;
    for (const auto& [raw_doc, gold] : corpus) {
        const auto doc = tag_relations(raw_doc, catalog);
        check_annotation(doc, gold);
        const auto structure = parse_document(doc, catalog);
        const auto sel = reduce_document(doc, structure, catalog, budget);
        rows.push_back(score_document(doc, gold, sel.kept, unit));
    }
    return aggregate(std::move(rows));
}

namespace detail {

inline std::string fixed6(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

} // namespace detail

/// Machine-readable form: one `key=value` record per document, then a corpus record.
inline std::string format_records(const CoverageReport& r) {
    std::ostringstream out;
    for (const auto& d : r.documents) {
        out << "doc=" << d.document << " sentences=" << d.sentences << " kept=" << d.kept.size() << " kept_ids=";
        for (std::size_t i = 0; i < d.kept.size(); ++i) out << (i ? "," : "") << to_string(d.kept[i]);
        out << " length_ratio=" << detail::fixed6(d.length_ratio) << " key_coverage=" << detail::fixed6(d.key_coverage)
            << " mi_coverage=" << detail::fixed6(d.most_important_coverage) << '\n';
    }
    out << "corpus documents=" << r.documents.size() << " length_ratio=" << detail::fixed6(r.length_ratio)
        << " key_coverage=" << detail::fixed6(r.key_coverage)
        << " mi_coverage=" << detail::fixed6(r.most_important_coverage) << '\n';
    return out.str();
}

inline std::string format_table(const CoverageReport& r) {
    std::size_t width = 8;
    for (const auto& d : r.documents) width = std::max(width, d.document.size());
    auto pad = [](std::string s, std::size_t w) {
        if (s.size() < w) s.append(w - s.size(), ' ');
        return s;
    };
    std::ostringstream out;
    out << pad("document", width) << "  sentences  kept  length ratio  key coverage  most important\n";
    for (const auto& d : r.documents) {
        char buf[128];
        std::snprintf(buf, sizeof buf, "  %9d  %4zu  %12.3f  %12.3f  %14.3f\n", d.sentences, d.kept.size(),
                      d.length_ratio, d.key_coverage, d.most_important_coverage);
        out << pad(d.document, width) << buf;
    }
    char buf[128];
    std::snprintf(buf, sizeof buf, "  %9s  %4s  %12.3f  %12.3f  %14.3f\n", "", "", r.length_ratio, r.key_coverage,
                  r.most_important_coverage);
    out << pad("average", width) << buf;
    return out.str();
}

} // namespace rhetor

#endif

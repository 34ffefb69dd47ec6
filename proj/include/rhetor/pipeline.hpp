#ifndef RHETOR_PIPELINE_HPP
#define RHETOR_PIPELINE_HPP

#include <string>
#include <string_view>
#include <vector>

#include "rhetor/abstractor.hpp"
#include "rhetor/catalog.hpp"
#include "rhetor/parser.hpp"
#include "rhetor/text.hpp"

namespace rhetor {

struct Analysis {
    Document document;
    DocumentParse structure;
};

/// Split, tag and parse raw text.
inline Analysis analyze(std::string_view raw, const RelationCatalog& catalog, SplitMode mode = SplitMode::Sentences,
                        std::vector<std::string>* warnings = nullptr) {
    Analysis a;
    a.document = tag_relations(split_document(raw, mode), catalog);
    a.structure = parse_document(a.document, catalog, warnings);
    return a;
}

struct Summary {
    DocumentSelection selection;
    std::string text;
};

inline Summary summarize(const Analysis& analysis, const RelationCatalog& catalog, const Budget& budget) {
    Summary s;
    s.selection = reduce_document(analysis.document, analysis.structure, catalog, budget);
    s.text = render_abstract(s.selection.kept, analysis.document);
    return s;
}

} // namespace rhetor

#endif

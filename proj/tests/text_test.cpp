#include <fstream>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "rhetor/text.hpp"

using namespace rhetor;

namespace {

std::string read(const std::string& path) {
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string fig1() { return read(std::string(RHETOR_DATA_DIR) + "/zero_crossing.txt"); }

RelationCatalog demo_lexicon_catalog() {
    return default_catalog().with_lexicon({
        {"particularly", "ES", 0, MatchPosition::Predicate},
        {"for example", "EG", 0, MatchPosition::Start},
        {"thus", "SR", 0, MatchPosition::Start},
    });
}

Paragraph paragraph_of(const std::vector<std::string>& sentences, const RelationCatalog& catalog = default_catalog()) {
    std::string raw;
    for (const auto& s : sentences) raw += s + "\n";
    return tag_relations(split_document(raw, SplitMode::Lines), catalog).paragraphs.at(0);
}

std::vector<std::string> tags_of(const Paragraph& p) {
    std::vector<std::string> out;
    for (const auto& s : p.sentences) out.push_back(s.tag);
    return out;
}

} // namespace

TEST(SplitDocument, WorkedExampleIsOneParagraphOfSixSentences) {
    const auto doc = split_document(fig1());
    ASSERT_EQ(doc.paragraphs.size(), 1u);
    EXPECT_EQ(doc.paragraphs[0].size(), 6u);
    EXPECT_EQ(doc.paragraphs[0].sentences[3].text.substr(0, 12), "For example,");
    for (int i = 0; i < 6; ++i) EXPECT_EQ(doc.paragraphs[0].sentences[i].index, i + 1);
}

TEST(SplitDocument, MinimalSplit) {
    const auto doc = split_document("A. B.");
    ASSERT_EQ(doc.paragraphs.size(), 1u);
    ASSERT_EQ(doc.paragraphs[0].size(), 2u);
    EXPECT_EQ(doc.paragraphs[0].sentences[0].text, "A.");
    EXPECT_EQ(doc.paragraphs[0].sentences[1].text, "B.");
}

TEST(SplitDocument, BlankLineSeparatesParagraphs) {
    const auto doc = split_document("P1.\n\nP2.");
    ASSERT_EQ(doc.paragraphs.size(), 2u);
    EXPECT_EQ(doc.paragraphs[0].size(), 1u);
    EXPECT_EQ(doc.paragraphs[1].size(), 1u);
    EXPECT_EQ(doc.paragraphs[1].index, 2);
    EXPECT_EQ(doc.sentence_count(), 2u);
}

TEST(SplitDocument, WhitespaceOnlyLinesSeparateParagraphs) {
    const auto doc = split_document("One.\n  \t\nTwo. Three.\n\n\n");
    ASSERT_EQ(doc.paragraphs.size(), 2u);
    EXPECT_EQ(doc.paragraphs[1].size(), 2u);
}

TEST(SplitDocument, EmptyInputIsAnError) {
    EXPECT_THROW(split_document(""), InputError);
    EXPECT_THROW(split_document(" \n\n\t\n"), InputError);
    EXPECT_THROW(split_document("\n\n", SplitMode::Lines), InputError);
}

TEST(SplitDocument, AbbreviationsDoNotEndSentences) {
    const auto doc = split_document("Dr. Smith wrote it, e.g. in Fig. 3 of the report. It works. Values like 3.5 stay whole.");
    ASSERT_EQ(doc.paragraphs[0].size(), 3u);
    EXPECT_EQ(doc.paragraphs[0].sentences[0].text, "Dr. Smith wrote it, e.g. in Fig. 3 of the report.");
    EXPECT_EQ(doc.paragraphs[0].sentences[2].text, "Values like 3.5 stay whole.");
}

TEST(SplitDocument, QuestionsExclamationsAndClosers) {
    const auto doc = split_document("Is it true? \"Yes!\" he said (twice.) Then no text ends here");
    ASSERT_EQ(doc.paragraphs[0].size(), 4u);
    EXPECT_EQ(doc.paragraphs[0].sentences[1].text, "\"Yes!\"");
    EXPECT_EQ(doc.paragraphs[0].sentences[2].text, "he said (twice.)");
    EXPECT_EQ(doc.paragraphs[0].sentences[3].text, "Then no text ends here");
}

TEST(SplitDocument, LineMode) {
    const auto doc = split_document("first line. still first\n  second line  \n\nthird", SplitMode::Lines);
    ASSERT_EQ(doc.paragraphs.size(), 2u);
    ASSERT_EQ(doc.paragraphs[0].size(), 2u);
    EXPECT_EQ(doc.paragraphs[0].sentences[0].text, "first line. still first");
    EXPECT_EQ(doc.paragraphs[0].sentences[1].text, "second line");
}

// Property: sentences plus recorded separators rebuild each paragraph block byte for byte.
TEST(SplitDocument, ReconstructsParagraphsExactly) {
    std::mt19937 rng(11);
    const std::vector<std::string> pieces = {"word", "Dr.", "e.g.", "x", "3.5", "end.", "why?", "wow!", "\"quoted.\"",
                                             " ", "  ", "\t", "\n", ". ", "(aside.)", "Mr.", "done."};
    for (int trial = 0; trial < 500; ++trial) {
        std::string raw;
        for (int k = 0, m = 1 + static_cast<int>(rng() % 25); k < m; ++k) {
            raw += pieces[rng() % pieces.size()];
            if (rng() % 3 == 0) raw += ' ';
        }
        for (const auto mode : {SplitMode::Sentences, SplitMode::Lines}) {
            const auto blocks = detail::paragraph_blocks(raw);
            Document doc;
            try {
                doc = split_document(raw, mode);
            } catch (const InputError&) {
                continue;
            }
            ASSERT_EQ(doc.paragraphs.size(), blocks.size()) << raw;
            for (std::size_t p = 0; p < blocks.size(); ++p) {
                EXPECT_EQ(doc.paragraphs[p].text(), blocks[p]) << raw;
                for (const auto& s : doc.paragraphs[p].sentences) EXPECT_FALSE(s.text.empty());
            }
        }
    }
}

TEST(TagRelations, WorkedExampleWithDemoLexicon) {
    const auto doc = tag_relations(split_document(fig1()), demo_lexicon_catalog());
    const auto& p = doc.paragraphs[0];
    EXPECT_EQ(tags_of(p), (std::vector<std::string>{"EX", "EX", "ES", "EG", "EX", "SR"}));
    ASSERT_TRUE(p.sentences[2].connective);
    EXPECT_EQ(p.sentences[2].connective->surface, "particularly");
    EXPECT_EQ(p.sentences[2].connective->position, MatchPosition::Predicate);
    ASSERT_TRUE(p.sentences[3].connective);
    EXPECT_EQ(p.sentences[3].connective->surface, "For example");
    ASSERT_TRUE(p.sentences[5].connective);
    EXPECT_EQ(p.sentences[5].connective->surface, "Thus");
    EXPECT_EQ(p.sentences[5].connective->begin, 0u);
    EXPECT_EQ(p.sentences[5].connective->end, 4u);
    EXPECT_FALSE(p.sentences[0].connective);
    EXPECT_FALSE(p.sentences[4].connective);
}

TEST(TagRelations, DefaultCatalogTagsTheWorkedExampleTheSameWay) {
    const auto doc = tag_relations(split_document(fig1()), default_catalog());
    EXPECT_EQ(tags_of(doc.paragraphs[0]), (std::vector<std::string>{"EX", "EX", "ES", "EG", "EX", "SR"}));
}

TEST(TagRelations, UnmatchedSentenceGetsExtension) {
    const auto p = paragraph_of({"Nothing to see.", "Still nothing here at all."});
    for (const auto& s : p.sentences) {
        EXPECT_EQ(s.tag, "EX");
        EXPECT_FALSE(s.connective);
    }
}

TEST(TagRelations, EmptyLexiconSaturatesWithExtension) {
    const auto catalog = default_catalog().with_lexicon({});
    const auto doc = tag_relations(split_document(fig1() + "\n\nThus, more. But less."), catalog);
    for (const auto& p : doc.paragraphs)
        for (const auto& s : p.sentences) EXPECT_EQ(s.tag, "EX");
}

TEST(TagRelations, RetaggingClearsStaleConnectives) {
    auto doc = tag_relations(split_document("A. Thus, B."), default_catalog());
    ASSERT_TRUE(doc.paragraphs[0].sentences[1].connective);
    doc = tag_relations(std::move(doc), default_catalog().with_lexicon({}));
    EXPECT_FALSE(doc.paragraphs[0].sentences[1].connective);
    EXPECT_EQ(doc.paragraphs[0].sentences[1].tag, "EX");
}

TEST(MatchConnective, LongestPatternWins) {
    const auto c = default_catalog();
    const auto m = match_connective("That is to say, the rate doubles.", c);
    ASSERT_TRUE(m);
    EXPECT_EQ(m->first.surface, "That is to say");
    EXPECT_EQ(m->second, "RF");
}

TEST(MatchConnective, PriorityBreaksLengthTiesThenDeclarationOrder) {
    const auto base = default_catalog();
    const auto c = base.with_lexicon({{"so", "SR", 0, MatchPosition::Start}, {"so", "PA", 5, MatchPosition::Start},
                                      {"so", "NG", 5, MatchPosition::Start}});
    const auto m = match_connective("So it goes.", c);
    ASSERT_TRUE(m);
    EXPECT_EQ(m->second, "PA");
}

TEST(MatchConnective, WordBoundariesAndAnchoring) {
    const auto& c = default_catalog();
    EXPECT_FALSE(match_connective("Butter melts.", c));
    EXPECT_FALSE(match_connective("Thusly we go.", c));
    EXPECT_FALSE(match_connective("It is, however, fine.", c));  // start-anchored
    const auto m = match_connective("\"However,\" she said.", c);
    ASSERT_TRUE(m);
    EXPECT_EQ(m->second, "NG");
    EXPECT_EQ(m->first.begin, 1u);
}

TEST(MatchConnective, PredicatePatternWithGap) {
    const auto& c = default_catalog();
    const auto m = match_connective("In this section, here the method of analysis is described.", c);
    ASSERT_TRUE(m);
    EXPECT_EQ(m->second, "DI");
    EXPECT_EQ(m->first.surface, "here the method of analysis is described");
    EXPECT_FALSE(match_connective("Here nothing is told.", c));
}

TEST(DetectSegments, Enumeration) {
    const auto p = paragraph_of({"There are 3 reasons.", "First, it is fast.", "Second, it is small.",
                                 "Third, it is cheap.", "So we chose it."});
    const auto cs = detect_segments(p, default_catalog());
    ASSERT_EQ(cs.size(), 1u);
    EXPECT_EQ(cs[0].start, 2);
    EXPECT_EQ(cs[0].end, 4);
    EXPECT_EQ(cs[0].kind, "enumeration");
}

TEST(DetectSegments, EnumerationToleratesInterveningSentencesAndLyForms) {
    const auto p = paragraph_of({"Firstly, a.", "More on a.", "Secondly, b.", "Unrelated close."});
    const auto cs = detect_segments(p, default_catalog());
    ASSERT_EQ(cs.size(), 1u);
    EXPECT_EQ(cs[0].start, 1);
    EXPECT_EQ(cs[0].end, 3);
}

TEST(DetectSegments, LoneOrdinalIsNotAnEnumeration) {
    const auto p = paragraph_of({"First, a.", "Then b.", "Third, c."});
    EXPECT_TRUE(detect_segments(p, default_catalog()).empty());
}

TEST(DetectSegments, NoMarkersNoConstraints) {
    const auto p = paragraph_of({"One.", "Two.", "Three."});
    EXPECT_TRUE(detect_segments(p, default_catalog()).empty());
}

TEST(DetectSegments, Concession) {
    const auto p = paragraph_of({"Of course, it is slow.", "But it is correct.", "We use it."});
    const auto cs = detect_segments(p, default_catalog());
    ASSERT_EQ(cs.size(), 1u);
    EXPECT_EQ(cs[0].start, 1);
    EXPECT_EQ(cs[0].end, 2);
    EXPECT_EQ(cs[0].kind, "concession");
}

TEST(DetectSegments, ConcessionNeedsAClosingNegative) {
    const auto p = paragraph_of({"Of course, it is slow.", "It is correct."});
    EXPECT_TRUE(detect_segments(p, default_catalog()).empty());
}

TEST(DetectSegments, DisjointDetectionsAreBothKept) {
    const auto p = paragraph_of({"First, a.", "Second, b.", "Of course, c.", "However, d."});
    const auto cs = detect_segments(p, default_catalog());
    ASSERT_EQ(cs.size(), 2u);
    EXPECT_EQ(cs[0], (SegmentConstraint{1, 2, "enumeration"}));
    EXPECT_EQ(cs[1], (SegmentConstraint{3, 4, "concession"}));
}

TEST(DetectSegments, CrossingDetectionsKeepTheLongerSpanAndWarn) {
    // enumeration [1,4] crosses concession [3,5]
    const auto p = paragraph_of({"First, a.", "More on a.", "Of course, b.", "Second, c.", "But d."});
    std::vector<std::string> warnings;
    const auto cs = detect_segments(p, default_catalog(), &warnings);
    ASSERT_EQ(cs.size(), 1u);
    EXPECT_EQ(cs[0], (SegmentConstraint{1, 4, "enumeration"}));
    ASSERT_EQ(warnings.size(), 1u);
    EXPECT_NE(warnings[0].find("concession"), std::string::npos);
}

TEST(DetectSegments, NestedDetectionsAreBothKept) {
    const auto p = paragraph_of({"First, a.", "Of course, b.", "But c.", "Second, d."});
    const auto cs = detect_segments(p, default_catalog());
    ASSERT_EQ(cs.size(), 2u);
    EXPECT_EQ(cs[0], (SegmentConstraint{1, 4, "enumeration"}));
    EXPECT_EQ(cs[1], (SegmentConstraint{2, 3, "concession"}));
}

// Property: detected constraints are always valid laminar spans.
TEST(DetectSegments, AlwaysLaminar) {
    std::mt19937 rng(3);
    const std::vector<std::string> openers = {"First, x.", "Second, x.", "Third, x.", "Of course, x.", "But x.",
                                              "However, x.", "Plain x.", "Thus, x.", "Fourth, x."};
    for (int trial = 0; trial < 500; ++trial) {
        std::vector<std::string> sentences;
        for (int i = 0, n = 1 + static_cast<int>(rng() % 10); i < n; ++i) sentences.push_back(openers[rng() % openers.size()]);
        const auto p = paragraph_of(sentences);
        const auto cs = detect_segments(p, default_catalog());
        EXPECT_TRUE(constraints_valid(cs, static_cast<int>(p.size())));
    }
}

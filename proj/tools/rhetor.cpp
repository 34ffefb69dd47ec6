// rhetor: rhetorical structure extraction and abstract generation.
//
//   rhetor parse FILE...                  bracket trees, one per paragraph, then the paragraph layer
//   rhetor summarize FILE... --ratio F    abstract text (--sentences N for an absolute length)
//   rhetor eval MANIFEST --ratio F        key-sentence coverage report
//   rhetor catalog check FILE             validate a catalog file
//   rhetor catalog dump                   print the active catalog
//
// Exit codes: 0 ok, 2 I/O, 3 configuration, 4 internal invariant breach.

#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "rhetor/rhetor.hpp"

namespace {

enum ExitCode { kOk = 0, kIoError = 2, kConfigError = 3, kInvariantError = 4 };

struct RunConfig {
    std::string catalog_path;
    std::vector<std::string> inputs;
    std::optional<double> ratio;
    std::optional<int> sentences;
    std::string mode = "abstract";
    bool one_sentence_per_line = false;
    bool warnings = true;
    bool char_ratio = false;
    std::string format = "both";
};

/// Output of one unit of work, flushed by the caller in input order.
struct Job {
    std::string out;
    std::string err;
    int code = kOk;
};

class IoFailure : public rhetor::InputError {
public:
    using rhetor::InputError::InputError;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoFailure("cannot read '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

rhetor::RelationCatalog load_active_catalog(const RunConfig& cfg) {
    if (cfg.catalog_path.empty()) return rhetor::default_catalog();
    std::string text;
    try {
        text = read_file(cfg.catalog_path);
    } catch (const IoFailure& e) {
        throw rhetor::CatalogError(rhetor::CatalogError::Kind::Parse, e.what());
    }
    return rhetor::load_catalog(text);
}

rhetor::Budget budget_of(const RunConfig& cfg) {
    if (cfg.ratio && cfg.sentences) throw rhetor::ArgumentError("give either --ratio or --sentences, not both");
    if (cfg.ratio) return rhetor::Budget::ratio(*cfg.ratio);
    if (cfg.sentences) return rhetor::Budget::sentences(*cfg.sentences);
    throw rhetor::ArgumentError("an abstract length is required: --ratio F or --sentences N");
}

/// Leaf order and relation consistency of every produced tree.
void check_structure(const rhetor::Analysis& a) {
    auto check = [](const rhetor::RhetoricalTree& t, const rhetor::TagSequence& tags, const std::string& where) {
        const auto leaves = t.leaves();
        for (std::size_t i = 0; i < leaves.size(); ++i) {
            if (leaves[i] != static_cast<int>(i) + 1 || leaves.size() != tags.size())
                throw rhetor::InvariantError(where + ": leaves out of order");
        }
        if (!rhetor::relations_consistent(t, tags)) throw rhetor::InvariantError(where + ": inconsistent relation");
    };
    const auto& doc = a.document;
    for (std::size_t p = 0; p < doc.paragraphs.size(); ++p)
        check(a.structure.paragraphs[p].tree, rhetor::tag_sequence(doc.paragraphs[p]),
              "paragraph " + std::to_string(p + 1));
    check(a.structure.inter.tree, rhetor::paragraph_tag_sequence(doc), "paragraph layer");
}

/// Runs `body`, mapping library exceptions to exit codes and stderr text.
template <typename Fn>
Job guarded(const std::string& label, Fn&& body) {
    Job job;
    const std::string prefix = label.empty() ? "" : label + ": ";
    try {
        body(job);
    } catch (const rhetor::InputError& e) {
        job.err += prefix + e.what() + "\n";
        job.code = kIoError;
    } catch (const rhetor::CatalogError& e) {
        job.err += prefix + "catalog: " + e.what() + "\n";
        job.code = kConfigError;
    } catch (const rhetor::AnnotationError& e) {
        job.err += prefix + e.what() + "\n";
        job.code = kConfigError;
    } catch (const rhetor::InvariantError& e) {
        job.err += prefix + "internal error: " + e.what() + "\n";
        job.code = kInvariantError;
    } catch (const rhetor::ArgumentError& e) {
        job.err += prefix + "internal error: " + e.what() + "\n";
        job.code = kInvariantError;
    }
    return job;
}

rhetor::Analysis analyze_file(const std::string& path, const rhetor::RelationCatalog& catalog, const RunConfig& cfg,
                              std::string& err) {
    std::vector<std::string> warnings;
    auto a = rhetor::analyze(read_file(path), catalog,
                             cfg.one_sentence_per_line ? rhetor::SplitMode::Lines : rhetor::SplitMode::Sentences,
                             &warnings);
    check_structure(a);
    if (cfg.warnings) {
        for (const auto& w : warnings) err += path + ": warning: " + w + "\n";
    }
    return a;
}

/// Runs one job per input concurrently and prints the results in input order.
template <typename Fn>
int run_per_file(const RunConfig& cfg, Fn&& per_file) {
    std::vector<std::future<Job>> futures;
    for (const auto& path : cfg.inputs) {
        futures.push_back(std::async(std::launch::async, [&, path] { return guarded(path, [&](Job& job) { per_file(path, job); }); }));
    }
    int code = kOk;
    const bool many = cfg.inputs.size() > 1;
    for (std::size_t i = 0; i < futures.size(); ++i) {
        auto job = futures[i].get();
        if (many && job.code == kOk) std::cout << "# " << cfg.inputs[i] << '\n';
        std::cout << job.out;
        std::cerr << job.err;
        code = std::max(code, job.code);
    }
    std::cout.flush();
    return code;
}

int cmd_parse(const RunConfig& cfg, const rhetor::RelationCatalog& catalog) {
    return run_per_file(cfg, [&](const std::string& path, Job& job) {
        const auto a = analyze_file(path, catalog, cfg, job.err);
        for (const auto& p : a.structure.paragraphs) job.out += rhetor::to_bracket(p.tree) + "\n";
        job.out += rhetor::to_bracket(a.structure.inter.tree) + "\n";
    });
}

std::string penalties_listing(const rhetor::Analysis& a, const rhetor::Summary& s,
                              const std::vector<rhetor::PenaltyAnnotation>& annotations) {
    const bool single = a.document.paragraphs.size() == 1;
    std::string out;
    int last_para = 0;
    for (const auto& id : s.selection.kept) {
        if (last_para != 0 && id.paragraph != last_para) out += '\n';
        last_para = id.paragraph;
        const auto& sentence = a.document.paragraphs[id.paragraph - 1].sentences[id.sentence - 1];
        out += "[" + (single ? std::to_string(id.sentence) : rhetor::to_string(id)) +
               " p=" + std::to_string(annotations[id.paragraph - 1].leaf(id.sentence)) + "] " +
               rhetor::render_sentence(sentence) + "\n";
    }
    return out;
}

int cmd_summarize(const RunConfig& cfg, const rhetor::RelationCatalog& catalog) {
    const auto budget = budget_of(cfg);
    return run_per_file(cfg, [&](const std::string& path, Job& job) {
        const auto a = analyze_file(path, catalog, cfg, job.err);
        const auto summary = rhetor::summarize(a, catalog, budget);

        std::vector<rhetor::PenaltyAnnotation> annotations;
        for (std::size_t p = 0; p < a.document.paragraphs.size(); ++p) {
            annotations.push_back(rhetor::propagate_penalties(a.structure.paragraphs[p].tree, catalog));
            if (cfg.warnings) {
                if (auto w = rhetor::gradation_warning(annotations.back()))
                    job.err += path + ": warning: paragraph " + std::to_string(p + 1) + ": " + *w + "\n";
            }
        }

        std::string tree_dump;
        for (std::size_t p = 0; p < annotations.size(); ++p)
            tree_dump += rhetor::annotated_bracket(a.structure.paragraphs[p].tree, annotations[p]) + "\n";
        tree_dump += rhetor::annotated_bracket(a.structure.inter.tree, summary.selection.paragraph_penalties) + "\n";

        if (cfg.mode == "abstract") {
            job.out += summary.text + "\n";
        } else if (cfg.mode == "tree") {
            job.out += tree_dump;
        } else if (cfg.mode == "penalties") {
            job.out += penalties_listing(a, summary, annotations);
        } else {
            job.out += tree_dump + "\n" + penalties_listing(a, summary, annotations) + "\n" + summary.text + "\n";
        }
    });
}

int cmd_eval(const RunConfig& cfg, const rhetor::RelationCatalog& catalog) {
    const auto budget = budget_of(cfg);
    const auto& manifest_path = cfg.inputs.front();

    std::vector<rhetor::ManifestEntry> entries;
    auto load = guarded(manifest_path, [&](Job&) { entries = rhetor::parse_manifest(read_file(manifest_path)); });
    if (load.code != kOk) {
        std::cerr << load.err;
        return load.code;
    }

    const auto base = std::filesystem::path(manifest_path).parent_path();
    const auto unit = cfg.char_ratio ? rhetor::LengthUnit::Characters : rhetor::LengthUnit::Sentences;
    std::vector<std::future<std::pair<Job, std::optional<rhetor::DocumentScore>>>> futures;
    for (const auto& e : entries) {
        futures.push_back(std::async(std::launch::async, [&, e] {
            std::optional<rhetor::DocumentScore> row;
            auto job = guarded(e.path, [&](Job& j) {
                const auto a = analyze_file((base / e.path).string(), catalog, cfg, j.err);
                rhetor::check_annotation(a.document, e.gold);
                const auto s = rhetor::summarize(a, catalog, budget);
                row = rhetor::score_document(a.document, e.gold, s.selection.kept, unit);
            });
            return std::make_pair(std::move(job), row);
        }));
    }

    std::vector<rhetor::DocumentScore> rows;
    int code = kOk;
    for (auto& f : futures) {
        auto [job, row] = f.get();
        std::cerr << job.err;
        code = std::max(code, job.code);
        if (row) rows.push_back(std::move(*row));
    }
    if (code != kOk) {
        std::cerr << "eval: " << (entries.size() - rows.size()) << " of " << entries.size() << " documents failed\n";
        return code;
    }

    const auto report = rhetor::aggregate(std::move(rows));
    if (cfg.format == "table" || cfg.format == "both") std::cout << rhetor::format_table(report);
    if (cfg.format == "both") std::cout << '\n';
    if (cfg.format == "records" || cfg.format == "both") std::cout << rhetor::format_records(report);
    return kOk;
}

int cmd_catalog_check(const std::string& path) {
    auto job = guarded(path, [&](Job& j) {
        const auto c = rhetor::load_catalog(read_file(path));
        j.out = path + ": ok (" + std::to_string(c.relations().size()) + " relations, " +
                std::to_string(c.lexicon().size()) + " lexicon entries, " + std::to_string(c.preferences().size()) +
                " preference rules)\n";
    });
    std::cout << job.out;
    std::cerr << job.err;
    return job.code;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Rhetorical structure extraction and abstract generation"};
    app.require_subcommand(1);
    app.fallthrough();
    RunConfig cfg;

    app.add_option("--catalog", cfg.catalog_path, "Catalog file (default: built-in English catalog)");
    app.add_flag("--no-warnings", [&](std::int64_t) { cfg.warnings = false; }, "Suppress warnings on stderr");

    auto add_input_opts = [&](CLI::App* sub) {
        sub->add_flag("--one-sentence-per-line", cfg.one_sentence_per_line, "Treat each non-blank line as a sentence");
    };
    auto add_length_opts = [&](CLI::App* sub) {
        auto* r = sub->add_option("--ratio", cfg.ratio, "Abstract length as a fraction of the sentences, in (0,1]");
        auto* n = sub->add_option("--sentences", cfg.sentences, "Abstract length in sentences (>= 1)");
        r->excludes(n);
    };

    auto* parse_cmd = app.add_subcommand("parse", "Print rhetorical structures in bracket notation");
    parse_cmd->add_option("inputs", cfg.inputs, "Input text files")->required();
    add_input_opts(parse_cmd);

    auto* sum_cmd = app.add_subcommand("summarize", "Generate an abstract");
    sum_cmd->add_option("inputs", cfg.inputs, "Input text files")->required();
    sum_cmd->add_option("--mode", cfg.mode, "Output: abstract, tree, penalties or all")
        ->check(CLI::IsMember({"abstract", "tree", "penalties", "all"}));
    add_input_opts(sum_cmd);
    add_length_opts(sum_cmd);

    auto* eval_cmd = app.add_subcommand("eval", "Key-sentence coverage over an annotated corpus");
    eval_cmd->add_option("manifest", cfg.inputs, "Corpus manifest")->required()->expected(1);
    eval_cmd->add_flag("--char-ratio", cfg.char_ratio, "Length ratio in characters instead of sentences");
    eval_cmd->add_option("--format", cfg.format, "Report: table, records or both")
        ->check(CLI::IsMember({"table", "records", "both"}));
    add_input_opts(eval_cmd);
    add_length_opts(eval_cmd);

    auto* cat_cmd = app.add_subcommand("catalog", "Catalog utilities");
    cat_cmd->require_subcommand(1);
    std::string check_path;
    auto* check_cmd = cat_cmd->add_subcommand("check", "Validate a catalog file");
    check_cmd->add_option("file", check_path, "Catalog file")->required();
    auto* dump_cmd = cat_cmd->add_subcommand("dump", "Print the active catalog in canonical form");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kConfigError;
    }

    if (*check_cmd) return cmd_catalog_check(check_path);

    std::optional<rhetor::RelationCatalog> catalog;
    try {
        catalog = load_active_catalog(cfg);
        if (*dump_cmd) {
            std::cout << rhetor::serialize_catalog(*catalog);
            return kOk;
        }
        if (*parse_cmd) return cmd_parse(cfg, *catalog);
        if (*sum_cmd) return cmd_summarize(cfg, *catalog);
        if (*eval_cmd) return cmd_eval(cfg, *catalog);
    } catch (const rhetor::CatalogError& e) {
        std::cerr << "catalog: " << e.what() << '\n';
        return kConfigError;
    } catch (const rhetor::ArgumentError& e) {
        std::cerr << e.what() << '\n';
        return kConfigError;
    } catch (const rhetor::Error& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return kInvariantError;
    }
    return kOk;
}

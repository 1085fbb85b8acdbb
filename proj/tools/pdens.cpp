// pdens: run set-definition documents and print one JSON object per query.
#include "pdens/errors.hpp"
#include "pdens/report.hpp"

#include "CLI11.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

using namespace pdens;

namespace {

struct Format {
    bool pretty = false;
    std::string dump(const Json& j) const { return pretty ? j.dump(2) : j.dump(); }
};

Json error_json(const Error& e) {
    Json j{{"error_kind", e.kind()}, {"message", e.what()}};
    if (const auto* s = dynamic_cast<const SyntaxError*>(&e)) {
        j["line"] = s->line();
        j["column"] = s->column();
    }
    return j;
}

int run_file(const std::string& path, const Format& fmt, const RunOptions& opts) {
    std::ifstream in(path);
    if (!in) {
        std::cerr << "pdens: cannot open " << path << "\n";
        return 2;
    }
    std::stringstream buf;
    buf << in.rdbuf();
    Document doc;
    try {
        doc = parse(buf.str());
    } catch (const Error& e) {
        std::cout << fmt.dump(error_json(e)) << "\n";
        return 2;
    }
    RunOutput out = run(doc, opts);
    for (const auto& j : out.results) std::cout << fmt.dump(j) << "\n";
    return out.ok ? 0 : 1;
}

// Statements are collected until ';'. Definitions extend the session
// document; a query runs at once against it.
int repl(const Format& fmt, const RunOptions& opts) {
    std::string doc_text;
    std::string pending;
    std::string line;
    bool ok = true;
    while (std::getline(std::cin, line)) {
        if (pending.empty() && (line == ":quit" || line == ":q")) break;
        if (pending.empty() && line == ":print") {
            try {
                std::cout << print(parse(doc_text));
            } catch (const Error& e) {
                std::cout << fmt.dump(error_json(e)) << "\n";
            }
            continue;
        }
        pending += line + "\n";
        std::size_t semi;
        while ((semi = pending.find(';')) != std::string::npos) {
            std::string stmt = pending.substr(0, semi + 1);
            pending.erase(0, semi + 1);
            if (stmt.find_first_not_of(" \t\r\n;") == std::string::npos) continue;
            std::string candidate = doc_text + stmt + "\n";
            try {
                Document doc = parse(candidate);
                auto queries = doc.queries();
                bool is_query = !queries.empty() && doc.items.back().index() == 2;
                if (is_query) {
                    Evaluator eval(doc);
                    bool q_ok = true;
                    try {
                        std::cout << fmt.dump(run_query(eval, queries.back(), opts, &q_ok)) << "\n";
                    } catch (const Error& e) {
                        q_ok = false;
                        Json j = error_json(e);
                        j["query"] = queries.back().verb;
                        j["set"] = queries.back().set;
                        std::cout << fmt.dump(j) << "\n";
                    }
                    ok = ok && q_ok;
                } else {
                    doc_text = candidate;
                }
            } catch (const Error& e) {
                std::cout << fmt.dump(error_json(e)) << "\n";
                ok = false;
            }
            std::cout.flush();
        }
        if (pending.find_first_not_of(" \t\r\n") == std::string::npos) pending.clear();
    }
    return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact local densities and Crofton integrals over Q_p"};
    app.require_subcommand(1);
    Format fmt;
    RunOptions opts;
    opts.depth = default_depth();

    auto add_common = [&](CLI::App* sub) {
        auto* json = sub->add_flag("--json", "one compact JSON object per line (default)");
        sub->add_flag("--pretty", fmt.pretty, "indented JSON")->excludes(json);
        sub->add_option("--depth", opts.depth, "cross-check depth for sc queries")->check(CLI::PositiveNumber);
        sub->add_option("--refine-bound", opts.refine_bound, "group refinements tried by mt-check")
            ->check(CLI::NonNegativeNumber);
        sub->add_option("--precision", opts.precision, "p-adic digits for member queries")
            ->check(CLI::PositiveNumber);
    };

    std::string path;
    auto* run_cmd = app.add_subcommand("run", "run a document");
    run_cmd->add_option("file", path, "document to run")->required();
    add_common(run_cmd);
    auto* repl_cmd = app.add_subcommand("repl", "read statements from standard input");
    add_common(repl_cmd);

    CLI11_PARSE(app, argc, argv);
    if (*run_cmd) return run_file(path, fmt, opts);
    return repl(fmt, opts);
}

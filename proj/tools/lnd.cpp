#include "lnd/corpus.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

namespace {

std::optional<std::string> read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return std::nullopt;
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Checks corpora of locally nilpotent derivations of Q[x, y, z]"};
    app.require_subcommand(1);

    std::string file;
    lnd::corpus::RunOptions opt;
    auto add_run_options = [&](CLI::App* sub) {
        sub->add_option("file", file, "corpus file")->required();
        sub->add_option("--seed", opt.seed, "seed for randomized directives");
        sub->add_option("--budget", opt.budget, "cases per randomized directive");
        sub->add_option("--deg-max", opt.deg_max, "degree bound for random cases and searches")->check(CLI::Range(1, 12));
        sub->add_option("--work-limit", opt.work_limit, "term products allowed per item, 0 for no limit")
            ->capture_default_str();
    };
    CLI::App* check = app.add_subcommand("check", "run the directives of a corpus");
    add_run_options(check);
    CLI::App* report = app.add_subcommand("report", "run the directives and print full witnesses");
    add_run_options(report);
    CLI::App* parse = app.add_subcommand("parse", "syntax check; prints the canonical form");
    parse->add_option("file", file, "corpus file")->required();

    CLI11_PARSE(app, argc, argv);

    auto src = read_file(file);
    if (!src) {
        std::cerr << "lnd: cannot read " << file << "\n";
        return 2;
    }
    lnd::corpus::CorpusCase c;
    try {
        c = lnd::corpus::parse(*src);
    } catch (const lnd::ParseError& e) {
        std::cerr << file << ":" << e.line() << ":" << e.column() << ": error: " << e.message() << "\n";
        return 1;
    }
    if (parse->parsed()) {
        std::cout << lnd::corpus::print(c);
        return 0;
    }
    lnd::corpus::Report r = lnd::corpus::run(c, opt);
    std::cout << r.render(report->parsed());
    return r.ok() ? 0 : 1;
}

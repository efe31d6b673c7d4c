#include "cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>

#include "sp/learn.hpp"
#include "sp/probability.hpp"
#include "sp/render.hpp"
#include "sp/search.hpp"

namespace sp::cli {

namespace {

constexpr int kOk = 0;
constexpr int kError = 1;
constexpr int kNothing = 2;

struct Options {
    std::string old_path, new_path, code, out_path, metrics_path;
    std::string cost_model = "fractional";
    std::string orientation = "rows";
    std::size_t beam_driving = 20, beam_target = 200, max_alignments = 10, budget = 1'000'000;
    bool probabilities = false, lgen = false;
};

std::string field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
    return q + '"';
}

std::string num(double v) {
    std::ostringstream s;
    s << std::setprecision(6) << std::fixed << v;
    return s.str();
}

// Reads an Old file and, when given, a New file; errors name the file.
PatternStore load(const std::string& old_path, const std::string& new_path) {
    PatternStore store;
    auto read = [&](const std::string& path, Role role) {
        auto text = read_file(path);
        try {
            parse_patterns(text, role, store);
        } catch (const ParseError& e) {
            throw std::runtime_error(path + ":" + e.what());
        }
    };
    if (!old_path.empty()) read(old_path, Role::Old);
    if (!new_path.empty()) read(new_path, Role::New);
    store.classify();
    return store;
}

SearchParams search_params(const Options& o) {
    SearchParams p;
    p.beam_driving = o.beam_driving;
    p.beam_target = o.beam_target;
    p.max_alignments = o.max_alignments;
    p.budget = o.budget;
    return p;
}

CostModel cost_model(const Options& o) {
    return o.cost_model == "sfe" ? CostModel::SfeInteger : CostModel::Fractional;
}

Orientation orientation(const Options& o) {
    return o.orientation == "columns" ? Orientation::Columns : Orientation::Rows;
}

std::size_t only_new(const PatternStore& store) {
    auto news = store.new_indices();
    if (news.size() != 1)
        throw std::runtime_error("expected exactly one New pattern, found " + std::to_string(news.size()));
    return news.front();
}

void score_csv(std::ostream& out, const std::vector<ScoredAlignment>& found, const PatternStore& store) {
    out << "rank,CD,B_N,B_E,code\n";
    for (std::size_t i = 0; i < found.size(); ++i) {
        const auto& s = found[i].score;
        out << i + 1 << ',' << num(s.cd) << ',' << num(s.encoded_bits) << ',' << num(s.code_bits) << ','
            << field(join(s.code, store.symbols())) << '\n';
    }
}

void probability_csv(std::ostream& out, const std::vector<ScoredAlignment>& found, const PatternStore& store,
                     ProbMode mode) {
    out << "rank,CD,p_ABS,p_REL\n";
    if (found.empty()) return;
    auto ref = relative_probabilities(found, mode);
    for (std::size_t k = 0; k < ref.members.size(); ++k) {
        std::ostringstream pa;
        pa << std::setprecision(6) << std::scientific << ref.p_abs[k];
        out << ref.members[k] + 1 << ',' << num(found[ref.members[k]].score.cd) << ',' << pa.str() << ','
            << std::setprecision(12) << std::fixed << ref.p_rel[k] << '\n';
    }
    auto probs = entity_probabilities(found, ref, store);
    out << "\npattern,probability\n";
    for (const auto& [p, v] : probs.patterns) out << field(store.text(p)) << ',' << num(v) << '\n';
    out << "\nsymbol,probability\n";
    // Alphabetical so the table does not depend on interning order.
    std::map<std::string, double> by_name;
    for (const auto& [s, v] : probs.symbols) by_name[store.symbols().name(s)] = v;
    for (const auto& [name, v] : by_name) out << field(name) << ',' << num(v) << '\n';
}

// Score CSV (and probability tables) go to --out when given, otherwise after the renders.
std::ostream& table_stream(const Options& o, std::ostream& out, std::ofstream& file) {
    if (o.out_path.empty()) return out;
    file.open(o.out_path);
    if (!file) throw std::runtime_error("cannot write " + o.out_path);
    return file;
}

int run_align(const Options& o, std::ostream& out) {
    auto store = load(o.old_path, o.new_path);
    auto table = CodeTable::build(store, cost_model(o));
    auto found = build_alignments(store, only_new(store), table, search_params(o));
    for (std::size_t i = 0; i < found.size(); ++i) {
        out << "# alignment " << i + 1 << " CD " << num(found[i].score.cd) << " code "
            << join(found[i].score.code, store.symbols()) << '\n';
        out << render(found[i].alignment, store, orientation(o)) << '\n';
    }
    std::ofstream file;
    auto& t = table_stream(o, out, file);
    score_csv(t, found, store);
    if (o.probabilities) {
        t << '\n';
        probability_csv(t, found, store, o.lgen ? ProbMode::Lgen : ProbMode::Strict);
    }
    return found.empty() ? kNothing : kOk;
}

int run_probs(const Options& o, std::ostream& out) {
    auto store = load(o.old_path, o.new_path);
    auto table = CodeTable::build(store, cost_model(o));
    auto found = build_alignments(store, only_new(store), table, search_params(o));
    std::ofstream file;
    probability_csv(table_stream(o, out, file), found, store, o.lgen ? ProbMode::Lgen : ProbMode::Strict);
    return found.empty() ? kNothing : kOk;
}

int run_produce(const Options& o, std::ostream& out) {
    auto store = load(o.old_path, o.code.empty() ? o.new_path : std::string());
    std::size_t code;
    if (!o.code.empty()) {
        code = store.add(o.code, Role::New);
        store.classify();
    } else {
        code = only_new(store);
    }
    auto table = CodeTable::build(store, cost_model(o));
    auto p = produce(store, code, table, search_params(o));
    if (p.alignments.empty()) return kNothing;
    out << join(p.surface, store.symbols()) << "\n\n";
    out << render(p.alignments.front().alignment, store, orientation(o));
    return kOk;
}

int run_render(const Options& o, std::ostream& out) {
    auto store = load(o.old_path, o.new_path);
    auto table = CodeTable::build(store, cost_model(o));
    auto found = build_alignments(store, only_new(store), table, search_params(o));
    if (found.empty()) return kNothing;
    out << render(found.front().alignment, store, orientation(o));
    return kOk;
}

int run_learn(const Options& o, std::ostream& out) {
    auto corpus = load("", o.new_path);
    if (corpus.new_indices().empty()) throw std::runtime_error(o.new_path + ": empty corpus");
    LearnParams lp;
    lp.cost_model = cost_model(o);
    auto res = search_grammars(corpus, lp);
    const auto& best = res.grammars.front();
    const auto text = grammar_text(best, *res.symbols);
    std::ostream* summary = &out;
    std::ofstream file;
    if (o.out_path.empty()) {
        out << text;
    } else {
        file.open(o.out_path);
        if (!file) throw std::runtime_error("cannot write " + o.out_path);
        file << text;
    }
    if (!o.metrics_path.empty()) {
        std::ofstream m(o.metrics_path);
        if (!m) throw std::runtime_error("cannot write " + o.metrics_path);
        write_metrics_csv(m, res.metrics);
    }
    const auto& last = res.metrics.back();
    if (o.out_path.empty()) *summary << '\n';
    *summary << "T " << num(last.T) << " O " << num(last.O) << " T/O " << num(last.ratio) << '\n';
    return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"SP machine: alignment, production, probabilities and learning over pattern files"};
    app.require_subcommand(1);
    Options o;

    auto common = [&](CLI::App* c, bool needs_old) {
        auto* old = c->add_option("--old", o.old_path, "Old pattern file")->check(CLI::ExistingFile);
        if (needs_old) old->required();
        c->add_option("--cost-model", o.cost_model, "fractional or sfe")
            ->check(CLI::IsMember({"fractional", "sfe"}));
        c->add_option("--beam-driving", o.beam_driving, "alignments driven per stage")->check(CLI::PositiveNumber);
        c->add_option("--beam-target", o.beam_target, "new alignments kept per stage")->check(CLI::PositiveNumber);
        c->add_option("--max-alignments", o.max_alignments, "alignments reported")->check(CLI::PositiveNumber);
        c->add_option("--budget", o.budget, "hit-tree node budget")->check(CLI::PositiveNumber);
        c->add_option("--orientation", o.orientation, "rows or columns")->check(CLI::IsMember({"rows", "columns"}));
        c->add_option("--out", o.out_path, "output file");
    };

    auto* align = app.add_subcommand("align", "best alignments of a New pattern");
    common(align, true);
    align->add_option("--new", o.new_path, "New pattern file")->required()->check(CLI::ExistingFile);
    align->add_flag("--probabilities", o.probabilities, "append probability tables");
    align->add_flag("--lgen", o.lgen, "compare alignments of different coverage");

    auto* produce_cmd = app.add_subcommand("produce", "read a code pattern back out");
    common(produce_cmd, true);
    produce_cmd->add_option("--code", o.code, "code symbols, space separated");
    produce_cmd->add_option("--new", o.new_path, "file holding the code pattern")->check(CLI::ExistingFile);

    auto* probs = app.add_subcommand("probs", "probabilities of alignments, patterns and symbols");
    common(probs, true);
    probs->add_option("--new", o.new_path, "New pattern file")->required()->check(CLI::ExistingFile);
    probs->add_flag("--lgen", o.lgen, "compare alignments of different coverage");

    auto* learn = app.add_subcommand("learn", "grammar from a corpus of New patterns");
    learn->add_option("--new", o.new_path, "corpus file")->required()->check(CLI::ExistingFile);
    learn->add_option("--cost-model", o.cost_model, "fractional or sfe")->check(CLI::IsMember({"fractional", "sfe"}));
    learn->add_option("--metrics", o.metrics_path, "metrics CSV");
    learn->add_option("--out", o.out_path, "grammar file");

    auto* render_cmd = app.add_subcommand("render", "draw the best alignment");
    common(render_cmd, true);
    render_cmd->add_option("--new", o.new_path, "New pattern file")->required()->check(CLI::ExistingFile);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e, out, err);
        return code == 0 ? kOk : kError;
    }
    if (produce_cmd->parsed() && o.code.empty() && o.new_path.empty()) {
        err << "produce needs --code or --new\n";
        return kError;
    }

    try {
        if (align->parsed()) return run_align(o, out);
        if (produce_cmd->parsed()) return run_produce(o, out);
        if (probs->parsed()) return run_probs(o, out);
        if (learn->parsed()) return run_learn(o, out);
        return run_render(o, out);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kError;
    }
}

}  // namespace sp::cli

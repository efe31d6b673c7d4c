#include "sp/learn.hpp"

#include <algorithm>
#include <iomanip>
#include <ostream>
#include <stdexcept>

namespace sp {

std::string Namer::next_class() {
    for (;;) {
        std::string name = classes_ < 26 ? std::string(1, static_cast<char>('A' + classes_))
                                         : "P" + std::to_string(classes_ - 25);
        ++classes_;
        if (!taken_.count(name) && !taken_.count("#" + name)) return name;
    }
}

std::string Namer::next_discriminator(const std::string& cls) {
    return std::to_string(discriminators_[cls]++);
}

std::vector<Pattern> DerivedPatternSet::all() const {
    std::vector<Pattern> out = chunks;
    out.insert(out.end(), variants.begin(), variants.end());
    out.insert(out.end(), abstracts.begin(), abstracts.end());
    return out;
}

namespace {

SymbolId id_symbol(SymbolTable& table, const std::string& name) {
    auto s = table.intern(name);
    table.set_class(s, SymbolClass::Id);
    return s;
}

struct Ref {
    SymbolId head, tail;
    bool operator==(const Ref&) const = default;
};

// "cls d <body> #cls"
Pattern make_pattern(const std::string& cls, std::span<const SymbolId> body, std::uint64_t frequency,
                     SymbolTable& table, Namer& namer) {
    Pattern p;
    p.symbols.push_back(id_symbol(table, cls));
    p.symbols.push_back(id_symbol(table, namer.next_discriminator(cls)));
    p.symbols.insert(p.symbols.end(), body.begin(), body.end());
    p.symbols.push_back(id_symbol(table, "#" + cls));
    p.frequency = frequency;
    return p;
}

Pattern make_abstract(const std::string& cls, const std::vector<Ref>& refs, std::uint64_t frequency,
                      SymbolTable& table, Namer& namer) {
    std::vector<SymbolId> body;
    for (const auto& r : refs) {
        body.push_back(r.head);
        body.push_back(r.tail);
    }
    return make_pattern(cls, body, frequency, table, namer);
}

bool top_level(const std::vector<Pattern>& grammar, std::size_t i) {
    const auto head = grammar[i].symbols.front();
    for (std::size_t j = 0; j < grammar.size(); ++j)
        if (j != i && std::find(grammar[j].symbols.begin() + 1, grammar[j].symbols.end(), head) != grammar[j].symbols.end())
            return false;
    return true;
}

std::string grammar_key(const Grammar& g, const SymbolTable& symbols) {
    std::vector<std::string> lines;
    for (const auto& p : g.patterns) {
        std::string s;
        for (auto x : p.symbols) s += symbols.name(x) + ' ';
        lines.push_back(s + std::to_string(p.frequency));
    }
    std::sort(lines.begin(), lines.end());
    std::string out;
    for (const auto& l : lines) out += l + '\n';
    return out;
}

}  // namespace

DerivedPatternSet derive_patterns(const Alignment& a, PatternStore& store, Namer& namer) {
    const auto& rows = a.rows();
    if (rows.size() != 2 || !rows[0].is_new || rows[1].is_new)
        throw std::invalid_argument("derivation needs New plus one Old row");
    auto& table = store.symbols();
    const auto& N = store.at(rows[0].pattern).symbols;
    const auto& O = store.at(rows[1].pattern).symbols;
    const auto f_old = store.at(rows[1].pattern).frequency;

    std::size_t cs = 0;
    while (cs < O.size() && table.is_id(O[cs])) ++cs;
    std::size_t ce = cs;
    while (ce < O.size() && !table.is_id(O[ce])) ++ce;
    if (cs == 0 || cs == ce || ce == O.size()) throw std::invalid_argument("Old row is not ids, contents, ids");
    for (std::size_t i = ce; i < O.size(); ++i)
        if (!table.is_id(O[i])) throw std::invalid_argument("Old row is not ids, contents, ids");

    std::vector<std::pair<std::uint32_t, std::uint32_t>> hits;  // (New pos, Old pos)
    for (std::size_t c = 0; c < a.column_count(); ++c) {
        const auto& cells = a.cells(c);
        if (cells.size() < 2) continue;
        std::uint32_t n = 0, o = 0;
        for (const auto& cell : cells) (cell.row == 0 ? n : o) = cell.pos;
        if (o < cs || o >= ce) throw std::invalid_argument("New matched an id symbol");
        hits.emplace_back(n, o);
    }
    if (hits.empty()) throw std::invalid_argument("nothing matched");
    std::sort(hits.begin(), hits.end());

    DerivedPatternSet out;
    std::vector<Ref> old_side, new_side;
    auto ref_of = [](const Pattern& p) { return Ref{p.symbols.front(), p.symbols.back()}; };
    auto span_of = [](const std::vector<SymbolId>& v, std::size_t b, std::size_t e) {
        return std::span<const SymbolId>(v.data() + b, e - b);
    };
    auto gap = [&](std::size_t nb, std::size_t ne, std::size_t ob, std::size_t oe) {
        if (nb == ne && ob == oe) return;
        const auto cls = namer.next_class();
        if (ob < oe) {
            out.variants.push_back(make_pattern(cls, span_of(O, ob, oe), f_old, table, namer));
            old_side.push_back(ref_of(out.variants.back()));
        }
        if (nb < ne) {
            out.variants.push_back(make_pattern(cls, span_of(N, nb, ne), 1, table, namer));
            new_side.push_back(ref_of(out.variants.back()));
        }
    };

    std::size_t n = 0, o = cs;
    for (std::size_t i = 0; i < hits.size();) {
        std::size_t j = i + 1;
        while (j < hits.size() && hits[j].first == hits[j - 1].first + 1 && hits[j].second == hits[j - 1].second + 1) ++j;
        const auto [n0, o0] = hits[i];
        const auto n1 = hits[j - 1].first + 1, o1 = hits[j - 1].second + 1;
        gap(n, n0, o, o0);
        Ref r;
        if (o0 == cs && o1 == ce) {
            out.reused.push_back(rows[1].pattern);
            r = Ref{O.front(), O.back()};
        } else {
            out.chunks.push_back(make_pattern(namer.next_class(), span_of(O, o0, o1), f_old + 1, table, namer));
            r = ref_of(out.chunks.back());
        }
        old_side.push_back(r);
        new_side.push_back(r);
        n = n1;
        o = o1;
        i = j;
    }
    gap(n, N.size(), o, ce);

    // A side made of one reference needs no pattern of its own.
    const bool old_needs = old_side.size() > 1, new_needs = new_side.size() > 1;
    if (old_needs || new_needs) {
        const auto cls = namer.next_class();
        if (old_side == new_side) {
            out.abstracts.push_back(make_abstract(cls, old_side, f_old + 1, table, namer));
        } else {
            if (old_needs) out.abstracts.push_back(make_abstract(cls, old_side, f_old, table, namer));
            if (new_needs) out.abstracts.push_back(make_abstract(cls, new_side, 1, table, namer));
        }
    }
    return out;
}

Pattern copy_pattern(std::span<const SymbolId> symbols, SymbolTable& table, Namer& namer) {
    return make_pattern(namer.next_class(), symbols, 1, table, namer);
}

GrammarCosts grammar_costs(std::span<const Pattern> grammar, std::span<const Pattern> news,
                           std::span<const double> raw_bits, const std::shared_ptr<SymbolTable>& symbols,
                           const LearnParams& params) {
    GrammarCosts c;
    c.uses.assign(grammar.size(), 0);
    if (grammar.empty()) {
        for (std::size_t j = 0; j < news.size(); ++j) {
            c.e.push_back(raw_bits[j]);
            c.unmatched.push_back(news[j].symbols.size());
            c.E += raw_bits[j];
        }
        c.T = c.E;
        return c;
    }
    PatternStore store(symbols);
    for (auto p : grammar) {
        p.role = Role::Old;
        store.add(std::move(p));
    }
    std::vector<std::size_t> idx;
    for (auto p : news) {
        p.role = Role::New;
        idx.push_back(store.add(std::move(p)));
    }
    const auto table = CodeTable::build(store, params.cost_model);
    for (const auto& p : grammar) c.G += table.sum(p.symbols);
    for (std::size_t j = 0; j < news.size(); ++j) {
        auto found = build_alignments(store, idx[j], table, params.search);
        if (found.empty()) {
            c.e.push_back(raw_bits[j]);
            c.unmatched.push_back(news[j].symbols.size());
        } else {
            const auto& best = found.front();
            c.e.push_back(best.score.code_bits + best.score.unmatched_bits);
            c.unmatched.push_back(best.score.unmatched);
            std::vector<std::size_t> used;
            for (const auto& r : best.alignment.rows())
                if (!r.is_new) used.push_back(r.pattern);
            std::sort(used.begin(), used.end());
            used.erase(std::unique(used.begin(), used.end()), used.end());
            for (auto u : used) ++c.uses[u];
        }
        c.E += c.e.back();
    }
    c.T = c.G + c.E;
    return c;
}

namespace {

std::vector<Grammar> absorb(const Grammar& g, const Pattern& next, const std::shared_ptr<SymbolTable>& symbols,
                            const LearnParams& params) {
    std::vector<Grammar> out;
    if (!g.patterns.empty()) {
        PatternStore store(symbols);
        for (const auto& p : g.patterns) store.add(p);
        Pattern n = next;
        n.role = Role::New;
        const auto idx = store.add(std::move(n));
        const auto table = CodeTable::build(store, params.cost_model);
        auto found = build_alignments(store, idx, table, params.search);

        if (!found.empty() && found.front().score.unmatched == 0) {
            Grammar h = g;
            std::vector<std::size_t> used;
            for (const auto& r : found.front().alignment.rows())
                if (!r.is_new) used.push_back(r.pattern);
            std::sort(used.begin(), used.end());
            used.erase(std::unique(used.begin(), used.end()), used.end());
            for (auto u : used) ++h.patterns[u].frequency;
            out.push_back(std::move(h));
        }

        std::size_t tried = 0;
        for (const auto& sa : found) {
            if (tried == params.branches) break;
            if (sa.alignment.rows().size() != 2) continue;
            Grammar h = g;
            DerivedPatternSet d;
            try {
                d = derive_patterns(sa.alignment, store, h.namer);
            } catch (const std::invalid_argument&) {
                continue;
            }
            if (d.empty()) continue;
            ++tried;
            const auto source = sa.alignment.rows()[1].pattern;
            if (!d.reused.empty()) {
                ++h.patterns[source].frequency;
            } else if (top_level(h.patterns, source)) {
                h.patterns.erase(h.patterns.begin() + static_cast<std::ptrdiff_t>(source));
            }
            for (auto& p : d.all()) h.patterns.push_back(std::move(p));
            out.push_back(std::move(h));
        }
    }
    Grammar h = g;
    h.patterns.push_back(copy_pattern(next.symbols, *symbols, h.namer));
    out.push_back(std::move(h));
    return out;
}

}  // namespace

LearningResult search_grammars(const PatternStore& corpus, const LearnParams& params) {
    const auto new_idx = corpus.new_indices();
    if (new_idx.empty()) throw std::invalid_argument("empty corpus");
    LearningResult res;
    res.symbols = std::make_shared<SymbolTable>(corpus.symbols());
    std::vector<Pattern> news;
    for (auto i : new_idx) news.push_back(corpus.at(i));

    {
        PatternStore raw(res.symbols);
        for (auto p : news) {
            p.role = Role::Old;
            p.frequency = 1;
            raw.add(std::move(p));
        }
        const auto t = CodeTable::build(raw, params.cost_model);
        for (const auto& p : news) res.raw_bits.push_back(t.sum(p.symbols));
    }
    std::set<std::string> taken;
    for (SymbolId s = 0; s < res.symbols->size(); ++s) taken.insert(res.symbols->name(s));

    auto evaluate = [&](Grammar& g, std::size_t seen) {
        auto c = grammar_costs(g.patterns, std::span(news.data(), seen), std::span(res.raw_bits.data(), seen),
                               res.symbols, params);
        g.G = c.G;
        g.E = c.E;
        g.T = c.T;
        g.uses = std::move(c.uses);
    };
    auto rank = [&](std::vector<Grammar>& tree) {
        std::vector<std::pair<std::string, std::size_t>> keys;
        for (std::size_t i = 0; i < tree.size(); ++i) keys.emplace_back(grammar_key(tree[i], *res.symbols), i);
        std::vector<std::size_t> order(tree.size());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            if (tree[a].T != tree[b].T) return tree[a].T < tree[b].T;
            return keys[a].first < keys[b].first;
        });
        std::vector<Grammar> sorted;
        for (auto i : order) sorted.push_back(std::move(tree[i]));
        tree = std::move(sorted);
    };

    std::vector<Grammar> tree(1);
    tree.front().namer = Namer(taken);
    double O = 0;
    for (std::size_t k = 0; k < news.size(); ++k) {
        std::vector<Grammar> next;
        std::set<std::string> keys;
        for (const auto& g : tree)
            for (auto& h : absorb(g, news[k], res.symbols, params))
                if (keys.insert(grammar_key(h, *res.symbols)).second) next.push_back(std::move(h));
        for (auto& g : next) evaluate(g, k + 1);
        rank(next);
        if ((k + 1) % params.prune_period == 0 && next.size() > params.tree_width) next.resize(params.tree_width);
        // Frequencies follow the parses just made.
        for (auto& g : next)
            for (std::size_t p = 0; p < g.patterns.size(); ++p)
                g.patterns[p].frequency = std::max<std::size_t>(1, g.uses[p]);
        tree = std::move(next);
        O += res.raw_bits[k];
        res.metrics.push_back({k + 1, O, tree.front().G, tree.front().E, tree.front().T, tree.front().T / O});
    }
    for (auto& g : tree) evaluate(g, news.size());
    rank(tree);
    if (tree.size() > params.tree_width) tree.resize(params.tree_width);
    auto& last = res.metrics.back();
    last.G = tree.front().G;
    last.E = tree.front().E;
    last.T = tree.front().T;
    last.ratio = last.T / last.O;
    res.grammars = std::move(tree);
    return res;
}

std::string grammar_text(const Grammar& g, const SymbolTable& symbols) {
    std::string out;
    for (const auto& p : g.patterns) {
        for (std::size_t i = 0; i < p.symbols.size(); ++i) {
            if (i) out += ' ';
            out += symbols.name(p.symbols[i]);
        }
        if (p.frequency != 1) out += " (" + std::to_string(p.frequency) + ")";
        out += '\n';
    }
    return out;
}

void write_metrics_csv(std::ostream& out, std::span<const LearningRecord> metrics) {
    out << "i,O,G,E,T,T_over_O\n";
    out << std::fixed << std::setprecision(6);
    for (const auto& m : metrics) out << m.i << ',' << m.O << ',' << m.G << ',' << m.E << ',' << m.T << ',' << m.ratio << '\n';
}

}  // namespace sp

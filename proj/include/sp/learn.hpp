#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "sp/search.hpp"

namespace sp {

// Class names A..Z then P1, P2, ..., skipping names already taken by data;
// discriminators count up from 0 within each class.
class Namer {
public:
    Namer() = default;
    explicit Namer(std::set<std::string> taken) : taken_(std::move(taken)) {}

    std::string next_class();
    std::string next_discriminator(const std::string& cls);

private:
    std::set<std::string> taken_;
    std::size_t classes_ = 0;
    std::map<std::string, std::size_t> discriminators_;
};

struct DerivedPatternSet {
    std::vector<Pattern> chunks;     // fully matched runs
    std::vector<Pattern> variants;   // unmatched runs; runs in the same slot share a class
    std::vector<Pattern> abstracts;  // class references in order; one per distinct side
    std::vector<std::size_t> reused; // Old patterns matched whole, kept as they are

    bool empty() const { return chunks.empty() && variants.empty() && abstracts.empty(); }
    std::vector<Pattern> all() const;
};

// Two-row alignment (New plus one Old pattern of the form ids, contents, ids).
// Throws std::invalid_argument otherwise, or when nothing is matched.
// New ids are interned into the store's symbol table as ID symbols.
DerivedPatternSet derive_patterns(const Alignment& a, PatternStore& store, Namer& namer);

// "X 0 <symbols> #X" under a fresh class.
Pattern copy_pattern(std::span<const SymbolId> symbols, SymbolTable& table, Namer& namer);

struct LearnParams {
    std::size_t tree_width = 16;
    std::size_t prune_period = 1;  // prune after every this many New patterns
    std::size_t branches = 3;      // two-row alignments tried per grammar and New pattern
    // Every candidate grammar re-parses every New pattern seen so far, so the
    // per-parse search is kept narrow.
    SearchParams search{.beam_driving = 4, .beam_target = 30, .max_stages = 12};
    CostModel cost_model = CostModel::Fractional;
};

struct Grammar {
    std::vector<Pattern> patterns;
    Namer namer;
    double G = 0;
    double E = 0;
    double T = 0;
    std::vector<std::size_t> uses;  // per pattern: New patterns whose best alignment holds it
};

struct GrammarCosts {
    double G = 0;
    double E = 0;
    double T = 0;
    std::vector<double> e;               // per New pattern
    std::vector<std::size_t> uses;       // per grammar pattern
    std::vector<std::size_t> unmatched;  // per New pattern
};

// G sums the code sizes of every grammar symbol; e_i is the code of the best
// alignment of New pattern i plus the New symbols it leaves unmatched, or
// raw_bits[i] when nothing aligns. The table comes from the grammar and the
// New patterns together.
GrammarCosts grammar_costs(std::span<const Pattern> grammar, std::span<const Pattern> news,
                           std::span<const double> raw_bits, const std::shared_ptr<SymbolTable>& symbols,
                           const LearnParams& params);

struct LearningRecord {
    std::size_t i = 0;  // New patterns absorbed so far
    double O = 0;       // their raw size
    double G = 0;
    double E = 0;
    double T = 0;
    double ratio = 0;   // T / O
};

struct LearningResult {
    std::vector<Grammar> grammars;  // lowest T first
    std::vector<LearningRecord> metrics;
    std::shared_ptr<SymbolTable> symbols;
    std::vector<double> raw_bits;   // per New pattern, from symbol frequencies over the corpus
};

// `corpus` holds the New patterns. Each one is absorbed by every grammar in
// the tree: recognised whole, split against an Old pattern it partly
// matches, or stored as a copy. Throws std::invalid_argument on an empty corpus.
LearningResult search_grammars(const PatternStore& corpus, const LearnParams& params = {});

// The grammar as an Old pattern file.
std::string grammar_text(const Grammar& g, const SymbolTable& symbols);

void write_metrics_csv(std::ostream& out, std::span<const LearningRecord> metrics);

}  // namespace sp

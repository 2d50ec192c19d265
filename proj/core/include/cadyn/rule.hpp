#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace cadyn {

// Letters are indices into an Alphabet; a Word is a finite sequence of them.
using Letter = std::uint8_t;
using Word = std::vector<Letter>;
using Coord = std::int64_t;

class RuleError : public std::runtime_error {
public:
    enum class Kind { Syntax, MissingEntry, DuplicateEntry, UnknownLetter, EcaOutOfRange, BadAlphabet, BadNeighborhood, BadLength };

    RuleError(Kind kind, std::string detail);

    Kind kind() const { return kind_; }
    const std::string& detail() const { return detail_; }

private:
    Kind kind_;
    std::string detail_;
};

const char* to_string(RuleError::Kind kind);

class Alphabet {
public:
    explicit Alphabet(std::vector<std::string> letters);

    std::size_t size() const { return letters_.size(); }
    const std::string& name(Letter a) const { return letters_.at(a); }
    const std::vector<std::string>& names() const { return letters_; }
    std::optional<Letter> find(std::string_view name) const;
    Letter index(std::string_view name) const;

    // True when every letter is a single code point, so words print without separators.
    bool compact() const { return compact_; }

    // Parses a word written either with '.' separators or as a concatenation of
    // letters (greedy longest match). Whitespace is ignored.
    Word parse_word(std::string_view text) const;
    std::string format_word(std::span<const Letter> word) const;

    friend bool operator==(const Alphabet& a, const Alphabet& b) { return a.letters_ == b.letters_; }

private:
    std::vector<std::string> letters_;
    std::map<std::string, Letter, std::less<>> index_;
    std::size_t longest_ = 0;
    bool compact_ = true;
};

// Interval neighbourhood [left, right] with left <= 0 <= right.
struct Neighborhood {
    int left = -1;
    int right = 1;

    int span() const { return right - left; }
    int radius() const { return std::max(-left, right); }
    friend bool operator==(const Neighborhood&, const Neighborhood&) = default;
};

class CellularAutomaton {
public:
    // `table` is indexed by the base-k value of the neighbourhood word, first letter most significant.
    CellularAutomaton(Alphabet alphabet, Neighborhood neighborhood, std::vector<Letter> table);

    static CellularAutomaton elementary(int code);

    const Alphabet& alphabet() const { return alphabet_; }
    Neighborhood neighborhood() const { return neighborhood_; }
    std::size_t k() const { return alphabet_.size(); }
    int span() const { return neighborhood_.span(); }
    int radius() const { return neighborhood_.radius(); }
    const std::vector<Letter>& table() const { return table_; }

    // Elementary code when the rule is an elementary CA, recorded at construction.
    std::optional<int> eca_code() const { return eca_code_; }

    Letter apply_local(std::span<const Letter> word) const;
    Word apply_block(std::span<const Letter> word) const;

    // Lookup by precomputed neighbourhood index; no validation.
    Letter lookup(std::size_t index) const { return table_[index]; }
    std::size_t table_size() const { return table_.size(); }

    friend bool operator==(const CellularAutomaton& a, const CellularAutomaton& b) {
        return a.alphabet_ == b.alphabet_ && a.neighborhood_ == b.neighborhood_ && a.table_ == b.table_;
    }

private:
    Alphabet alphabet_;
    Neighborhood neighborhood_;
    std::vector<Letter> table_;
    std::optional<int> eca_code_;
};

// A parsed rule file: the automaton plus optional metadata fields.
struct RuleFile {
    CellularAutomaton ca;
    std::string name;
    std::optional<std::vector<double>> measure;
};

RuleFile parse_rule_file(std::string_view text);
CellularAutomaton parse_rule(std::string_view text);

// Canonical rule-file text: one explicit table entry per neighbourhood word,
// or "eca: N" for elementary rules.
std::string format_rule(const CellularAutomaton& ca);

// Encodes a word as its base-k value (first letter most significant).
std::uint64_t encode(std::span<const Letter> word, std::size_t k);
Word decode(std::uint64_t code, std::size_t length, std::size_t k);

std::uint64_t ipow(std::uint64_t base, unsigned exp);

}  // namespace cadyn

#include "cadyn/rule.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <sstream>

namespace cadyn {

namespace {

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; }

std::string_view trim(std::string_view s) {
    while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
    while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
    return s;
}

std::string strip_spaces(std::string_view s) {
    std::string out;
    for (char c : s)
        if (!is_space(c)) out.push_back(c);
    return out;
}

std::size_t utf8_length(unsigned char lead) {
    if (lead < 0x80) return 1;
    if ((lead >> 5) == 0x6) return 2;
    if ((lead >> 4) == 0xE) return 3;
    if ((lead >> 3) == 0x1E) return 4;
    return 1;
}

std::vector<std::string> split_tokens(std::string_view s, std::string_view separators) {
    std::vector<std::string> out;
    std::string current;
    for (char c : s) {
        if (is_space(c) || separators.find(c) != std::string_view::npos) {
            if (!current.empty()) out.push_back(std::move(current));
            current.clear();
        } else {
            current.push_back(c);
        }
    }
    if (!current.empty()) out.push_back(std::move(current));
    return out;
}

long parse_integer(std::string_view text, const char* what) {
    text = trim(text);
    long value = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size())
        throw RuleError(RuleError::Kind::Syntax, std::string("expected integer for ") + what + ", got '" + std::string(text) + "'");
    return value;
}

// Word pattern where nullopt marks the '*' wildcard.
using Pattern = std::vector<std::optional<Letter>>;

Pattern parse_pattern(const Alphabet& alphabet, std::string_view text) {
    const std::string compact = strip_spaces(text);
    Pattern out;
    if (compact.find('.') != std::string::npos) {
        std::size_t start = 0;
        while (start <= compact.size()) {
            const std::size_t dot = std::min(compact.find('.', start), compact.size());
            const std::string_view piece(compact.data() + start, dot - start);
            if (piece == "*")
                out.emplace_back(std::nullopt);
            else
                out.emplace_back(alphabet.index(piece));
            start = dot + 1;
        }
        return out;
    }
    const bool star_is_letter = alphabet.find("*").has_value();
    std::size_t pos = 0;
    while (pos < compact.size()) {
        if (compact[pos] == '*' && !star_is_letter) {
            out.emplace_back(std::nullopt);
            ++pos;
            continue;
        }
        // Greedy match of the longest letter starting at pos.
        std::optional<Letter> hit;
        std::size_t hit_len = 0;
        for (std::size_t len = std::min<std::size_t>(compact.size() - pos, 64); len > 0; --len) {
            if (auto l = alphabet.find(std::string_view(compact).substr(pos, len))) {
                hit = l;
                hit_len = len;
                break;
            }
        }
        if (!hit) throw RuleError(RuleError::Kind::UnknownLetter, compact.substr(pos));
        out.emplace_back(hit);
        pos += hit_len;
    }
    return out;
}

}  // namespace

RuleError::RuleError(Kind kind, std::string detail)
    : std::runtime_error(std::string(to_string(kind)) + "(\"" + detail + "\")"), kind_(kind), detail_(std::move(detail)) {}

const char* to_string(RuleError::Kind kind) {
    switch (kind) {
        case RuleError::Kind::Syntax: return "Syntax";
        case RuleError::Kind::MissingEntry: return "MissingEntry";
        case RuleError::Kind::DuplicateEntry: return "DuplicateEntry";
        case RuleError::Kind::UnknownLetter: return "UnknownLetter";
        case RuleError::Kind::EcaOutOfRange: return "EcaOutOfRange";
        case RuleError::Kind::BadAlphabet: return "BadAlphabet";
        case RuleError::Kind::BadNeighborhood: return "BadNeighborhood";
        case RuleError::Kind::BadLength: return "BadLength";
    }
    return "Unknown";
}

std::uint64_t ipow(std::uint64_t base, unsigned exp) {
    std::uint64_t out = 1;
    for (unsigned i = 0; i < exp; ++i) {
        if (base != 0 && out > std::numeric_limits<std::uint64_t>::max() / base) throw std::overflow_error("ipow overflow");
        out *= base;
    }
    return out;
}

std::uint64_t encode(std::span<const Letter> word, std::size_t k) {
    std::uint64_t code = 0;
    for (Letter a : word) code = code * k + a;
    return code;
}

Word decode(std::uint64_t code, std::size_t length, std::size_t k) {
    Word out(length);
    for (std::size_t i = length; i-- > 0;) {
        out[i] = static_cast<Letter>(code % k);
        code /= k;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Alphabet

Alphabet::Alphabet(std::vector<std::string> letters) : letters_(std::move(letters)) {
    if (letters_.size() < 2) throw RuleError(RuleError::Kind::BadAlphabet, "alphabet needs at least two letters");
    if (letters_.size() > 255) throw RuleError(RuleError::Kind::BadAlphabet, "alphabet larger than 255 letters");
    for (std::size_t i = 0; i < letters_.size(); ++i) {
        const std::string& l = letters_[i];
        if (l.empty() || l == "->" || l.find_first_of(".,;#() \t\r\n") != std::string::npos)
            throw RuleError(RuleError::Kind::BadAlphabet, l);
        if (!index_.emplace(l, static_cast<Letter>(i)).second) throw RuleError(RuleError::Kind::BadAlphabet, "duplicate letter " + l);
        longest_ = std::max(longest_, l.size());
        if (utf8_length(static_cast<unsigned char>(l[0])) != l.size()) compact_ = false;
    }
}

std::optional<Letter> Alphabet::find(std::string_view name) const {
    auto it = index_.find(name);
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

Letter Alphabet::index(std::string_view name) const {
    if (auto l = find(name)) return *l;
    throw RuleError(RuleError::Kind::UnknownLetter, std::string(name));
}

Word Alphabet::parse_word(std::string_view text) const {
    const std::string compact = strip_spaces(text);
    Word out;
    if (compact.empty()) return out;
    if (compact.find('.') != std::string::npos) {
        std::size_t start = 0;
        while (start <= compact.size()) {
            const std::size_t dot = std::min(compact.find('.', start), compact.size());
            out.push_back(index(std::string_view(compact).substr(start, dot - start)));
            start = dot + 1;
        }
        return out;
    }
    std::size_t pos = 0;
    while (pos < compact.size()) {
        std::size_t len = std::min(longest_, compact.size() - pos);
        for (; len > 0; --len)
            if (auto l = find(std::string_view(compact).substr(pos, len))) {
                out.push_back(*l);
                break;
            }
        if (len == 0) throw RuleError(RuleError::Kind::UnknownLetter, compact.substr(pos));
        pos += len;
    }
    return out;
}

std::string Alphabet::format_word(std::span<const Letter> word) const {
    std::string out;
    for (std::size_t i = 0; i < word.size(); ++i) {
        if (!compact_ && i > 0) out.push_back('.');
        out += letters_.at(word[i]);
    }
    return out;
}

// ---------------------------------------------------------------------------
// CellularAutomaton

CellularAutomaton::CellularAutomaton(Alphabet alphabet, Neighborhood neighborhood, std::vector<Letter> table)
    : alphabet_(std::move(alphabet)), neighborhood_(neighborhood), table_(std::move(table)) {
    if (neighborhood_.left > 0 || neighborhood_.right < 0)
        throw RuleError(RuleError::Kind::BadNeighborhood, std::to_string(neighborhood_.left) + "," + std::to_string(neighborhood_.right));
    const std::uint64_t expected = ipow(alphabet_.size(), static_cast<unsigned>(neighborhood_.span() + 1));
    if (expected > (1u << 26)) throw RuleError(RuleError::Kind::BadNeighborhood, "rule table too large");
    if (table_.size() != expected) throw RuleError(RuleError::Kind::BadLength, "table has " + std::to_string(table_.size()) + " entries");
    for (Letter a : table_)
        if (a >= alphabet_.size()) throw RuleError(RuleError::Kind::UnknownLetter, std::to_string(a));
}

CellularAutomaton CellularAutomaton::elementary(int code) {
    if (code < 0 || code > 255) throw RuleError(RuleError::Kind::EcaOutOfRange, std::to_string(code));
    std::vector<Letter> table(8);
    for (int i = 0; i < 8; ++i) table[i] = static_cast<Letter>((code >> i) & 1);
    CellularAutomaton ca(Alphabet({"0", "1"}), Neighborhood{-1, 1}, std::move(table));
    ca.eca_code_ = code;
    return ca;
}

Letter CellularAutomaton::apply_local(std::span<const Letter> word) const {
    if (word.size() != static_cast<std::size_t>(span() + 1))
        throw RuleError(RuleError::Kind::BadLength, "expected " + std::to_string(span() + 1) + " letters, got " + std::to_string(word.size()));
    for (Letter a : word)
        if (a >= k()) throw RuleError(RuleError::Kind::UnknownLetter, std::to_string(a));
    return table_[encode(word, k())];
}

Word CellularAutomaton::apply_block(std::span<const Letter> word) const {
    const std::size_t width = static_cast<std::size_t>(span()) + 1;
    // A block of length exactly d has an empty image.
    if (word.size() + 1 < width)
        throw RuleError(RuleError::Kind::BadLength, "block of length " + std::to_string(word.size()) + " shorter than the span");
    const std::size_t kk = k();
    const std::size_t top = table_.size() / kk;  // k^d
    Word out(word.size() + 1 - width);
    std::size_t idx = 0;
    for (std::size_t i = 0; i + 1 < width; ++i) idx = idx * kk + word[i];
    for (std::size_t i = 0; i < out.size(); ++i) {
        idx = (idx % top) * kk + word[i + width - 1];
        out[i] = table_[idx];
    }
    return out;
}

// ---------------------------------------------------------------------------
// Rule files

RuleFile parse_rule_file(std::string_view text) {
    std::optional<std::vector<std::string>> letters;
    std::optional<Neighborhood> neighborhood;
    std::optional<long> eca;
    std::optional<std::vector<double>> measure;
    std::string name;
    std::vector<std::string> entries;
    bool in_table = false;
    bool saw_table = false;

    std::size_t start = 0;
    while (start < text.size()) {
        std::size_t end = text.find('\n', start);
        if (end == std::string_view::npos) end = text.size();
        std::string_view line = text.substr(start, end - start);
        start = end + 1;
        if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;

        const std::size_t colon = line.find(':');
        std::string key;
        if (colon != std::string_view::npos) key = std::string(trim(line.substr(0, colon)));
        const bool keyed = key == "name" || key == "alphabet" || key == "neighborhood" || key == "neighbourhood" ||
                           key == "eca" || key == "measure" || key == "table";
        if (!keyed) {
            if (!in_table) throw RuleError(RuleError::Kind::Syntax, std::string(line));
            std::string current;
            for (char c : line) {
                if (c == ';' || c == ',') {
                    entries.push_back(current);
                    current.clear();
                } else {
                    current.push_back(c);
                }
            }
            entries.push_back(current);
            continue;
        }
        in_table = false;
        const std::string_view value = trim(line.substr(colon + 1));
        if (key == "name") {
            name = std::string(value);
        } else if (key == "alphabet") {
            letters = split_tokens(value, ",");
        } else if (key == "neighborhood" || key == "neighbourhood") {
            const auto parts = split_tokens(value, ",[]()");
            if (parts.size() != 2) throw RuleError(RuleError::Kind::BadNeighborhood, std::string(value));
            neighborhood = Neighborhood{static_cast<int>(parse_integer(parts[0], "neighborhood")),
                                        static_cast<int>(parse_integer(parts[1], "neighborhood"))};
            if (neighborhood->left > 0 || neighborhood->right < 0) throw RuleError(RuleError::Kind::BadNeighborhood, std::string(value));
        } else if (key == "eca") {
            eca = parse_integer(value, "eca");
        } else if (key == "measure") {
            std::vector<double> weights;
            for (const auto& tok : split_tokens(value, ",")) {
                try {
                    std::size_t used = 0;
                    weights.push_back(std::stod(tok, &used));
                    if (used != tok.size()) throw std::invalid_argument(tok);
                } catch (const std::exception&) {
                    throw RuleError(RuleError::Kind::Syntax, "bad measure weight '" + tok + "'");
                }
            }
            measure = std::move(weights);
        } else if (key == "table") {
            in_table = true;
            saw_table = true;
            if (!value.empty()) {
                std::string current;
                for (char c : value) {
                    if (c == ';' || c == ',') {
                        entries.push_back(current);
                        current.clear();
                    } else {
                        current.push_back(c);
                    }
                }
                entries.push_back(current);
            }
        }
    }

    auto finish = [&](CellularAutomaton ca) {
        if (measure) {
            if (measure->size() != ca.k()) throw RuleError(RuleError::Kind::Syntax, "measure needs one weight per letter");
            double sum = 0;
            for (double w : *measure) {
                if (!(w > 0)) throw RuleError(RuleError::Kind::Syntax, "measure weights must be positive");
                sum += w;
            }
            if (std::abs(sum - 1.0) > 1e-9) throw RuleError(RuleError::Kind::Syntax, "measure weights must sum to 1");
        }
        return RuleFile{std::move(ca), name, measure};
    };

    if (eca) {
        if (saw_table) throw RuleError(RuleError::Kind::Syntax, "eca and table are mutually exclusive");
        if (*eca < 0 || *eca > 255) throw RuleError(RuleError::Kind::EcaOutOfRange, std::to_string(*eca));
        auto ca = CellularAutomaton::elementary(static_cast<int>(*eca));
        if (letters && *letters != ca.alphabet().names()) throw RuleError(RuleError::Kind::BadAlphabet, "elementary rules use alphabet 0 1");
        if (neighborhood && !(*neighborhood == ca.neighborhood()))
            throw RuleError(RuleError::Kind::BadNeighborhood, "elementary rules use neighborhood -1 1");
        return finish(std::move(ca));
    }
    if (!letters) throw RuleError(RuleError::Kind::Syntax, "missing alphabet");
    if (!neighborhood) throw RuleError(RuleError::Kind::Syntax, "missing neighborhood");
    if (!saw_table) throw RuleError(RuleError::Kind::Syntax, "missing table or eca");

    Alphabet alphabet(*letters);
    const std::size_t width = static_cast<std::size_t>(neighborhood->span()) + 1;
    const std::size_t k = alphabet.size();
    const std::uint64_t size = ipow(k, static_cast<unsigned>(width));
    if (size > (1u << 26)) throw RuleError(RuleError::Kind::BadNeighborhood, "rule table too large");
    std::vector<std::optional<Letter>> table(size);

    for (const std::string& raw : entries) {
        std::string_view entry = trim(raw);
        if (entry.empty()) continue;
        std::size_t arrow = entry.find("->");
        std::size_t arrow_len = 2;
        if (arrow == std::string_view::npos) {
            arrow = entry.find("\xE2\x86\x92");  // U+2192
            arrow_len = 3;
        }
        if (arrow == std::string_view::npos) throw RuleError(RuleError::Kind::Syntax, "table entry without '->': " + std::string(entry));
        const Pattern pattern = parse_pattern(alphabet, entry.substr(0, arrow));
        const Word output = alphabet.parse_word(entry.substr(arrow + arrow_len));
        if (output.size() != 1) throw RuleError(RuleError::Kind::Syntax, "table output must be one letter: " + std::string(entry));
        if (pattern.size() != width)
            throw RuleError(RuleError::Kind::BadLength, "entry '" + std::string(trim(entry.substr(0, arrow))) + "' needs " + std::to_string(width) + " letters");

        // Expand wildcards into every matching neighbourhood word.
        std::vector<std::size_t> free;
        for (std::size_t i = 0; i < width; ++i)
            if (!pattern[i]) free.push_back(i);
        const std::uint64_t combos = ipow(k, static_cast<unsigned>(free.size()));
        Word word(width);
        for (std::uint64_t c = 0; c < combos; ++c) {
            std::uint64_t rest = c;
            for (std::size_t i = 0; i < width; ++i) word[i] = pattern[i].value_or(0);
            for (std::size_t j = free.size(); j-- > 0;) {
                word[free[j]] = static_cast<Letter>(rest % k);
                rest /= k;
            }
            auto& slot = table[encode(word, k)];
            if (slot) throw RuleError(RuleError::Kind::DuplicateEntry, alphabet.format_word(word));
            slot = output[0];
        }
    }

    std::vector<Letter> dense(size);
    for (std::uint64_t i = 0; i < size; ++i) {
        if (!table[i]) throw RuleError(RuleError::Kind::MissingEntry, alphabet.format_word(decode(i, width, k)));
        dense[i] = *table[i];
    }
    return finish(CellularAutomaton(std::move(alphabet), *neighborhood, std::move(dense)));
}

CellularAutomaton parse_rule(std::string_view text) { return parse_rule_file(text).ca; }

std::string format_rule(const CellularAutomaton& ca) {
    std::ostringstream out;
    if (auto code = ca.eca_code()) {
        out << "eca: " << *code << "\n";
        return out.str();
    }
    out << "alphabet:";
    for (const auto& l : ca.alphabet().names()) out << ' ' << l;
    out << "\nneighborhood: " << ca.neighborhood().left << ' ' << ca.neighborhood().right << "\ntable:\n";
    const std::size_t width = static_cast<std::size_t>(ca.span()) + 1;
    for (std::size_t i = 0; i < ca.table_size(); ++i) {
        const Word w = decode(i, width, ca.k());
        out << "  " << ca.alphabet().format_word(w) << " -> " << ca.alphabet().name(ca.lookup(i)) << "\n";
    }
    return out.str();
}

}  // namespace cadyn

#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "cadyn/config.hpp"

namespace cadyn {

// Vertices are the k^d words of length d (by code); the edge out of vertex v
// on letter a goes to the vertex of (v a) with its first letter dropped and is
// labelled by the rule output on the (d+1)-word (v a).
class DeBruijnGraph {
public:
    explicit DeBruijnGraph(const CellularAutomaton& ca);

    std::size_t vertex_count() const { return vertices_; }
    std::size_t k() const { return k_; }
    std::size_t target(std::size_t v, Letter a) const { return (v * k_ + a) % vertices_; }
    Letter label(std::size_t v, Letter a) const { return labels_[v * k_ + a]; }

    // Preimage counts per end vertex after reading `word` from the all-ones vector.
    std::vector<std::uint64_t> count_paths(const Word& word) const;

private:
    std::size_t k_;
    std::size_t vertices_;
    std::vector<Letter> labels_;
};

// Brute-force oracle: number of words of length |word|+d mapped onto word.
std::uint64_t preimage_count(const CellularAutomaton& ca, const Word& word);
// Brute-force histogram over all words of length n (indexed by code).
std::vector<std::uint64_t> preimage_histogram(const CellularAutomaton& ca, std::size_t n);

struct SurjectivityReport {
    bool surjective = true;
    // Shortest, then lexicographically least (by letter index), word whose preimage count differs from k^d.
    std::optional<Word> witness;
    std::uint64_t witness_count = 0;
    std::uint64_t balanced_count = 0;
    // Shortest orphan (no preimage), reported alongside when not surjective.
    std::optional<Word> orphan;
};

struct InjectivityReport {
    bool injective = true;
    std::optional<std::pair<PeriodicConfig, PeriodicConfig>> witness;
    std::optional<PeriodicConfig> common_image;
};

SurjectivityReport is_surjective(const CellularAutomaton& ca);
InjectivityReport is_injective(const CellularAutomaton& ca);

}  // namespace cadyn

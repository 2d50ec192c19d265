#include "cadyn/debruijn.hpp"

#include <deque>
#include <map>
#include <stdexcept>

namespace cadyn {

DeBruijnGraph::DeBruijnGraph(const CellularAutomaton& ca)
    : k_(ca.k()), vertices_(static_cast<std::size_t>(ipow(ca.k(), static_cast<unsigned>(ca.span())))), labels_(ca.table()) {}

std::vector<std::uint64_t> DeBruijnGraph::count_paths(const Word& word) const {
    std::vector<std::uint64_t> counts(vertices_, 1), next(vertices_);
    for (Letter b : word) {
        std::fill(next.begin(), next.end(), 0);
        for (std::size_t v = 0; v < vertices_; ++v) {
            if (counts[v] == 0) continue;
            for (std::size_t a = 0; a < k_; ++a)
                if (label(v, static_cast<Letter>(a)) == b) next[target(v, static_cast<Letter>(a))] += counts[v];
        }
        counts.swap(next);
    }
    return counts;
}

namespace {

std::uint64_t enumeration_size(const CellularAutomaton& ca, std::size_t n) {
    const std::uint64_t total = ipow(ca.k(), static_cast<unsigned>(n + static_cast<std::size_t>(ca.span())));
    if (total > (std::uint64_t{1} << 32)) throw std::length_error("preimage enumeration too large");
    return total;
}

}  // namespace

std::uint64_t preimage_count(const CellularAutomaton& ca, const Word& word) {
    if (word.empty()) throw std::invalid_argument("preimage_count needs a nonempty word");
    const std::size_t width = word.size() + static_cast<std::size_t>(ca.span());
    const std::uint64_t total = enumeration_size(ca, word.size());
    std::uint64_t count = 0;
    for (std::uint64_t code = 0; code < total; ++code)
        if (ca.apply_block(decode(code, width, ca.k())) == word) ++count;
    return count;
}

std::vector<std::uint64_t> preimage_histogram(const CellularAutomaton& ca, std::size_t n) {
    const std::size_t width = n + static_cast<std::size_t>(ca.span());
    const std::uint64_t total = enumeration_size(ca, n);
    std::vector<std::uint64_t> hist(static_cast<std::size_t>(ipow(ca.k(), static_cast<unsigned>(n))), 0);
    for (std::uint64_t code = 0; code < total; ++code) ++hist[encode(ca.apply_block(decode(code, width, ca.k())), ca.k())];
    return hist;
}

// ---------------------------------------------------------------------------

namespace {

// Shortest, length-lexicographically least word driving the full vertex set to empty.
std::optional<Word> shortest_orphan(const DeBruijnGraph& g) {
    using Subset = std::vector<bool>;
    const std::size_t n = g.vertex_count();
    std::map<Subset, Word> seen;
    std::deque<Subset> queue;
    Subset full(n, true);
    seen.emplace(full, Word{});
    queue.push_back(full);
    while (!queue.empty()) {
        Subset current = std::move(queue.front());
        queue.pop_front();
        const Word prefix = seen.at(current);
        for (std::size_t b = 0; b < g.k(); ++b) {
            Subset next(n, false);
            bool any = false;
            for (std::size_t v = 0; v < n; ++v) {
                if (!current[v]) continue;
                for (std::size_t a = 0; a < g.k(); ++a)
                    if (g.label(v, static_cast<Letter>(a)) == b) {
                        next[g.target(v, static_cast<Letter>(a))] = true;
                        any = true;
                    }
            }
            Word word = prefix;
            word.push_back(static_cast<Letter>(b));
            if (!any) return word;
            if (seen.emplace(next, word).second) queue.push_back(std::move(next));
        }
    }
    return std::nullopt;
}

// Depth-first search in lexicographic order for a word of exactly `length` letters
// whose preimage count differs from `balanced`.
bool find_unbalanced(const DeBruijnGraph& g, std::vector<std::uint64_t>& counts, Word& word, std::size_t length, std::uint64_t balanced,
                     std::uint64_t& found_count) {
    if (word.size() == length) {
        std::uint64_t total = 0;
        for (auto c : counts) total += c;
        if (total != balanced) {
            found_count = total;
            return true;
        }
        return false;
    }
    std::vector<std::uint64_t> next(counts.size());
    for (std::size_t b = 0; b < g.k(); ++b) {
        std::fill(next.begin(), next.end(), 0);
        for (std::size_t v = 0; v < counts.size(); ++v) {
            if (counts[v] == 0) continue;
            for (std::size_t a = 0; a < g.k(); ++a)
                if (g.label(v, static_cast<Letter>(a)) == b) next[g.target(v, static_cast<Letter>(a))] += counts[v];
        }
        word.push_back(static_cast<Letter>(b));
        if (find_unbalanced(g, next, word, length, balanced, found_count)) {
            counts = next;
            return true;
        }
        word.pop_back();
    }
    return false;
}

}  // namespace

SurjectivityReport is_surjective(const CellularAutomaton& ca) {
    const DeBruijnGraph g(ca);
    SurjectivityReport report;
    report.balanced_count = g.vertex_count();
    report.orphan = shortest_orphan(g);
    if (!report.orphan) return report;
    report.surjective = false;
    for (std::size_t length = 1; length <= report.orphan->size(); ++length) {
        std::vector<std::uint64_t> counts(g.vertex_count(), 1);
        Word word;
        std::uint64_t count = 0;
        if (find_unbalanced(g, counts, word, length, report.balanced_count, count)) {
            report.witness = word;
            report.witness_count = count;
            break;
        }
    }
    if (!report.witness) throw std::logic_error("orphan found but no unbalanced word up to its length");
    return report;
}

// ---------------------------------------------------------------------------

namespace {

struct PairEdge {
    std::size_t to;
    Letter a;
    Letter b;
};

// Iterative Tarjan; returns component id per vertex.
std::vector<std::size_t> strongly_connected(const std::vector<std::vector<PairEdge>>& adj) {
    const std::size_t n = adj.size();
    constexpr std::size_t unvisited = static_cast<std::size_t>(-1);
    std::vector<std::size_t> index(n, unvisited), low(n, 0), comp(n, unvisited);
    std::vector<bool> on_stack(n, false);
    std::vector<std::size_t> stack;
    std::size_t counter = 0, components = 0;
    struct Frame {
        std::size_t v;
        std::size_t edge;
    };
    for (std::size_t root = 0; root < n; ++root) {
        if (index[root] != unvisited) continue;
        std::vector<Frame> frames{{root, 0}};
        index[root] = low[root] = counter++;
        stack.push_back(root);
        on_stack[root] = true;
        while (!frames.empty()) {
            Frame& f = frames.back();
            if (f.edge < adj[f.v].size()) {
                const std::size_t w = adj[f.v][f.edge++].to;
                if (index[w] == unvisited) {
                    index[w] = low[w] = counter++;
                    stack.push_back(w);
                    on_stack[w] = true;
                    frames.push_back({w, 0});
                } else if (on_stack[w]) {
                    low[f.v] = std::min(low[f.v], index[w]);
                }
                continue;
            }
            const std::size_t v = f.v;
            frames.pop_back();
            if (!frames.empty()) low[frames.back().v] = std::min(low[frames.back().v], low[v]);
            if (low[v] == index[v]) {
                std::size_t w = 0;
                do {
                    w = stack.back();
                    stack.pop_back();
                    on_stack[w] = false;
                    comp[w] = components;
                } while (w != v);
                ++components;
            }
        }
    }
    return comp;
}

}  // namespace

InjectivityReport is_injective(const CellularAutomaton& ca) {
    const DeBruijnGraph g(ca);
    const std::size_t n = g.vertex_count();
    const std::size_t k = g.k();
    std::vector<std::vector<PairEdge>> adj(n * n);
    for (std::size_t u = 0; u < n; ++u)
        for (std::size_t v = 0; v < n; ++v)
            for (std::size_t a = 0; a < k; ++a)
                for (std::size_t b = 0; b < k; ++b)
                    if (g.label(u, static_cast<Letter>(a)) == g.label(v, static_cast<Letter>(b)))
                        adj[u * n + v].push_back({g.target(u, static_cast<Letter>(a)) * n + g.target(v, static_cast<Letter>(b)),
                                                  static_cast<Letter>(a), static_cast<Letter>(b)});
    const auto comp = strongly_connected(adj);

    // An edge with distinct letters inside one component lies on a cycle, which
    // spells two distinct periodic configurations with equal images.
    for (std::size_t p = 0; p < adj.size(); ++p) {
        for (const PairEdge& e : adj[p]) {
            if (e.a == e.b || comp[e.to] != comp[p]) continue;
            // Shortest path back from e.to to p.
            std::vector<std::size_t> parent(adj.size(), static_cast<std::size_t>(-1));
            std::vector<const PairEdge*> via(adj.size(), nullptr);
            std::deque<std::size_t> queue{e.to};
            parent[e.to] = e.to;
            while (!queue.empty() && parent[p] == static_cast<std::size_t>(-1)) {
                const std::size_t cur = queue.front();
                queue.pop_front();
                for (const PairEdge& next : adj[cur]) {
                    if (parent[next.to] != static_cast<std::size_t>(-1)) continue;
                    parent[next.to] = cur;
                    via[next.to] = &next;
                    queue.push_back(next.to);
                }
            }
            Word first{e.a}, second{e.b};
            if (e.to != p) {
                std::vector<const PairEdge*> path;
                for (std::size_t cur = p; cur != e.to; cur = parent[cur]) path.push_back(via[cur]);
                for (auto it = path.rbegin(); it != path.rend(); ++it) {
                    first.push_back((*it)->a);
                    second.push_back((*it)->b);
                }
            }
            InjectivityReport report;
            report.injective = false;
            const PeriodicConfig x = canonicalize(PeriodicConfig{first, 0});
            const PeriodicConfig y = canonicalize(PeriodicConfig{second, 0});
            const PeriodicConfig fx = step(ca, PeriodicConfig{first, 0});
            const PeriodicConfig fy = step(ca, PeriodicConfig{second, 0});
            if (!equals(fx, fy) || equals(PeriodicConfig{first, 0}, PeriodicConfig{second, 0}))
                throw std::logic_error("injectivity witness failed verification");
            report.witness = std::make_pair(x, y);
            report.common_image = fx;
            return report;
        }
    }
    return InjectivityReport{};
}

}  // namespace cadyn

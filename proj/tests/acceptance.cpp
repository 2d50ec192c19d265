// Runs the ten acceptance checks and prints one PASS/FAIL line for each.
// Usage: acceptance <path to cadyn executable> <fixture dir> <scratch dir>

#include <array>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include "cadyn/survey.hpp"
#include "oracles.hpp"

using namespace cadyn;
namespace fs = std::filesystem;

namespace {

std::string cli;
fs::path fixtures, scratch_dir;

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

RuleFile load(const std::string& name) { return parse_rule_file(slurp(fixtures / name)); }

int run(const std::string& command, std::string* output = nullptr) {
    FILE* pipe = popen(command.c_str(), "r");
    if (!pipe) return -1;
    std::array<char, 4096> buf{};
    std::string text;
    while (std::size_t n = fread(buf.data(), 1, buf.size(), pipe)) text.append(buf.data(), n);
    const int status = pclose(pipe);
    if (output) *output = text;
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string quote(const std::string& s) { return "'" + s + "'"; }

Outcome trace_fidelity() {
    std::string out;
    const int code = run(quote(cli) + " simulate --rule " + quote((fixtures / "example2.rule").string()) + " --init '^(wr000w)^' --steps 4", &out);
    const std::string expected = "wr000w\nwrr00w\nwr0r0w\nwrr0rw\nwr0r0w\n";
    return {code == 0 && out == expected, "exit " + std::to_string(code)};
}

Outcome column_period_check() {
    const auto ca = load("example2.rule").ca;
    const auto r = column_period(ca, parse_config(ca.alphabet(), "^(wr000w)^"), Window{0, 5});
    return {r.conclusive && r.period == EventualPeriod{2, 2},
            "(" + std::to_string(r.period.preperiod) + "," + std::to_string(r.period.period) + ")"};
}

Outcome example2_not_bijective() {
    const auto ca = load("example2.rule").ca;
    const Alphabet& a = ca.alphabet();
    const SurjectivityReport s = is_surjective(ca);
    bool ok = !s.surjective && s.witness && preimage_count(ca, *s.witness) == s.witness_count && s.witness_count != s.balanced_count &&
              oracle::preimages(ca, *s.witness) == s.witness_count;
    ok = ok && preimage_count(ca, a.parse_word("rr")) == 1;
    // Every length-3 word by enumeration: the total is 27 * 3 but not all equal 3.
    std::uint64_t total = 0;
    bool all_three = true;
    for (std::uint64_t code = 0; code < 27; ++code) {
        const std::uint64_t c = oracle::preimages(ca, decode(code, 3, 3));
        total += c;
        all_three = all_three && c == 3;
    }
    ok = ok && total == 81 && !all_three;
    const InjectivityReport i = is_injective(ca);
    ok = ok && !i.injective && i.witness && !equals(i.witness->first, i.witness->second) &&
         equals(step(ca, i.witness->first), step(ca, i.witness->second));
    return {ok, "witness " + (s.witness ? a.format_word(*s.witness) : std::string("-")) + " count " + std::to_string(s.witness_count)};
}

Outcome example2_factor() {
    const auto ca = load("example2.rule").ca;
    const Alphabet& a = ca.alphabet();
    const FactorOutcome f = build_periodic_factor(ca, parse_config(a, "^(wr000w)^"), Window{0, 5});
    if (!f.factor) return {false, f.failure};
    const bool words = f.factor->class_words == std::vector<Word>{a.parse_word("wr0r0w"), a.parse_word("wrr0rw")};
    return {f.factor->p == 2 && words && verify_factor(ca, *f.factor, factor_representatives(*f.factor)), "p=" + std::to_string(f.factor->p)};
}

Outcome stp_certificate() {
    const auto ca = load("example2.rule").ca;
    const Alphabet& a = ca.alphabet();
    const StpOutcome o = construct_stp(ca, a.parse_word("w"), a.parse_word("00"), a.parse_word("r0"));
    if (!o.certificate) return {false, o.failure};
    const StpCertificate& c = *o.certificate;
    // Independent check: iterate the limit point with the finite-array oracle.
    const TwoSidedConfig y = y_prime(c.w, c.u, c.v);
    const auto rows = oracle::simulate(ca, oracle::cells_of(y), -40, 40, c.temporal_period);
    bool ok = c.temporal_period == 2 && c.preperiod == 0 && rows.front() == rows.back();
    ok = ok && !is_spatially_periodic(canonicalize(y)) && verify_stp(ca, c);
    const Json j = to_json(a, c);
    ok = ok && verify_stp(ca, stp_from_json(a, Json::parse(j.dump())));
    return {ok, "m=" + std::to_string(c.temporal_period)};
}

Outcome expansive_controls() {
    std::vector<CellularAutomaton> shifts{CellularAutomaton::elementary(170), CellularAutomaton::elementary(240)};
    // sigma^2 and sigma^-2 as identity composed with shifts on a wider neighbourhood.
    for (const char* text : {"alphabet: 0 1\nneighborhood: 0 2\ntable: *" "*0 -> 0; *" "*1 -> 1\n",
                             "alphabet: 0 1\nneighborhood: -2 0\ntable: 0** -> 0; 1** -> 1\n"})
        shifts.push_back(parse_rule(text));
    std::size_t found = 0;
    for (const auto& ca : shifts) found += search_stp(ca).size();
    return {found == 0, std::to_string(found) + " certificates"};
}

Outcome surjectivity_cross_validation() {
    int agree = 0;
    for (int code = 0; code < 256; ++code) {
        const auto ca = CellularAutomaton::elementary(code);
        bool balanced = true;
        for (std::size_t n = 1; n <= 6 && balanced; ++n)
            for (std::uint64_t w = 0; w < (1u << n) && balanced; ++w) balanced = oracle::preimages(ca, decode(w, n, 2)) == 4;
        agree += is_surjective(ca).surjective == balanced ? 1 : 0;
    }
    return {agree == 256, std::to_string(agree) + "/256"};
}

Outcome gilman_fixtures() {
    const RuleFile ex1 = load("example1.rule");
    const auto r204 = CellularAutomaton::elementary(204), r30 = CellularAutomaton::elementary(30);
    GilmanParams base;
    const BlockingScan s204 = scan_blocking_words(r204, blocking_width(r204), base.blocking_max_len);
    const BlockingScan s1 = scan_blocking_words(ex1.ca, blocking_width(ex1.ca), base.blocking_max_len);
    const BlockingScan s30 = scan_blocking_words(r30, blocking_width(r30), base.blocking_max_len);
    int a = 0, b = 0, c = 0;
    const int runs = 20;
    for (int seed = 1; seed <= runs; ++seed) {
        GilmanParams p = base;
        p.seed = static_cast<std::uint64_t>(seed);
        const GilmanReport ra = classify_gilman(r204, p, &s204);
        a += ra.cls == GilmanClass::A && !ra.certificates.empty() && verify_blocking(r204, ra.certificates[0]) ? 1 : 0;
        GilmanParams p1 = p;
        p1.measure.weights = *ex1.measure;
        b += classify_gilman(ex1.ca, p1, &s1).cls == GilmanClass::B ? 1 : 0;
        c += classify_gilman(r30, p, &s30).cls == GilmanClass::C ? 1 : 0;
    }
    const int need = (95 * runs + 99) / 100;
    return {a == runs && b >= need && c >= need, "A " + std::to_string(a) + ", B " + std::to_string(b) + ", C " + std::to_string(c) + " of 20"};
}

Outcome property_suites() {
    std::mt19937_64 rng(2024);
    std::size_t failures = 0;
    for (int i = 0; i < 1000; ++i) {
        const int left = -static_cast<int>(rng() % 3), right = static_cast<int>(rng() % 3);
        const auto ca = oracle::random_rule(rng, 2 + rng() % 2, left, right);
        const TwoSidedConfig x{oracle::random_word(rng, ca.k(), 1, 3), oracle::random_word(rng, ca.k(), 0, 6), oracle::random_word(rng, ca.k(), 1, 3),
                               static_cast<Coord>(rng() % 21) - 10};
        const Coord s = static_cast<Coord>(rng() % 7) - 3;
        if (!equals(step(ca, shift_by(x, s)), shift_by(step(ca, x), s))) ++failures;
    }
    for (int i = 0; i < 1000; ++i) {
        const std::size_t k = 2 + rng() % 2;
        const TwoSidedConfig x{oracle::random_word(rng, k, 1, 4), oracle::random_word(rng, k, 0, 8), oracle::random_word(rng, k, 1, 4),
                               static_cast<Coord>(rng() % 41) - 20};
        const TwoSidedConfig c = canonicalize(x);
        if (!(canonicalize(c) == c) || !oracle::agree_on(oracle::cells_of(x), oracle::cells_of(c), -50, 50)) ++failures;
    }

    std::vector<std::pair<CellularAutomaton, BlockingCertificate>> certs;
    const auto ex2 = load("example2.rule").ca;
    for (const auto& c : find_blocking_words(ex2, 1, 2)) certs.emplace_back(ex2, c);
    for (const auto& c : find_blocking_words(CellularAutomaton::elementary(204), 1, 2)) certs.emplace_back(CellularAutomaton::elementary(204), c);
    for (int i = 0; i < 400 && certs.size() < 40; ++i) {
        const auto ca = oracle::random_rule(rng, 2, -1, static_cast<int>(rng() % 2));
        const auto found = find_blocking_words(ca, blocking_width(ca), 3);
        if (!found.empty()) certs.emplace_back(ca, found[rng() % found.size()]);
    }
    const std::size_t depth = 32;
    for (const auto& [ca, cert] : certs) {
        const std::size_t reach = depth * static_cast<std::size_t>(ca.radius()) + 2;
        const Coord first = static_cast<Coord>(cert.offset), last = first + static_cast<Coord>(cert.width) - 1;
        for (int i = 0; i < 1000; ++i) {
            const Word left = oracle::random_word(rng, ca.k(), reach, reach), right = oracle::random_word(rng, ca.k(), reach, reach);
            Word cells = left;
            cells.insert(cells.end(), cert.word.begin(), cert.word.end());
            cells.insert(cells.end(), right.begin(), right.end());
            const Letter lb = static_cast<Letter>(rng() % ca.k()), rb = static_cast<Letter>(rng() % ca.k());
            const Coord lo = -static_cast<Coord>(reach), hi = lo + static_cast<Coord>(cells.size());
            const oracle::Cells x = [&](Coord j) { return j < lo ? lb : j >= hi ? rb : cells[static_cast<std::size_t>(j - lo)]; };
            const auto rows = oracle::simulate(ca, x, first, last, depth);
            for (std::size_t t = 0; t <= depth; ++t)
                if (rows[t] != cert.row(t)) {
                    ++failures;
                    break;
                }
        }
    }
    return {failures == 0, std::to_string(failures) + " failures, " + std::to_string(certs.size()) + " certificates spot-checked"};
}

Outcome survey_determinism() {
    fs::remove_all(scratch_dir);
    fs::create_directories(scratch_dir);
    const std::string rules = "eca:30,eca:90,eca:110,eca:170,eca:204," + (fixtures / "example1.rule").string() + "," + (fixtures / "example2.rule").string();
    auto survey = [&](const std::string& name, int jobs) {
        const fs::path out = scratch_dir / name;
        const int code = run(quote(cli) + " survey " + quote(rules) + " --jobs " + std::to_string(jobs) + " --seed 5 --quiet --out " + quote(out.string()));
        return code == 0 ? slurp(out) : std::string();
    };
    const std::string a = survey("a.jsonl", 1), b = survey("b.jsonl", 1), c = survey("c.jsonl", 8);
    const auto lines = std::count(a.begin(), a.end(), '\n');
    std::string verify_out;
    const int verified = run(quote(cli) + " verify " + quote((scratch_dir / "c.jsonl").string()), &verify_out);
    return {!a.empty() && a == b && a == c && lines == 7 && verified == 0, std::to_string(lines) + " records, verify exit " + std::to_string(verified)};
}

}  // namespace

int main(int argc, char** argv) {
    if (argc < 4) {
        std::cerr << "usage: acceptance <cadyn> <fixture dir> <scratch dir>\n";
        return 2;
    }
    cli = argv[1];
    fixtures = argv[2];
    scratch_dir = argv[3];
    const std::pair<const char*, std::function<Outcome()>> checks[] = {
        {"example 2 trace", trace_fidelity},
        {"example 2 column period", column_period_check},
        {"example 2 not surjective, not injective", example2_not_bijective},
        {"example 2 periodic factor", example2_factor},
        {"strictly temporally periodic point", stp_certificate},
        {"expansive controls have no such points", expansive_controls},
        {"surjectivity vs balance, 256 rules", surjectivity_cross_validation},
        {"gilman classes over 20 seeds", gilman_fixtures},
        {"property suites", property_suites},
        {"survey determinism", survey_determinism},
    };
    int failed = 0, index = 0;
    for (const auto& [name, check] : checks) {
        ++index;
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = check();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::printf("%s %2d %s (%s; %.2fs)\n", o.pass ? "PASS" : "FAIL", index, name, o.detail.c_str(), secs);
        std::fflush(stdout);
        failed += o.pass ? 0 : 1;
    }
    return failed == 0 ? 0 : 1;
}

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "cadyn/survey.hpp"

namespace {

using namespace cadyn;

// Exit codes: 0 ran, 1 input error, 2 internal invariant violation.
constexpr int kInputError = 1;
constexpr int kInternalError = 2;

struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot read " + path);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

struct RuleChoice {
    std::string path;
    int eca = -1;

    RuleFile load() const {
        if (!path.empty() && eca >= 0) throw InputError("give either --rule or --eca, not both");
        if (eca >= 0) {
            if (eca > 255) throw RuleError(RuleError::Kind::EcaOutOfRange, std::to_string(eca));
            return RuleFile{CellularAutomaton::elementary(eca), "", std::nullopt};
        }
        if (path.empty()) throw InputError("a rule is required (--rule FILE or --eca N)");
        return parse_rule_file(read_file(path));
    }
};

void add_rule_options(CLI::App* cmd, RuleChoice& rule) {
    cmd->add_option("--rule", rule.path, "Rule file");
    cmd->add_option("--eca", rule.eca, "Elementary rule code 0..255");
}

std::uint64_t default_seed() {
    if (const char* env = std::getenv("CADYN_SEED")) {
        try {
            return std::stoull(env);
        } catch (const std::exception&) {
            throw InputError("CADYN_SEED is not an unsigned integer");
        }
    }
    return 0;
}

void add_bound_options(CLI::App* cmd, AnalysisParams& p) {
    cmd->add_option("--seed", p.seed, "Random seed (default: $CADYN_SEED or 0)");
    cmd->add_option("--max-blocking-len", p.max_blocking_len, "Longest candidate blocking word")->capture_default_str();
    cmd->add_option("--gilman-samples", p.gilman_samples, "Samples per ratio estimate")->capture_default_str();
    cmd->add_option("--gilman-horizon", p.gilman_horizon, "Steps compared per sample")->capture_default_str();
    cmd->add_option("--stp-max-ingredient", p.stp_max_ingredient, "Longest u, v tried for periodic points")->capture_default_str();
    cmd->add_option("--center-cap", p.center_cap, "Largest canonical center during exact iteration")->capture_default_str();
    cmd->add_flag("--timings", p.timings, "Record wall-clock timings (makes output run-dependent)");
}

void write_output(const std::string& path, const std::string& data) {
    if (path.empty() || path == "-") {
        std::cout << data;
        std::cout.flush();
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot write " + path);
    out << data;
}

int cmd_simulate(const RuleChoice& rule_choice, const std::string& init, std::size_t steps, const std::string& window_text,
                 const std::string& render, const std::string& out, std::size_t center_cap) {
    const RuleFile rule = rule_choice.load();
    const Alphabet& a = rule.ca.alphabet();
    const Configuration x = parse_config(a, init);
    Window window;
    if (!window_text.empty()) {
        window = parse_window(window_text);
    } else if (const auto* p = std::get_if<PeriodicConfig>(&x)) {
        window = Window{0, static_cast<Coord>(p->word.size()) - 1};
    } else {
        const auto& t = std::get<TwoSidedConfig>(x);
        window = Window{t.anchor - 8, t.anchor + static_cast<Coord>(t.center.size()) + 7};
    }
    const ColumnTrace rows = trace(rule.ca, x, window, steps, center_cap);
    if (render == "pixmap") {
        if (out.empty() || out == "-") throw InputError("--render pixmap needs --out FILE");
        write_output(out, render_pixmap(rows));
    } else {
        write_output(out, render_ascii(a, rows));
    }
    return 0;
}

int cmd_analyze(const RuleChoice& rule_choice, AnalysisParams params, const std::string& only, bool pretty, const std::string& out) {
    const RuleFile rule = rule_choice.load();
    if (!only.empty()) {
        AnalysisSelection sel{false, false, false, false, false, false, false};
        std::stringstream list(only);
        std::string item;
        while (std::getline(list, item, ',')) {
            if (item == "surjectivity") sel.surjectivity = true;
            else if (item == "injectivity") sel.injectivity = true;
            else if (item == "blocking") sel.blocking = true;
            else if (item == "kurka") sel.kurka = true;
            else if (item == "gilman") sel.gilman = true;
            else if (item == "stp") sel.stp = true;
            else if (item == "factors") sel.factors = true;
            else throw InputError("unknown analysis '" + item + "'");
        }
        params.selection = sel;
    }
    const Json record = analyze_rule(rule, params);
    write_output(out, (pretty ? record.dump(2) : record.dump()) + "\n");
    return 0;
}

int cmd_survey(const std::string& spec, const AnalysisParams& params, std::size_t jobs, const std::string& out, bool quiet) {
    if (out.empty()) throw InputError("survey needs --out FILE");
    SurveyOptions options;
    options.params = params;
    options.jobs = jobs;
    options.out_path = out;
    const auto rules = expand_rule_set(spec);
    const SurveyStats stats = run_survey(rules, options, quiet ? nullptr : &std::cerr);
    if (!quiet) std::cerr << stats.written << " written, " << stats.resumed << " already present\n";
    return 0;
}

int cmd_verify(const std::string& in_path) {
    std::istringstream in(read_file(in_path));
    std::string line;
    std::size_t records = 0, checked = 0, failed = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        Json record;
        try {
            record = Json::parse(line);
        } catch (const Json::parse_error& e) {
            throw InputError(std::string("malformed record: ") + e.what());
        }
        ++records;
        const VerifyResult r = verify_record(record);
        checked += r.checked;
        const std::string id = record.value("id", std::string("?"));
        if (r.ok()) {
            std::cout << id << ": ok (" << r.checked << " checks)\n";
        } else {
            failed += r.failures.size();
            for (const auto& f : r.failures) std::cout << id << ": FAILED " << f << "\n";
        }
    }
    std::cout << records << " records, " << checked << " checks, " << failed << " failed\n";
    return failed == 0 ? 0 : kInternalError;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact and statistical analysis of one-dimensional cellular automata"};
    app.require_subcommand(1);

    AnalysisParams params;
    try {
        params.seed = default_seed();
    } catch (const InputError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInputError;
    }

    RuleChoice rule;
    std::string init, window, render = "ascii", out, only, spec;
    std::size_t steps = 16, jobs = 1;
    bool pretty = false, quiet = false;

    auto* sim = app.add_subcommand("simulate", "Space-time diagram of an exact orbit");
    add_rule_options(sim, rule);
    sim->add_option("--init", init, "Initial configuration literal, e.g. \"^(wr000w)^\"")->required();
    sim->add_option("--steps", steps, "Number of steps")->capture_default_str();
    sim->add_option("--window", window, "Coordinates i1:i2 to draw");
    sim->add_option("--render", render, "ascii or pixmap")->check(CLI::IsMember({"ascii", "pixmap"}))->capture_default_str();
    sim->add_option("--out", out, "Output file (default stdout)");
    sim->add_option("--center-cap", params.center_cap, "Largest canonical center during exact iteration");

    auto* ana = app.add_subcommand("analyze", "Analyze one rule and print its record");
    add_rule_options(ana, rule);
    add_bound_options(ana, params);
    ana->add_option("--only", only, "Comma list: surjectivity,injectivity,blocking,kurka,gilman,stp,factors");
    ana->add_flag("--pretty", pretty, "Indent the JSON record");
    ana->add_option("--out", out, "Output file (default stdout)");

    auto* sur = app.add_subcommand("survey", "Analyze a rule set into a line-delimited record file");
    sur->add_option("rules", spec, "Rule set: eca:all, eca:N, files or directories, comma separated")->required();
    add_bound_options(sur, params);
    sur->add_option("--jobs", jobs, "Worker threads")->capture_default_str();
    sur->add_option("--out", out, "Record file (appended; existing rules are skipped)")->required();
    sur->add_flag("--quiet", quiet, "No progress on stderr");

    auto* ver = app.add_subcommand("verify", "Re-check every certificate in a record file");
    std::string in_path;
    ver->add_option("records", in_path, "Record file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kInputError;
    }

    try {
        if (sim->parsed()) return cmd_simulate(rule, init, steps, window, render, out, params.center_cap);
        if (ana->parsed()) return cmd_analyze(rule, params, only, pretty, out);
        if (sur->parsed()) return cmd_survey(spec, params, jobs, out, quiet);
        if (ver->parsed()) return cmd_verify(in_path);
    } catch (const InputError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInputError;
    } catch (const RuleError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInputError;
    } catch (const BudgetExceeded& e) {
        std::cerr << "budget exceeded: " << e.what() << "\n";
        return kInputError;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInputError;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kInternalError;
    }
    return kInternalError;
}

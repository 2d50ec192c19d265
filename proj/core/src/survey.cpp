#include "cadyn/survey.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <condition_variable>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <mutex>
#include <ostream>
#include <set>
#include <sstream>
#include <thread>

namespace cadyn {

namespace fs = std::filesystem;

std::uint64_t fnv1a64(std::string_view text) {
    std::uint64_t h = 14695981039346656037ULL;
    for (unsigned char c : text) h = (h ^ c) * 1099511628211ULL;
    return h;
}

std::uint64_t rule_seed(std::uint64_t seed, const std::string& id) { return splitmix64(seed ^ fnv1a64(id)); }

std::string rule_identity(const CellularAutomaton& ca) {
    if (auto code = ca.eca_code()) return "eca:" + std::to_string(*code);
    std::ostringstream s;
    s << "table:" << std::hex << std::setw(16) << std::setfill('0') << fnv1a64(format_rule(ca));
    return s.str();
}

Json params_to_json(const AnalysisParams& p) {
    Json j;
    j["seed"] = p.seed;
    j["max_blocking_len"] = p.max_blocking_len;
    j["blocking"] = {{"max_iterations", p.blocking.max_iterations},
                     {"max_set_size", p.blocking.max_set_size},
                     {"max_contexts", p.blocking.max_contexts}};
    j["kurka_max_total"] = p.kurka_max_total;
    j["kurka_table_budget"] = p.kurka_table_budget;
    j["gilman_samples"] = p.gilman_samples;
    j["gilman_horizon"] = p.gilman_horizon;
    j["gilman_candidate_len"] = p.gilman_candidate_len;
    j["stp_max_ingredient"] = p.stp_max_ingredient;
    j["stp_max_words"] = p.stp_max_words;
    j["stp_max_steps"] = p.stp_max_steps;
    j["center_cap"] = p.center_cap;
    j["factor_words"] = p.factor_words;
    j["factor_max_ingredient"] = p.factor_max_ingredient;
    j["max_serialized_certificates"] = p.max_serialized_certificates;
    return j;
}

namespace {

BlockingBounds blocking_bounds_from(const Json& params) {
    BlockingBounds b;
    if (params.contains("blocking")) {
        const Json& j = params.at("blocking");
        b.max_iterations = j.value("max_iterations", b.max_iterations);
        b.max_set_size = j.value("max_set_size", b.max_set_size);
        b.max_contexts = j.value("max_contexts", b.max_contexts);
    }
    return b;
}

std::string word_text(const Alphabet& a, const Word& w) { return a.format_word(w); }

Json period_json(const EventualPeriod& p) { return {{"preperiod", p.preperiod}, {"period", p.period}}; }

Json curve_json(const Alphabet& a, const RatioCurve& c) {
    Json points = Json::array();
    for (const RatioPoint& p : c.points)
        points.push_back({{"n", p.n}, {"ratio", p.ratio}, {"half_width", p.half_width}, {"samples", p.samples}, {"agreeing", p.agreeing}});
    return {{"x", format_config(a, c.x)}, {"m", c.m}, {"points", points}};
}

Json skipped() { return {{"skipped", true}}; }

}  // namespace

Json to_json(const Alphabet& a, const SurjectivityReport& r) {
    Json j;
    j["surjective"] = r.surjective;
    j["balanced_count"] = r.balanced_count;
    j["witness"] = r.witness ? Json(word_text(a, *r.witness)) : Json(nullptr);
    j["witness_count"] = r.witness ? Json(r.witness_count) : Json(nullptr);
    j["orphan"] = r.orphan ? Json(word_text(a, *r.orphan)) : Json(nullptr);
    return j;
}

Json to_json(const Alphabet& a, const InjectivityReport& r) {
    Json j;
    j["injective"] = r.injective;
    if (r.witness)
        j["witness"] = {format_config(a, r.witness->first), format_config(a, r.witness->second)};
    else
        j["witness"] = nullptr;
    j["image"] = r.common_image ? Json(format_config(a, *r.common_image)) : Json(nullptr);
    return j;
}

Json to_json(const Alphabet& a, const BlockingCertificate& c) {
    Json rows = Json::array();
    for (const Word& r : c.rows) rows.push_back(word_text(a, r));
    return {{"word", word_text(a, c.word)}, {"width", c.width}, {"offset", c.offset}, {"rows", rows}, {"column_period", period_json(c.period)}};
}

Json to_json(const Alphabet&, const KurkaReport& r, std::size_t) {
    Json j;
    j["width"] = r.blocking_width;
    j["has_equicontinuity_points"] = r.has_equicontinuity_points ? "yes" : "no-up-to-bounds";
    j["equicontinuous"] = r.equicontinuous ? "yes" : "no-up-to-bounds";
    j["equicontinuity_period"] = r.equicontinuity_period ? period_json(*r.equicontinuity_period) : Json(nullptr);
    j["checked_total"] = r.checked_total;
    j["sensitive_candidate"] = r.sensitive_candidate;
    return j;
}

Json to_json(const Alphabet& a, const GilmanReport& r) {
    Json j;
    j["class"] = to_string(r.cls);
    j["statistical"] = r.statistical;
    Json certs = Json::array();
    for (const auto& c : r.certificates) certs.push_back(to_json(a, c));
    j["certificates"] = certs;
    j["b_curve"] = r.b_curve ? curve_json(a, *r.b_curve) : Json(nullptr);
    Json curves = Json::array();
    for (const auto& c : r.curves) curves.push_back(curve_json(a, c));
    j["curves"] = curves;
    j["max_final_ratio"] = r.max_final_ratio;
    const GilmanParams& p = r.params;
    j["params"] = {{"seed", p.seed},
                   {"measure", p.measure.weights.empty() ? Json("uniform") : Json(p.measure.weights)},
                   {"windows", p.windows},
                   {"n_multipliers", p.n_multipliers},
                   {"horizon", p.horizon},
                   {"samples", p.samples},
                   {"b_threshold", p.b_threshold},
                   {"c_threshold", p.c_threshold},
                   {"blocking_max_len", p.blocking_max_len},
                   {"candidate_max_len", p.candidate_max_len},
                   {"near_miss_candidates", p.near_miss_candidates}};
    return j;
}

Json to_json(const Alphabet& a, const StpCertificate& c) {
    return {{"point", format_config(a, c.point)},
            {"temporal_period", c.temporal_period},
            {"preperiod", c.preperiod},
            {"evidence", c.evidence},
            {"w", word_text(a, c.w)},
            {"u", word_text(a, c.u)},
            {"v", word_text(a, c.v)}};
}

Json to_json(const Alphabet& a, const PeriodicFactor& f) {
    Json words = Json::array();
    Json residues = Json::array();
    for (const Word& w : f.class_words) {
        words.push_back(word_text(a, w));
        residues.push_back(f.assignment.at(w));
    }
    return {{"x", format_config(a, f.generator)},
            {"window", {f.window.first, f.window.last}},
            {"m", f.m},
            {"p", f.p},
            {"class_words", words},
            {"residues", residues}};
}

BlockingCertificate blocking_from_json(const Alphabet& a, const Json& j) {
    BlockingCertificate c;
    c.word = a.parse_word(j.at("word").get<std::string>());
    c.width = j.at("width").get<std::size_t>();
    c.offset = j.at("offset").get<std::size_t>();
    for (const auto& r : j.at("rows")) c.rows.push_back(a.parse_word(r.get<std::string>()));
    c.period = EventualPeriod{j.at("column_period").at("preperiod").get<std::size_t>(), j.at("column_period").at("period").get<std::size_t>()};
    return c;
}

StpCertificate stp_from_json(const Alphabet& a, const Json& j) {
    StpCertificate c;
    const Configuration point = parse_config(a, j.at("point").get<std::string>());
    if (const auto* two = std::get_if<TwoSidedConfig>(&point))
        c.point = *two;
    else
        c.point = embed(std::get<PeriodicConfig>(point));
    c.temporal_period = j.at("temporal_period").get<std::size_t>();
    c.preperiod = j.value("preperiod", std::size_t{0});
    c.evidence = j.value("evidence", std::string{});
    c.w = a.parse_word(j.at("w").get<std::string>());
    c.u = a.parse_word(j.at("u").get<std::string>());
    c.v = a.parse_word(j.at("v").get<std::string>());
    return c;
}

PeriodicFactor factor_from_json(const Alphabet& a, const Json& j) {
    PeriodicFactor f;
    f.generator = parse_config(a, j.at("x").get<std::string>());
    f.window = Window{j.at("window").at(0).get<Coord>(), j.at("window").at(1).get<Coord>()};
    f.m = j.at("m").get<std::size_t>();
    f.p = j.at("p").get<std::size_t>();
    const Json& words = j.at("class_words");
    const Json& residues = j.at("residues");
    if (words.size() != residues.size()) throw std::invalid_argument("class_words and residues differ in length");
    for (std::size_t i = 0; i < words.size(); ++i) {
        Word w = a.parse_word(words[i].get<std::string>());
        f.assignment[w] = residues[i].get<std::size_t>();
        f.class_words.push_back(std::move(w));
    }
    if (f.p == 0) throw std::invalid_argument("factor period must be positive");
    return f;
}

// ---------------------------------------------------------------------------

Json analyze_rule(const RuleFile& rule, const AnalysisParams& params) {
    using Clock = std::chrono::steady_clock;
    const CellularAutomaton& ca = rule.ca;
    const Alphabet& a = ca.alphabet();
    const AnalysisSelection& sel = params.selection;
    Json timings;
    auto timed = [&](const char* name, auto&& fn) {
        const auto start = Clock::now();
        fn();
        timings[name] = std::chrono::duration<double, std::milli>(Clock::now() - start).count();
    };

    Json rec;
    rec["id"] = rule_identity(ca);
    rec["name"] = rule.name;
    rec["rule"] = format_rule(ca);
    rec["measure"] = rule.measure ? Json(*rule.measure) : Json(nullptr);
    rec["params"] = params_to_json(params);

    rec["surjectivity"] = skipped();
    if (sel.surjectivity) timed("surjectivity", [&] { rec["surjectivity"] = to_json(a, is_surjective(ca)); });
    rec["injectivity"] = skipped();
    if (sel.injectivity) timed("injectivity", [&] { rec["injectivity"] = to_json(a, is_injective(ca)); });

    const std::size_t width = blocking_width(ca);
    const std::size_t max_len = std::max(params.max_blocking_len, width);
    const bool need_scan = sel.blocking || sel.kurka || sel.gilman || sel.stp || sel.factors;
    BlockingScan scan;
    if (need_scan) timed("blocking", [&] { scan = scan_blocking_words(ca, width, max_len, params.blocking); });

    rec["blocking"] = skipped();
    if (sel.blocking) {
        Json certs = Json::array();
        for (std::size_t i = 0; i < scan.certificates.size() && i < params.max_serialized_certificates; ++i)
            certs.push_back(to_json(a, scan.certificates[i]));
        rec["blocking"] = {{"width", width}, {"max_len", max_len}, {"total", scan.certificates.size()}, {"certificates", certs}};
    }

    rec["kurka"] = skipped();
    if (sel.kurka)
        timed("kurka", [&] {
            KurkaBounds kb;
            kb.max_len = max_len;
            kb.blocking = params.blocking;
            kb.max_total = params.kurka_max_total;
            kb.table_budget = params.kurka_table_budget;
            rec["kurka"] = to_json(a, classify_kurka(ca, kb, &scan), params.max_serialized_certificates);
        });

    rec["gilman"] = skipped();
    if (sel.gilman)
        timed("gilman", [&] {
            GilmanParams gp;
            gp.seed = params.seed;
            if (rule.measure) gp.measure.weights = *rule.measure;
            gp.samples = params.gilman_samples;
            gp.horizon = params.gilman_horizon;
            gp.blocking_max_len = max_len;
            gp.blocking = params.blocking;
            gp.candidate_max_len = params.gilman_candidate_len;
            rec["gilman"] = to_json(a, classify_gilman(ca, gp, &scan));
        });

    rec["stp"] = skipped();
    if (sel.stp)
        timed("stp", [&] {
            StpSearchBounds sb;
            sb.blocking_max_len = max_len;
            sb.blocking = params.blocking;
            sb.max_words = params.stp_max_words;
            sb.max_ingredient = params.stp_max_ingredient;
            sb.orbit = StpBounds{params.stp_max_steps, params.center_cap};
            Json certs = Json::array();
            for (const auto& c : search_stp(ca, sb, &scan)) certs.push_back(to_json(a, c));
            rec["stp"] = {{"certificates", certs}};
        });

    rec["factors"] = skipped();
    if (sel.factors)
        timed("factors", [&] {
            std::vector<Word> words;
            for (const auto& c : scan.certificates) {
                if (words.size() == params.factor_words) break;
                if (words.empty() || words.back() != c.word) words.push_back(c.word);
            }
            Json items = Json::array();
            std::set<std::size_t> spectrum;
            const OrbitBounds ob{10'000, params.center_cap};
            for (const Word& w : words)
                for (std::size_t len = 0; len <= params.factor_max_ingredient; ++len) {
                    const std::uint64_t count = ipow(ca.k(), static_cast<unsigned>(len));
                    for (std::uint64_t code = 0; code < count; ++code) {
                        Word period = w;
                        const Word u = decode(code, len, ca.k());
                        period.insert(period.end(), u.begin(), u.end());
                        const Window window{0, static_cast<Coord>(period.size() + w.size()) - 1};
                        const FactorOutcome outcome = build_periodic_factor(ca, Configuration{PeriodicConfig{period, 0}}, window, ob);
                        if (!outcome.factor) continue;
                        Json item = to_json(a, *outcome.factor);
                        const bool ok = verify_factor(ca, *outcome.factor, factor_representatives(*outcome.factor), std::nullopt, params.center_cap);
                        item["verified"] = ok;
                        if (ok) spectrum.insert(outcome.factor->p);
                        items.push_back(std::move(item));
                    }
                }
            rec["factors"] = {{"spectrum", Json(std::vector<std::size_t>(spectrum.begin(), spectrum.end()))}, {"items", items}};
        });

    if (params.timings) rec["timings_ms"] = timings;
    return rec;
}

// ---------------------------------------------------------------------------

VerifyResult verify_record(const Json& record) {
    VerifyResult out;
    if (record.contains("error")) return out;
    const RuleFile rule = parse_rule_file(record.at("rule").get<std::string>());
    const CellularAutomaton& ca = rule.ca;
    const Alphabet& a = ca.alphabet();
    const Json params = record.value("params", Json::object());
    const BlockingBounds bb = blocking_bounds_from(params);
    const std::size_t cap = params.value("center_cap", kDefaultCenterCap);
    auto check = [&](bool ok, const std::string& what) {
        ++out.checked;
        if (!ok) out.failures.push_back(what);
    };

    if (record.contains("id") && record.at("id").get<std::string>() != rule_identity(ca)) check(false, "rule identity does not match rule text");

    if (const Json& s = record.value("surjectivity", Json::object()); s.contains("surjective")) {
        if (!s.at("witness").is_null()) {
            const Word w = a.parse_word(s.at("witness").get<std::string>());
            const std::uint64_t count = preimage_count(ca, w);
            check(count == s.at("witness_count").get<std::uint64_t>() && count != s.at("balanced_count").get<std::uint64_t>(),
                  "surjectivity witness count");
        }
        if (!s.at("orphan").is_null()) check(preimage_count(ca, a.parse_word(s.at("orphan").get<std::string>())) == 0, "orphan has a preimage");
        check(s.at("surjective").get<bool>() == is_surjective(ca).surjective, "surjectivity verdict");
    }

    if (const Json& s = record.value("injectivity", Json::object()); s.contains("injective")) {
        if (!s.at("witness").is_null()) {
            const Configuration x = parse_config(a, s.at("witness").at(0).get<std::string>());
            const Configuration y = parse_config(a, s.at("witness").at(1).get<std::string>());
            const Configuration fx = step(ca, x, cap);
            bool ok = !equals(x, y) && equals(fx, step(ca, y, cap));
            if (!s.at("image").is_null()) ok = ok && equals(fx, parse_config(a, s.at("image").get<std::string>()));
            check(ok, "injectivity witness");
        }
    }

    if (const Json& b = record.value("blocking", Json::object()); b.contains("certificates"))
        for (const Json& c : b.at("certificates")) check(verify_blocking(ca, blocking_from_json(a, c), bb), "blocking certificate " + c.at("word").get<std::string>());

    if (const Json& k = record.value("kurka", Json::object()); k.contains("equicontinuity_period") && !k.at("equicontinuity_period").is_null()) {
        const EventualPeriod claimed{k.at("equicontinuity_period").at("preperiod").get<std::size_t>(),
                                     k.at("equicontinuity_period").at("period").get<std::size_t>()};
        const auto search = find_eventual_periodicity(ca, claimed.preperiod + claimed.period, std::numeric_limits<std::size_t>::max());
        check(search.period && *search.period == claimed, "equicontinuity period");
    }

    if (const Json& g = record.value("gilman", Json::object()); g.contains("class")) {
        const bool is_a = g.at("class").get<std::string>() == "A";
        check(!is_a || !g.at("certificates").empty(), "class A without certificate");
        for (const Json& c : g.at("certificates")) check(verify_blocking(ca, blocking_from_json(a, c), bb), "gilman certificate");
    }

    if (const Json& s = record.value("stp", Json::object()); s.contains("certificates"))
        for (const Json& c : s.at("certificates")) check(verify_stp(ca, stp_from_json(a, c), cap), "periodic point " + c.at("point").get<std::string>());

    if (const Json& f = record.value("factors", Json::object()); f.contains("items"))
        for (const Json& item : f.at("items")) {
            if (!item.value("verified", false)) continue;
            const PeriodicFactor factor = factor_from_json(a, item);
            check(verify_factor(ca, factor, factor_representatives(factor), std::nullopt, cap), "factor " + item.at("x").get<std::string>());
        }
    return out;
}

// ---------------------------------------------------------------------------

std::vector<RuleSource> expand_rule_set(std::string_view spec) {
    std::vector<RuleSource> out;
    auto add_eca = [&](int code) {
        RuleSource s;
        s.id = "eca:" + std::to_string(code);
        s.origin = s.id;
        s.rule = RuleFile{CellularAutomaton::elementary(code), "", std::nullopt};
        out.push_back(std::move(s));
    };
    auto add_file = [&](const fs::path& path) {
        RuleSource s;
        s.origin = path.filename().string();
        std::ifstream in(path, std::ios::binary);
        if (!in) {
            s.id = "file:" + s.origin;
            s.error = "cannot read " + path.string();
            out.push_back(std::move(s));
            return;
        }
        std::ostringstream text;
        text << in.rdbuf();
        try {
            RuleFile rule = parse_rule_file(text.str());
            if (rule.name.empty()) rule.name = path.stem().string();
            s.id = rule_identity(rule.ca);
            s.rule = std::move(rule);
        } catch (const RuleError& e) {
            s.id = "file:" + s.origin;
            s.error = e.what();
        }
        out.push_back(std::move(s));
    };

    std::size_t start = 0;
    while (start <= spec.size()) {
        std::size_t end = spec.find(',', start);
        if (end == std::string_view::npos) end = spec.size();
        std::string item(spec.substr(start, end - start));
        start = end + 1;
        item.erase(0, item.find_first_not_of(" \t"));
        item.erase(item.find_last_not_of(" \t") + 1);
        if (item.empty()) continue;
        if (item == "eca:all") {
            for (int c = 0; c < 256; ++c) add_eca(c);
        } else if (item.rfind("eca:", 0) == 0) {
            int code = -1;
            try {
                std::size_t used = 0;
                code = std::stoi(item.substr(4), &used);
                if (used != item.size() - 4) code = -1;
            } catch (const std::exception&) {
            }
            if (code < 0 || code > 255) throw RuleError(RuleError::Kind::EcaOutOfRange, item);
            add_eca(code);
        } else {
            const fs::path path(item);
            if (fs::is_directory(path)) {
                std::vector<fs::path> files;
                for (const auto& entry : fs::directory_iterator(path))
                    if (entry.is_regular_file() && entry.path().extension() == ".rule") files.push_back(entry.path());
                std::sort(files.begin(), files.end());
                for (const auto& f : files) add_file(f);
            } else if (fs::exists(path)) {
                add_file(path);
            } else {
                throw RuleError(RuleError::Kind::Syntax, "no such rule file or directory: " + item);
            }
        }
    }
    return out;
}

namespace {

// Reads ids of complete records and drops a trailing partial line.
std::set<std::string> existing_ids(const std::string& path) {
    std::set<std::string> ids;
    if (!fs::exists(path)) return ids;
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    const std::string text = buf.str();
    const std::size_t complete = text.rfind('\n') == std::string::npos ? 0 : text.rfind('\n') + 1;
    std::size_t start = 0;
    while (start < complete) {
        const std::size_t end = text.find('\n', start);
        const std::string line = text.substr(start, end - start);
        start = end + 1;
        if (line.empty()) continue;
        try {
            ids.insert(Json::parse(line).at("id").get<std::string>());
        } catch (const std::exception&) {
            throw std::runtime_error("existing output has a malformed record; refusing to append");
        }
    }
    if (complete < text.size()) fs::resize_file(path, complete);
    return ids;
}

}  // namespace

SurveyStats run_survey(const std::vector<RuleSource>& rules, const SurveyOptions& options, std::ostream* progress) {
    SurveyStats stats;
    std::set<std::string> done = existing_ids(options.out_path);
    std::vector<const RuleSource*> todo;
    for (const RuleSource& r : rules) {
        if (done.count(r.id)) {
            ++stats.resumed;
            continue;
        }
        done.insert(r.id);
        todo.push_back(&r);
    }

    std::ofstream out(options.out_path, std::ios::binary | std::ios::app);
    if (!out) throw std::runtime_error("cannot open " + options.out_path + " for writing");

    std::vector<std::string> lines(todo.size());
    std::vector<char> ready(todo.size(), 0);
    std::exception_ptr failure;
    std::mutex mutex;
    std::condition_variable cv;
    std::atomic<std::size_t> next{0};

    auto work = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= todo.size()) return;
            std::string line;
            try {
                const RuleSource& src = *todo[i];
                Json rec;
                if (src.rule) {
                    AnalysisParams params = options.params;
                    params.seed = rule_seed(options.params.seed, src.id);
                    rec = analyze_rule(*src.rule, params);
                } else {
                    rec["id"] = src.id;
                    rec["origin"] = src.origin;
                    rec["error"] = src.error;
                }
                line = rec.dump() + "\n";
            } catch (...) {
                std::lock_guard lock(mutex);
                if (!failure) failure = std::current_exception();
                next = todo.size();
                ready[i] = 1;
                cv.notify_all();
                return;
            }
            std::lock_guard lock(mutex);
            lines[i] = std::move(line);
            ready[i] = 1;
            cv.notify_all();
        }
    };

    const std::size_t jobs = std::max<std::size_t>(1, std::min(options.jobs, todo.size()));
    std::vector<std::jthread> workers;
    for (std::size_t j = 0; j < jobs; ++j) workers.emplace_back(work);

    for (std::size_t i = 0; i < todo.size(); ++i) {
        std::unique_lock lock(mutex);
        cv.wait(lock, [&] { return ready[i] || failure; });
        if (failure) break;
        out << lines[i];
        out.flush();
        lines[i].clear();
        ++stats.written;
        if (progress) *progress << todo[i]->id << "\n";
    }
    workers.clear();
    if (failure) std::rethrow_exception(failure);
    return stats;
}

}  // namespace cadyn

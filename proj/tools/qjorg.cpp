#include <algorithm>
#include <cctype>
#include <fstream>
#include <future>
#include <iostream>
#include <iterator>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "qjorg/dynamics.hpp"
#include "qjorg/io.hpp"
#include "qjorg/moebius.hpp"

using nlohmann::json;
using namespace qjorg;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitSingular = 3;
constexpr int kExitObstruction = 10;
constexpr int kExitExtremal = 11;
constexpr int kExitNotExtreme = 12;

struct CliError : std::runtime_error {
    CliError(int c, const std::string& msg) : std::runtime_error(msg), code(c) {}
    int code;
};

struct Config {
    std::string input = "-";
    std::string batch;
    std::string output;
    std::string format;
    std::string selector = "auto";
    std::string mode = "auto";
    std::string pivot = "b";
    double tol = 1e-7;
    double shape_tol = kDefaultTol;
    int steps = 25;
    bool normalize = false;
    bool full = false;
};

struct Outcome {
    json out;
    std::string text;
    std::string summary;  // stderr line
    int code = kExitOk;
};

int exit_for(Verdict v) {
    switch (v) {
        case Verdict::Obstruction: return kExitObstruction;
        case Verdict::Extremal: return kExitExtremal;
        case Verdict::NotExtreme: return kExitNotExtreme;
        case Verdict::Inconclusive: return kExitOk;
    }
    return kExitOk;
}

std::string read_input(const std::string& arg) {
    const auto first = std::find_if_not(arg.begin(), arg.end(), [](unsigned char ch) { return std::isspace(ch); });
    if (first != arg.end() && *first == '{') {
        return arg;
    }
    if (arg == "-") {
        return {std::istreambuf_iterator<char>(std::cin), {}};
    }
    std::ifstream in(arg);
    if (!in) {
        throw CliError(kExitUsage, "cannot open input '" + arg + "'");
    }
    return {std::istreambuf_iterator<char>(in), {}};
}

TestOptions test_options(const Config& cfg) {
    TestOptions o;
    o.tol = cfg.tol;
    o.shape_tol = cfg.shape_tol;
    return o;
}

void require_nonsingular(const MatH2& m, const char* label) {
    if (det(m) <= kZeroTol) {
        throw CliError(kExitSingular, std::string(label) + " is singular");
    }
}

MatH2 prepare(const MatH2& m, const char* label, const Config& cfg, std::vector<std::string>& warnings) {
    require_nonsingular(m, label);
    if (in_sigma(m, cfg.shape_tol)) {
        return m;
    }
    if (cfg.normalize) {
        warnings.push_back(std::string(label) + " normalized to determinant one (det was " + format_double(det(m)) + ")");
        return normalize_to_sigma(m);
    }
    warnings.push_back(std::string(label) + " is not in the determinant-one group (det = " + format_double(det(m)) + ")");
    return m;
}

MatrixPair prepare_pair(const json& j, const Config& cfg, std::vector<std::string>& warnings) {
    const MatrixPair p = parse_pair(j);
    return {prepare(p.s, "S", cfg, warnings), prepare(p.t, "T", cfg, warnings)};
}

bool is_diagonal(const MatH2& t, double tol) { return is_zero(t.b, tol) && is_zero(t.c, tol); }
bool is_upper(const MatH2& t, double tol) { return is_zero(t.c, tol); }
bool is_lower(const MatH2& t, double tol) { return is_zero(t.b, tol); }

std::string text_report(const TestReport& r) {
    std::ostringstream os;
    os << "test: " << r.test_name << '\n'
       << "verdict: " << to_string(r.verdict) << '\n'
       << "lhs: " << format_double(r.lhs) << '\n'
       << "threshold: " << format_double(r.threshold) << '\n'
       << "margin: " << format_double(r.margin) << '\n'
       << "tol: " << format_double(r.tol) << '\n'
       << "preconditions_met: " << (r.preconditions_met ? "true" : "false") << '\n';
    for (const auto& [key, value] : r.diagnostics) {
        os << "  " << key << ": " << format_double(value) << '\n';
    }
    for (const auto& note : r.notes) {
        os << "note: " << note << '\n';
    }
    return os.str();
}

std::string text_object(const json& j) {
    std::ostringstream os;
    for (const auto& [key, value] : j.items()) {
        os << key << ": " << (value.is_number_float() ? format_double(value.get<double>()) : value.dump()) << '\n';
    }
    return os.str();
}

// Subcommands --------------------------------------------------------------

Outcome run_invariants(const json& input, const Config& cfg) {
    MatH2 m = parse_matrix(input);
    require_nonsingular(m, "matrix");
    Outcome o;
    const bool member = in_sigma(m, cfg.shape_tol);
    json warnings = json::array();
    if (!member) {
        warnings.push_back("matrix is not in the determinant-one group (det = " + format_double(det(m)) + ")");
        if (cfg.normalize) {
            m = normalize_to_sigma(m);
            warnings.push_back("output computed for the normalized matrix");
        }
    }
    const InvariantSet inv = invariants(m);
    o.out = inv;
    o.out["det"] = det(m);
    o.out["in_sigma"] = in_sigma(m, cfg.shape_tol);
    o.out["input_in_sigma"] = member;
    o.out["normalized"] = !member && cfg.normalize;
    o.out["matrix"] = m;
    o.out["warnings"] = warnings;
    for (const auto& w : warnings) {
        o.summary += "warning: " + w.get<std::string>() + "\n";
    }
    json flat = inv;
    flat["det"] = det(m);
    flat["in_sigma"] = o.out["in_sigma"];
    o.text = text_object(flat);
    return o;
}

Outcome run_classify(const json& input, const Config& cfg) {
    MatH2 m = parse_matrix(input);
    require_nonsingular(m, "matrix");
    if (cfg.normalize && !in_sigma(m, cfg.shape_tol)) {
        m = normalize_to_sigma(m);
    }
    Outcome o;
    const IsometryClass cls = classify_normal_form(m, cfg.shape_tol);
    o.out["class"] = std::string(to_string(cls));
    if (is_upper(m, cfg.shape_tol) && in_sigma(m, cfg.shape_tol)) {
        const FixedPoints fp = fixed_points_normal_form(m, cfg.shape_tol);
        if (fp.all_points) {
            o.out["fixed_points"] = "all";
        } else {
            o.out["fixed_points"] = fp.points;
        }
    } else {
        o.out["fixed_points"] = nullptr;
    }
    o.text = "class: " + o.out["class"].get<std::string>() + "\nfixed_points: " + o.out["fixed_points"].dump() + "\n";
    return o;
}

TestReport dispatch_test(const MatrixPair& p, const Config& cfg) {
    const TestOptions opts = test_options(cfg);
    const double st = cfg.shape_tol;
    const MatH2& s = p.s;
    const MatH2& t = p.t;
    std::string sel = cfg.selector;
    if (sel == "auto") {
        if (is_diagonal(t, st)) {
            sel = "jss";
        } else if (is_upper(t, st)) {
            const bool re_zero = std::abs(re(t.a)) <= st && std::abs(re(t.d)) <= st;
            sel = (re_zero || s_value(t.a, t.d) <= st) ? "rez" : "jg";
        } else if (is_lower(t, st)) {
            sel = "jlt";
        } else {
            throw CliError(kExitUsage, "T matches no shape gate (diagonal, upper or lower triangular)");
        }
    }
    auto need = [&](bool ok, const char* shape) {
        if (!ok) {
            throw CliError(kExitUsage, "test '" + sel + "' requires " + shape + " T");
        }
    };
    if (sel == "jss" || sel == "jss2" || sel == "jssc2" || sel == "extreme" || sel == "jh") {
        need(is_diagonal(t, st), "diagonal");
        if (sel == "jss") return jss_test(s, t, opts);
        if (sel == "jss2") return jss2_test(s, t, opts);
        if (sel == "jssc2") return jssc2_test(s, t, opts);
        if (sel == "jh") return hyperbolic_commutator_test(t, s, opts);
        return extremality_criteria(s, t, opts);
    }
    if (sel == "jg" || sel == "rez" || sel == "eta" || sel == "wat") {
        need(is_upper(t, st), "upper-triangular");
        if (sel == "jg") return jg_test(s, t, opts);
        if (sel == "rez") return rez_test(s, t, opts);
        if (sel == "eta") return eta_normalized_test(s, t, opts);
        return waterman_test(s, t, opts);
    }
    if (sel == "jlt") {
        need(is_lower(t, st), "lower-triangular");
        return jlt_test(s, t, opts, cfg.pivot == "c" ? JltPivot::C : JltPivot::B);
    }
    if (sel == "nonext") {
        need(is_upper(t, st) || is_lower(t, st), "triangular");
        return non_extreme_tau_test(s, t, is_upper(t, st) ? TriangularSide::Upper : TriangularSide::Lower, opts);
    }
    throw CliError(kExitUsage, "unknown test '" + sel + "'");
}

Outcome report_outcome(const TestReport& r, const std::vector<std::string>& warnings) {
    Outcome o;
    o.out = r;
    o.text = text_report(r);
    o.code = exit_for(r.verdict);
    for (const auto& w : warnings) {
        o.summary += "warning: " + w + "\n";
    }
    return o;
}

Outcome run_test(const json& input, const Config& cfg) {
    std::vector<std::string> warnings;
    const MatrixPair p = prepare_pair(input, cfg, warnings);
    return report_outcome(dispatch_test(p, cfg), warnings);
}

IterationMode resolve_mode(const std::string& mode, const MatH2& t, double tol) {
    if (mode == "diagonal") return IterationMode::Diagonal;
    if (mode == "upper") return IterationMode::Upper;
    if (mode == "lower") return IterationMode::Lower;
    return mode_for(t, tol);
}

Outcome run_extreme(const json& input, const Config& cfg) {
    std::vector<std::string> warnings;
    const MatrixPair p = prepare_pair(input, cfg, warnings);
    const TestOptions opts = test_options(cfg);
    const double st = cfg.shape_tol;
    const MatH2& s = p.s;
    const MatH2& t = p.t;

    TestReport criteria;
    IterationMode mode;
    if (is_diagonal(t, st)) {
        criteria = extremality_criteria(s, t, opts);
        mode = IterationMode::Diagonal;
    } else if (is_upper(t, st) || is_lower(t, st)) {
        const bool upper = is_upper(t, st);
        criteria = non_extreme_tau_test(s, t, upper ? TriangularSide::Upper : TriangularSide::Lower, opts);
        mode = upper ? IterationMode::Upper : IterationMode::Lower;
    } else {
        throw CliError(kExitUsage, "T matches no shape gate (diagonal, upper or lower triangular)");
    }

    Verdict overall = criteria.verdict;
    json out{{"criteria", criteria}};
    if (criteria.verdict != Verdict::NotExtreme && criteria.verdict != Verdict::Obstruction) {
        const TestReport inv = extremal_invariance_check(s, t, cfg.steps, mode, opts);
        out["invariance"] = inv;
        if (mode == IterationMode::Diagonal) {
            if (criteria.verdict == Verdict::Extremal && inv.verdict != Verdict::Extremal) {
                overall = Verdict::Inconclusive;
            }
        } else {
            overall = inv.verdict;
        }
        Outcome o = report_outcome(criteria, warnings);
        o.text += "\n" + text_report(inv);
        o.out = out;
        o.out["verdict"] = std::string(to_string(overall));
        o.text += "\noverall: " + std::string(to_string(overall)) + "\n";
        o.code = exit_for(overall);
        return o;
    }
    Outcome o = report_outcome(criteria, warnings);
    o.out = out;
    o.out["verdict"] = std::string(to_string(overall));
    o.text += "\noverall: " + std::string(to_string(overall)) + "\n";
    return o;
}

Outcome run_iterate(const json& input, const Config& cfg, bool batch) {
    if (cfg.steps < 1) {
        throw CliError(kExitUsage, "--steps must be at least 1");
    }
    std::vector<std::string> warnings;
    const MatrixPair p = prepare_pair(input, cfg, warnings);
    IterationOptions iopts;
    iopts.tol = cfg.shape_tol;
    const IterationMode mode = resolve_mode(cfg.mode, p.t, cfg.shape_tol);
    const IterationTrace trace = iterate(p.s, p.t, cfg.steps, mode, iopts);
    const ConvergenceResult conv = classify_convergence(trace, iopts, cfg.tol);
    const RecurrenceCheck rec = verify_recurrence(trace);

    Outcome o;
    for (const auto& w : warnings) {
        o.summary += "warning: " + w + "\n";
    }
    o.summary += "verdict: " + std::string(to_string(conv.verdict)) + " rate=" + format_double(conv.rate) +
                 " extremal_variation=" + format_double(conv.extremal_variation) +
                 " recurrence_deviation=" + format_double(rec.max_deviation) +
                 " steps=" + std::to_string(trace.steps.back().n);
    if (trace.truncated) {
        o.summary += " truncated=\"" + trace.truncation_reason + "\"";
    }
    o.summary += "\n";

    const std::string fmt = cfg.format.empty() ? (batch ? "json" : "csv") : cfg.format;
    if (fmt == "json" || batch) {
        o.out = trace_to_json(trace);
        o.out["convergence"] = conv;
        o.out["recurrence"] = {{"passed", rec.passed}, {"max_deviation", rec.max_deviation}};
    } else {
        std::ostringstream os;
        write_trace_csv(os, trace, cfg.full);
        o.text = os.str();
        if (fmt == "text") {
            std::replace(o.text.begin(), o.text.end(), ',', '\t');
        }
    }
    return o;
}

Outcome run_one(const std::string& cmd, const json& input, const Config& cfg, bool batch) {
    if (cmd == "invariants") return run_invariants(input, cfg);
    if (cmd == "classify") return run_classify(input, cfg);
    if (cmd == "test") return run_test(input, cfg);
    if (cmd == "extreme") return run_extreme(input, cfg);
    return run_iterate(input, cfg, batch);
}

// Maps library exceptions to exit codes.
Outcome guarded(const std::string& cmd, const std::string& text, const Config& cfg, bool batch) {
    try {
        return run_one(cmd, parse_json(text), cfg, batch);
    } catch (const CliError& e) {
        return {json{{"error", e.what()}, {"exit", e.code}}, "", std::string("error: ") + e.what() + "\n", e.code};
    } catch (const InputError& e) {
        return {json{{"error", e.what()}, {"exit", kExitUsage}}, "", std::string("error: ") + e.what() + "\n",
                kExitUsage};
    } catch (const std::exception& e) {
        const std::string msg = e.what();
        const int code = msg.find("singular") != std::string::npos ? kExitSingular : kExitUsage;
        return {json{{"error", msg}, {"exit", code}}, "", "error: " + msg + "\n", code};
    }
}

int run_batch(const std::string& cmd, const Config& cfg) {
    std::ifstream in(cfg.batch);
    if (!in) {
        std::cerr << "error: cannot open batch file '" << cfg.batch << "'\n";
        return kExitUsage;
    }
    std::vector<std::string> lines;
    for (std::string line; std::getline(in, line);) {
        if (line.find_first_not_of(" \t\r") != std::string::npos) {
            lines.push_back(line);
        }
    }
    std::vector<Outcome> results(lines.size());
    const std::size_t workers = std::max(1u, std::min<unsigned>(std::thread::hardware_concurrency(), 16u));
    std::vector<std::future<void>> tasks;
    for (std::size_t w = 0; w < workers; ++w) {
        tasks.push_back(std::async(std::launch::async, [&, w] {
            for (std::size_t i = w; i < lines.size(); i += workers) {
                results[i] = guarded(cmd, lines[i], cfg, true);
            }
        }));
    }
    for (auto& t : tasks) {
        t.get();
    }
    std::ostream* os = &std::cout;
    std::ofstream file;
    if (!cfg.output.empty()) {
        file.open(cfg.output);
        os = &file;
    }
    bool input_errors = false;
    for (std::size_t i = 0; i < results.size(); ++i) {
        json rec = results[i].out;
        rec["record"] = i;
        if (!rec.contains("exit")) {
            rec["exit"] = results[i].code;
        }
        input_errors = input_errors || results[i].out.contains("error");
        *os << rec.dump() << '\n';
    }
    return input_errors ? kExitUsage : kExitOk;
}

int run_single(const std::string& cmd, const Config& cfg) {
    std::string text;
    try {
        text = read_input(cfg.input);
    } catch (const CliError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return e.code;
    }
    const std::string fmt = cfg.format.empty() ? (cmd == "iterate" ? "csv" : "json") : cfg.format;
    if (fmt == "csv" && cmd != "iterate") {
        std::cerr << "error: --format csv applies to iterate only\n";
        return kExitUsage;
    }
    const Outcome o = guarded(cmd, text, cfg, false);
    std::cerr << o.summary;
    if (o.out.contains("error")) {
        return o.code;
    }
    std::ostream* os = &std::cout;
    std::ofstream file;
    if (!cfg.output.empty()) {
        file.open(cfg.output);
        if (!file) {
            std::cerr << "error: cannot write '" << cfg.output << "'\n";
            return kExitUsage;
        }
        os = &file;
    }
    if (fmt == "text" || (cmd == "iterate" && fmt == "csv")) {
        *os << o.text;
    } else {
        *os << o.out.dump(2) << '\n';
    }
    return o.code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Discreteness tests for two-generator subgroups of SL(2, H)"};
    app.require_subcommand(1);
    Config cfg;

    auto add_common = [&](CLI::App* sub, bool pair) {
        sub->add_option("input", cfg.input, pair ? "Pair JSON: file path, inline JSON, or - for stdin"
                                                 : "Matrix JSON: file path, inline JSON, or - for stdin");
        sub->add_option("--tol", cfg.tol, "Verdict tolerance")->capture_default_str();
        sub->add_option("--shape-tol", cfg.shape_tol, "Tolerance for shape and determinant gates")->capture_default_str();
        sub->add_option("--format", cfg.format, "Output format")->check(CLI::IsMember({"json", "csv", "text"}));
        sub->add_flag("--normalize", cfg.normalize, "Scale inputs to determinant one");
        sub->add_option("--batch", cfg.batch, "JSON-lines file of inputs, processed in parallel")->check(CLI::ExistingFile);
        sub->add_option("-o,--output", cfg.output, "Write output to a file");
    };

    auto* inv = app.add_subcommand("invariants", "Determinant and conjugacy invariants of a matrix");
    add_common(inv, false);
    auto* cls = app.add_subcommand("classify", "Classify a triangular matrix and list its fixed points");
    add_common(cls, false);
    auto* test = app.add_subcommand("test", "Run a discreteness test on a pair");
    add_common(test, true);
    test->add_option("--test", cfg.selector, "Test to run")
        ->check(CLI::IsMember({"auto", "jss", "jss2", "jssc2", "jh", "jg", "rez", "eta", "wat", "jlt", "extreme", "nonext"}))
        ->capture_default_str();
    test->add_option("--pivot", cfg.pivot, "Pivot entry of the lower-triangular test")
        ->check(CLI::IsMember({"b", "c"}))
        ->capture_default_str();
    auto* ext = app.add_subcommand("extreme", "Extremality criteria plus invariance along the iteration");
    add_common(ext, true);
    ext->add_option("--steps", cfg.steps, "Iteration steps")->capture_default_str();
    auto* itr = app.add_subcommand("iterate", "Shimizu-Leutbecher iteration trace");
    add_common(itr, true);
    itr->add_option("--steps", cfg.steps, "Iteration steps")->capture_default_str();
    itr->add_option("--mode", cfg.mode, "Iteration mode")
        ->check(CLI::IsMember({"auto", "diagonal", "upper", "lower"}))
        ->capture_default_str();
    itr->add_flag("--full", cfg.full, "Add the 16 entry coordinates to the CSV");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    const std::string cmd = app.get_subcommands().front()->get_name();
    if ((cmd == "iterate" || cmd == "extreme") && cfg.steps < 1) {
        std::cerr << "error: --steps must be at least 1\n";
        return kExitUsage;
    }
    if (!cfg.batch.empty()) {
        return run_batch(cmd, cfg);
    }
    return run_single(cmd, cfg);
}

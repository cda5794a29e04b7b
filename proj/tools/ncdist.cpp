// Batch CLI for noncommutative path/graph distances.
//
// Modes: solve, oracle, verify, enumerate, compare, geodesic.
// Exit codes: 0 success, 2 validation error, 3 verification failure,
// 4 oracle non-convergence.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ncdist/ncdist.hpp"

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitVerification = 3;
constexpr int kExitNonConvergence = 4;

struct CliError {
    int code;
    std::string message;
};

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.15g", v);
    return buf;
}

std::string fmt_vec(const std::vector<double>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) s += ',';
        s += fmt(v[i]);
    }
    return s;
}

// Minimal JSON emitter so numbers keep the documented 15-digit format.
struct Json {
    std::string text;
    bool first = true;

    void begin() { text += '{'; }
    void end() { text += '}'; }
    void key(const std::string& k) {
        if (!first) text += ',';
        first = false;
        text += '"' + k + "\":";
    }
    void str(const std::string& k, const std::string& v) {
        key(k);
        text += '"' + v + '"';
    }
    void num(const std::string& k, double v) {
        key(k);
        text += fmt(v);
    }
    void integer(const std::string& k, long long v) {
        key(k);
        text += std::to_string(v);
    }
    void boolean(const std::string& k, bool v) {
        key(k);
        text += v ? "true" : "false";
    }
    void num_array(const std::string& k, const std::vector<double>& v) {
        key(k);
        text += '[';
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (i) text += ',';
            text += fmt(v[i]);
        }
        text += ']';
    }
    void index_array(const std::string& k, const std::vector<std::size_t>& v) {
        key(k);
        text += '[';
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (i) text += ',';
            text += std::to_string(v[i]);
        }
        text += ']';
    }
    void raw(const std::string& k, const std::string& v) {
        key(k);
        text += v;
    }
};

std::vector<double> parse_numbers(const std::string& text) {
    std::string norm = text;
    for (char& c : norm)
        if (c == ',') c = ' ';
    std::istringstream in(norm);
    std::vector<double> out;
    std::string tok;
    while (in >> tok) {
        try {
            std::size_t pos = 0;
            const double v = std::stod(tok, &pos);
            if (pos != tok.size()) throw std::invalid_argument("");
            out.push_back(v);
        } catch (const std::exception&) {
            throw CliError{kExitValidation,
                           "non-numeric entry at index " + std::to_string(out.size() + 1)};
        }
    }
    return out;
}

ncdist::PathDiracOperator parse_weights(const std::string& text) {
    const std::vector<double> vals = parse_numbers(text);
    if (vals.empty()) throw CliError{kExitValidation, "empty weight list"};
    for (std::size_t i = 0; i < vals.size(); ++i)
        if (!(vals[i] > 0.0))
            throw CliError{kExitValidation,
                           "weight at index " + std::to_string(i + 1) + " must be positive"};
    try {
        return ncdist::PathDiracOperator(vals);
    } catch (const std::exception& e) {
        throw CliError{kExitValidation, e.what()};
    }
}

ncdist::GraphDiracOperator parse_matrix_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw CliError{kExitValidation, "cannot open matrix file: " + path};
    std::vector<std::vector<double>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        rows.push_back(parse_numbers(line));
    }
    const std::size_t n = rows.size();
    if (n == 0) throw CliError{kExitValidation, "empty matrix file"};
    std::vector<double> m(n * n);
    for (std::size_t i = 0; i < n; ++i) {
        if (rows[i].size() != n)
            throw CliError{kExitValidation,
                           "matrix row " + std::to_string(i + 1) + " has wrong length"};
        for (std::size_t j = 0; j < n; ++j) m[i * n + j] = rows[i][j];
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (m[i * n + i] != 0.0)
            throw CliError{kExitValidation, "matrix diagonal must be exactly zero"};
        for (std::size_t j = i + 1; j < n; ++j)
            if (std::abs(m[i * n + j] - m[j * n + i]) > 1e-12)
                throw CliError{kExitValidation, "matrix is not symmetric"};
    }
    try {
        return ncdist::GraphDiracOperator(n, std::move(m));
    } catch (const std::exception& e) {
        throw CliError{kExitValidation, e.what()};
    }
}

struct Options {
    std::string mode;
    std::string weights;
    std::string input_file;
    std::string matrix_file;
    std::string pair;
    std::string format = "text";
    bool all_candidates = false;
    bool no_prune = false;
    ncdist::OracleConfig oracle;
};

std::string pattern_text(const std::vector<std::size_t>& zeros) {
    std::string s;
    for (std::size_t i = 0; i < zeros.size(); ++i) {
        if (i) s += ',';
        s += std::to_string(zeros[i]);
    }
    return s;
}

std::string blocks_text(const std::vector<ncdist::Block>& blocks) {
    std::string s;
    for (std::size_t i = 0; i < blocks.size(); ++i) {
        if (i) s += ',';
        s += std::to_string(blocks[i].alpha) + "-" + std::to_string(blocks[i].beta);
    }
    return s;
}

std::string blocks_json(const std::vector<ncdist::Block>& blocks) {
    std::string s = "[";
    for (std::size_t i = 0; i < blocks.size(); ++i) {
        if (i) s += ',';
        s += "[" + std::to_string(blocks[i].alpha) + "," + std::to_string(blocks[i].beta) + "]";
    }
    return s + "]";
}

// One report for one weight vector; returns the process exit code.
int run_path_job(const Options& opt, const std::string& weight_text, std::string& out) {
    const bool json = opt.format == "json";
    ncdist::PathDiracOperator d = parse_weights(weight_text);

    if (opt.mode == "enumerate") {
        const auto patterns = ncdist::enumerate_patterns(d.order());
        if (json) {
            std::string s = "{\"input\":\"" + weight_text + "\",\"n\":" +
                            std::to_string(d.order()) + ",\"patterns\":[";
            for (std::size_t i = 0; i < patterns.size(); ++i) {
                if (i) s += ',';
                s += "[" + pattern_text(patterns[i].zeros) + "]";
            }
            out = s + "]}";
        } else {
            std::ostringstream s;
            s << "input: " << weight_text << "\nn: " << d.order()
              << "\ncount: " << patterns.size() << "\n";
            for (const auto& p : patterns) s << "pattern: [" << pattern_text(p.zeros) << "]\n";
            out = s.str();
        }
        return 0;
    }

    if (opt.mode == "oracle") {
        ncdist::OracleResult orc = ncdist::oracle_path(d, opt.oracle);
        if (json) {
            Json jw;
            jw.begin();
            jw.str("input", weight_text);
            jw.integer("n", static_cast<long long>(d.order()));
            jw.num("oracle", orc.value);
            jw.num_array("z", orc.argument);
            jw.num("feasibility_residual", orc.feasibility_residual);
            jw.boolean("converged", orc.converged);
            jw.integer("iterations", orc.iterations);
            jw.end();
            out = jw.text;
        } else {
            std::ostringstream s;
            s << "input: " << weight_text << "\nn: " << d.order() << "\noracle: " << fmt(orc.value)
              << "\nz: " << fmt_vec(orc.argument)
              << "\nfeasibility_residual: " << fmt(orc.feasibility_residual)
              << "\nconverged: " << (orc.converged ? "true" : "false")
              << "\niterations: " << orc.iterations << "\n";
            out = s.str();
        }
        return orc.converged ? 0 : kExitNonConvergence;
    }

    if (opt.mode == "geodesic") {
        double g = 0.0;
        for (double di : d.weights()) g += 1.0 / di;
        if (json)
            out = "{\"input\":\"" + weight_text + "\",\"n\":" + std::to_string(d.order()) +
                  ",\"geodesic\":" + fmt(g) + "}";
        else
            out = "input: " + weight_text + "\nn: " + std::to_string(d.order()) +
                  "\ngeodesic: " + fmt(g) + "\n";
        return 0;
    }

    // solve / verify / compare
    ncdist::SolveOptions sopts;
    sopts.prune = !opt.no_prune;
    sopts.collect_all = opt.all_candidates;
    ncdist::DistanceReport rep = ncdist::solve_path(d, sopts);

    std::optional<ncdist::OracleResult> orc;
    if (opt.mode == "compare") orc = ncdist::oracle_path(d, opt.oracle);

    if (json) {
        Json jw;
        jw.begin();
        jw.str("input", weight_text);
        jw.integer("n", static_cast<long long>(d.order()));
        jw.num("distance", rep.distance);
        jw.num_array("z", rep.optimal_z);
        jw.num_array("a", rep.optimal_a);
        jw.index_array("pattern", rep.pattern.zeros);
        jw.raw("blocks", blocks_json(rep.blocks));
        jw.num_array("block_values", rep.block_values);
        jw.num("geodesic", rep.geodesic);
        jw.raw("residuals", "{\"eigen\":" + fmt(rep.verification.eigen_residual) +
                                ",\"norm\":" + fmt(rep.verification.norm_deviation) +
                                ",\"bj\":" + fmt(rep.verification.bj_residual) + "}");
        jw.boolean("verified", rep.verification.passed);
        if (orc) {
            jw.num("oracle", orc->value);
            jw.num("gap", std::abs(rep.distance - orc->value));
            jw.boolean("oracle_converged", orc->converged);
        }
        if (opt.all_candidates) {
            std::string cands = "[";
            for (std::size_t i = 0; i < rep.all_candidates.size(); ++i) {
                const auto& c = rep.all_candidates[i];
                if (i) cands += ',';
                cands += "{\"pattern\":[" + pattern_text(c.pattern.zeros) +
                         "],\"objective\":" + fmt(c.objective) + ",\"z\":[";
                for (std::size_t k = 0; k < c.z.size(); ++k) {
                    if (k) cands += ',';
                    cands += fmt(c.z[k]);
                }
                cands += "]}";
            }
            jw.raw("candidates", cands + "]");
        }
        jw.end();
        out = jw.text;
    } else {
        std::ostringstream s;
        s << "input: " << weight_text << "\nn: " << d.order()
          << "\ndistance: " << fmt(rep.distance) << "\nz: " << fmt_vec(rep.optimal_z)
          << "\na: " << fmt_vec(rep.optimal_a) << "\npattern: [" << pattern_text(rep.pattern.zeros)
          << "]\nblocks: " << blocks_text(rep.blocks)
          << "\nblock_values: " << fmt_vec(rep.block_values)
          << "\ngeodesic: " << fmt(rep.geodesic)
          << "\nresidual_eigen: " << fmt(rep.verification.eigen_residual)
          << "\nresidual_norm: " << fmt(rep.verification.norm_deviation)
          << "\nresidual_bj: " << fmt(rep.verification.bj_residual)
          << "\nverified: " << (rep.verification.passed ? "true" : "false") << "\n";
        if (orc) {
            s << "oracle: " << fmt(orc->value) << "\ngap: " << fmt(std::abs(rep.distance - orc->value))
              << "\noracle_converged: " << (orc->converged ? "true" : "false") << "\n";
        }
        if (opt.all_candidates) {
            for (const auto& c : rep.all_candidates)
                s << "candidate: pattern=[" << pattern_text(c.pattern.zeros)
                  << "] objective=" << fmt(c.objective) << " z=" << fmt_vec(c.z) << "\n";
        }
        out = s.str();
    }

    if (!rep.verification.passed) return kExitVerification;
    if (orc && !orc->converged) return kExitNonConvergence;
    return 0;
}

int run_graph_job(const Options& opt, std::string& out) {
    const bool json = opt.format == "json";
    ncdist::GraphDiracOperator D = parse_matrix_file(opt.matrix_file);
    const std::vector<double> pair = parse_numbers(opt.pair);
    if (pair.size() != 2 || pair[0] < 1 || pair[1] < 1 || pair[0] > D.order() ||
        pair[1] > D.order())
        throw CliError{kExitValidation, "--pair must name two valid 1-based vertices"};
    const std::size_t i = static_cast<std::size_t>(pair[0]) - 1;
    const std::size_t j = static_cast<std::size_t>(pair[1]) - 1;

    if (opt.mode == "geodesic") {
        const double g = ncdist::geodesic(D, i, j);
        const bool inf = !std::isfinite(g);
        if (json)
            out = std::string("{\"n\":") + std::to_string(D.order()) + ",\"pair\":[" +
                  std::to_string(i + 1) + "," + std::to_string(j + 1) + "]," +
                  (inf ? "\"infinite\":true" : "\"geodesic\":" + fmt(g)) + "}";
        else
            out = "n: " + std::to_string(D.order()) + "\npair: " + std::to_string(i + 1) + "," +
                  std::to_string(j + 1) + "\ngeodesic: " + (inf ? "infinite" : fmt(g)) + "\n";
        return 0;
    }

    if (opt.mode == "oracle") {
        if (i == j) throw CliError{kExitValidation, "--pair vertices must differ"};
        ncdist::OracleResult orc = ncdist::oracle_graph(D, i, j, opt.oracle);
        if (json) {
            Json jw;
            jw.begin();
            jw.integer("n", static_cast<long long>(D.order()));
            jw.raw("pair", "[" + std::to_string(i + 1) + "," + std::to_string(j + 1) + "]");
            if (orc.infinite) {
                jw.boolean("infinite", true);
            } else {
                jw.num("oracle", orc.value);
                jw.num_array("a", orc.argument);
                jw.num("feasibility_residual", orc.feasibility_residual);
                jw.boolean("converged", orc.converged);
            }
            jw.end();
            out = jw.text;
            if (orc.infinite) return 0;
        } else {
            std::ostringstream s;
            s << "n: " << D.order() << "\npair: " << i + 1 << "," << j + 1 << "\n";
            if (orc.infinite) {
                s << "oracle: infinite\n";
                out = s.str();
                return 0;
            }
            s << "oracle: " << fmt(orc.value) << "\na: " << fmt_vec(orc.argument)
              << "\nfeasibility_residual: " << fmt(orc.feasibility_residual)
              << "\nconverged: " << (orc.converged ? "true" : "false") << "\n";
            out = s.str();
        }
        return orc.converged ? 0 : kExitNonConvergence;
    }

    throw CliError{kExitValidation, "mode '" + opt.mode + "' does not accept --matrix input"};
}

} // namespace

int main(int argc, char** argv) {
    Options opt;

    CLI::App app{"Exact and numerical noncommutative distances on weighted paths and graphs"};
    app.require_subcommand(1);

    long long seed_flag = -1;
    std::vector<CLI::App*> subs;
    for (const char* name : {"solve", "oracle", "verify", "enumerate", "compare", "geodesic"}) {
        CLI::App* sub = app.add_subcommand(name);
        sub->add_option("--weights", opt.weights, "inline comma/space separated path weights");
        sub->add_option("--input", opt.input_file, "file with one weight vector per line");
        sub->add_option("--matrix", opt.matrix_file, "file with a symmetric Dirac matrix");
        sub->add_option("--pair", opt.pair, "1-based vertex pair i,j for matrix modes");
        sub->add_option("--format", opt.format, "text|json")->check(CLI::IsMember({"text", "json"}));
        sub->add_flag("--all-candidates", opt.all_candidates, "list every viable candidate");
        sub->add_flag("--no-prune", opt.no_prune, "disable refinement pruning");
        sub->add_option("--seed", seed_flag, "oracle seed (overrides NCDIST_SEED)");
        sub->add_option("--restarts", opt.oracle.restarts, "oracle restarts");
        sub->add_option("--tol", opt.oracle.tolerance, "oracle feasibility tolerance");
        subs.push_back(sub);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) ? kExitValidation : 0;
    }
    opt.mode = app.get_subcommands().front()->get_name();

    if (seed_flag >= 0) {
        opt.oracle.seed = static_cast<std::uint64_t>(seed_flag);
    } else if (const char* env = std::getenv("NCDIST_SEED")) {
        opt.oracle.seed = std::strtoull(env, nullptr, 10);
    }

    try {
        const int sources = (!opt.weights.empty()) + (!opt.input_file.empty()) +
                            (!opt.matrix_file.empty());
        if (sources != 1)
            throw CliError{kExitValidation,
                           "exactly one of --weights, --input, --matrix is required"};

        if (!opt.matrix_file.empty()) {
            if (opt.pair.empty())
                throw CliError{kExitValidation, "--matrix requires --pair"};
            std::string out;
            const int code = run_graph_job(opt, out);
            std::cout << out << (opt.format == "json" ? "\n" : "");
            return code;
        }

        std::vector<std::string> jobs;
        if (!opt.weights.empty()) {
            jobs.push_back(opt.weights);
        } else {
            std::ifstream in(opt.input_file);
            if (!in) throw CliError{kExitValidation, "cannot open input file: " + opt.input_file};
            std::string line;
            while (std::getline(in, line))
                if (line.find_first_not_of(" \t\r") != std::string::npos) jobs.push_back(line);
            if (jobs.empty()) throw CliError{kExitValidation, "input file has no weight vectors"};
        }

        int worst = 0;
        const bool json = opt.format == "json";
        if (json && jobs.size() > 1) std::cout << "[";
        for (std::size_t k = 0; k < jobs.size(); ++k) {
            std::string out;
            const int code = run_path_job(opt, jobs[k], out);
            worst = std::max(worst, code);
            if (json) {
                if (k) std::cout << ",";
                std::cout << out;
            } else {
                if (k) std::cout << "\n";
                std::cout << out;
            }
        }
        if (json) std::cout << (jobs.size() > 1 ? "]\n" : "\n");
        return worst;
    } catch (const CliError& e) {
        std::cerr << "error: " << e.message << "\n";
        return e.code;
    } catch (const ncdist::weight_overflow_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    }
}

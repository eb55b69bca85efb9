#include "ssr/cli.hpp"

#include "ssr/io.hpp"
#include "ssr/torsion.hpp"

#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>

namespace ssr {

namespace {

struct Options {
    std::vector<std::string> positional;
    int cap = 256;
    std::uint64_t seed = 0x5eed5eedULL;
    int threads = 1;
    std::string trace_path;
    bool json = false;
    std::string level = "full";
    std::string dir = "catalog";
    std::string run_filter = "all";
    std::optional<std::string> backend_spec;
};

Options parse_options(const std::vector<std::string>& args, size_t from) {
    Options opt;
    for (size_t i = from; i < args.size(); ++i) {
        const std::string& a = args[i];
        auto need_value = [&](const char* flag) -> const std::string& {
            if (i + 1 >= args.size()) throw parse_error(std::string(flag) + " needs a value");
            return args[++i];
        };
        if (a == "--cap") opt.cap = std::stoi(need_value("--cap"));
        else if (a == "--seed") opt.seed = std::stoull(need_value("--seed"));
        else if (a == "--threads") opt.threads = std::stoi(need_value("--threads"));
        else if (a == "--trace") opt.trace_path = need_value("--trace");
        else if (a == "--json") opt.json = true;
        else if (a == "--level") opt.level = need_value("--level");
        else if (a == "--dir") opt.dir = need_value("--dir");
        else if (a == "--run") opt.run_filter = need_value("--run");
        else if (a == "--backend") opt.backend_spec = need_value("--backend");
        else if (a.rfind("--", 0) == 0) throw parse_error("unknown flag " + a);
        else opt.positional.push_back(a);
    }
    return opt;
}

Caps caps_from(const Options& opt) {
    Caps caps;
    caps.langton_iterations = opt.cap;
    caps.seed = opt.seed;
    caps.threads = opt.threads;
    return caps;
}

// "p-adic:5" or "t-adic:3"
Backend parse_backend_spec(const std::string& spec) {
    size_t colon = spec.find(':');
    if (colon == std::string::npos) throw parse_error("backend spec needs kind:prime");
    std::string kind = spec.substr(0, colon);
    std::int64_t p = std::stoll(spec.substr(colon + 1));
    if (kind == "p-adic") return Backend::padic(p);
    if (kind == "t-adic") return Backend::tadic(p);
    throw parse_error("unknown backend kind " + kind);
}

void check_backend(const Options& opt, const Backend& doc_backend) {
    if (!opt.backend_spec) return;
    if (!(parse_backend_spec(*opt.backend_spec) == doc_backend))
        throw parse_error("document backend " + doc_backend.str() +
                          " does not match --backend " + *opt.backend_spec);
}

std::string doc_kind(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw parse_error("cannot open " + path);
    std::string line;
    while (std::getline(in, line)) {
        std::istringstream is(line);
        std::string a, b, c;
        if (is >> a >> b >> c) {
            if (a != "ssreduce-doc" || b != "v1")
                throw parse_error(path + ": expected header 'ssreduce-doc v1 <kind>'");
            return c;
        }
        if (!a.empty() && a[0] != '#') throw parse_error(path + ": malformed header");
    }
    throw parse_error(path + ": empty document");
}

std::string dims_text(const std::vector<int>& dims) {
    std::ostringstream os;
    for (size_t i = 0; i < dims.size(); ++i) {
        if (i) os << ",";
        os << dims[i];
    }
    return os.str();
}

int cmd_snf(const Options& opt, std::ostream& out) {
    if (opt.positional.size() != 1) throw parse_error("snf needs one matrix file");
    MatrixDoc doc = load_matrix_file(opt.positional[0]);
    check_backend(opt, doc.backend);
    SmithDecomposition s = smith_normal_form(doc.matrix);
    out << "exponents (";
    for (size_t i = 0; i < s.exponents.size(); ++i) {
        if (i) out << ",";
        out << s.exponents[i];
    }
    out << ")\n";
    out << "free-cokernel-rank " << s.free_cokernel_rank << "\n";
    out << "left " << matrix_text(s.left) << "\n";
    out << "right " << matrix_text(s.right) << "\n";
    return 0;
}

int cmd_torsion(const Options& opt, std::ostream& out) {
    if (opt.positional.size() != 1) throw parse_error("torsion needs one matrix file");
    MatrixDoc doc = load_matrix_file(opt.positional[0]);
    check_backend(opt, doc.backend);
    ElementaryDivisors ed = elementary_divisors(doc.matrix);
    out << "elementary-divisors " << ed.torsion.str() << "\n";
    out << "free-rank " << ed.free_rank << "\n";
    out << "pure " << (ed.pure() ? 1 : 0) << "\n";
    FiltrationProfile prof = filtration_profiles(ed.torsion, doc.backend);
    out << "filtration-jumps (";
    for (size_t i = 0; i < prof.jump_levels.size(); ++i) {
        if (i) out << ",";
        out << prof.jump_levels[i];
    }
    out << ")\n";
    out << "graded-dims " << TorsionModule{prof.graded_first}.str() << "\n";
    out << "graded-iso-verified "
        << (graded_iso_check(ed.torsion, doc.backend, opt.seed).verified() ? 1 : 0) << "\n";
    return 0;
}

RepF residue_rep_from(const Options& opt, const std::string& path) {
    RepDoc doc = load_rep_file(path);
    check_backend(opt, doc.backend);
    if (!doc.over_residue)
        throw parse_error(path + ": this command needs a representation over the residue field");
    return doc.residue_rep;
}

int cmd_hn(const Options& opt, std::ostream& out) {
    if (opt.positional.size() != 2) throw parse_error("hn needs a rep file and a stability file");
    RepF rep = residue_rep_from(opt, opt.positional[0]);
    StabilityData s = load_stability_file(opt.positional[1]);
    HNFiltration hn = hn_filtration(rep, s, caps_from(opt));
    out << "steps " << hn.steps.size() << "\n";
    for (size_t i = 0; i < hn.steps.size(); ++i)
        out << "step " << (i + 1) << " dims " << dims_text(hn.steps[i].dims()) << " slope "
            << hn.slopes[i].str() << "\n";
    out << "semistable " << (hn.one_step() ? 1 : 0) << "\n";
    return 0;
}

int cmd_semistable(const Options& opt, std::ostream& out) {
    if (opt.positional.size() != 2)
        throw parse_error("semistable needs a rep file and a stability file");
    RepF rep = residue_rep_from(opt, opt.positional[0]);
    StabilityData s = load_stability_file(opt.positional[1]);
    int level = (opt.level == "full") ? LEVEL_FULL : std::stoi(opt.level);
    SemistabilityVerdict v = is_semistable(rep, s, level, caps_from(opt));
    out << "semistable " << (v.semistable ? 1 : 0) << "\n";
    out << "codimension " << semistable_codimension(rep, s, caps_from(opt)) << "\n";
    if (v.witness) {
        out << "witness-dims " << dims_text(v.witness->dims()) << "\n";
        out << "witness-slope " << slope_of_dims(v.witness->dims(), s).str() << "\n";
    }
    return 0;
}

int cmd_langton(const Options& opt, std::ostream& out) {
    if (opt.positional.size() != 2)
        throw parse_error("langton needs a model (or rep) file and a stability file");
    const std::string& path = opt.positional[0];
    StabilityData s = load_stability_file(opt.positional[1]);
    Caps caps = caps_from(opt);

    LangtonTrace trace;
    Backend backend = Backend::padic(5);
    std::string kind = doc_kind(path);
    if (kind == "model") {
        ModelDoc doc = load_model_file(path);
        check_backend(opt, doc.backend);
        backend = doc.backend;
        trace = langton_run_from(doc.model, s, caps);
    } else if (kind == "rep") {
        RepDoc doc = load_rep_file(path);
        check_backend(opt, doc.backend);
        if (doc.over_residue)
            throw parse_error(path + ": langton needs a representation over K");
        backend = doc.backend;
        trace = langton_run(doc.rep, s, caps);
    } else {
        throw parse_error(path + ": langton expects a model or rep document");
    }

    if (!opt.trace_path.empty()) {
        if (opt.trace_path == "-") {
            write_trace(out, trace, backend);
            return trace.terminated() ? 0 : 4;
        }
        std::ofstream tf(opt.trace_path);
        if (!tf) throw parse_error("cannot write trace to " + opt.trace_path);
        write_trace(tf, trace, backend);
    }
    if (opt.json) {
        out << trace_json(trace, backend) << "\n";
    } else {
        out << "status " << to_string(trace.status) << "\n";
        out << "flips " << trace.steps.size() << "\n";
        out << "final-codim " << trace.final_codimension << "\n";
        if (trace.periodic) out << "periodic 1\n";
        if (trace.stalled) out << "stalled 1\n";
    }
    return trace.terminated() ? 0 : 4;
}

int cmd_sequiv(const Options& opt, std::ostream& out) {
    if (opt.positional.size() != 3)
        throw parse_error("sequiv needs two model files and a stability file");
    ModelDoc m1 = load_model_file(opt.positional[0]);
    ModelDoc m2 = load_model_file(opt.positional[1]);
    check_backend(opt, m1.backend);
    check_backend(opt, m2.backend);
    if (m1.model.rep.dims != m2.model.rep.dims || !(m1.model.rep.quiver == m2.model.rep.quiver))
        throw parse_error("sequiv needs two models with one dimension vector and quiver");
    StabilityData s = load_stability_file(opt.positional[2]);
    Caps caps = caps_from(opt);
    LangtonTrace r1 = langton_run_from(m1.model, s, caps);
    LangtonTrace r2 = langton_run_from(m2.model, s, caps);
    if (!r1.terminated() || !r2.terminated()) {
        out << "status cap-exceeded\n";
        return 4;
    }
    SEquivalenceCertificate cert = certify_s_equivalence(r1, r2, s, caps);
    out << "s-equivalent " << (cert.equivalent ? 1 : 0) << "\n";
    out << "rescale " << cert.comparison.rescale << "\n";
    out << "graded-levels " << cert.comparison.levels.size() << "\n";
    for (const auto& lv : cert.comparison.levels)
        out << "level " << lv.level << " dims " << dims_text(lv.graded_first.dims) << " iso "
            << (lv.iso_verified ? 1 : 0) << "\n";
    return cert.equivalent ? 0 : 1;
}

int cmd_detline(const Options& opt, std::ostream& out) {
    if (opt.positional.size() != 1) throw parse_error("detline needs one complex file");
    ComplexDoc doc = load_complex_file(opt.positional[0]);
    auto report = [&](auto& complex, const auto& samples) {
        out << "parity " << det_complex(complex).parity << "\n";
        out << "homology-dims";
        for (int j = 0; j < complex.terms(); ++j) out << " " << complex.homology_dim(j);
        out << "\n";
        bool exact = complex.is_exact();
        out << "exact " << (exact ? 1 : 0) << "\n";
        if (exact) out << "trivialization " << trivialize_acyclic(complex, samples).str() << "\n";
    };
    if (doc.rational) {
        std::vector<Rational> samples{Rational(0), Rational(1), Rational(-1), Rational(2),
                                      Rational(3), Rational(1, 2)};
        report(doc.over_q, samples);
    } else {
        std::vector<Fp> samples;
        for (std::int64_t v = 0; v < doc.p; ++v) samples.emplace_back(v, doc.p);
        report(doc.over_fp, samples);
    }
    return 0;
}

int cmd_catalog(const Options& opt, std::ostream& out, std::ostream& err) {
    std::string manifest_path = opt.dir + "/manifest.txt";
    std::ifstream mf(manifest_path);
    if (!mf) throw parse_error("cannot open catalog manifest " + manifest_path);
    std::string line;
    int failures = 0, executed = 0;
    while (std::getline(mf, line)) {
        size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        std::istringstream is(line);
        std::string family, expected_file;
        int expected_exit = 0;
        if (!(is >> family >> expected_file >> expected_exit)) continue;
        if (opt.run_filter != "all" && opt.run_filter != family) continue;
        std::vector<std::string> sub_args;
        std::string tok;
        while (is >> tok) {
            // paths in the manifest are relative to the catalog directory
            if (tok.rfind("cases/", 0) == 0) tok = opt.dir + "/" + tok;
            sub_args.push_back(tok);
        }
        ++executed;
        std::ostringstream sub_out, sub_err;
        int code = run_command(sub_args, sub_out, sub_err);
        std::ifstream gf(opt.dir + "/" + expected_file);
        std::stringstream golden;
        golden << gf.rdbuf();
        bool ok = gf.good() || !golden.str().empty();
        if (!gf && golden.str().empty()) ok = false;
        std::string got = sub_out.str();
        if (!ok) {
            ++failures;
            out << "FAIL " << family << " " << expected_file << " (missing golden)\n";
        } else if (code != expected_exit || got != golden.str()) {
            ++failures;
            out << "FAIL " << family << " " << expected_file << "\n";
            if (code != expected_exit)
                out << "  exit: expected " << expected_exit << ", got " << code << "\n";
            if (got != golden.str()) {
                out << "  expected:\n";
                std::istringstream e(golden.str());
                while (std::getline(e, line)) out << "  | " << line << "\n";
                out << "  actual:\n";
                std::istringstream a(got);
                while (std::getline(a, line)) out << "  | " << line << "\n";
            }
        } else {
            out << "PASS " << family << " " << expected_file << "\n";
        }
        (void)err;
    }
    out << executed - failures << "/" << executed << " catalog cases passed\n";
    return failures == 0 ? 0 : 1;
}

} // namespace

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    if (args.empty()) {
        err << "usage: ssreduce <snf|torsion|hn|semistable|langton|sequiv|detline|catalog> ...\n";
        return 2;
    }
    const std::string& cmd = args[0];
    try {
        Options opt = parse_options(args, 1);
        if (cmd == "snf") return cmd_snf(opt, out);
        if (cmd == "torsion") return cmd_torsion(opt, out);
        if (cmd == "hn") return cmd_hn(opt, out);
        if (cmd == "semistable") return cmd_semistable(opt, out);
        if (cmd == "langton") return cmd_langton(opt, out);
        if (cmd == "sequiv") return cmd_sequiv(opt, out);
        if (cmd == "detline") return cmd_detline(opt, out);
        if (cmd == "catalog") return cmd_catalog(opt, out, err);
        err << "unknown command " << cmd << "\n";
        return 2;
    } catch (const parse_error& e) {
        err << "parse error: " << e.what() << "\n";
        return 2;
    } catch (const not_integral_error& e) {
        err << "not integral: " << e.what() << "\n";
        return 3;
    } catch (const cap_exceeded_error& e) {
        err << "cap exceeded: " << e.what() << "\n";
        return 5;
    } catch (const error& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
}

} // namespace ssr

#include "ssr/io.hpp"

#include <fstream>
#include <json.hpp>
#include <map>
#include <sstream>

namespace ssr {

namespace {

std::vector<std::string> tokenize(const std::string& line) {
    std::istringstream is(line);
    std::vector<std::string> out;
    std::string tok;
    while (is >> tok) out.push_back(tok);
    return out;
}

// header + list of tokenized body lines, comments and blanks skipped
struct RawDoc {
    std::string kind;
    std::vector<std::vector<std::string>> lines;
};

RawDoc read_raw(std::istream& in) {
    RawDoc doc;
    std::string line;
    bool have_header = false;
    while (std::getline(in, line)) {
        size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        auto toks = tokenize(line);
        if (toks.empty()) continue;
        if (!have_header) {
            if (toks.size() != 3 || toks[0] != "ssreduce-doc" || toks[1] != "v1")
                throw parse_error("expected header 'ssreduce-doc v1 <kind>'");
            doc.kind = toks[2];
            have_header = true;
            continue;
        }
        doc.lines.push_back(std::move(toks));
    }
    if (!have_header) throw parse_error("empty document");
    return doc;
}

Backend parse_backend(const std::vector<std::string>& toks) {
    if (toks.size() != 3 || toks[0] != "backend")
        throw parse_error("expected 'backend p-adic|t-adic <prime>'");
    std::int64_t p = std::stoll(toks[2]);
    if (toks[1] == "p-adic") return Backend::padic(p);
    if (toks[1] == "t-adic") return Backend::tadic(p);
    throw parse_error("unknown backend kind " + toks[1]);
}

const std::vector<std::string>& find_line(const RawDoc& doc, const std::string& key) {
    for (const auto& l : doc.lines)
        if (l[0] == key) return l;
    throw parse_error("missing '" + key + "' line");
}

std::vector<std::vector<std::string>> find_all(const RawDoc& doc, const std::string& key) {
    std::vector<std::vector<std::string>> out;
    for (const auto& l : doc.lines)
        if (l[0] == key) out.push_back(l);
    return out;
}

struct RepSkeleton {
    Quiver quiver;
    std::vector<int> dims;
    std::vector<std::string> arrow_texts;
};

RepSkeleton parse_rep_skeleton(const RawDoc& doc) {
    RepSkeleton sk;
    sk.quiver.vertices = std::stoi(find_line(doc, "vertices")[1]);
    for (const auto& l : find_all(doc, "arrow")) {
        if (l.size() != 3) throw parse_error("arrow lines need source and target");
        sk.quiver.arrows.emplace_back(std::stoi(l[1]), std::stoi(l[2]));
    }
    const auto& dims_line = find_line(doc, "dims");
    for (size_t i = 1; i < dims_line.size(); ++i) sk.dims.push_back(std::stoi(dims_line[i]));
    sk.arrow_texts.resize(sk.quiver.arrows.size());
    for (const auto& l : find_all(doc, "arrowmat")) {
        if (l.size() != 3) throw parse_error("arrowmat lines need an index and entries");
        size_t idx = static_cast<size_t>(std::stoi(l[1]));
        if (idx >= sk.arrow_texts.size()) throw parse_error("arrowmat index out of range");
        sk.arrow_texts[idx] = l[2];
    }
    for (const auto& t : sk.arrow_texts)
        if (t.empty()) throw parse_error("missing arrowmat line");
    return sk;
}

} // namespace

std::string matrix_text(const MatK& m) {
    if (m.rows() == 0 || m.cols() == 0) return "-";
    std::ostringstream os;
    for (int i = 0; i < m.rows(); ++i) {
        if (i) os << ";";
        for (int j = 0; j < m.cols(); ++j) {
            if (j) os << ",";
            os << m.at(i, j).str();
        }
    }
    return os.str();
}

std::string matrix_text(const MatF& m) {
    if (m.rows() == 0 || m.cols() == 0) return "-";
    std::ostringstream os;
    for (int i = 0; i < m.rows(); ++i) {
        if (i) os << ";";
        for (int j = 0; j < m.cols(); ++j) {
            if (j) os << ",";
            os << m.at(i, j).value();
        }
    }
    return os.str();
}

namespace {

std::vector<std::vector<std::string>> split_matrix_text(const std::string& text) {
    std::vector<std::vector<std::string>> rows{{}};
    std::string cur;
    int depth = 0;
    auto push_entry = [&](std::vector<std::string>& row) {
        if (!cur.empty()) row.push_back(cur);
        cur.clear();
    };
    for (char ch : text) {
        if (ch == '(') ++depth;
        if (ch == ')') --depth;
        if (ch == ',' && depth == 0) {
            push_entry(rows.back());
        } else if (ch == ';' && depth == 0) {
            push_entry(rows.back());
            rows.emplace_back();
        } else {
            cur += ch;
        }
    }
    push_entry(rows.back());
    return rows;
}

} // namespace

MatK parse_matrix_text(const Backend& b, const std::string& text) {
    if (text == "-") return MatK(0, 0, Scalar::zero(b));
    auto rows = split_matrix_text(text);
    int r = static_cast<int>(rows.size());
    int c = static_cast<int>(rows[0].size());
    MatK m(r, c, Scalar::zero(b));
    for (int i = 0; i < r; ++i) {
        if (static_cast<int>(rows[static_cast<size_t>(i)].size()) != c)
            throw parse_error("ragged matrix rows in: " + text);
        for (int j = 0; j < c; ++j)
            m.at(i, j) = Scalar::parse(b, rows[static_cast<size_t>(i)][static_cast<size_t>(j)]);
    }
    return m;
}

MatF parse_residue_matrix_text(std::int64_t p, const std::string& text) {
    if (text == "-") return MatF(0, 0, Fp(0, p));
    auto rows = split_matrix_text(text);
    int r = static_cast<int>(rows.size());
    int c = static_cast<int>(rows[0].size());
    MatF m(r, c, Fp(0, p));
    for (int i = 0; i < r; ++i) {
        if (static_cast<int>(rows[static_cast<size_t>(i)].size()) != c)
            throw parse_error("ragged matrix rows in: " + text);
        for (int j = 0; j < c; ++j)
            try {
                m.at(i, j) =
                    Fp(std::stoll(rows[static_cast<size_t>(i)][static_cast<size_t>(j)]), p);
            } catch (const std::logic_error&) {
                throw parse_error("bad residue entry in: " + text);
            }
    }
    return m;
}

MatrixDoc load_matrix_doc(std::istream& in) {
    RawDoc raw = read_raw(in);
    if (raw.kind != "matrix") throw parse_error("expected a matrix document, got " + raw.kind);
    MatrixDoc doc{parse_backend(find_line(raw, "backend")), {}};
    doc.matrix = parse_matrix_text(doc.backend, find_line(raw, "entries")[1]);
    return doc;
}

RepDoc load_rep_doc(std::istream& in) {
    RawDoc raw = read_raw(in);
    if (raw.kind != "rep") throw parse_error("expected a rep document, got " + raw.kind);
    RepDoc doc{parse_backend(find_line(raw, "backend")), false, {}, {}};
    for (const auto& l : find_all(raw, "over"))
        if (l.size() == 2 && l[1] == "residue") doc.over_residue = true;
    RepSkeleton sk = parse_rep_skeleton(raw);
    if (doc.over_residue) {
        doc.residue_rep.quiver = sk.quiver;
        doc.residue_rep.dims = sk.dims;
        doc.residue_rep.proto = Fp(0, doc.backend.p);
        for (size_t a = 0; a < sk.arrow_texts.size(); ++a)
            doc.residue_rep.arrow_maps.push_back(
                parse_residue_matrix_text(doc.backend.p, sk.arrow_texts[a]));
        doc.residue_rep.validate();
    } else {
        doc.rep.quiver = sk.quiver;
        doc.rep.dims = sk.dims;
        doc.rep.proto = Scalar::zero(doc.backend);
        for (size_t a = 0; a < sk.arrow_texts.size(); ++a)
            doc.rep.arrow_maps.push_back(parse_matrix_text(doc.backend, sk.arrow_texts[a]));
        doc.rep.validate();
    }
    return doc;
}

ModelDoc load_model_doc(std::istream& in) {
    RawDoc raw = read_raw(in);
    if (raw.kind != "model") throw parse_error("expected a model document, got " + raw.kind);
    ModelDoc doc{parse_backend(find_line(raw, "backend")), {}};
    RepSkeleton sk = parse_rep_skeleton(raw);
    doc.model.rep.quiver = sk.quiver;
    doc.model.rep.dims = sk.dims;
    doc.model.rep.proto = Scalar::zero(doc.backend);
    for (size_t a = 0; a < sk.arrow_texts.size(); ++a)
        doc.model.rep.arrow_maps.push_back(parse_matrix_text(doc.backend, sk.arrow_texts[a]));
    std::vector<std::string> lattice_texts(static_cast<size_t>(sk.quiver.vertices));
    for (const auto& l : find_all(raw, "lattice")) {
        if (l.size() != 3) throw parse_error("lattice lines need a vertex and a basis");
        size_t v = static_cast<size_t>(std::stoi(l[1]));
        if (v >= lattice_texts.size()) throw parse_error("lattice vertex out of range");
        lattice_texts[v] = l[2];
    }
    for (int v = 0; v < sk.quiver.vertices; ++v) {
        if (lattice_texts[static_cast<size_t>(v)].empty())
            throw parse_error("missing lattice line for vertex " + std::to_string(v));
        MatK basis = parse_matrix_text(doc.backend, lattice_texts[static_cast<size_t>(v)]);
        doc.model.lattices.push_back(sk.dims[static_cast<size_t>(v)] == 0
                                         ? Lattice::standard(doc.backend, 0)
                                         : Lattice(basis));
    }
    doc.model.validate();
    return doc;
}

StabilityData load_stability_doc(std::istream& in) {
    RawDoc raw = read_raw(in);
    if (raw.kind != "stability")
        throw parse_error("expected a stability document, got " + raw.kind);
    StabilityData s;
    int vertices = std::stoi(find_line(raw, "vertices")[1]);
    for (const auto& l : find_all(raw, "theta")) {
        std::vector<std::int64_t> th;
        for (size_t i = 1; i < l.size(); ++i) th.push_back(std::stoll(l[i]));
        s.theta.push_back(std::move(th));
    }
    const auto& sig = find_line(raw, "sigma");
    for (size_t i = 1; i < sig.size(); ++i) s.sigma.push_back(std::stoll(sig[i]));
    s.validate(vertices);
    return s;
}

ComplexDoc load_complex_doc(std::istream& in) {
    RawDoc raw = read_raw(in);
    if (raw.kind != "complex") throw parse_error("expected a complex document, got " + raw.kind);
    ComplexDoc doc;
    const auto& field = find_line(raw, "field");
    if (field.size() >= 2 && field[1] == "rational") {
        doc.rational = true;
    } else if (field.size() >= 3 && field[1] == "prime") {
        doc.rational = false;
        doc.p = std::stoll(field[2]);
    } else {
        throw parse_error("field line must be 'field rational' or 'field prime <p>'");
    }
    int min_deg = std::stoi(find_line(raw, "mindeg")[1]);
    std::vector<int> dims;
    const auto& dims_line = find_line(raw, "dims");
    for (size_t i = 1; i < dims_line.size(); ++i) dims.push_back(std::stoi(dims_line[i]));
    std::vector<std::string> diff_texts(dims.empty() ? 0 : dims.size() - 1);
    for (const auto& l : find_all(raw, "diff")) {
        if (l.size() != 3) throw parse_error("diff lines need an index and entries");
        size_t idx = static_cast<size_t>(std::stoi(l[1]));
        if (idx >= diff_texts.size()) throw parse_error("diff index out of range");
        diff_texts[idx] = l[2];
    }
    auto parse_q = [&](const std::string& text, int rows, int cols) {
        if (text == "-" || text.empty()) return Mat<Rational>::zero(rows, cols, Rational(0));
        auto entries = split_matrix_text(text);
        Mat<Rational> m(rows, cols, Rational(0));
        for (int i = 0; i < rows; ++i)
            for (int j = 0; j < cols; ++j) {
                const std::string& e = entries[static_cast<size_t>(i)][static_cast<size_t>(j)];
                size_t slash = e.find('/');
                if (slash == std::string::npos)
                    m.at(i, j) = Rational(std::stoll(e));
                else
                    m.at(i, j) = Rational(std::stoll(e.substr(0, slash)),
                                          std::stoll(e.substr(slash + 1)));
            }
        return m;
    };
    if (doc.rational) {
        doc.over_q.min_deg = min_deg;
        doc.over_q.dims = dims;
        doc.over_q.proto = Rational(0);
        for (size_t j = 0; j + 1 < dims.size(); ++j)
            doc.over_q.diffs.push_back(parse_q(diff_texts[j], dims[j + 1], dims[j]));
        doc.over_q.validate();
    } else {
        doc.over_fp.min_deg = min_deg;
        doc.over_fp.dims = dims;
        doc.over_fp.proto = Fp(0, doc.p);
        for (size_t j = 0; j + 1 < dims.size(); ++j)
            doc.over_fp.diffs.push_back(
                diff_texts[j].empty() || diff_texts[j] == "-"
                    ? MatF::zero(dims[j + 1], dims[j], Fp(0, doc.p))
                    : parse_residue_matrix_text(doc.p, diff_texts[j]));
        doc.over_fp.validate();
    }
    return doc;
}

void write_matrix_doc(std::ostream& out, const Backend& b, const MatK& m) {
    out << "ssreduce-doc v1 matrix\n";
    out << "backend " << (b.kind == BackendKind::padic ? "p-adic" : "t-adic") << " " << b.p
        << "\n";
    out << "rows " << m.rows() << "\ncols " << m.cols() << "\n";
    out << "entries " << matrix_text(m) << "\n";
}

namespace {

void write_rep_body(std::ostream& out, const Quiver& q, const std::vector<int>& dims) {
    out << "vertices " << q.vertices << "\n";
    for (auto [s, t] : q.arrows) out << "arrow " << s << " " << t << "\n";
    out << "dims";
    for (int d : dims) out << " " << d;
    out << "\n";
}

void write_backend(std::ostream& out, const Backend& b) {
    out << "backend " << (b.kind == BackendKind::padic ? "p-adic" : "t-adic") << " " << b.p
        << "\n";
}

} // namespace

void write_rep_doc(std::ostream& out, const RepK& rep) {
    out << "ssreduce-doc v1 rep\n";
    write_backend(out, rep.proto.backend());
    out << "over K\n";
    write_rep_body(out, rep.quiver, rep.dims);
    for (size_t a = 0; a < rep.arrow_maps.size(); ++a)
        out << "arrowmat " << a << " " << matrix_text(rep.arrow_maps[a]) << "\n";
}

void write_residue_rep_doc(std::ostream& out, const RepF& rep) {
    out << "ssreduce-doc v1 rep\n";
    out << "backend p-adic " << rep.proto.prime() << "\n";
    out << "over residue\n";
    write_rep_body(out, rep.quiver, rep.dims);
    for (size_t a = 0; a < rep.arrow_maps.size(); ++a)
        out << "arrowmat " << a << " " << matrix_text(rep.arrow_maps[a]) << "\n";
}

void write_model_doc(std::ostream& out, const LatticeModel& model) {
    out << "ssreduce-doc v1 model\n";
    write_backend(out, model.backend());
    write_rep_body(out, model.rep.quiver, model.rep.dims);
    for (size_t a = 0; a < model.rep.arrow_maps.size(); ++a)
        out << "arrowmat " << a << " " << matrix_text(model.rep.arrow_maps[a]) << "\n";
    for (size_t v = 0; v < model.lattices.size(); ++v)
        out << "lattice " << v << " " << matrix_text(model.lattices[v].basis()) << "\n";
}

void write_stability_doc(std::ostream& out, const StabilityData& s, int vertices) {
    out << "ssreduce-doc v1 stability\n";
    out << "vertices " << vertices << "\n";
    for (const auto& th : s.theta) {
        out << "theta";
        for (auto x : th) out << " " << x;
        out << "\n";
    }
    out << "sigma";
    for (auto x : s.sigma) out << " " << x;
    out << "\n";
}

namespace {

std::string torsion_list_text(const std::vector<TorsionModule>& ts) {
    std::ostringstream os;
    for (size_t i = 0; i < ts.size(); ++i) {
        if (i) os << ",";
        os << ts[i].str();
    }
    return os.str();
}

} // namespace

void write_trace(std::ostream& out, const LangtonTrace& trace, const Backend& b) {
    out << "ssreduce-doc v1 trace\n";
    write_backend(out, b);
    out << "status " << to_string(trace.status) << "\n";
    out << "periodic " << (trace.periodic ? 1 : 0) << "\n";
    out << "stalled " << (trace.stalled ? 1 : 0) << "\n";
    out << "flips " << trace.steps.size() << "\n";
    for (const auto& s : trace.steps) {
        out << "step " << s.index << " codim " << s.codim_before << " level " << s.level_used
            << " advanced " << (s.level_advanced ? 1 : 0) << " destab-dims ";
        for (size_t i = 0; i < s.destab_dims.size(); ++i) {
            if (i) out << ",";
            out << s.destab_dims[i];
        }
        out << " destab-rank " << s.destab_rank << " destab-slope " << s.destab_slope.str()
            << " torsion " << torsion_list_text(s.step_torsion) << " exact "
            << (s.sequence_exact ? 1 : 0) << " pi-torsion " << (s.pi_torsion ? 1 : 0)
            << " hom-vanishes " << (s.hom_vanishes ? 1 : 0) << " nonsplit "
            << (s.nonsplit ? 1 : 0) << " lift-level-one " << (s.lift_level_one ? 1 : 0) << "\n";
    }
    out << "final-codim " << trace.final_codimension << "\n";
    out << "lex-semistable " << (trace.lex_semistable ? 1 : 0) << "\n";
    out << "codim-monotone " << (trace.codim_monotone ? 1 : 0) << "\n";
    out << "working-order-monotone " << (trace.working_order_monotone ? 1 : 0) << "\n";
    for (size_t v = 0; v < trace.final_model.lattices.size(); ++v)
        out << "final-lattice " << v << " " << matrix_text(trace.final_model.lattices[v].basis())
            << "\n";
    for (size_t a = 0; a < trace.final_reduction.arrow_maps.size(); ++a)
        out << "final-reduction " << a << " " << matrix_text(trace.final_reduction.arrow_maps[a])
            << "\n";
}

std::string trace_json(const LangtonTrace& trace, const Backend& b) {
    nlohmann::json j;
    j["backend"] = b.str();
    j["status"] = to_string(trace.status);
    j["periodic"] = trace.periodic;
    j["stalled"] = trace.stalled;
    j["final_codimension"] = trace.final_codimension;
    j["lex_semistable"] = trace.lex_semistable;
    j["codim_monotone"] = trace.codim_monotone;
    j["working_order_monotone"] = trace.working_order_monotone;
    j["steps"] = nlohmann::json::array();
    for (const auto& s : trace.steps) {
        nlohmann::json js;
        js["index"] = s.index;
        js["codim"] = s.codim_before;
        js["level"] = s.level_used;
        js["advanced"] = s.level_advanced;
        js["destab_dims"] = s.destab_dims;
        js["destab_rank"] = s.destab_rank;
        js["destab_slope"] = s.destab_slope.str();
        js["torsion"] = torsion_list_text(s.step_torsion);
        js["exact"] = s.sequence_exact;
        js["pi_torsion"] = s.pi_torsion;
        js["hom_vanishes"] = s.hom_vanishes;
        js["nonsplit"] = s.nonsplit;
        js["lift_level_one"] = s.lift_level_one;
        j["steps"].push_back(js);
    }
    j["final_lattices"] = nlohmann::json::array();
    for (const auto& l : trace.final_model.lattices)
        j["final_lattices"].push_back(matrix_text(l.basis()));
    j["final_reduction"] = nlohmann::json::array();
    for (const auto& m : trace.final_reduction.arrow_maps)
        j["final_reduction"].push_back(matrix_text(m));
    return j.dump(2);
}

namespace {

template <class T, class Loader>
T load_file(const std::string& path, Loader loader) {
    std::ifstream in(path);
    if (!in) throw parse_error("cannot open " + path);
    try {
        return loader(in);
    } catch (const parse_error& e) {
        throw parse_error(path + ": " + e.what());
    }
}

} // namespace

MatrixDoc load_matrix_file(const std::string& path) {
    return load_file<MatrixDoc>(path, [](std::istream& in) { return load_matrix_doc(in); });
}
RepDoc load_rep_file(const std::string& path) {
    return load_file<RepDoc>(path, [](std::istream& in) { return load_rep_doc(in); });
}
ModelDoc load_model_file(const std::string& path) {
    return load_file<ModelDoc>(path, [](std::istream& in) { return load_model_doc(in); });
}
StabilityData load_stability_file(const std::string& path) {
    return load_file<StabilityData>(path,
                                    [](std::istream& in) { return load_stability_doc(in); });
}
ComplexDoc load_complex_file(const std::string& path) {
    return load_file<ComplexDoc>(path, [](std::istream& in) { return load_complex_doc(in); });
}

} // namespace ssr

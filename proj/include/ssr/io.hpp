#pragma once

#include "ssr/det_lines.hpp"
#include "ssr/dvr.hpp"
#include "ssr/langton.hpp"
#include "ssr/lattice_model.hpp"
#include "ssr/quiver.hpp"

#include <iosfwd>
#include <string>
#include <variant>

namespace ssr {

// All documents share one structured text format with the versioned header
// line "ssreduce-doc v1 <kind>"; keys are whitespace-separated, matrix
// payloads are row-major with ';' between rows and ',' between entries, and
// "-" stands for a matrix with no entries.

std::string matrix_text(const MatK& m);
std::string matrix_text(const MatF& m);
MatK parse_matrix_text(const Backend& b, const std::string& text);
MatF parse_residue_matrix_text(std::int64_t p, const std::string& text);

struct MatrixDoc {
    Backend backend;
    MatK matrix;
};

struct RepDoc {
    Backend backend;
    bool over_residue = false;
    RepK rep;        // populated when over_residue is false
    RepF residue_rep; // populated when over_residue is true
};

struct ModelDoc {
    Backend backend;
    LatticeModel model;
};

struct ComplexDoc {
    bool rational = true;
    std::int64_t p = 2;
    BasedComplex<Rational> over_q;
    BasedComplex<Fp> over_fp;
};

MatrixDoc load_matrix_doc(std::istream& in);
RepDoc load_rep_doc(std::istream& in);
ModelDoc load_model_doc(std::istream& in);
StabilityData load_stability_doc(std::istream& in);
ComplexDoc load_complex_doc(std::istream& in);

void write_matrix_doc(std::ostream& out, const Backend& b, const MatK& m);
void write_rep_doc(std::ostream& out, const RepK& rep);
void write_residue_rep_doc(std::ostream& out, const RepF& rep);
void write_model_doc(std::ostream& out, const LatticeModel& model);
void write_stability_doc(std::ostream& out, const StabilityData& s, int vertices);

// trace serialization with a stable field order, for golden-file tests
void write_trace(std::ostream& out, const LangtonTrace& trace, const Backend& b);
std::string trace_json(const LangtonTrace& trace, const Backend& b);

// convenience file loaders; errors carry the path
MatrixDoc load_matrix_file(const std::string& path);
RepDoc load_rep_file(const std::string& path);
ModelDoc load_model_file(const std::string& path);
StabilityData load_stability_file(const std::string& path);
ComplexDoc load_complex_file(const std::string& path);

} // namespace ssr

#pragma once

#include "ssr/matrix.hpp"
#include "ssr/scalar.hpp"

#include <string>
#include <vector>

namespace ssr {

using MatK = Mat<Scalar>;
using MatF = Mat<Fp>;

// minimum valuation over all entries; VAL_INFINITY for the zero matrix
int min_valuation(const MatK& m);
bool all_integral(const MatK& m);

// entrywise reduction O -> F_p; error on a non-integral entry
MatF reduce_matrix(const MatK& m, std::int64_t p);
// entrywise canonical lift F_p -> O
MatK lift_matrix(const MatF& m, const Backend& b);

// U * A * V = diag(pi^e_1, ..., pi^e_r, 0, ...) with U, V unimodular over O
// and e_1 <= ... <= e_r.  Pivot rule: entry of minimal valuation, ties broken
// by lowest (row, col), so U and V are deterministic.
struct SmithDecomposition {
    MatK left;              // U, rows x rows
    MatK right;             // V, cols x cols
    std::vector<int> exponents; // e_1 <= ... <= e_r (zeros included)
    int rank = 0;
    int free_cokernel_rank = 0; // rows - rank

    MatK diagonal(const Backend& b, int rows, int cols) const;
};

SmithDecomposition smith_normal_form(const MatK& a);

// Column-style Hermite canonical form of a full-column-rank matrix over K:
// upper triangular after column permutation-free reduction, pivot of column
// j is pi^{e_j} on row j, and every entry above a pivot is the canonical
// representative mod that row's pivot.  Unique per lattice.
MatK hermite_column_form(const MatK& basis);

// Full-rank O-lattice in K^d, stored by its canonical Hermite basis.
class Lattice {
public:
    Lattice() = default;
    // basis columns must be K-linearly independent and span full rank
    explicit Lattice(const MatK& basis);

    static Lattice standard(const Backend& b, int dim); // O^d
    static Lattice scaled_standard(const Backend& b, int dim, int n); // pi^n O^d

    int dim() const { return basis_.rows(); }
    const MatK& basis() const { return basis_; }
    const Backend& backend() const { return basis_.proto().backend(); }

    // pivot exponent of column j
    int pivot_exponent(int j) const;

    friend bool operator==(const Lattice& a, const Lattice& b) { return a.basis_ == b.basis_; }

    Lattice scaled(int n) const; // pi^n L

    // coordinates of v (or of the columns of a matrix) in this basis
    MatK coordinates(const MatK& vectors) const;
    bool contains(const MatK& vectors) const;

    // least n >= any with pi^n * other <= this; 0 when already contained
    int rescale_exponent_for(const Lattice& other) const;

private:
    MatK basis_;
};

Lattice lattice_sum(const Lattice& a, const Lattice& b);
Lattice lattice_intersection(const Lattice& a, const Lattice& b);

// Finitely generated torsion O-module, canonically a sorted multiset of
// elementary-divisor exponents e_1 <= ... <= e_m, all >= 1.
struct TorsionModule {
    std::vector<int> exponents;

    int length() const {
        int s = 0;
        for (int e : exponents) s += e;
        return s;
    }
    int generators() const { return static_cast<int>(exponents.size()); }
    bool is_zero() const { return exponents.empty(); }
    friend bool operator==(const TorsionModule&, const TorsionModule&) = default;
    std::string str() const;
};

// exponent multiset of L2 / L1 for L1 <= L2; containment is checked and a
// failure reports the minimal rescale exponent
TorsionModule quotient_torsion(const Lattice& sub, const Lattice& ambient);

// torsion part and free rank of the cokernel of an integral presentation
struct ElementaryDivisors {
    TorsionModule torsion;
    int free_rank = 0;
    bool pure() const { return torsion.is_zero(); } // torsion-free cokernel
};

ElementaryDivisors elementary_divisors(const MatK& presentation);

// basis of the lattice { x in K^cols : A x in pi^level * O^rows } for an
// injective (full column rank) A
MatK preimage_lattice_basis(const MatK& a, int level);

} // namespace ssr

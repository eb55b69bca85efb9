#pragma once

#include "ssr/common.hpp"

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace ssr {

// Dense matrix over a field-like element type F.  F must provide +,-,*,/,
// unary -, is_zero(), zero(), one(), ==.  A prototype element is kept so
// empty matrices still know their field.
template <class F>
class Mat {
public:
    Mat() : rows_(0), cols_(0) {}
    Mat(int rows, int cols, const F& zero)
        : rows_(rows), cols_(cols), proto_(zero.zero()),
          data_(static_cast<size_t>(rows) * static_cast<size_t>(cols), zero.zero()) {}

    static Mat zero(int rows, int cols, const F& proto) { return Mat(rows, cols, proto.zero()); }
    static Mat identity(int n, const F& proto) {
        Mat m(n, n, proto.zero());
        for (int i = 0; i < n; ++i) m.at(i, i) = proto.one();
        return m;
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    const F& proto() const { return proto_; }

    F& at(int i, int j) { return data_[static_cast<size_t>(i) * cols_ + j]; }
    const F& at(int i, int j) const { return data_[static_cast<size_t>(i) * cols_ + j]; }

    bool is_zero() const {
        for (const auto& x : data_)
            if (!x.is_zero()) return false;
        return true;
    }

    friend Mat operator*(const Mat& a, const Mat& b) {
        if (a.cols_ != b.rows_) throw error("matrix product shape mismatch");
        Mat r(a.rows_, b.cols_, a.proto_);
        for (int i = 0; i < a.rows_; ++i)
            for (int k = 0; k < a.cols_; ++k) {
                const F& aik = a.at(i, k);
                if (aik.is_zero()) continue;
                for (int j = 0; j < b.cols_; ++j)
                    r.at(i, j) = r.at(i, j) + aik * b.at(k, j);
            }
        return r;
    }
    friend Mat operator+(const Mat& a, const Mat& b) {
        a.shape_check(b);
        Mat r = a;
        for (size_t i = 0; i < r.data_.size(); ++i) r.data_[i] = r.data_[i] + b.data_[i];
        return r;
    }
    friend Mat operator-(const Mat& a, const Mat& b) {
        a.shape_check(b);
        Mat r = a;
        for (size_t i = 0; i < r.data_.size(); ++i) r.data_[i] = r.data_[i] - b.data_[i];
        return r;
    }
    Mat operator-() const {
        Mat r = *this;
        for (auto& x : r.data_) x = -x;
        return r;
    }
    Mat scaled(const F& c) const {
        Mat r = *this;
        for (auto& x : r.data_) x = x * c;
        return r;
    }

    friend bool operator==(const Mat& a, const Mat& b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
    }

    Mat transpose() const {
        Mat r(cols_, rows_, proto_);
        for (int i = 0; i < rows_; ++i)
            for (int j = 0; j < cols_; ++j) r.at(j, i) = at(i, j);
        return r;
    }

    static Mat hconcat(const Mat& a, const Mat& b) {
        if (a.rows_ != b.rows_) throw error("hconcat shape mismatch");
        Mat r(a.rows_, a.cols_ + b.cols_, (a.rows_ > 0 && a.cols_ > 0) ? a.proto_ : b.proto_);
        for (int i = 0; i < a.rows_; ++i) {
            for (int j = 0; j < a.cols_; ++j) r.at(i, j) = a.at(i, j);
            for (int j = 0; j < b.cols_; ++j) r.at(i, a.cols_ + j) = b.at(i, j);
        }
        return r;
    }

    Mat columns(const std::vector<int>& idx) const {
        Mat r(rows_, static_cast<int>(idx.size()), proto_);
        for (int i = 0; i < rows_; ++i)
            for (size_t j = 0; j < idx.size(); ++j) r.at(i, static_cast<int>(j)) = at(i, idx[j]);
        return r;
    }

    Mat col(int j) const { return columns({j}); }

    template <class G>
    Mat<G> map(const std::function<G(const F&)>& fn, const G& proto) const {
        Mat<G> r(rows_, cols_, proto.zero());
        for (int i = 0; i < rows_; ++i)
            for (int j = 0; j < cols_; ++j) r.at(i, j) = fn(at(i, j));
        return r;
    }

    // --- Gaussian elimination over the field -------------------------------

    struct Echelon {
        Mat reduced;              // row-reduced echelon form
        std::vector<int> pivots;  // pivot column per pivot row
        int rank = 0;
    };

    Echelon rref() const {
        Echelon e{*this, {}, 0};
        Mat& m = e.reduced;
        int pr = 0;
        for (int c = 0; c < cols_ && pr < rows_; ++c) {
            int pivot = -1;
            for (int r = pr; r < rows_; ++r)
                if (!m.at(r, c).is_zero()) { pivot = r; break; }
            if (pivot < 0) continue;
            m.swap_rows(pr, pivot);
            F inv = proto_.one() / m.at(pr, c);
            for (int j = 0; j < cols_; ++j) m.at(pr, j) = m.at(pr, j) * inv;
            for (int r = 0; r < rows_; ++r) {
                if (r == pr || m.at(r, c).is_zero()) continue;
                F f = m.at(r, c);
                for (int j = 0; j < cols_; ++j) m.at(r, j) = m.at(r, j) - f * m.at(pr, j);
            }
            e.pivots.push_back(c);
            ++pr;
        }
        e.rank = pr;
        return e;
    }

    int rank() const { return rref().rank; }

    // reduced column echelon form: canonical basis of the column space,
    // lowest-index pivot row first
    Mat column_echelon() const {
        Echelon e = transpose().rref();
        Mat t(e.rank, rows_, proto_);
        for (int i = 0; i < e.rank; ++i)
            for (int j = 0; j < rows_; ++j) t.at(i, j) = e.reduced.at(i, j);
        return t.transpose();
    }

    // kernel basis as matrix columns (cols_ x nullity)
    Mat kernel() const {
        Echelon e = rref();
        std::vector<bool> is_pivot(static_cast<size_t>(cols_), false);
        for (int c : e.pivots) is_pivot[static_cast<size_t>(c)] = true;
        std::vector<int> free_cols;
        for (int c = 0; c < cols_; ++c)
            if (!is_pivot[static_cast<size_t>(c)]) free_cols.push_back(c);
        Mat k(cols_, static_cast<int>(free_cols.size()), proto_);
        for (size_t fi = 0; fi < free_cols.size(); ++fi) {
            int fc = free_cols[fi];
            k.at(fc, static_cast<int>(fi)) = proto_.one();
            for (int pr = 0; pr < e.rank; ++pr)
                k.at(e.pivots[static_cast<size_t>(pr)], static_cast<int>(fi)) = -e.reduced.at(pr, fc);
        }
        return k;
    }

    // solve A x = b for all columns of b; nullopt if inconsistent
    std::optional<Mat> solve(const Mat& b) const {
        if (b.rows_ != rows_) throw error("solve shape mismatch");
        Mat aug = hconcat(*this, b);
        Echelon e = aug.rref();
        // consistency: no pivot in the b-block
        for (int c : e.pivots)
            if (c >= cols_) return std::nullopt;
        Mat x(cols_, b.cols_, proto_);
        for (size_t pr = 0; pr < e.pivots.size(); ++pr)
            for (int j = 0; j < b.cols_; ++j)
                x.at(e.pivots[pr], j) = e.reduced.at(static_cast<int>(pr), cols_ + j);
        return x;
    }

    std::optional<Mat> inverse() const {
        if (rows_ != cols_) throw error("inverse of non-square matrix");
        Mat aug = hconcat(*this, identity(rows_, proto_));
        Echelon e = aug.rref();
        for (int i = 0; i < rows_; ++i)
            if (static_cast<size_t>(i) >= e.pivots.size() || e.pivots[static_cast<size_t>(i)] != i)
                return std::nullopt;
        Mat inv(rows_, rows_, proto_);
        for (int i = 0; i < rows_; ++i)
            for (int j = 0; j < rows_; ++j) inv.at(i, j) = e.reduced.at(i, cols_ + j);
        return inv;
    }

    F det() const {
        if (rows_ != cols_) throw error("determinant of non-square matrix");
        if (rows_ == 0) return proto_.one();
        Mat m = *this;
        F d = proto_.one();
        for (int c = 0; c < cols_; ++c) {
            int pivot = -1;
            for (int r = c; r < rows_; ++r)
                if (!m.at(r, c).is_zero()) { pivot = r; break; }
            if (pivot < 0) return proto_.zero();
            if (pivot != c) {
                m.swap_rows(c, pivot);
                d = -d;
            }
            d = d * m.at(c, c);
            F inv = proto_.one() / m.at(c, c);
            for (int r = c + 1; r < rows_; ++r) {
                if (m.at(r, c).is_zero()) continue;
                F f = m.at(r, c) * inv;
                for (int j = c; j < cols_; ++j) m.at(r, j) = m.at(r, j) - f * m.at(c, j);
            }
        }
        return d;
    }

    void swap_rows(int a, int b) {
        if (a == b) return;
        for (int j = 0; j < cols_; ++j) std::swap(at(a, j), at(b, j));
    }
    void swap_cols(int a, int b) {
        if (a == b) return;
        for (int i = 0; i < rows_; ++i) std::swap(at(i, a), at(i, b));
    }

private:
    void shape_check(const Mat& o) const {
        if (rows_ != o.rows_ || cols_ != o.cols_) throw error("matrix shape mismatch");
    }

    int rows_, cols_;
    F proto_;
    std::vector<F> data_;
};

// Does v lie in the column space of B?
template <class F>
bool in_column_space(const Mat<F>& basis, const Mat<F>& v) {
    return basis.solve(v).has_value();
}

// Columns of `whole` that are independent modulo the column space of `sub`:
// a representative basis of whole/sub.
template <class F>
Mat<F> quotient_representatives(const Mat<F>& sub, const Mat<F>& whole) {
    Mat<F> acc = sub;
    Mat<F> reps(whole.rows(), 0, whole.proto());
    int rank = acc.rank();
    for (int j = 0; j < whole.cols(); ++j) {
        Mat<F> trial = Mat<F>::hconcat(acc, whole.col(j));
        if (trial.rank() > rank) {
            acc = trial;
            ++rank;
            reps = Mat<F>::hconcat(reps, whole.col(j));
        }
    }
    return reps;
}

// Coordinates of v in the representative basis of whole/sub; nullopt when v
// does not lie in colspace(sub) + colspace(reps).
template <class F>
std::optional<Mat<F>> quotient_coordinates(const Mat<F>& sub, const Mat<F>& reps, const Mat<F>& v) {
    Mat<F> full = Mat<F>::hconcat(sub, reps);
    auto sol = full.solve(v);
    if (!sol) return std::nullopt;
    Mat<F> out(reps.cols(), v.cols(), v.proto());
    for (int i = 0; i < reps.cols(); ++i)
        for (int j = 0; j < v.cols(); ++j) out.at(i, j) = sol->at(sub.cols() + i, j);
    return out;
}

// All columns of inner inside the column space of outer?
template <class F>
bool subspace_contained(const Mat<F>& outer, const Mat<F>& inner) {
    if (inner.cols() == 0) return true;
    return outer.solve(inner).has_value();
}

} // namespace ssr

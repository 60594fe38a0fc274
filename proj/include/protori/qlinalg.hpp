#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "protori/arith.hpp"

namespace protori {

using QVec = std::vector<Rat>;
using QMat = std::vector<QVec>;   // row-major

bool qvec_is_zero(const QVec& v);
QVec qvec_add(const QVec& a, const QVec& b);
QVec qvec_sub(const QVec& a, const QVec& b);
QVec qvec_scale(const Rat& c, const QVec& v);
Rat qvec_dot(const QVec& a, const QVec& b);

QMat qmat_identity(std::size_t n);
QMat qmat_zero(std::size_t rows, std::size_t cols);
QVec qmat_apply(const QMat& m, const QVec& v);
QMat qmat_mul(const QMat& a, const QMat& b);
QMat qmat_scale(const Rat& c, const QMat& m);
Rat qmat_det(const QMat& m);
std::optional<QMat> qmat_inverse(const QMat& m);

// Reduced row echelon basis of the span of a list of vectors in Q^dim.
class Echelon {
public:
    Echelon() = default;
    Echelon(const std::vector<QVec>& vecs, std::size_t dim);

    std::size_t rank() const { return rows_.size(); }
    std::size_t dim() const { return dim_; }
    const std::vector<QVec>& rows() const { return rows_; }
    const std::vector<std::size_t>& pivots() const { return pivots_; }

    // v minus its span component determined at pivot coordinates; zero iff
    // v lies in the span.  Linear with kernel exactly the span.
    QVec residual(QVec v) const;
    bool contains(const QVec& v) const { return qvec_is_zero(residual(v)); }

private:
    std::vector<QVec> rows_;
    std::vector<std::size_t> pivots_;
    std::size_t dim_ = 0;
};

// Basis of {c : M c = 0} (vectors of length cols(M)).
std::vector<QVec> qmat_nullspace(const QMat& m);

// Any particular solution of sum_i c_i cols[i] = target, or nullopt.
std::optional<QVec> solve_columns(const std::vector<QVec>& cols, const QVec& target);

// For independent columns B (dim x r given as column vectors), a matrix P
// (r x dim) with P B = I_r; P is supported on the pivot rows of B.
QMat left_inverse_on_pivots(const std::vector<QVec>& basis_cols, std::size_t dim);

// Intersection of two spans, as an echelon basis.
Echelon span_intersection(const Echelon& a, const Echelon& b);

} // namespace protori

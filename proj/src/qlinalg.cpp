#include "protori/qlinalg.hpp"

namespace protori {

bool qvec_is_zero(const QVec& v) {
    for (const Rat& x : v)
        if (!x.is_zero()) return false;
    return true;
}

QVec qvec_add(const QVec& a, const QVec& b) {
    QVec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
    return r;
}

QVec qvec_sub(const QVec& a, const QVec& b) {
    QVec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
    return r;
}

QVec qvec_scale(const Rat& c, const QVec& v) {
    QVec r(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) r[i] = c * v[i];
    return r;
}

Rat qvec_dot(const QVec& a, const QVec& b) {
    Rat s;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

QMat qmat_identity(std::size_t n) {
    QMat m(n, QVec(n));
    for (std::size_t i = 0; i < n; ++i) m[i][i] = Rat(1);
    return m;
}

QMat qmat_zero(std::size_t rows, std::size_t cols) { return QMat(rows, QVec(cols)); }

QVec qmat_apply(const QMat& m, const QVec& v) {
    QVec r(m.size());
    for (std::size_t i = 0; i < m.size(); ++i) r[i] = qvec_dot(m[i], v);
    return r;
}

QMat qmat_mul(const QMat& a, const QMat& b) {
    QMat r(a.size(), QVec(b.empty() ? 0 : b[0].size()));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t k = 0; k < b.size(); ++k) {
            if (a[i][k].is_zero()) continue;
            for (std::size_t j = 0; j < b[k].size(); ++j) r[i][j] += a[i][k] * b[k][j];
        }
    return r;
}

QMat qmat_scale(const Rat& c, const QMat& m) {
    QMat r = m;
    for (auto& row : r)
        for (auto& x : row) x = c * x;
    return r;
}

Rat qmat_det(const QMat& m) {
    QMat a = m;
    std::size_t n = a.size();
    Rat det(1);
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        while (pivot < n && a[pivot][col].is_zero()) ++pivot;
        if (pivot == n) return Rat(0);
        if (pivot != col) {
            std::swap(a[pivot], a[col]);
            det = -det;
        }
        det *= a[col][col];
        Rat inv = Rat(1) / a[col][col];
        for (std::size_t i = col + 1; i < n; ++i) {
            if (a[i][col].is_zero()) continue;
            Rat factor = a[i][col] * inv;
            for (std::size_t j = col; j < n; ++j) a[i][j] -= factor * a[col][j];
        }
    }
    return det;
}

std::optional<QMat> qmat_inverse(const QMat& m) {
    std::size_t n = m.size();
    QMat a = m;
    QMat inv = qmat_identity(n);
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        while (pivot < n && a[pivot][col].is_zero()) ++pivot;
        if (pivot == n) return std::nullopt;
        std::swap(a[pivot], a[col]);
        std::swap(inv[pivot], inv[col]);
        Rat scale = Rat(1) / a[col][col];
        for (std::size_t j = 0; j < n; ++j) {
            a[col][j] *= scale;
            inv[col][j] *= scale;
        }
        for (std::size_t i = 0; i < n; ++i) {
            if (i == col || a[i][col].is_zero()) continue;
            Rat factor = a[i][col];
            for (std::size_t j = 0; j < n; ++j) {
                a[i][j] -= factor * a[col][j];
                inv[i][j] -= factor * inv[col][j];
            }
        }
    }
    return inv;
}

Echelon::Echelon(const std::vector<QVec>& vecs, std::size_t dim) : dim_(dim) {
    for (const QVec& v : vecs) {
        QVec r = residual(v);
        std::size_t pc = 0;
        while (pc < dim_ && r[pc].is_zero()) ++pc;
        if (pc == dim_) continue;   // dependent
        Rat inv = Rat(1) / r[pc];
        for (auto& x : r) x *= inv;
        // keep earlier rows reduced against the new pivot
        for (std::size_t i = 0; i < rows_.size(); ++i) {
            if (rows_[i][pc].is_zero()) continue;
            rows_[i] = qvec_sub(rows_[i], qvec_scale(rows_[i][pc], r));
        }
        std::size_t pos = 0;
        while (pos < pivots_.size() && pivots_[pos] < pc) ++pos;
        rows_.insert(rows_.begin() + pos, std::move(r));
        pivots_.insert(pivots_.begin() + pos, pc);
    }
}

QVec Echelon::residual(QVec v) const {
    for (std::size_t i = 0; i < rows_.size(); ++i) {
        const Rat& c = v[pivots_[i]];
        if (c.is_zero()) continue;
        v = qvec_sub(v, qvec_scale(c, rows_[i]));
    }
    return v;
}

std::vector<QVec> qmat_nullspace(const QMat& m) {
    if (m.empty()) return {};
    std::size_t rows = m.size(), cols = m[0].size();
    QMat a = m;
    std::vector<std::size_t> pivot_of_row;
    std::size_t row = 0;
    for (std::size_t col = 0; col < cols && row < rows; ++col) {
        std::size_t p = row;
        while (p < rows && a[p][col].is_zero()) ++p;
        if (p == rows) continue;
        std::swap(a[p], a[row]);
        Rat inv = Rat(1) / a[row][col];
        for (auto& x : a[row]) x *= inv;
        for (std::size_t i = 0; i < rows; ++i) {
            if (i == row || a[i][col].is_zero()) continue;
            Rat factor = a[i][col];
            for (std::size_t j = 0; j < cols; ++j) a[i][j] -= factor * a[row][j];
        }
        pivot_of_row.push_back(col);
        ++row;
    }
    std::vector<bool> is_pivot(cols, false);
    for (std::size_t pc : pivot_of_row) is_pivot[pc] = true;
    std::vector<QVec> basis;
    for (std::size_t free = 0; free < cols; ++free) {
        if (is_pivot[free]) continue;
        QVec v(cols);
        v[free] = Rat(1);
        for (std::size_t i = 0; i < pivot_of_row.size(); ++i)
            v[pivot_of_row[i]] = -a[i][free];
        basis.push_back(std::move(v));
    }
    return basis;
}

std::optional<QVec> solve_columns(const std::vector<QVec>& cols, const QVec& target) {
    std::size_t n = target.size(), m = cols.size();
    // augmented [cols | target], eliminate by rows
    QMat a(n, QVec(m + 1));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < m; ++j) a[i][j] = cols[j][i];
        a[i][m] = target[i];
    }
    std::vector<std::size_t> pivot_of_row;
    std::size_t row = 0;
    for (std::size_t col = 0; col < m && row < n; ++col) {
        std::size_t p = row;
        while (p < n && a[p][col].is_zero()) ++p;
        if (p == n) continue;
        std::swap(a[p], a[row]);
        Rat inv = Rat(1) / a[row][col];
        for (auto& x : a[row]) x *= inv;
        for (std::size_t i = 0; i < n; ++i) {
            if (i == row || a[i][col].is_zero()) continue;
            Rat factor = a[i][col];
            for (std::size_t j = col; j <= m; ++j) a[i][j] -= factor * a[row][j];
        }
        pivot_of_row.push_back(col);
        ++row;
    }
    for (std::size_t i = row; i < n; ++i)
        if (!a[i][m].is_zero()) return std::nullopt;
    QVec c(m);
    for (std::size_t i = 0; i < pivot_of_row.size(); ++i) c[pivot_of_row[i]] = a[i][m];
    return c;
}

QMat left_inverse_on_pivots(const std::vector<QVec>& basis_cols, std::size_t dim) {
    Echelon ech(basis_cols, dim);
    std::size_t r = basis_cols.size();
    if (ech.rank() != r) throw Error(errc::internal, "left inverse of dependent columns");
    const std::vector<std::size_t>& rows = ech.pivots();
    QMat s(r, QVec(r));
    for (std::size_t j = 0; j < r; ++j)
        for (std::size_t k = 0; k < r; ++k) s[j][k] = basis_cols[k][rows[j]];
    auto sinv = qmat_inverse(s);
    if (!sinv) throw Error(errc::internal, "pivot block not invertible");
    QMat p = qmat_zero(r, dim);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < r; ++j) p[i][rows[j]] = (*sinv)[i][j];
    return p;
}

Echelon span_intersection(const Echelon& a, const Echelon& b) {
    std::size_t dim = a.dim();
    if (a.rank() == 0 || b.rank() == 0) return Echelon({}, dim);
    // columns u_1..u_s, -v_1..-v_t; nullspace coefficients give intersection points
    QMat m(dim, QVec(a.rank() + b.rank()));
    for (std::size_t i = 0; i < dim; ++i) {
        for (std::size_t j = 0; j < a.rank(); ++j) m[i][j] = a.rows()[j][i];
        for (std::size_t j = 0; j < b.rank(); ++j) m[i][a.rank() + j] = -b.rows()[j][i];
    }
    std::vector<QVec> points;
    for (const QVec& c : qmat_nullspace(m)) {
        QVec x(dim);
        for (std::size_t j = 0; j < a.rank(); ++j)
            x = qvec_add(x, qvec_scale(c[j], a.rows()[j]));
        if (!qvec_is_zero(x)) points.push_back(std::move(x));
    }
    return Echelon(points, dim);
}

} // namespace protori

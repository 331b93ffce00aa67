#pragma once

#include "gendiv/ringmap.hpp"

namespace gendiv {

// Dense matrix over a polynomial ring. Rows × cols, row-major storage.
class PolyMatrix {
public:
    PolyMatrix() = default;
    PolyMatrix(const PolyRing& ring, size_t rows, size_t cols)
        : ring_(ring), rows_(rows), cols_(cols), data_(rows * cols, Polynomial::zero(ring)) {}

    static PolyMatrix identity(const PolyRing& ring, size_t n) {
        PolyMatrix m(ring, n, n);
        for (size_t i = 0; i < n; ++i) m.at(i, i) = Polynomial::constant(ring, 1);
        return m;
    }

    static PolyMatrix from_columns(const PolyRing& ring, size_t rows,
                                   const std::vector<std::vector<Polynomial>>& cols) {
        PolyMatrix m(ring, rows, cols.size());
        for (size_t j = 0; j < cols.size(); ++j) {
            if (cols[j].size() != rows) throw std::invalid_argument("column size mismatch");
            for (size_t i = 0; i < rows; ++i) m.at(i, j) = cols[j][i];
        }
        return m;
    }

    const PolyRing& ring() const { return ring_; }
    size_t rows() const { return rows_; }
    size_t cols() const { return cols_; }

    Polynomial& at(size_t r, size_t c) { return data_[r * cols_ + c]; }
    const Polynomial& at(size_t r, size_t c) const { return data_[r * cols_ + c]; }

    std::vector<Polynomial> column(size_t c) const {
        std::vector<Polynomial> v;
        for (size_t r = 0; r < rows_; ++r) v.push_back(at(r, c));
        return v;
    }

    std::vector<std::vector<Polynomial>> columns() const {
        std::vector<std::vector<Polynomial>> out;
        for (size_t c = 0; c < cols_; ++c) out.push_back(column(c));
        return out;
    }

    PolyMatrix mul(const PolyMatrix& o) const {
        if (cols_ != o.rows_) throw std::invalid_argument("matrix shape mismatch");
        PolyMatrix r(ring_, rows_, o.cols_);
        for (size_t i = 0; i < rows_; ++i)
            for (size_t j = 0; j < o.cols_; ++j) {
                Polynomial s(ring_);
                for (size_t k = 0; k < cols_; ++k) s = s + at(i, k) * o.at(k, j);
                r.at(i, j) = s;
            }
        return r;
    }

    std::vector<Polynomial> apply(const std::vector<Polynomial>& v) const {
        if (v.size() != cols_) throw std::invalid_argument("vector size mismatch");
        std::vector<Polynomial> r(rows_, Polynomial::zero(ring_));
        for (size_t i = 0; i < rows_; ++i)
            for (size_t k = 0; k < cols_; ++k) r[i] = r[i] + at(i, k) * v[k];
        return r;
    }

    PolyMatrix transpose() const {
        PolyMatrix r(ring_, cols_, rows_);
        for (size_t i = 0; i < rows_; ++i)
            for (size_t j = 0; j < cols_; ++j) r.at(j, i) = at(i, j);
        return r;
    }

    PolyMatrix sub(const PolyMatrix& o) const {
        if (rows_ != o.rows_ || cols_ != o.cols_) throw std::invalid_argument("shape mismatch");
        PolyMatrix r(ring_, rows_, cols_);
        for (size_t i = 0; i < data_.size(); ++i) r.data_[i] = data_[i] - o.data_[i];
        return r;
    }

    PolyMatrix mapped(const RingMap& f) const {
        PolyMatrix r(f.target().ambient(), rows_, cols_);
        for (size_t i = 0; i < rows_; ++i)
            for (size_t j = 0; j < cols_; ++j) r.at(i, j) = f.apply(at(i, j));
        return r;
    }

    PolyMatrix reduced(const QuotientRing& A) const {
        PolyMatrix r(ring_, rows_, cols_);
        for (size_t i = 0; i < rows_; ++i)
            for (size_t j = 0; j < cols_; ++j) r.at(i, j) = A.reduce(at(i, j));
        return r;
    }

    // determinant by Laplace expansion; desk-scale sizes only
    Polynomial determinant() const {
        if (rows_ != cols_) throw std::invalid_argument("determinant of non-square matrix");
        if (rows_ == 0) return Polynomial::constant(ring_, 1);
        if (rows_ == 1) return at(0, 0);
        Polynomial det(ring_);
        for (size_t j = 0; j < cols_; ++j) {
            if (at(0, j).is_zero()) continue;
            PolyMatrix minor(ring_, rows_ - 1, cols_ - 1);
            for (size_t i = 1; i < rows_; ++i) {
                size_t cc = 0;
                for (size_t c = 0; c < cols_; ++c) {
                    if (c == j) continue;
                    minor.at(i - 1, cc++) = at(i, c);
                }
            }
            Polynomial term = at(0, j) * minor.determinant();
            det = (j % 2 == 0) ? det + term : det - term;
        }
        return det;
    }

    // all k×k minors
    std::vector<Polynomial> minors(size_t k) const {
        std::vector<Polynomial> out;
        if (k == 0) {
            out.push_back(Polynomial::constant(ring_, 1));
            return out;
        }
        if (k > rows_ || k > cols_) return out;
        std::vector<size_t> ri(k), ci(k);
        auto rec_cols = [&](auto&& self, size_t pos, size_t start) -> void {
            if (pos == k) {
                PolyMatrix m(ring_, k, k);
                for (size_t a = 0; a < k; ++a)
                    for (size_t b = 0; b < k; ++b) m.at(a, b) = at(ri[a], ci[b]);
                out.push_back(m.determinant());
                return;
            }
            for (size_t c = start; c < cols_; ++c) {
                ci[pos] = c;
                self(self, pos + 1, c + 1);
            }
        };
        auto rec_rows = [&](auto&& self, size_t pos, size_t start) -> void {
            if (pos == k) {
                rec_cols(rec_cols, 0, 0);
                return;
            }
            for (size_t r = start; r < rows_; ++r) {
                ri[pos] = r;
                self(self, pos + 1, r + 1);
            }
        };
        rec_rows(rec_rows, 0, 0);
        return out;
    }

    bool operator==(const PolyMatrix& o) const {
        return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
    }

    std::string to_string() const {
        std::string s = "[";
        for (size_t i = 0; i < rows_; ++i) {
            if (i) s += "; ";
            for (size_t j = 0; j < cols_; ++j) {
                if (j) s += ", ";
                s += at(i, j).to_string();
            }
        }
        return s + "]";
    }

private:
    PolyRing ring_;
    size_t rows_ = 0;
    size_t cols_ = 0;
    std::vector<Polynomial> data_;
};

} // namespace gendiv

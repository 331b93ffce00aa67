#pragma once

#include "gendiv/field.hpp"

#include <optional>
#include <vector>

namespace gendiv {

// Exact dense linear algebra over the coefficient field.
class FieldMatrix {
public:
    FieldMatrix(CoeffField field, size_t ncols) : F_(field), ncols_(ncols) {}

    size_t rows() const { return rows_.size(); }
    size_t cols() const { return ncols_; }

    void add_row(std::vector<Rational> row) {
        if (row.size() != ncols_) throw std::invalid_argument("row size mismatch");
        for (auto& x : row) x = F_.normalize(x);
        rows_.push_back(std::move(row));
    }

    // reduced row echelon form; returns pivot column per row
    std::vector<size_t> rref() {
        pivots_.clear();
        size_t r = 0;
        for (size_t c = 0; c < ncols_ && r < rows_.size(); ++c) {
            size_t sel = r;
            while (sel < rows_.size() && rows_[sel][c] == 0) ++sel;
            if (sel == rows_.size()) continue;
            std::swap(rows_[r], rows_[sel]);
            Rational inv = F_.inv(rows_[r][c]);
            for (size_t j = c; j < ncols_; ++j) rows_[r][j] = F_.mul(rows_[r][j], inv);
            for (size_t i = 0; i < rows_.size(); ++i) {
                if (i == r || rows_[i][c] == 0) continue;
                Rational factor = rows_[i][c];
                for (size_t j = c; j < ncols_; ++j)
                    rows_[i][j] = F_.sub(rows_[i][j], F_.mul(factor, rows_[r][j]));
            }
            pivots_.push_back(c);
            ++r;
        }
        rows_.resize(r);
        return pivots_;
    }

    size_t rank() const { return pivots_.size(); }

    // basis of the nullspace, one vector per free column
    std::vector<std::vector<Rational>> nullspace_basis() const {
        std::vector<char> is_pivot(ncols_, 0);
        for (size_t c : pivots_) is_pivot[c] = 1;
        std::vector<std::vector<Rational>> basis;
        for (size_t free_c = 0; free_c < ncols_; ++free_c) {
            if (is_pivot[free_c]) continue;
            std::vector<Rational> v(ncols_, 0);
            v[free_c] = 1;
            for (size_t r = 0; r < pivots_.size(); ++r)
                v[pivots_[r]] = F_.neg(rows_[r][free_c]);
            basis.push_back(std::move(v));
        }
        return basis;
    }

    const std::vector<std::vector<Rational>>& data() const { return rows_; }

private:
    CoeffField F_;
    size_t ncols_;
    std::vector<std::vector<Rational>> rows_;
    std::vector<size_t> pivots_;
};

struct LinearSolveResult {
    bool consistent;
    size_t rank;
    size_t rank_augmented;
    std::vector<Rational> particular; // canonical solution when consistent
};

// solve A x = b exactly; A given by rows
inline LinearSolveResult solve_linear(const CoeffField& F,
                                      const std::vector<std::vector<Rational>>& rows,
                                      const std::vector<Rational>& rhs, size_t ncols) {
    FieldMatrix plain(F, ncols);
    for (auto& r : rows) plain.add_row(r);
    plain.rref();
    FieldMatrix aug(F, ncols + 1);
    for (size_t i = 0; i < rows.size(); ++i) {
        std::vector<Rational> r = rows[i];
        r.push_back(rhs[i]);
        aug.add_row(std::move(r));
    }
    auto pivots = aug.rref();
    LinearSolveResult res;
    res.rank = plain.rank();
    res.rank_augmented = aug.rank();
    res.consistent = true;
    for (size_t c : pivots)
        if (c == ncols) res.consistent = false;
    if (res.consistent) {
        res.particular.assign(ncols, 0);
        for (size_t r = 0; r < pivots.size(); ++r)
            res.particular[pivots[r]] = aug.data()[r][ncols];
    }
    return res;
}

} // namespace gendiv

#pragma once

#include <vector>

namespace netshield {

/* Square nonnegative matrix stored sparsely by rows.
 *
 * Spreading-network convention: entry (i, j) holds the weight of the edge
 * j -> i, so row i lists the in-edges of node i.  Desk-scale problems only;
 * anything dense lives in the callers that need it.
 */
class SparseMatrix {
public:
    struct Entry {
        int col;
        double value;
    };

    SparseMatrix() = default;
    explicit SparseMatrix(int size) : rows_(static_cast<std::size_t>(size)) {}

    int size() const { return static_cast<int>(rows_.size()); }

    // Accumulates value into (row, col). Entries may arrive in any order;
    // repeated coordinates are merged by summation.
    void add(int row, int col, double value);

    const std::vector<Entry>& row(int i) const { return rows_[static_cast<std::size_t>(i)]; }

    double max_entry() const;
    double max_row_sum() const;

    // y = M x, plus an optional uniform rank-one term: y_i += eta * sum(x).
    void multiply(const std::vector<double>& x, std::vector<double>& y, double eta = 0.0) const;

    SparseMatrix transposed() const;

private:
    std::vector<std::vector<Entry>> rows_;
};

}  // namespace netshield

#include "netshield/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace netshield {

void SparseMatrix::add(int row, int col, double value) {
    if (row < 0 || row >= size() || col < 0 || col >= size()) {
        throw std::out_of_range("SparseMatrix::add: index out of range");
    }
    auto& r = rows_[static_cast<std::size_t>(row)];
    for (auto& e : r) {
        if (e.col == col) {
            e.value += value;
            return;
        }
    }
    r.push_back(Entry{col, value});
}

double SparseMatrix::max_entry() const {
    double m = 0.0;
    for (const auto& r : rows_) {
        for (const auto& e : r) m = std::max(m, e.value);
    }
    return m;
}

double SparseMatrix::max_row_sum() const {
    double m = 0.0;
    for (const auto& r : rows_) {
        double s = 0.0;
        for (const auto& e : r) s += e.value;
        m = std::max(m, s);
    }
    return m;
}

void SparseMatrix::multiply(const std::vector<double>& x, std::vector<double>& y,
                            double eta) const {
    const auto n = rows_.size();
    if (x.size() != n) throw std::invalid_argument("SparseMatrix::multiply: size mismatch");
    y.assign(n, 0.0);
    double uniform = 0.0;
    if (eta != 0.0) {
        double sum = 0.0;
        for (double v : x) sum += v;
        uniform = eta * sum;
    }
    for (std::size_t i = 0; i < n; ++i) {
        double acc = uniform;
        for (const auto& e : rows_[i]) acc += e.value * x[static_cast<std::size_t>(e.col)];
        y[i] = acc;
    }
}

SparseMatrix SparseMatrix::transposed() const {
    SparseMatrix t(size());
    for (int i = 0; i < size(); ++i) {
        for (const auto& e : rows_[static_cast<std::size_t>(i)]) t.add(e.col, i, e.value);
    }
    return t;
}

}  // namespace netshield

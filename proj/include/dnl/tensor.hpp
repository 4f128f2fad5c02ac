#pragma once

#include <cstddef>
#include <vector>

namespace dnl {

/// Dense row-major matrix of 64-bit floats. The model is tiny, so exactness
/// and simple loops win over a BLAS dependency.
struct Tensor {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> data;

    Tensor() = default;
    Tensor(std::size_t r, std::size_t c, double fill = 0.0) : rows(r), cols(c), data(r * c, fill) {}

    double& at(std::size_t r, std::size_t c) { return data[r * cols + c]; }
    double at(std::size_t r, std::size_t c) const { return data[r * cols + c]; }

    std::size_t size() const { return data.size(); }
    void fill(double v) { std::fill(data.begin(), data.end(), v); }

    bool same_shape(const Tensor& other) const {
        return rows == other.rows && cols == other.cols;
    }
    bool operator==(const Tensor& other) const {
        return rows == other.rows && cols == other.cols && data == other.data;
    }
};

/// a [n x m] * b [m x p] -> [n x p]
Tensor matmul(const Tensor& a, const Tensor& b);
/// aᵀ [m x n] * b [m x p] -> [n x p]   (a given as [m x n])
Tensor matmul_trans_a(const Tensor& a, const Tensor& b);
/// a [n x m] * bᵀ [p x m] -> [n x p]   (b given as [p x m])
Tensor matmul_trans_b(const Tensor& a, const Tensor& b);

void add_inplace(Tensor& a, const Tensor& b);
void scale_inplace(Tensor& a, double s);
bool all_finite(const Tensor& t);

}  // namespace dnl

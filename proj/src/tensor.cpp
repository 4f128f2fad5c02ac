#include "dnl/tensor.hpp"

#include <cmath>
#include <string>

#include "dnl/errors.hpp"

namespace dnl {

namespace {
[[noreturn]] void shape_error(const char* op, const Tensor& a, const Tensor& b) {
    throw ContractViolation(std::string(op) + ": shape mismatch [" + std::to_string(a.rows) +
                            "x" + std::to_string(a.cols) + "] vs [" + std::to_string(b.rows) +
                            "x" + std::to_string(b.cols) + "]");
}
}  // namespace

Tensor matmul(const Tensor& a, const Tensor& b) {
    if (a.cols != b.rows) shape_error("matmul", a, b);
    Tensor out(a.rows, b.cols);
    for (std::size_t i = 0; i < a.rows; ++i) {
        for (std::size_t k = 0; k < a.cols; ++k) {
            const double v = a.at(i, k);
            if (v == 0.0) continue;
            for (std::size_t j = 0; j < b.cols; ++j) {
                out.at(i, j) += v * b.at(k, j);
            }
        }
    }
    return out;
}

Tensor matmul_trans_a(const Tensor& a, const Tensor& b) {
    if (a.rows != b.rows) shape_error("matmul_trans_a", a, b);
    Tensor out(a.cols, b.cols);
    for (std::size_t k = 0; k < a.rows; ++k) {
        for (std::size_t i = 0; i < a.cols; ++i) {
            const double v = a.at(k, i);
            if (v == 0.0) continue;
            for (std::size_t j = 0; j < b.cols; ++j) {
                out.at(i, j) += v * b.at(k, j);
            }
        }
    }
    return out;
}

Tensor matmul_trans_b(const Tensor& a, const Tensor& b) {
    if (a.cols != b.cols) shape_error("matmul_trans_b", a, b);
    Tensor out(a.rows, b.rows);
    for (std::size_t i = 0; i < a.rows; ++i) {
        for (std::size_t j = 0; j < b.rows; ++j) {
            double acc = 0.0;
            for (std::size_t k = 0; k < a.cols; ++k) {
                acc += a.at(i, k) * b.at(j, k);
            }
            out.at(i, j) = acc;
        }
    }
    return out;
}

void add_inplace(Tensor& a, const Tensor& b) {
    if (!a.same_shape(b)) shape_error("add_inplace", a, b);
    for (std::size_t i = 0; i < a.data.size(); ++i) a.data[i] += b.data[i];
}

void scale_inplace(Tensor& a, double s) {
    for (double& v : a.data) v *= s;
}

bool all_finite(const Tensor& t) {
    for (double v : t.data) {
        if (!std::isfinite(v)) return false;
    }
    return true;
}

}  // namespace dnl

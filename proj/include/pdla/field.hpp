/*
 * Dense real-valued fields: flat contiguous double arrays with 1-D or 2-D
 * shape metadata (row-major). Used for parameters, images and dual variables.
 */
#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace pdla {

struct Shape {
    std::size_t rows = 0;
    std::size_t cols = 1;  // cols == 1 for 1-D signals

    std::size_t size() const { return rows * cols; }
    bool operator==(const Shape&) const = default;
    bool is_2d() const { return cols > 1; }
    std::string str() const {
        return cols > 1 ? std::to_string(rows) + "x" + std::to_string(cols)
                        : std::to_string(rows);
    }
};

class RealField {
public:
    RealField() = default;

    RealField(Shape shape, double fill = 0.0)
        : shape_(shape), data_(shape.size(), fill) {}

    RealField(Shape shape, std::vector<double> data)
        : shape_(shape), data_(std::move(data)) {
        if (shape_.size() != data_.size())
            throw std::invalid_argument("RealField: shape " + shape_.str() +
                                        " does not match data length " +
                                        std::to_string(data_.size()));
    }

    static RealField zeros(Shape shape) { return RealField(shape); }

    static RealField scalar(double v) { return RealField({1, 1}, {v}); }

    const Shape& shape() const { return shape_; }
    std::size_t size() const { return data_.size(); }

    double& operator[](std::size_t i) { return data_[i]; }
    double operator[](std::size_t i) const { return data_[i]; }

    double& at(std::size_t r, std::size_t c) { return data_[r * shape_.cols + c]; }
    double at(std::size_t r, std::size_t c) const { return data_[r * shape_.cols + c]; }

    double* data() { return data_.data(); }
    const double* data() const { return data_.data(); }

    std::vector<double>& vec() { return data_; }
    const std::vector<double>& vec() const { return data_; }

    bool all_finite() const {
        for (double v : data_)
            if (!std::isfinite(v)) return false;
        return true;
    }

    void ensure_finite(const std::string& context) const {
        if (!all_finite())
            throw std::runtime_error("non-finite value in " + context +
                                     " (shape " + shape_.str() + ")");
    }

    bool operator==(const RealField&) const = default;

private:
    Shape shape_;
    std::vector<double> data_;
};

inline void check_same_shape(const RealField& a, const RealField& b,
                             const char* what) {
    if (a.shape() != b.shape())
        throw std::invalid_argument(std::string(what) + ": shape mismatch " +
                                    a.shape().str() + " vs " + b.shape().str());
}

inline double dot(const RealField& a, const RealField& b) {
    check_same_shape(a, b, "dot");
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline double norm2_sq(const RealField& a) { return dot(a, a); }
inline double norm2(const RealField& a) { return std::sqrt(norm2_sq(a)); }

inline double norm1(const RealField& a) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += std::abs(a[i]);
    return s;
}

inline RealField operator+(const RealField& a, const RealField& b) {
    check_same_shape(a, b, "operator+");
    RealField r = a;
    for (std::size_t i = 0; i < r.size(); ++i) r[i] += b[i];
    return r;
}

inline RealField operator-(const RealField& a, const RealField& b) {
    check_same_shape(a, b, "operator-");
    RealField r = a;
    for (std::size_t i = 0; i < r.size(); ++i) r[i] -= b[i];
    return r;
}

inline RealField operator*(double s, const RealField& a) {
    RealField r = a;
    for (std::size_t i = 0; i < r.size(); ++i) r[i] *= s;
    return r;
}

// y += s * x
inline void axpy(double s, const RealField& x, RealField& y) {
    check_same_shape(x, y, "axpy");
    for (std::size_t i = 0; i < y.size(); ++i) y[i] += s * x[i];
}

// z = a*x + b*y
inline RealField axpby(double a, const RealField& x, double b, const RealField& y) {
    check_same_shape(x, y, "axpby");
    RealField z(x.shape());
    for (std::size_t i = 0; i < z.size(); ++i) z[i] = a * x[i] + b * y[i];
    return z;
}

inline double mean(const RealField& a) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i];
    return s / static_cast<double>(a.size());
}

}  // namespace pdla

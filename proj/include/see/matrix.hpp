#ifndef SEE_MATRIX_HPP
#define SEE_MATRIX_HPP

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace see {

// Minimal dense row-major matrix of doubles. All the arrays in this
// project are small (ports x users), so no BLAS backing is needed.
class Mat {
public:
    Mat() = default;
    Mat(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), v_(rows * cols, fill) {}

    static Mat from_rows(const std::vector<std::vector<double>>& rows) {
        if (rows.empty()) return Mat();
        Mat m(rows.size(), rows[0].size());
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (rows[i].size() != m.cols_)
                throw std::invalid_argument("Mat::from_rows: ragged rows");
            for (std::size_t j = 0; j < m.cols_; ++j) m(i, j) = rows[i][j];
        }
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::size_t size() const { return v_.size(); }

    double& operator()(std::size_t i, std::size_t j) { return v_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return v_[i * cols_ + j]; }

    double& operator[](std::size_t k) { return v_[k]; }
    double operator[](std::size_t k) const { return v_[k]; }

    std::vector<double>& data() { return v_; }
    const std::vector<double>& data() const { return v_; }

    bool same_shape(const Mat& o) const { return rows_ == o.rows_ && cols_ == o.cols_; }

    friend bool operator==(const Mat& a, const Mat& b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.v_ == b.v_;
    }

private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<double> v_;
};

} // namespace see

#endif

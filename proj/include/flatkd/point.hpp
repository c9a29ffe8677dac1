#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "flatkd/error.hpp"

namespace flatkd {

// Fixed-dimension points in one flat row-major float buffer.
class PointSet {
public:
    PointSet() = default;

    explicit PointSet(int dim) : dim_(dim) {
        if (dim < 0) throw DataError("point set: negative dimension");
    }

    PointSet(int dim, std::vector<float> data) : dim_(dim), data_(std::move(data)) {
        if (dim < 0) throw DataError("point set: negative dimension");
        if (dim == 0 && !data_.empty()) throw DataError("point set: data with zero dimension");
        if (dim > 0 && data_.size() % static_cast<std::size_t>(dim) != 0)
            throw DataError("point set: data size is not a multiple of the dimension");
    }

    int dim() const { return dim_; }
    int size() const { return dim_ == 0 ? 0 : static_cast<int>(data_.size() / static_cast<std::size_t>(dim_)); }
    bool empty() const { return data_.empty(); }

    std::span<const float> operator[](int i) const {
        return {data_.data() + static_cast<std::size_t>(i) * dim_, static_cast<std::size_t>(dim_)};
    }

    void append(std::span<const float> p) {
        if (static_cast<int>(p.size()) != dim_) throw DataError("point set: appended point has wrong dimension");
        data_.insert(data_.end(), p.begin(), p.end());
    }

    const std::vector<float>& raw() const { return data_; }
    std::vector<float>& raw() { return data_; }

    bool operator==(const PointSet&) const = default;

private:
    int dim_ = 0;
    std::vector<float> data_;
};

inline bool all_finite(std::span<const float> p) {
    for (float c : p)
        if (!std::isfinite(c)) return false;
    return true;
}

// Throws if any coordinate is NaN or infinite. Trees and queries never admit those.
inline void require_finite(const PointSet& pts, const char* what) {
    for (int i = 0; i < pts.size(); ++i)
        if (!all_finite(pts[i]))
            throw DataError(std::string(what) + ": non-finite coordinate in point " + std::to_string(i));
}

// Squared Euclidean distance, accumulated left to right in float.
// The query kernels and the brute-force oracle both use this one definition,
// so equality assertions between them compare identical values.
inline float squared_distance(std::span<const float> a, std::span<const float> b) {
    float acc = 0.0f;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const float d = a[i] - b[i];
        acc += d * d;
    }
    return acc;
}

// Admission bound on squared distances; max_radius may be +inf.
inline float squared_radius_cap(float max_radius) {
    if (std::isnan(max_radius) || max_radius < 0.0f)
        throw DataError("max radius must be >= 0 or inf");
    return max_radius * max_radius;
}

} // namespace flatkd

#pragma once

#include <algorithm>
#include <stdexcept>
#include <string>
#include <vector>

namespace crip {

// Axis-aligned rectangle in source pixel coordinates, used for face crops.
struct Rect {
    int x = 0;
    int y = 0;
    int width = 0;
    int height = 0;
};

// Single-channel raster with real-valued intensities, row-major storage.
// Freshly loaded images carry values in [0, 255]; perturbations run on the
// unclipped real-valued pipeline and may push values outside that range.
class GrayImage {
public:
    GrayImage() = default;

    GrayImage(int width, int height, double fill = 0.0)
        : width_(width), height_(height),
          data_(check_dims(width, height), fill) {}

    GrayImage(int width, int height, std::vector<double> data)
        : width_(width), height_(height), data_(std::move(data)) {
        if (data_.size() != check_dims(width, height)) {
            throw std::invalid_argument(
                "image data length does not match width*height");
        }
    }

    int width() const { return width_; }
    int height() const { return height_; }
    std::size_t pixel_count() const { return data_.size(); }

    double& at(int row, int col) {
        check_coords(row, col);
        return data_[static_cast<std::size_t>(row) * width_ + col];
    }

    double at(int row, int col) const {
        check_coords(row, col);
        return data_[static_cast<std::size_t>(row) * width_ + col];
    }

    // Replicate-padding read: out-of-image coordinates clamp to the nearest
    // edge pixel.
    double at_clamped(int row, int col) const {
        const int r = std::clamp(row, 0, height_ - 1);
        const int c = std::clamp(col, 0, width_ - 1);
        return data_[static_cast<std::size_t>(r) * width_ + c];
    }

    const std::vector<double>& data() const { return data_; }
    std::vector<double>& data() { return data_; }

    bool operator==(const GrayImage&) const = default;

private:
    static std::size_t check_dims(int width, int height) {
        if (width < 1 || height < 1) {
            throw std::invalid_argument("image dimensions must be positive");
        }
        return static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
    }

    void check_coords(int row, int col) const {
        if (row < 0 || row >= height_ || col < 0 || col >= width_) {
            throw std::out_of_range("pixel coordinates out of range");
        }
    }

    int width_ = 0;
    int height_ = 0;
    std::vector<double> data_;
};

}  // namespace crip

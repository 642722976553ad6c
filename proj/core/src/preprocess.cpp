#include "crip/preprocess.hpp"

#include <cmath>

namespace crip {

GrayImage resize_bilinear(const GrayImage& image, int out_width, int out_height) {
    if (out_width < 1 || out_height < 1) {
        throw std::invalid_argument("resize target must be positive");
    }
    if (out_width == image.width() && out_height == image.height()) {
        return image;
    }
    GrayImage out(out_width, out_height);
    const double scale_x = static_cast<double>(image.width()) / out_width;
    const double scale_y = static_cast<double>(image.height()) / out_height;
    for (int r = 0; r < out_height; ++r) {
        double sy = (r + 0.5) * scale_y - 0.5;
        if (sy < 0) sy = 0;
        int y0 = static_cast<int>(sy);
        if (y0 > image.height() - 1) y0 = image.height() - 1;
        const int y1 = std::min(y0 + 1, image.height() - 1);
        const double fy = sy - y0;
        for (int c = 0; c < out_width; ++c) {
            double sx = (c + 0.5) * scale_x - 0.5;
            if (sx < 0) sx = 0;
            int x0 = static_cast<int>(sx);
            if (x0 > image.width() - 1) x0 = image.width() - 1;
            const int x1 = std::min(x0 + 1, image.width() - 1);
            const double fx = sx - x0;
            const double a = image.at(y0, x0);
            const double b = image.at(y0, x1);
            const double d0 = image.at(y1, x0);
            const double d1 = image.at(y1, x1);
            const double top = a + fx * (b - a);
            const double bottom = d0 + fx * (d1 - d0);
            out.at(r, c) = top + fy * (bottom - top);
        }
    }
    return out;
}

GrayImage crop(const GrayImage& image, const Rect& bbox) {
    if (bbox.width <= 0 || bbox.height <= 0) {
        throw std::invalid_argument("bbox width/height must be positive");
    }
    if (bbox.x < 0 || bbox.y < 0 || bbox.x + bbox.width > image.width() ||
        bbox.y + bbox.height > image.height()) {
        throw std::invalid_argument("bbox out of bounds");
    }
    GrayImage out(bbox.width, bbox.height);
    for (int r = 0; r < bbox.height; ++r) {
        for (int c = 0; c < bbox.width; ++c) {
            out.at(r, c) = image.at(bbox.y + r, bbox.x + c);
        }
    }
    return out;
}

GrayImage preprocess(const GrayImage& image, const std::optional<Rect>& bbox, int target) {
    if (target < 5) {
        throw std::invalid_argument("normalized size must be at least 5");
    }
    if (bbox) {
        return resize_bilinear(crop(image, *bbox), target, target);
    }
    return resize_bilinear(image, target, target);
}

}  // namespace crip

#pragma once

#include <functional>
#include <string>

#include "crip/image.hpp"

namespace crip {

// Expression label names for the FER2013 emotion codes 0..6.
const std::string& fer2013_label(int emotion);

// Streams the FER2013 csv (header `emotion,pixels,Usage`; 48x48 images as
// space-separated pixel lists). Calls the visitor once per row; usage is one
// of "Training", "PublicTest", "PrivateTest".
void for_each_fer2013_row(
    const std::string& csv_path,
    const std::function<void(int emotion, const std::string& usage, const GrayImage& image)>&
        visit);

}  // namespace crip

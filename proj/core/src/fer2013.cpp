#include "crip/fer2013.hpp"

#include <array>
#include <cstdlib>
#include <fstream>
#include <stdexcept>

namespace crip {

const std::string& fer2013_label(int emotion) {
    static const std::array<std::string, 7> labels = {
        "anger", "disgust", "fear", "happy", "sad", "surprise", "neutral"};
    if (emotion < 0 || emotion >= static_cast<int>(labels.size())) {
        throw std::invalid_argument("emotion code out of range");
    }
    return labels[static_cast<std::size_t>(emotion)];
}

void for_each_fer2013_row(
    const std::string& csv_path,
    const std::function<void(int, const std::string&, const GrayImage&)>& visit) {
    std::ifstream in(csv_path);
    if (!in) throw std::runtime_error(csv_path + ": cannot open file");
    std::string line;
    if (!std::getline(in, line) || line.rfind("emotion,pixels", 0) != 0) {
        throw std::runtime_error(csv_path + ": missing emotion,pixels,Usage header");
    }
    constexpr int kSide = 48;
    int line_no = 1;
    std::vector<double> pixels(kSide * kSide);
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const auto c1 = line.find(',');
        const auto c2 = line.find(',', c1 + 1);
        if (c1 == std::string::npos || c2 == std::string::npos) {
            throw std::runtime_error(csv_path + " line " + std::to_string(line_no) +
                                     ": expected 3 columns");
        }
        const int emotion = std::atoi(line.substr(0, c1).c_str());
        fer2013_label(emotion);  // validates the range
        const char* p = line.c_str() + c1 + 1;
        for (int i = 0; i < kSide * kSide; ++i) {
            char* end = nullptr;
            const long v = std::strtol(p, &end, 10);
            if (end == p || v < 0 || v > 255) {
                throw std::runtime_error(csv_path + " line " + std::to_string(line_no) +
                                         ": malformed pixel list");
            }
            pixels[static_cast<std::size_t>(i)] = static_cast<double>(v);
            p = end;
        }
        std::string usage = line.substr(c2 + 1);
        while (!usage.empty() && (usage.back() == '\r' || usage.back() == ' ')) {
            usage.pop_back();
        }
        visit(emotion, usage, GrayImage(kSide, kSide, pixels));
    }
}

}  // namespace crip

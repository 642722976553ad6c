#include "crip/featurize.hpp"

#include <ostream>
#include <stdexcept>

#include "crip/text_format.hpp"

namespace crip {

BlockGrid BlockGrid::for_map(int map_width, int map_height, int block_size) {
    if (block_size < 1) {
        throw std::invalid_argument("block size must be at least 1");
    }
    if (map_width < 1 || map_height < 1) {
        throw std::invalid_argument("empty code map");
    }
    BlockGrid g;
    g.block_size = block_size;
    g.map_width = map_width;
    g.map_height = map_height;
    g.rows = (map_height + block_size - 1) / block_size;
    g.cols = (map_width + block_size - 1) / block_size;
    return g;
}

std::pair<int, int> block_origin(int phi, const BlockGrid& grid) {
    if (phi < 1 || phi > grid.block_count()) {
        throw std::out_of_range("block index out of range");
    }
    const int idx = phi - 1;
    return {(idx / grid.cols) * grid.block_size, (idx % grid.cols) * grid.block_size};
}

std::array<std::uint32_t, kCodeBins> block_histogram(const CodeMap& map, int phi,
                                                     const BlockGrid& grid) {
    const auto [r0, c0] = block_origin(phi, grid);
    const int r1 = std::min(r0 + grid.block_size, grid.map_height);
    const int c1 = std::min(c0 + grid.block_size, grid.map_width);
    std::array<std::uint32_t, kCodeBins> hist{};
    for (int r = r0; r < r1; ++r) {
        for (int c = c0; c < c1; ++c) {
            ++hist[map.at(r, c)];
        }
    }
    return hist;
}

FeatureVector feature_vector(const CodeMap& map, int block_size, bool normalize) {
    const BlockGrid grid = BlockGrid::for_map(map.width(), map.height(), block_size);
    FeatureVector fv;
    fv.blocks = grid.block_count();
    fv.block_size = block_size;
    fv.normalized = normalize;
    fv.values.reserve(static_cast<std::size_t>(fv.blocks) * kCodeBins);
    for (int phi = 1; phi <= grid.block_count(); ++phi) {
        const auto hist = block_histogram(map, phi, grid);
        if (normalize) {
            const auto [r0, c0] = block_origin(phi, grid);
            const int h = std::min(grid.block_size, grid.map_height - r0);
            const int w = std::min(grid.block_size, grid.map_width - c0);
            const double count = static_cast<double>(h) * w;
            for (const auto v : hist) fv.values.push_back(v / count);
        } else {
            for (const auto v : hist) fv.values.push_back(static_cast<double>(v));
        }
    }
    return fv;
}

FeatureMatrixWriter::FeatureMatrixWriter(std::ostream& out, int block_size, int blocks,
                                         bool normalize)
    : out_(out), block_size_(block_size), blocks_(blocks), normalize_(normalize) {
    out_ << "crip-features,block_size=" << block_size_ << ",blocks=" << blocks_
         << ",bins=" << kCodeBins << ",normalize=" << (normalize_ ? 1 : 0) << "\n";
}

void FeatureMatrixWriter::write_row(const std::string& sample_id, const FeatureVector& fv) {
    if (fv.blocks != blocks_ || fv.block_size != block_size_ || fv.normalized != normalize_) {
        throw std::invalid_argument("feature vector does not match the matrix header");
    }
    out_ << sample_id;
    for (const double v : fv.values) {
        out_ << ',' << format_double(v);
    }
    out_ << "\n";
    ++rows_;
}

}  // namespace crip

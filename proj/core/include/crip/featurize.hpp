#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <utility>
#include <vector>

#include "crip/descriptor.hpp"

namespace crip {

inline constexpr int kCodeBins = 256;

// Non-overlapping tiling of a code map into square blocks. Edge blocks are
// clipped to the map, not padded.
struct BlockGrid {
    int block_size = 0;  // pixels per side
    int rows = 0;        // block rows (ceil of map_height / block_size)
    int cols = 0;        // block columns
    int map_height = 0;
    int map_width = 0;

    static BlockGrid for_map(int map_width, int map_height, int block_size);

    int block_count() const { return rows * cols; }
};

// 0-based map origin of block phi (1-based, row-major numbering).
std::pair<int, int> block_origin(int phi, const BlockGrid& grid);

// 256-bin code histogram of block phi, clipped to the map for edge blocks.
std::array<std::uint32_t, kCodeBins> block_histogram(const CodeMap& map, int phi,
                                                     const BlockGrid& grid);

// Concatenated per-block histograms, block-major then bin-major.
struct FeatureVector {
    std::vector<double> values;
    int blocks = 0;
    int bins = kCodeBins;
    int block_size = 0;
    bool normalized = false;

    std::size_t dimension() const { return values.size(); }
};

// Builds the full feature vector for a code map. With normalize set, each
// block's bins are divided by that block's (clipped) pixel count.
FeatureVector feature_vector(const CodeMap& map, int block_size, bool normalize);

// Streams a feature matrix: a metadata header row, then one row per sample
// with the sample id in the first column.
class FeatureMatrixWriter {
public:
    FeatureMatrixWriter(std::ostream& out, int block_size, int blocks, bool normalize);
    void write_row(const std::string& sample_id, const FeatureVector& fv);
    int rows_written() const { return rows_; }

private:
    std::ostream& out_;
    int block_size_;
    int blocks_;
    bool normalize_;
    int rows_ = 0;
};

}  // namespace crip

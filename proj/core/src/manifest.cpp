#include "crip/manifest.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <unordered_set>

namespace crip {

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(trim(cell));
    if (!line.empty() && line.back() == ',') cells.push_back("");
    return cells;
}

[[noreturn]] void row_error(const std::string& path, int line_no, const std::string& what) {
    throw std::runtime_error(path + " line " + std::to_string(line_no) + ": " + what);
}

int parse_int(const std::string& cell, const std::string& path, int line_no,
              const std::string& field) {
    try {
        std::size_t pos = 0;
        const int v = std::stoi(cell, &pos);
        if (pos != cell.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        row_error(path, line_no, "bad integer in " + field + " column: '" + cell + "'");
    }
}

void append_unique(std::vector<std::string>& out, std::unordered_set<std::string>& seen,
                   const std::string& value) {
    if (seen.insert(value).second) out.push_back(value);
}

}  // namespace

DatasetManifest load_manifest(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error(path + ": cannot open manifest");

    const std::filesystem::path base = std::filesystem::path(path).parent_path();

    std::string line;
    int line_no = 0;
    bool has_bbox_columns = false;
    if (!std::getline(in, line)) throw std::runtime_error(path + ": empty manifest");
    ++line_no;
    {
        const auto header = split_csv(line);
        if (header.size() != 3 && header.size() != 7) {
            row_error(path, line_no, "header must be path,subject,label[,x,y,w,h]");
        }
        if (header[0] != "path" || header[1] != "subject" || header[2] != "label") {
            row_error(path, line_no, "header must start with path,subject,label");
        }
        has_bbox_columns = header.size() == 7;
    }

    std::vector<Sample> samples;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        const auto cells = split_csv(line);
        const std::size_t expected = has_bbox_columns ? 7 : 3;
        if (cells.size() != expected) {
            row_error(path, line_no, "expected " + std::to_string(expected) + " columns, got " +
                                         std::to_string(cells.size()));
        }
        Sample s;
        if (cells[0].empty()) row_error(path, line_no, "empty image path");
        if (cells[1].empty()) row_error(path, line_no, "empty subject id");
        if (cells[2].empty()) row_error(path, line_no, "empty label");
        std::filesystem::path img(cells[0]);
        s.image_path = img.is_absolute() ? img.string() : (base / img).string();
        s.subject_id = cells[1];
        s.label = cells[2];
        if (has_bbox_columns) {
            const bool all_empty = cells[3].empty() && cells[4].empty() && cells[5].empty() &&
                                   cells[6].empty();
            if (!all_empty) {
                Rect r;
                r.x = parse_int(cells[3], path, line_no, "x");
                r.y = parse_int(cells[4], path, line_no, "y");
                r.width = parse_int(cells[5], path, line_no, "w");
                r.height = parse_int(cells[6], path, line_no, "h");
                if (r.width <= 0 || r.height <= 0) {
                    row_error(path, line_no, "bbox width/height must be positive");
                }
                if (r.x < 0 || r.y < 0) {
                    row_error(path, line_no, "bbox origin must be non-negative");
                }
                s.bbox = r;
            }
        }
        samples.push_back(std::move(s));
    }
    if (samples.empty()) throw std::runtime_error(path + ": no samples");
    return make_manifest(std::move(samples));
}

DatasetManifest make_manifest(std::vector<Sample> samples) {
    DatasetManifest m;
    m.samples = std::move(samples);
    std::unordered_set<std::string> seen_classes;
    std::unordered_set<std::string> seen_subjects;
    for (const auto& s : m.samples) {
        append_unique(m.classes, seen_classes, s.label);
        append_unique(m.subjects, seen_subjects, s.subject_id);
    }
    return m;
}

DatasetManifest filter_by_labels(const DatasetManifest& manifest,
                                 const std::vector<std::string>& keep) {
    for (const auto& label : keep) {
        if (std::find(manifest.classes.begin(), manifest.classes.end(), label) ==
            manifest.classes.end()) {
            throw std::invalid_argument("label '" + label + "' not present in manifest");
        }
    }
    std::vector<Sample> kept;
    for (const auto& s : manifest.samples) {
        if (std::find(keep.begin(), keep.end(), s.label) != keep.end()) {
            kept.push_back(s);
        }
    }
    if (kept.empty()) throw std::invalid_argument("label filter removed every sample");
    return make_manifest(std::move(kept));
}

}  // namespace crip

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "crip/image.hpp"

namespace crip {

// One dataset row: an image on disk with its subject id, expression label
// and optional face crop box.
struct Sample {
    std::string image_path;
    std::string subject_id;
    std::string label;
    std::optional<Rect> bbox;
};

// Ordered sample list with the class and subject vocabularies deduplicated
// in first-appearance order.
struct DatasetManifest {
    std::vector<Sample> samples;
    std::vector<std::string> classes;
    std::vector<std::string> subjects;
};

// Parses a manifest file: UTF-8 comma-separated text with header
// `path,subject,label` or `path,subject,label,x,y,w,h`. Relative image
// paths resolve against the manifest's directory. Rows with bbox columns
// left empty carry no crop box.
DatasetManifest load_manifest(const std::string& path);

// Rebuilds the vocabularies from the sample list (first-appearance order).
DatasetManifest make_manifest(std::vector<Sample> samples);

// Keeps only samples whose label is in `keep`; class order of the retained
// labels is preserved. Unknown labels in `keep` are an error.
DatasetManifest filter_by_labels(const DatasetManifest& manifest,
                                 const std::vector<std::string>& keep);

}  // namespace crip

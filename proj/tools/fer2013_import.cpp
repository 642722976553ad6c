// Converts the public fer2013.csv into PGM files plus one manifest per
// usage split, so the batch CLI can run on it directly.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>

#include "crip/fer2013.hpp"
#include "crip/image_io.hpp"

namespace fs = std::filesystem;

int main(int argc, char** argv) {
    CLI::App app{"FER2013 csv to PGM + manifest converter"};
    std::string csv_path;
    std::string out_dir = "fer2013";
    app.add_option("csv", csv_path, "path to fer2013.csv")->required();
    app.add_option("--out", out_dir, "output directory")->capture_default_str();
    CLI11_PARSE(app, argc, argv);

    try {
        fs::create_directories(fs::path(out_dir) / "images");
        std::map<std::string, std::ofstream> manifests;
        std::map<std::string, std::string> file_of{{"Training", "train.csv"},
                                                   {"PublicTest", "public_test.csv"},
                                                   {"PrivateTest", "private_test.csv"}};
        for (const auto& [usage, name] : file_of) {
            auto& out = manifests[usage];
            out.open(fs::path(out_dir) / name);
            if (!out) throw std::runtime_error("cannot write manifest " + name);
            out << "path,subject,label\n";
        }

        long row = 0;
        crip::for_each_fer2013_row(
            csv_path, [&](int emotion, const std::string& usage, const crip::GrayImage& img) {
                const auto it = manifests.find(usage);
                if (it == manifests.end()) {
                    throw std::runtime_error("unknown usage tag '" + usage + "'");
                }
                char name[32];
                std::snprintf(name, sizeof(name), "%06ld.pgm", row);
                crip::save_pgm(img, (fs::path(out_dir) / "images" / name).string());
                // the dataset carries no subject ids; each row gets its own,
                // which supports the fixed train/test splits but not LOSO
                it->second << "images/" << name << ",s" << row << ","
                           << crip::fer2013_label(emotion) << "\n";
                ++row;
            });
        std::cout << "imported " << row << " images into " << out_dir << "\n";
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

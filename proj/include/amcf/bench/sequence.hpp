#ifndef AMCF_BENCH_SEQUENCE_HPP
#define AMCF_BENCH_SEQUENCE_HPP

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <opencv2/imgcodecs.hpp>

#include "json.hpp"

#include "../imaging.hpp"

// Sequence ingestion. A sequence is either
//  * a directory holding image frames (directly or under img/) and a ground-truth file
//    (groundtruth.txt, groundtruth_rect.txt or gt.txt), or
//  * a JSON manifest {"name", "frames": [...], "groundtruth": "file", "attributes": [...]}
//    with paths relative to the manifest, or a directory containing manifest.json.
// Ground truth holds one "x,y,w,h" line per frame (comma, tab or space separated), corner
// format with 1-indexed pixels. A line of NaNs marks a frame where the target is absent.

namespace amcf::bench {

namespace fs = std::filesystem;

struct SequenceManifest {
    std::string name;
    std::vector<fs::path> frames;
    std::vector<std::optional<BBox>> groundtruth;
    std::vector<std::string> attributes;

    std::size_t size() const noexcept { return frames.size(); }
};

/// Parses a box file (ground truth or results). Absent-target lines yield nullopt.
inline std::vector<std::optional<BBox>> parse_boxes(std::istream& in, const std::string& origin) {
    std::vector<std::optional<BBox>> boxes;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.find_first_not_of(" \t") == std::string::npos)
            continue;
        std::replace(line.begin(), line.end(), ',', ' ');
        std::replace(line.begin(), line.end(), '\t', ' ');
        std::istringstream fields(line);
        std::vector<double> v;
        std::string tok;
        while (fields >> tok) {
            std::size_t used = 0;
            double value = 0.0;
            try {
                value = std::stod(tok, &used);
            } catch (const std::exception&) {
                used = 0;
            }
            if (used != tok.size())
                fail(ErrorKind::MalformedGroundTruth, origin + ":" + std::to_string(line_no) + ": bad number '" + tok + "'");
            v.push_back(value);
        }
        if (v.size() != 4)
            fail(ErrorKind::MalformedGroundTruth,
                 origin + ":" + std::to_string(line_no) + ": expected 4 values, got " + std::to_string(v.size()));
        if (std::any_of(v.begin(), v.end(), [](double x) { return std::isnan(x); })) {
            boxes.push_back(std::nullopt);
            continue;
        }
        const BBox box = BBox::from_corner_1based(v[0], v[1], v[2], v[3]);
        if (!box.valid())
            fail(ErrorKind::MalformedGroundTruth, origin + ":" + std::to_string(line_no) + ": degenerate box");
        boxes.push_back(box);
    }
    return boxes;
}

inline std::vector<std::optional<BBox>> read_boxes(const fs::path& file) {
    std::ifstream in(file);
    if (!in)
        fail(ErrorKind::MalformedGroundTruth, "cannot open " + file.string());
    return parse_boxes(in, file.string());
}

inline std::string format_box(const BBox& b) {
    char buf[128];
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g", b.left() + 1.0, b.top() + 1.0, b.w, b.h);
    return buf;
}

/// One "x,y,w,h" line per frame, 1-indexed corner format, round-trippable through read_boxes.
inline void write_boxes(const fs::path& file, const std::vector<BBox>& boxes) {
    std::ofstream out(file);
    if (!out)
        fail(ErrorKind::InvalidInput, "cannot write " + file.string());
    for (const auto& b : boxes) out << format_box(b) << '\n';
}

namespace detail {

inline bool is_image(const fs::path& p) {
    std::string ext = p.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return ext == ".png" || ext == ".jpg" || ext == ".jpeg";
}

inline std::vector<fs::path> list_frames(const fs::path& dir) {
    std::vector<fs::path> frames;
    for (const auto& entry : fs::directory_iterator(dir))
        if (entry.is_regular_file() && is_image(entry.path()))
            frames.push_back(entry.path());
    std::sort(frames.begin(), frames.end());
    return frames;
}

inline void finalize(SequenceManifest& m) {
    if (m.frames.empty())
        fail(ErrorKind::MissingFrames, "sequence '" + m.name + "' has no frames");
    for (const auto& f : m.frames)
        if (!fs::exists(f))
            fail(ErrorKind::MissingFrames, "frame not found: " + f.string());
    if (m.groundtruth.size() != m.frames.size())
        fail(ErrorKind::MalformedGroundTruth, "sequence '" + m.name + "': " + std::to_string(m.frames.size()) +
                                                  " frames but " + std::to_string(m.groundtruth.size()) +
                                                  " ground-truth lines");
    if (!m.groundtruth.front())
        fail(ErrorKind::MalformedGroundTruth, "first ground-truth box must be present");
}

inline SequenceManifest load_manifest_json(const fs::path& file) {
    std::ifstream in(file);
    if (!in)
        fail(ErrorKind::InvalidInput, "cannot open manifest " + file.string());
    nlohmann::json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        fail(ErrorKind::InvalidInput, "manifest " + file.string() + ": " + e.what());
    }
    const fs::path base = file.parent_path();
    SequenceManifest m;
    try {
        m.name = j.value("name", file.parent_path().filename().string());
        for (const auto& f : j.at("frames")) m.frames.push_back(base / f.get<std::string>());
        m.groundtruth = read_boxes(base / j.at("groundtruth").get<std::string>());
        if (j.contains("attributes"))
            for (const auto& a : j.at("attributes")) m.attributes.push_back(a.get<std::string>());
    } catch (const nlohmann::json::exception& e) {
        fail(ErrorKind::InvalidInput, "manifest " + file.string() + ": " + e.what());
    }
    return m;
}

} // namespace detail

inline SequenceManifest load_sequence(const fs::path& path) {
    if (!fs::exists(path))
        fail(ErrorKind::MissingFrames, "no such sequence: " + path.string());
    SequenceManifest m;
    if (fs::is_regular_file(path)) {
        m = detail::load_manifest_json(path);
    } else if (fs::exists(path / "manifest.json")) {
        m = detail::load_manifest_json(path / "manifest.json");
    } else {
        m.name = fs::absolute(path).lexically_normal().filename().string();
        if (m.name.empty()) m.name = fs::absolute(path).parent_path().filename().string();
        const fs::path img = path / "img";
        m.frames = detail::list_frames(fs::is_directory(img) ? img : path);
        std::optional<fs::path> gt;
        for (const char* candidate : {"groundtruth.txt", "groundtruth_rect.txt", "gt.txt"})
            if (fs::exists(path / candidate)) {
                gt = path / candidate;
                break;
            }
        if (!gt)
            fail(ErrorKind::MalformedGroundTruth, "no ground-truth file in " + path.string());
        m.groundtruth = read_boxes(*gt);
    }
    detail::finalize(m);
    return m;
}

/// Decodes a frame to luminance. Failures raise FrameUnavailable.
inline GrayImage read_frame(const fs::path& file) {
    cv::Mat img = cv::imread(file.string(), cv::IMREAD_UNCHANGED);
    if (!img.empty() && (img.depth() != CV_8U || (img.channels() != 1 && img.channels() != 3)))
        img = cv::imread(file.string(), cv::IMREAD_COLOR);
    if (img.empty())
        fail(ErrorKind::FrameUnavailable, "cannot decode " + file.string());
    return to_gray(img);
}

/// Writes a luminance image as an 8-bit grayscale PNG.
inline void write_frame(const fs::path& file, const GrayImage& img) {
    cv::Mat out(img.height(), img.width(), CV_8UC1);
    for (int y = 0; y < img.height(); ++y) {
        auto* row = out.ptr<std::uint8_t>(y);
        for (int x = 0; x < img.width(); ++x) row[x] = static_cast<std::uint8_t>(std::lround(img(x, y) * 255.0));
    }
    if (!cv::imwrite(file.string(), out))
        fail(ErrorKind::InvalidInput, "cannot write " + file.string());
}

} // namespace amcf::bench

#endif

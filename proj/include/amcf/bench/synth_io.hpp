#ifndef AMCF_BENCH_SYNTH_IO_HPP
#define AMCF_BENCH_SYNTH_IO_HPP

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>

#include "json.hpp"

#include "sequence.hpp"
#include "synth.hpp"

namespace amcf::bench {

/// JSON synthetic-sequence spec. Every field is optional and defaults to SynthSpec's value:
/// {"name", "width", "height", "frames", "object_size": [w,h], "start": [x,y],
///  "velocity": [vx,vy], "occlusions": [[first,last],...],
///  "texture_switches": [[frame,texture],...], "noise", "clutter", "seed"}
/// Unknown keys are rejected.
inline SynthSpec parse_synth_spec(const nlohmann::json& j) {
    static const std::set<std::string> known{"name",       "width",      "height",           "frames",
                                             "object_size", "start",     "velocity",         "occlusions",
                                             "texture_switches", "noise", "clutter",         "seed"};
    if (!j.is_object())
        fail(ErrorKind::InvalidInput, "synthetic spec must be a JSON object");
    for (const auto& [key, value] : j.items())
        if (!known.contains(key))
            fail(ErrorKind::InvalidInput, "synthetic spec: unknown key '" + key + "'");
    SynthSpec s;
    try {
        s.name = j.value("name", s.name);
        s.width = j.value("width", s.width);
        s.height = j.value("height", s.height);
        s.frames = j.value("frames", s.frames);
        if (j.contains("object_size")) {
            s.object_w = j.at("object_size").at(0).get<double>();
            s.object_h = j.at("object_size").at(1).get<double>();
        }
        if (j.contains("start")) {
            s.start_x = j.at("start").at(0).get<double>();
            s.start_y = j.at("start").at(1).get<double>();
        }
        if (j.contains("velocity")) {
            s.velocity_x = j.at("velocity").at(0).get<double>();
            s.velocity_y = j.at("velocity").at(1).get<double>();
        }
        if (j.contains("occlusions"))
            for (const auto& w : j.at("occlusions")) s.occlusions.emplace_back(w.at(0).get<int>(), w.at(1).get<int>());
        if (j.contains("texture_switches"))
            for (const auto& t : j.at("texture_switches")) s.texture_switches.push_back({t.at(0).get<int>(), t.at(1).get<int>()});
        s.noise = j.value("noise", s.noise);
        s.clutter = j.value("clutter", s.clutter);
        s.seed = j.value("seed", s.seed);
    } catch (const nlohmann::json::exception& e) {
        fail(ErrorKind::InvalidInput, std::string("synthetic spec: ") + e.what());
    }
    return s;
}

inline SynthSpec load_synth_spec(const fs::path& file) {
    std::ifstream in(file);
    if (!in)
        fail(ErrorKind::InvalidInput, "cannot open synthetic spec " + file.string());
    nlohmann::json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        fail(ErrorKind::InvalidInput, "synthetic spec " + file.string() + ": " + e.what());
    }
    return parse_synth_spec(j);
}

/// Renders the sequence to `outdir`: img/000001.png..., groundtruth.txt and manifest.json
/// (which also lists occluded frames, 0-based).
inline SequenceManifest write_synth_sequence(const SynthSpec& spec, const fs::path& outdir) {
    const SynthSequence seq = synth_sequence(spec);
    fs::create_directories(outdir / "img");
    SequenceManifest m;
    m.name = spec.name;
    nlohmann::json manifest;
    manifest["name"] = spec.name;
    manifest["groundtruth"] = "groundtruth.txt";
    nlohmann::json frames = nlohmann::json::array();
    nlohmann::json occluded = nlohmann::json::array();
    for (std::size_t i = 0; i < seq.frames.size(); ++i) {
        char name[32];
        std::snprintf(name, sizeof name, "%06zu.png", i + 1);
        const fs::path rel = fs::path("img") / name;
        write_frame(outdir / rel, seq.frames[i]);
        frames.push_back(rel.generic_string());
        m.frames.push_back(outdir / rel);
        m.groundtruth.push_back(seq.groundtruth[i]);
        if (seq.occluded[i]) occluded.push_back(i);
    }
    write_boxes(outdir / "groundtruth.txt", seq.groundtruth);
    manifest["frames"] = frames;
    manifest["occluded"] = occluded;
    nlohmann::json attributes = nlohmann::json::array();
    if (!spec.occlusions.empty()) attributes.push_back("full_occlusion");
    if (!spec.texture_switches.empty()) attributes.push_back("appearance_change");
    manifest["attributes"] = attributes;
    for (const auto& a : attributes) m.attributes.push_back(a.get<std::string>());
    std::ofstream(outdir / "manifest.json") << manifest.dump(2) << '\n';
    return m;
}

} // namespace amcf::bench

#endif

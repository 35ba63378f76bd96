#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <random>
#include <sstream>

#include <sys/wait.h>

#include <gtest/gtest.h>

#include <amcf/bench/ablation.hpp>
#include <amcf/bench/config.hpp>
#include <amcf/bench/ope.hpp>
#include <amcf/bench/report.hpp>
#include <amcf/bench/synth_io.hpp>

using namespace amcf;
using namespace amcf::bench;

namespace {

class TempDir {
public:
    TempDir() {
        static int counter = 0;
        path_ = fs::temp_directory_path() /
                ("amcf_test_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) + "_" +
                 ::testing::UnitTest::GetInstance()->current_test_info()->name() + "_" + std::to_string(counter++));
        fs::remove_all(path_);
        fs::create_directories(path_);
    }
    ~TempDir() { fs::remove_all(path_); }
    const fs::path& path() const { return path_; }

private:
    fs::path path_;
};

void make_sequence(const fs::path& dir, int frames, int gt_lines, int nan_line = -1) {
    fs::create_directories(dir / "img");
    for (int i = 0; i < frames; ++i) {
        char name[32];
        std::snprintf(name, sizeof name, "%04d.png", i + 1);
        write_frame(dir / "img" / name, GrayImage(32, 24, 0.25 + 0.01 * i));
    }
    std::ofstream gt(dir / "groundtruth_rect.txt");
    for (int i = 0; i < gt_lines; ++i)
        gt << (i == nan_line ? "NaN,NaN,NaN,NaN" : std::to_string(5 + i) + ",6,10,8") << '\n';
}

template <class F>
ErrorKind kind_of(F&& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.kind();
    }
    ADD_FAILURE() << "no error raised";
    return ErrorKind::InvalidInput;
}

BBox corner(double x, double y, double w, double h) { return BBox::from_corner(x, y, w, h); }

} // namespace

TEST(Sequence, LoadsFramesAndGroundTruth) {
    TempDir tmp;
    make_sequence(tmp.path() / "seq", 10, 10);
    const SequenceManifest m = load_sequence(tmp.path() / "seq");
    EXPECT_EQ(m.size(), 10u);
    EXPECT_EQ(m.name, "seq");
    ASSERT_TRUE(m.groundtruth[0].has_value());
    EXPECT_DOUBLE_EQ(m.groundtruth[0]->cx, 9.0);
    EXPECT_DOUBLE_EQ(m.groundtruth[0]->cy, 9.0);
    const GrayImage f = read_frame(m.frames[3]);
    EXPECT_EQ(f.width(), 32);
    EXPECT_NEAR(f(0, 0), std::lround(0.28 * 255) / 255.0, 1e-12);
}

TEST(Sequence, CountMismatchIsMalformed) {
    TempDir tmp;
    make_sequence(tmp.path() / "seq", 10, 9);
    EXPECT_EQ(kind_of([&] { (void)load_sequence(tmp.path() / "seq"); }), ErrorKind::MalformedGroundTruth);
}

TEST(Sequence, MissingInputsAreReported) {
    TempDir tmp;
    EXPECT_EQ(kind_of([&] { (void)load_sequence(tmp.path() / "nope"); }), ErrorKind::MissingFrames);
    fs::create_directories(tmp.path() / "empty");
    std::ofstream(tmp.path() / "empty" / "groundtruth.txt") << "1,1,2,2\n";
    EXPECT_EQ(kind_of([&] { (void)load_sequence(tmp.path() / "empty"); }), ErrorKind::MissingFrames);
    EXPECT_EQ(kind_of([&] { (void)read_frame(tmp.path() / "empty" / "groundtruth.txt"); }), ErrorKind::FrameUnavailable);
}

TEST(Sequence, BadLinesCarryLineNumber) {
    std::istringstream in("1,2,3,4\n1,2,x,4\n");
    try {
        (void)parse_boxes(in, "gt");
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::MalformedGroundTruth);
        EXPECT_NE(std::string(e.what()).find("gt:2"), std::string::npos);
    }
    std::istringstream three("1\t2\t3\n");
    EXPECT_EQ(kind_of([&] { (void)parse_boxes(three, "gt"); }), ErrorKind::MalformedGroundTruth);
    std::istringstream tabs("1\t2\t3\t4\r\n\n");
    EXPECT_EQ(parse_boxes(tabs, "gt").size(), 1u);
}

TEST(Sequence, AbsentTargetFramesAreExcluded) {
    TempDir tmp;
    make_sequence(tmp.path() / "seq", 10, 10, 4);
    const SequenceManifest m = load_sequence(tmp.path() / "seq");
    EXPECT_FALSE(m.groundtruth[4].has_value());
    std::vector<BBox> pred;
    for (std::size_t i = 0; i < m.size(); ++i) pred.push_back(m.groundtruth[i] ? *m.groundtruth[i] : BBox{500, 500, 1, 1});
    const EvalReport r = evaluate(pred, m.groundtruth);
    EXPECT_DOUBLE_EQ(r.precision_20, 1.0);
    EXPECT_DOUBLE_EQ(r.mean_iou, 1.0);
    EXPECT_FALSE(r.center_errors[4].has_value());
}

TEST(Sequence, ResultsRoundTripLosslessly) {
    TempDir tmp;
    std::mt19937_64 rng(91);
    std::uniform_real_distribution<double> u(1.0, 500.0);
    std::vector<BBox> boxes;
    for (int i = 0; i < 50; ++i) boxes.push_back({u(rng), u(rng), u(rng) / 7.0, u(rng) / 3.0});
    write_boxes(tmp.path() / "r.txt", boxes);
    const auto back = read_boxes(tmp.path() / "r.txt");
    ASSERT_EQ(back.size(), boxes.size());
    for (std::size_t i = 0; i < boxes.size(); ++i) {
        EXPECT_NEAR(back[i]->cx, boxes[i].cx, 1e-12 * boxes[i].cx);
        EXPECT_NEAR(back[i]->cy, boxes[i].cy, 1e-12 * boxes[i].cy);
        EXPECT_DOUBLE_EQ(back[i]->w, boxes[i].w);
        EXPECT_DOUBLE_EQ(back[i]->h, boxes[i].h);
    }
}

TEST(Metrics, WorkedExamples) {
    const BBox a = corner(0, 0, 2, 2), b = corner(1, 0, 2, 2);
    EXPECT_DOUBLE_EQ(iou(a, b), 1.0 / 3.0);
    EXPECT_DOUBLE_EQ(iou(a, a), 1.0);
    EXPECT_DOUBLE_EQ(center_error(a, a), 0.0);
    EXPECT_DOUBLE_EQ(center_error(a, b), 1.0);
    EXPECT_DOUBLE_EQ(iou(a, corner(5, 5, 1, 1)), 0.0);
    EXPECT_DOUBLE_EQ(precision_at({0.0, 10.0, 30.0}, 20.0), 2.0 / 3.0);
    EXPECT_DOUBLE_EQ(precision_at({20.0}, 20.0), 1.0);
}

TEST(Metrics, CurveShapes) {
    const Curve p = precision_curve({0.0, 10.0, 30.0});
    EXPECT_EQ(p.values.size(), 51u);
    EXPECT_DOUBLE_EQ(p.thresholds.front(), 0.0);
    EXPECT_DOUBLE_EQ(p.thresholds.back(), 50.0);
    EXPECT_TRUE(std::is_sorted(p.values.begin(), p.values.end()));
    const Curve s = success_curve({1.0, 0.5, 0.0});
    EXPECT_EQ(s.values.size(), 51u);
    EXPECT_DOUBLE_EQ(s.thresholds[1], 0.02);
    EXPECT_DOUBLE_EQ(s.values.front(), 2.0 / 3.0);
    EXPECT_DOUBLE_EQ(s.values.back(), 0.0);
    EXPECT_TRUE(std::is_sorted(s.values.rbegin(), s.values.rend()));
}

TEST(Metrics, PermutationInvariant) {
    std::mt19937_64 rng(92);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> ious(40), errors(40);
    for (auto& v : ious) v = u(rng);
    for (auto& v : errors) v = 60.0 * u(rng);
    const double a = auc(success_curve(ious));
    const auto pc = precision_curve(errors).values;
    std::shuffle(ious.begin(), ious.end(), rng);
    std::shuffle(errors.begin(), errors.end(), rng);
    EXPECT_DOUBLE_EQ(auc(success_curve(ious)), a);
    EXPECT_EQ(precision_curve(errors).values, pc);
}

TEST(Ope, PerfectDisplacedAndDisjointPredictions) {
    std::vector<std::optional<BBox>> truth;
    std::vector<BBox> perfect, shifted, disjoint;
    for (int i = 0; i < 20; ++i) {
        const BBox b{100.0 + i, 80.0, 30.0, 30.0};
        truth.push_back(b);
        perfect.push_back(b);
        shifted.push_back({b.cx + 25.0, b.cy, b.w, b.h});
        disjoint.push_back({b.cx + 100.0, b.cy, b.w, b.h});
    }
    const EvalReport p = evaluate(perfect, truth);
    EXPECT_DOUBLE_EQ(p.precision_20, 1.0);
    EXPECT_GE(p.auc, 0.98);
    EXPECT_DOUBLE_EQ(evaluate(shifted, truth).precision_20, 0.0);
    const EvalReport d = evaluate(disjoint, truth);
    EXPECT_DOUBLE_EQ(d.mean_iou, 0.0);
    EXPECT_DOUBLE_EQ(d.auc, 0.0);
    EXPECT_DOUBLE_EQ(d.success.values.front(), 0.0);
}

TEST(Ope, TracksSyntheticSequenceAndWritesResults) {
    TempDir tmp;
    SynthSpec spec;
    spec.frames = 20;
    const SynthSequence seq = synth_sequence(spec);
    const OpeResult r = run_ope({}, source_of(seq), tmp.path() / "res.txt");
    EXPECT_EQ(r.predictions.size(), 20u);
    EXPECT_EQ(r.predictions.front(), seq.groundtruth.front());
    EXPECT_GT(r.report.fps, 0.0);
    EXPECT_DOUBLE_EQ(r.report.precision_20, 1.0);
    EXPECT_EQ(read_boxes(tmp.path() / "res.txt").size(), 20u);
}

TEST(Ope, FailureFlushesPartialResults) {
    TempDir tmp;
    SynthSpec spec;
    spec.frames = 10;
    const SynthSequence seq = synth_sequence(spec);
    SequenceSource src = source_of(seq);
    src.frame = [&](std::size_t i) -> GrayImage {
        if (i == 6) fail(ErrorKind::FrameUnavailable, "gone");
        return seq.frames[i];
    };
    EXPECT_EQ(kind_of([&] { (void)run_ope({}, src, tmp.path() / "res.txt"); }), ErrorKind::FrameUnavailable);
    EXPECT_EQ(read_boxes(tmp.path() / "res.txt").size(), 6u);
}

TEST(Synth, DeterministicTrajectoryAndOcclusion) {
    SynthSpec spec;
    spec.frames = 12;
    spec.occlusions = {{4, 6}};
    const SynthSequence a = synth_sequence(spec), b = synth_sequence(spec);
    for (std::size_t i = 0; i < a.frames.size(); ++i) EXPECT_EQ(a.frames[i].pixels(), b.frames[i].pixels());
    for (std::size_t i = 1; i < a.groundtruth.size(); ++i) {
        EXPECT_DOUBLE_EQ(a.groundtruth[i].cx - a.groundtruth[i - 1].cx, 2.0);
        EXPECT_DOUBLE_EQ(a.groundtruth[i].cy - a.groundtruth[i - 1].cy, 0.0);
    }
    SynthSpec clear = spec;
    clear.occlusions.clear();
    const SynthSequence c = synth_sequence(clear);
    for (int i = 0; i < 12; ++i) {
        const bool occluded = i >= 4 && i <= 6;
        EXPECT_EQ(a.occluded[static_cast<std::size_t>(i)], occluded);
        EXPECT_EQ(a.frames[static_cast<std::size_t>(i)].pixels() == c.frames[static_cast<std::size_t>(i)].pixels(), !occluded)
            << "frame " << i;
        if (occluded) {
            // Only pixels inside the object box change.
            const BBox box = a.groundtruth[static_cast<std::size_t>(i)];
            for (int y = 0; y < spec.height; ++y)
                for (int x = 0; x < spec.width; ++x)
                    if (x + 1 <= box.left() || x >= box.left() + box.w || y + 1 <= box.top() || y >= box.top() + box.h)
                        ASSERT_EQ(a.frames[static_cast<std::size_t>(i)](x, y), c.frames[static_cast<std::size_t>(i)](x, y));
        }
    }
    SynthSpec other = spec;
    other.seed = 2;
    EXPECT_NE(synth_sequence(other).frames[0].pixels(), a.frames[0].pixels());
}

TEST(Synth, WrittenSequenceLoadsBack) {
    TempDir tmp;
    const auto spec = parse_synth_spec(nlohmann::json::parse(R"({"name":"demo","frames":5,"width":160,"height":120,
        "object_size":[30,20],"start":[60,50],"occlusions":[[2,3]]})"));
    write_synth_sequence(spec, tmp.path() / "demo");
    const SequenceManifest m = load_sequence(tmp.path() / "demo");
    EXPECT_EQ(m.name, "demo");
    ASSERT_EQ(m.size(), 5u);
    EXPECT_NEAR(m.groundtruth[1]->cx, 62.0, 1e-12);
    EXPECT_NEAR(m.groundtruth[1]->cy, 50.0, 1e-12);
    EXPECT_EQ(read_frame(m.frames[0]).width(), 160);

    EXPECT_EQ(kind_of([] { (void)parse_synth_spec(nlohmann::json::parse(R"({"start_x": 3})")); }), ErrorKind::InvalidInput);
}

TEST(Config, ParsesKeysAndRejectsBadInput) {
    std::istringstream good("# tuned\nlambda2 = 0.3\n  tau=0.4  # inline\nK = 3\nscale_count = 1\n\n");
    const TrackerConfig c = parse_config(good);
    EXPECT_DOUBLE_EQ(c.lambda2, 0.3);
    EXPECT_DOUBLE_EQ(c.tau, 0.4);
    EXPECT_EQ(c.K, 3);
    EXPECT_EQ(c.scale_count, 1);
    EXPECT_DOUBLE_EQ(c.lambda1, TrackerConfig{}.lambda1);

    std::istringstream round(format_config(c));
    const TrackerConfig r = parse_config(round);
    EXPECT_EQ(format_config(r), format_config(c));

    for (const char* bad : {"lambda9 = 1\n", "tau 0.5\n", "tau = abc\n", "K = 2.5\n", "nu = 1.0\n", "gamma = 2\n",
                            "lambda1 = 0\n", "K = 0\n", "scale_count = 4\n"}) {
        std::istringstream in(bad);
        try {
            (void)parse_config(in);
            ADD_FAILURE() << bad;
        } catch (const Error& e) {
            EXPECT_TRUE(e.is_input_error()) << bad;
        }
    }
}

TEST(Report, JsonRoundTripAndPlots) {
    TempDir tmp;
    std::vector<std::optional<BBox>> truth{BBox{10, 10, 4, 4}, std::nullopt, BBox{20, 10, 4, 4}};
    EvalReport r = evaluate({{10, 10, 4, 4}, {0, 0, 1, 1}, {21, 10, 4, 4}}, truth);
    r.sequence = "tiny";
    r.fps = 123.5;
    save_report(tmp.path() / "r.json", r);
    const EvalReport back = load_report(tmp.path() / "r.json");
    EXPECT_EQ(back.sequence, "tiny");
    EXPECT_DOUBLE_EQ(back.auc, r.auc);
    EXPECT_DOUBLE_EQ(back.fps, 123.5);
    EXPECT_EQ(back.success.values, r.success.values);
    EXPECT_EQ(back.center_errors, r.center_errors);

    const std::string csv = curves_csv(back);
    EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 1 + 51 + 51);
    EXPECT_EQ(csv.rfind("curve,threshold,value", 0), 0u);
    const std::string svg = plot_svg(back);
    EXPECT_EQ(svg.rfind("<svg", 0), 0u);
    EXPECT_NE(svg.find("Precision plot"), std::string::npos);
    EXPECT_NE(svg.find("Success plot"), std::string::npos);

    std::ofstream(tmp.path() / "bad.json") << "{\"auc\": 1}";
    EXPECT_EQ(kind_of([&] { (void)load_report(tmp.path() / "bad.json"); }), ErrorKind::InvalidInput);
}

TEST(Ablation, StandardVariantsToggleExpectedTerms) {
    const auto v = standard_variants({});
    ASSERT_EQ(v.size(), 5u);
    EXPECT_EQ(v[0].name, "AMCF");
    EXPECT_GT(v[0].config.lambda2, 0.0);
    EXPECT_EQ(v[1].config.lambda2, 0.0);
    EXPECT_GT(v[1].config.lambda3, 0.0);
    EXPECT_GT(v[1].config.eta, 0.0);
    EXPECT_EQ(v[2].config.eta, 0.0);
    EXPECT_GT(v[2].config.lambda2, 0.0);
    EXPECT_EQ(v[3].config.lambda2, 0.0);
    EXPECT_EQ(v[3].config.lambda3, 0.0);
    EXPECT_GT(v[3].config.eta, 0.0);
    EXPECT_EQ(v[4].config.lambda2 + v[4].config.lambda3 + v[4].config.eta, 0.0);
    const std::string table = format_ablation({{"AMCF", 0.5, 0.25, 40.0, {}}});
    EXPECT_EQ(table, "variant,precision,auc,fps\nAMCF,50.0,25.0,40.0\n");
}

#ifdef AMCF_CLI_PATH
namespace {

int run_cli(const std::string& args) {
    const std::string cmd = std::string(AMCF_CLI_PATH) + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

} // namespace

TEST(Cli, ExitCodesAndOutputs) {
    TempDir tmp;
    const fs::path d = tmp.path();
    std::ofstream(d / "spec.json") << R"({"name":"cli","frames":8,"width":200,"height":160,"start":[80,80],
        "object_size":[40,40]})";
    std::ofstream(d / "ok.cfg") << "scale_count = 1\n";
    std::ofstream(d / "bad.cfg") << "nu = 2\n";

    EXPECT_EQ(run_cli("synth " + (d / "spec.json").string() + " " + (d / "seq").string()), 0);
    const std::string seq = (d / "seq").string();
    const std::string res = (d / "res.txt").string();
    EXPECT_EQ(run_cli("track " + seq + " --config " + (d / "ok.cfg").string() + " --out " + res + " --report " +
                      (d / "rep.json").string()),
              0);
    EXPECT_TRUE(fs::exists(res));
    EXPECT_EQ(run_cli("eval " + seq + " " + res), 0);
    EXPECT_EQ(run_cli("plot " + (d / "rep.json").string()), 0);
    EXPECT_TRUE(fs::exists(d / "rep.csv"));
    EXPECT_TRUE(fs::exists(d / "rep.svg"));
    EXPECT_EQ(run_cli("ablate " + seq + " --out " + (d / "abl.csv").string()), 0);
    std::ifstream abl(d / "abl.csv");
    const std::string table((std::istreambuf_iterator<char>(abl)), std::istreambuf_iterator<char>());
    EXPECT_EQ(std::count(table.begin(), table.end(), '\n'), 6);

    EXPECT_EQ(run_cli("track " + (d / "missing").string()), 2);
    EXPECT_EQ(run_cli("track " + seq + " --config " + (d / "bad.cfg").string()), 2);
    EXPECT_EQ(run_cli("frobnicate"), 2);
    std::ofstream(d / "short.txt") << "1,1,10,10\n";
    EXPECT_EQ(run_cli("eval " + seq + " " + (d / "short.txt").string()), 2);

    // An undecodable frame is a runtime failure, not an input error.
    std::ofstream(d / "seq" / "img" / "000004.png", std::ios::trunc) << "not a png";
    EXPECT_EQ(run_cli("track " + seq + " --out " + res), 3);
    EXPECT_EQ(read_boxes(res).size(), 3u);
}
#endif

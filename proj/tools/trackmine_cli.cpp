// trackmine command line: synth, associate, rectify, mine, sample, eval, hallucinate.

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <opencv2/imgcodecs.hpp>

#include "CLI11.hpp"
#include "json.hpp"
#include "trackmine/associate.hpp"
#include "trackmine/dataset_io.hpp"
#include "trackmine/hallucinate.hpp"
#include "trackmine/metrics.hpp"
#include "trackmine/mot_io.hpp"
#include "trackmine/parallel.hpp"
#include "trackmine/rectify.hpp"
#include "trackmine/rng.hpp"
#include "trackmine/sampler.hpp"
#include "trackmine/synth.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace trackmine;

namespace {

struct GlobalOptions {
    std::uint64_t seed = 0;
    int workers = 0;
    double fps = 30.0;

    int worker_count() const {
        return workers > 0 ? workers : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    }
};

/// A track file and its sidecar metadata (sidecar fps wins over --fps).
struct Sequence {
    fs::path file;
    std::string name;
    SequenceMeta meta;
};

std::vector<fs::path> expand_inputs(const std::vector<std::string>& inputs) {
    std::vector<fs::path> out;
    for (const auto& in : inputs) {
        const fs::path p(in);
        if (fs::is_directory(p)) {
            std::vector<fs::path> files;
            for (const auto& e : fs::directory_iterator(p))
                if (e.is_regular_file() && e.path().extension() == ".txt") files.push_back(e.path());
            std::sort(files.begin(), files.end());
            out.insert(out.end(), files.begin(), files.end());
        } else if (fs::exists(p)) {
            out.push_back(p);
        } else {
            throw DataError("no such file or directory: " + in);
        }
    }
    return out;
}

Sequence load_sequence(const fs::path& file, double default_fps) {
    Sequence s{file, file.stem().string(), {}};
    s.meta = read_meta(file).value_or(SequenceMeta{default_fps, s.name, std::nullopt, std::nullopt});
    if (s.meta.video_id.empty()) s.meta.video_id = s.name;
    return s;
}

std::vector<Sequence> load_sequences(const std::vector<std::string>& inputs, double default_fps) {
    std::vector<Sequence> out;
    for (const auto& f : expand_inputs(inputs)) out.push_back(load_sequence(f, default_fps));
    return out;
}

FrameSpan track_extent(const std::vector<Tracklet>& tracks, const SequenceMeta& meta) {
    int first = 0, last = 0;
    bool any = false;
    for (const auto& t : tracks) {
        if (t.points.empty()) continue;
        first = any ? std::min(first, t.start_frame()) : t.start_frame();
        last = any ? std::max(last, t.end_frame()) : t.end_frame();
        any = true;
    }
    return {meta.first_frame.value_or(first), meta.last_frame.value_or(last)};
}

json span_json(FrameSpan s) { return json::array({s.first, s.last}); }

FrameSpan span_from_json(const json& j) { return {j.at(0).get<int>(), j.at(1).get<int>()}; }

json effects_json(const EffectConfig& fx) {
    return {{"motion_blur",
             {{"enabled", fx.motion_blur.enabled},
              {"kernel_length", fx.motion_blur.kernel_length},
              {"angle_deg", fx.motion_blur.angle_deg},
              {"ramp", fx.motion_blur.ramp}}},
            {"lighting",
             {{"enabled", fx.lighting.enabled},
              {"brightness", fx.lighting.brightness},
              {"contrast", fx.lighting.contrast},
              {"gamma", fx.lighting.gamma}}},
            {"compression",
             {{"enabled", fx.compression.enabled},
              {"quality", fx.compression.quality},
              {"jitter", fx.compression.jitter}}},
            {"seed", fx.seed}};
}

void write_sequence(const fs::path& file, const std::vector<Tracklet>& tracks, const SequenceMeta& meta,
                    bool with_flag) {
    fs::create_directories(file.parent_path());
    write_tracks(file, tracks, with_flag);
    write_meta(file, meta);
}

// ---------------------------------------------------------------------------

struct SynthOptions {
    std::string out;
    int sequences = 1;
    SceneConfig scene;
    std::string motion = "linear";
    double mu = RectifyConfig{}.mu;
    double gamma = RectifyConfig{}.gamma;
};

void run_synth(const GlobalOptions& g, const SynthOptions& o) {
    RectifyConfig rcfg;
    rcfg.mu = o.mu;
    rcfg.gamma = o.gamma;
    rcfg.validate();
    const fs::path root(o.out);
    std::vector<json> expected(o.sequences);
    parallel_for(static_cast<std::size_t>(o.sequences), g.worker_count(), [&](std::size_t k) {
        const std::string name = "seq" + std::to_string(k + 1);
        SceneConfig cfg = o.scene;
        cfg.fps = g.fps;
        cfg.motion = o.motion == "sinusoidal" ? MotionModel::sinusoidal : MotionModel::linear;
        cfg.seed = derive_seed(g.seed, "synth/" + name);
        const auto scene = generate_fragmented_scene(cfg, rcfg);
        const SequenceMeta meta{cfg.fps, name, 0, cfg.frames - 1};
        write_sequence(root / "gt" / (name + ".txt"), scene.ground_truth, meta, false);
        write_sequence(root / "tracklets" / (name + ".txt"), scene.fragments, meta, false);
        std::vector<DetectionRecord> dets;
        for (const auto& t : scene.fragments)
            for (const auto& p : t.points) dets.push_back({p.frame, p.box, 1.0});
        std::stable_sort(dets.begin(), dets.end(), [](const auto& a, const auto& b) { return a.frame < b.frame; });
        const auto det_file = root / "detections" / (name + ".txt");
        fs::create_directories(det_file.parent_path());
        write_detections(det_file, dets);
        write_meta(det_file, meta);
        json joins = json::array();
        for (const auto& [i, j] : scene.expected_joins) joins.push_back({i, j});
        expected[k] = {{"video_id", name}, {"expected_joins", joins}, {"fragment_agent", scene.fragment_agent}};
    });
    write_json_file(root / "expected_joins.json", json(expected));
    std::cout << "synth: wrote " << o.sequences << " sequence(s) to " << root.string() << "\n";
}

// ---------------------------------------------------------------------------

struct AssociateOptions {
    std::vector<std::string> detections;
    std::string predictions;
    std::string predictor = "identity";
    std::string out;
    AssocConfig cfg;
};

void run_associate(const GlobalOptions& g, const AssociateOptions& o) {
    const auto seqs = load_sequences(o.detections, g.fps);
    const fs::path pred_root(o.predictions);
    if (!o.predictions.empty() && !fs::exists(pred_root)) throw DataError("no such predictions path: " + o.predictions);
    if (!o.predictions.empty() && !fs::is_directory(pred_root) && seqs.size() != 1)
        throw std::invalid_argument("a single predictions file needs exactly one detections file");

    std::vector<std::size_t> counts(seqs.size());
    parallel_for(seqs.size(), g.worker_count(), [&](std::size_t k) {
        const auto& s = seqs[k];
        AssocConfig cfg = o.cfg;
        cfg.fps = s.meta.fps;
        const auto dets = read_detections(s.file);
        const auto frames = group_by_frame(dets);
        std::vector<Tracklet> tracks;
        if (!o.predictions.empty()) {
            const auto pfile = fs::is_directory(pred_root) ? pred_root / s.file.filename() : pred_root;
            RecordedPredictor recorded(read_predictions(pfile));
            tracks = run_association(frames, recorded, cfg);
        } else if (o.predictor == "constant-velocity") {
            ConstantVelocityPredictor cv;
            tracks = run_association(frames, cv, cfg);
        } else {
            IdentityPredictor identity;
            tracks = run_association(frames, identity, cfg);
        }
        SequenceMeta meta = s.meta;
        if (!meta.first_frame && !frames.empty()) meta.first_frame = frames.front().frame;
        if (!meta.last_frame && !frames.empty()) meta.last_frame = frames.back().frame;
        write_sequence(fs::path(o.out) / s.file.filename(), tracks, meta, false);
        counts[k] = tracks.size();
    });
    for (std::size_t k = 0; k < seqs.size(); ++k)
        std::cout << "associate: " << seqs[k].name << " -> " << counts[k] << " tracklet(s)\n";
}

// ---------------------------------------------------------------------------

json rectify_config_json(const RectifyConfig& c) {
    json j{{"mu", c.mu}, {"gamma", c.gamma}, {"interpolate_gaps", c.interpolate_gaps},
           {"clip_padding", c.clip_padding}};
    if (c.min_confidence) j["min_confidence"] = *c.min_confidence;
    return j;
}

struct RectifyOptions {
    std::vector<std::string> inputs;
    std::string out;
    RectifyConfig cfg;
    bool no_interpolate = false;
    std::optional<double> min_confidence;
};

void run_rectify(const GlobalOptions& g, const RectifyOptions& o) {
    RectifyConfig cfg = o.cfg;
    cfg.interpolate_gaps = !o.no_interpolate;
    cfg.min_confidence = o.min_confidence;
    cfg.validate();
    const auto seqs = load_sequences(o.inputs, g.fps);
    const fs::path root(o.out);

    std::vector<json> videos(seqs.size());
    parallel_for(seqs.size(), g.worker_count(), [&](std::size_t k) {
        const auto& s = seqs[k];
        const auto tracklets = read_tracks(s.file, s.meta.fps);
        const FrameSpan extent = track_extent(tracklets, s.meta);
        auto result = rectify(tracklets, cfg, s.meta.video_id);
        result.log.fps = s.meta.fps;
        SequenceMeta meta = s.meta;
        meta.first_frame = extent.first;
        meta.last_frame = extent.last;
        const auto out_file = root / s.file.filename();
        write_sequence(out_file, result.tracks, meta, true);
        json clips = json::array();
        for (const auto& c : mine_hard_examples(result.log, extent, cfg)) clips.push_back(to_json(c));
        videos[k] = {{"video_id", s.meta.video_id},
                     {"track_file", out_file.string()},
                     {"extent", span_json(extent)},
                     {"input_tracklets", tracklets.size()},
                     {"output_tracks", result.tracks.size()},
                     {"merge_log", to_json(result.log)},
                     {"hard_clips", clips}};
    });
    write_json_file(root / "merge_log.json", {{"config", rectify_config_json(cfg)}, {"videos", videos}});
    for (const auto& v : videos)
        std::cout << "rectify: " << v["video_id"].get<std::string>() << " " << v["input_tracklets"] << " -> "
                  << v["output_tracks"] << " track(s), " << v["merge_log"]["joins"].size() << " join(s)\n";
}

// ---------------------------------------------------------------------------

struct MineOptions {
    std::string merge_log;
    std::string out;
    std::optional<double> clip_padding;
};

void run_mine(const GlobalOptions&, const MineOptions& o) {
    const json in = read_json_file(o.merge_log);
    RectifyConfig cfg;
    try {
        const auto& c = in.at("config");
        cfg.mu = c.value("mu", cfg.mu);
        cfg.gamma = c.value("gamma", cfg.gamma);
        cfg.clip_padding = c.value("clip_padding", cfg.clip_padding);
        if (o.clip_padding) cfg.clip_padding = *o.clip_padding;
        cfg.validate();
        json clips = json::array();
        for (const auto& v : in.at("videos")) {
            const MergeLog log = merge_log_from_json(v.at("merge_log"));
            for (const auto& c : mine_hard_examples(log, span_from_json(v.at("extent")), cfg)) {
                json cj = to_json(c);
                cj["track_file"] = v.at("track_file");
                clips.push_back(std::move(cj));
            }
        }
        write_json_file(o.out, {{"clip_padding", cfg.clip_padding}, {"clips", clips}});
        std::cout << "mine: " << clips.size() << " hard clip(s)\n";
    } catch (const json::exception& e) {
        throw DataError(o.merge_log + ": " + e.what());
    }
}

// ---------------------------------------------------------------------------

struct SampleOptions {
    std::vector<std::string> hv;
    std::vector<std::string> tracks;
    std::string hard;
    std::string out;
    int batches = 1;
    double clip_seconds = 1.0;
    SampleConfig cfg;
};

std::vector<fs::path> hv_dirs(const std::vector<std::string>& roots) {
    std::vector<fs::path> out;
    for (const auto& r : roots) {
        const fs::path p(r);
        if (fs::exists(p / "annotations.txt")) {
            out.push_back(p);
            continue;
        }
        if (!fs::is_directory(p)) throw DataError("not a hallucinated dataset: " + r);
        std::vector<fs::path> dirs;
        for (const auto& e : fs::directory_iterator(p))
            if (e.is_directory() && fs::exists(e.path() / "annotations.txt")) dirs.push_back(e.path());
        std::sort(dirs.begin(), dirs.end());
        out.insert(out.end(), dirs.begin(), dirs.end());
    }
    return out;
}

void run_sample(const GlobalOptions& g, const SampleOptions& o) {
    SampleConfig cfg = o.cfg;
    cfg.seed = g.seed;
    cfg.validate();
    if (o.batches < 1) throw std::invalid_argument("sample: --batches must be >= 1");

    std::vector<AnnotatedClip> hv_pool;
    for (const auto& d : hv_dirs(o.hv)) hv_pool.push_back(read_hallucinated_clip(d));

    std::map<std::string, std::vector<HardClip>> hard_by_video;
    double padding = RectifyConfig{}.clip_padding;
    if (!o.hard.empty()) {
        const json hj = read_json_file(o.hard);
        try {
            padding = hj.value("clip_padding", padding);
            for (const auto& c : hj.at("clips")) {
                auto clip = hard_clip_from_json(c);
                hard_by_video[clip.video_id].push_back(std::move(clip));
            }
        } catch (const json::exception& e) {
            throw DataError(o.hard + ": " + e.what());
        }
    }

    std::vector<TaggedClip> rv_pool;
    for (const auto& s : load_sequences(o.tracks, g.fps)) {
        const auto tracks = read_tracks(s.file, s.meta.fps);
        const auto& hard = hard_by_video[s.meta.video_id];
        const std::string ref = s.file.string();
        for (const auto& h : hard) rv_pool.push_back({make_clip(ref, tracks, {h.start_frame, h.end_frame}), true});
        const int clip_frames = std::max(2, static_cast<int>(std::lround(o.clip_seconds * s.meta.fps)));
        const int pad = static_cast<int>(std::lround(padding * s.meta.fps));
        for (auto& c : easy_clips(ref, tracks, track_extent(tracks, s.meta), hard, clip_frames, pad))
            rv_pool.push_back({std::move(c), false});
    }

    std::vector<BatchManifest> batches(o.batches);
    parallel_for(batches.size(), g.worker_count(), [&](std::size_t b) {
        batches[b] = compose_batch(hv_pool, rv_pool, cfg, static_cast<int>(b));
    });
    const fs::path out(o.out);
    if (out.has_parent_path()) fs::create_directories(out.parent_path());
    std::ofstream file(out);
    if (!file) throw DataError("cannot write " + o.out);
    write_manifest(file, batches);
    const auto a = allocate(cfg);
    std::cout << "sample: " << o.batches << " batch(es) of " << cfg.batch_size << " (hv " << a.hv << ", rv_easy "
              << a.rv_easy << ", rv_hard " << a.rv_hard << ")\n";
}

// ---------------------------------------------------------------------------

struct EvalOptions {
    std::string gt;
    std::string pred;
    std::string out;
    double iou = 0.5;
};

json clear_json(const SequenceReport& r) {
    return {{"name", r.name},
            {"mota", r.clear.mota},
            {"motp", r.clear.motp},
            {"fp", r.clear.fp},
            {"fn", r.clear.fn},
            {"idsw", r.clear.idsw},
            {"gt_boxes", r.clear.gt_boxes},
            {"pred_boxes", r.clear.pred_boxes},
            {"idf1", r.identity.idf1},
            {"idtp", r.identity.idtp},
            {"idfp", r.identity.idfp},
            {"idfn", r.identity.idfn}};
}

void run_eval(const GlobalOptions& g, const EvalOptions& o) {
    std::vector<std::pair<fs::path, fs::path>> pairs;
    if (fs::is_directory(o.gt)) {
        for (const auto& gt : expand_inputs({o.gt})) pairs.emplace_back(gt, fs::path(o.pred) / gt.filename());
    } else {
        pairs.emplace_back(o.gt, o.pred);
    }
    std::vector<SequenceReport> reports(pairs.size());
    parallel_for(pairs.size(), g.worker_count(), [&](std::size_t k) {
        const auto gs = load_sequence(pairs[k].first, g.fps);
        const auto gt = read_tracks(gs.file, gs.meta.fps, MotKind::ground_truth);
        const auto pred = read_tracks(pairs[k].second, gs.meta.fps);
        reports[k] = evaluate_sequence(gs.name, gt, pred, o.iou);
    });
    const auto total = combine(reports);
    json seqs = json::array();
    for (const auto& r : total.sequences) seqs.push_back(clear_json(r));
    const json report{{"mota", total.mota}, {"idf1", total.idf1}, {"fp", total.fp},        {"fn", total.fn},
                      {"idsw", total.idsw}, {"gt_boxes", total.gt_boxes}, {"sequences", seqs}};
    if (!o.out.empty()) write_json_file(o.out, report);
    for (const auto& r : total.sequences)
        std::cout << r.name << "  MOTA " << r.clear.mota << "  IDF1 " << r.identity.idf1 << "  IDsw "
                  << r.clear.idsw << "\n";
    std::cout << "OVERALL  MOTA " << total.mota << "  IDF1 " << total.idf1 << "  FP " << total.fp << "  FN "
              << total.fn << "  IDsw " << total.idsw << "\n";
}

// ---------------------------------------------------------------------------

struct HallucinateOptions {
    std::string manifest;
    std::string out;
    int frames = 16;
    double min_scale = 0.3;
    bool no_effects = false;
    double effect_probability = EffectRanges{}.enable_probability;
    int width = 0;
    int height = 0;
};

void run_hallucinate(const GlobalOptions& g, const HallucinateOptions& o) {
    const auto records = read_image_manifest(o.manifest);
    EffectRanges ranges;
    ranges.enable_probability = o.effect_probability;
    parallel_for(records.size(), g.worker_count(), [&](std::size_t k) {
        const auto& r = records[k];
        const cv::Mat image = cv::imread(r.image.string(), cv::IMREAD_COLOR);
        if (image.empty()) throw DataError("cannot read image " + r.image.string());
        Rng rng(derive_seed(g.seed, "hallucinate/" + r.source_id));
        ZoomConfig zoom = sample_zoom(rng, o.frames, o.min_scale);
        zoom.output_size = {o.width, o.height};
        EffectConfig fx = sample_effects(rng, ranges);
        if (o.no_effects) fx = EffectConfig{};
        const auto video = hallucinate_video(image, r.boxes, zoom, fx, r.source_id, g.fps);
        const json extra{{"image", r.image.string()},
                         {"seed", g.seed},
                         {"zoom",
                          {{"final_scale", zoom.final_scale},
                           {"direction", zoom.direction == ZoomDirection::zoom_in ? "in" : "out"}}},
                         {"effects", effects_json(fx)}};
        write_hallucinated_video(fs::path(o.out) / r.source_id, video, extra);
    });
    std::cout << "hallucinate: " << records.size() << " video(s) in " << o.out << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"trackmine: tracking data pipeline (synthesis, association, rectification, mining, sampling, "
                 "evaluation, hallucination)"};
    app.set_config("--config", "", "TOML config; top-level keys are global flags, [command] tables set "
                                   "command flags. Command-line flags win.");
    app.require_subcommand(1);
    GlobalOptions g;
    app.add_option("--seed", g.seed, "Global RNG seed");
    app.add_option("--workers", g.workers, "Worker threads (0 = all cores)")->check(CLI::NonNegativeNumber);
    app.add_option("--fps", g.fps, "Frame rate for files without a metadata sidecar")->check(CLI::PositiveNumber);

    SynthOptions so;
    auto* synth = app.add_subcommand("synth", "Write synthetic ground truth, fragments and detections");
    synth->add_option("--out", so.out, "Output directory")->required();
    synth->add_option("--sequences", so.sequences)->check(CLI::PositiveNumber);
    synth->add_option("--agents", so.scene.agents);
    synth->add_option("--frames", so.scene.frames);
    synth->add_option("--gaps", so.scene.gaps_per_track, "Gaps cut into each track");
    synth->add_option("--min-gap", so.scene.min_gap_frames, "Shortest gap in frames");
    synth->add_option("--max-gap", so.scene.max_gap_frames, "Longest gap in frames");
    synth->add_option("--min-fragment", so.scene.min_fragment_frames);
    synth->add_option("--min-box", so.scene.min_box);
    synth->add_option("--max-box", so.scene.max_box);
    synth->add_option("--max-speed", so.scene.max_speed, "Pixels per frame");
    synth->add_option("--arena-width", so.scene.arena_width);
    synth->add_option("--arena-height", so.scene.arena_height);
    synth->add_option("--motion", so.motion)->check(CLI::IsMember({"linear", "sinusoidal"}));
    synth->add_option("--mu", so.mu, "Overlap threshold used to label expected joins");
    synth->add_option("--gamma", so.gamma, "Gap limit in seconds used to label expected joins");

    AssociateOptions ao;
    auto* assoc = app.add_subcommand("associate", "Link detections into tracklets from per-frame predictions");
    assoc->add_option("detections", ao.detections, "Detection files or directories")->required();
    assoc->add_option("--predictions", ao.predictions, "Prediction file, or directory matched by file name");
    assoc->add_option("--predictor", ao.predictor, "Built-in predictor when no predictions are given")
        ->check(CLI::IsMember({"identity", "constant-velocity"}));
    assoc->add_option("--out", ao.out, "Output directory")->required();
    assoc->add_option("--vis-keep", ao.cfg.vis_keep, "Minimum predicted visibility to keep a track");
    assoc->add_option("--match-iou", ao.cfg.match_iou, "Minimum IoU between prediction and detection");
    assoc->add_option("--spawn-conf", ao.cfg.spawn_conf, "Minimum confidence to start a track");

    RectifyOptions ro;
    auto* rect = app.add_subcommand("rectify", "Join broken tracklets and log the merges");
    rect->add_option("inputs", ro.inputs, "Tracklet files or directories")->required();
    rect->add_option("--out", ro.out, "Output directory")->required();
    rect->add_option("--mu", ro.cfg.mu, "Minimum temporal IoU for a join");
    rect->add_option("--gamma", ro.cfg.gamma, "Maximum gap in seconds");
    rect->add_flag("--no-interpolate", ro.no_interpolate, "Leave gaps unfilled");
    rect->add_option("--min-confidence", ro.min_confidence, "Drop tracklets below this mean confidence");
    rect->add_option("--clip-padding", ro.cfg.clip_padding, "Seconds added around mined clips");

    MineOptions mo;
    auto* mine = app.add_subcommand("mine", "Turn a merge log into hard-example clips");
    mine->add_option("merge_log", mo.merge_log, "merge_log.json written by rectify")->required();
    mine->add_option("--out", mo.out, "Output JSON file")->required();
    mine->add_option("--clip-padding", mo.clip_padding, "Seconds added around each join");

    SampleOptions sa;
    auto* sample = app.add_subcommand("sample", "Compose balanced training batches");
    sample->add_option("--hv", sa.hv, "Hallucinated dataset directories");
    sample->add_option("--tracks", sa.tracks, "Rectified track files or directories");
    sample->add_option("--hard", sa.hard, "Hard clip manifest written by mine");
    sample->add_option("--out", sa.out, "Output JSON-lines manifest")->required();
    sample->add_option("--batches", sa.batches);
    sample->add_option("--batch-size", sa.cfg.batch_size);
    sample->add_option("--balancing-ratio", sa.cfg.balancing_ratio, "Share of real-video pairs per batch");
    sample->add_option("--hard-rate", sa.cfg.hard_rate, "Share of real-video pairs taken from hard clips");
    sample->add_option("--max-delta", sa.cfg.max_delta, "Largest frame gap in a pair (0 = clip length)");
    sample->add_option("--clip-seconds", sa.clip_seconds, "Length of easy clips cut from real videos");

    EvalOptions eo;
    auto* eval = app.add_subcommand("eval", "Score tracks against ground truth");
    eval->add_option("--gt", eo.gt, "Ground-truth file or directory")->required();
    eval->add_option("--pred", eo.pred, "Result file or directory")->required();
    eval->add_option("--out", eo.out, "JSON report path");
    eval->add_option("--iou", eo.iou, "Match threshold");

    HallucinateOptions ho;
    auto* hall = app.add_subcommand("hallucinate", "Render zoom videos from annotated still images");
    hall->add_option("manifest", ho.manifest, "JSON image manifest")->required();
    hall->add_option("--out", ho.out, "Output directory")->required();
    hall->add_option("--frames", ho.frames);
    hall->add_option("--min-scale", ho.min_scale, "Smallest final window side ratio");
    hall->add_flag("--no-effects", ho.no_effects);
    hall->add_option("--effect-probability", ho.effect_probability);
    hall->add_option("--width", ho.width, "Output width (0 = source)");
    hall->add_option("--height", ho.height, "Output height (0 = source)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (*synth) run_synth(g, so);
        if (*assoc) run_associate(g, ao);
        if (*rect) run_rectify(g, ro);
        if (*mine) run_mine(g, mo);
        if (*sample) run_sample(g, sa);
        if (*eval) run_eval(g, eo);
        if (*hall) run_hallucinate(g, ho);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}

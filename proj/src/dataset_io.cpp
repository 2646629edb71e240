#include "trackmine/dataset_io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include <opencv2/imgcodecs.hpp>

#include "trackmine/mot_io.hpp"

namespace trackmine {

using nlohmann::json;

namespace {

json span_json(const FrameSpan& s) { return json::array({s.first, s.last}); }
FrameSpan span_from(const json& j) { return {j.at(0).get<int>(), j.at(1).get<int>()}; }

json box_json(const BoundingBox& b) { return json::array({b.x(), b.y(), b.w(), b.h()}); }

std::string number(double v) {
    char buf[32];
    auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, end);
}

}  // namespace

json to_json(const MergeLog& log) {
    json joins = json::array();
    for (const auto& j : log.joins) {
        joins.push_back({{"iteration", j.iteration},
                         {"earlier_id", j.earlier_id},
                         {"later_id", j.later_id},
                         {"earlier", span_json(j.earlier)},
                         {"later", span_json(j.later)},
                         {"gap", span_json(j.gap)},
                         {"cost", j.cost},
                         {"tiou", j.tiou}});
    }
    return {{"video_id", log.video_id}, {"fps", log.fps}, {"iterations", log.iterations}, {"joins", joins}};
}

MergeLog merge_log_from_json(const json& j) {
    try {
        MergeLog log;
        log.video_id = j.value("video_id", std::string());
        log.fps = j.at("fps").get<double>();
        log.iterations = j.value("iterations", 0);
        for (const auto& e : j.at("joins")) {
            log.joins.push_back({e.at("iteration").get<int>(), e.at("earlier_id").get<int>(),
                                 e.at("later_id").get<int>(), span_from(e.at("earlier")),
                                 span_from(e.at("later")), span_from(e.at("gap")), e.at("cost").get<double>(),
                                 e.value("tiou", 0.0)});
        }
        return log;
    } catch (const json::exception& e) {
        throw DataError(std::string("merge log: ") + e.what());
    }
}

json to_json(const HardClip& clip) {
    json gaps = json::array();
    for (const auto& g : clip.gap_spans) gaps.push_back(span_json(g));
    return {{"video_id", clip.video_id},
            {"start_frame", clip.start_frame},
            {"end_frame", clip.end_frame},
            {"track_ids", clip.track_ids},
            {"gap_spans", gaps}};
}

HardClip hard_clip_from_json(const json& j) {
    try {
        HardClip c;
        c.video_id = j.at("video_id").get<std::string>();
        c.start_frame = j.at("start_frame").get<int>();
        c.end_frame = j.at("end_frame").get<int>();
        c.track_ids = j.at("track_ids").get<std::vector<int>>();
        for (const auto& g : j.at("gap_spans")) c.gap_spans.push_back(span_from(g));
        return c;
    } catch (const json::exception& e) {
        throw DataError(std::string("hard clip: ") + e.what());
    }
}

json to_json(const TrainingPair& pair) {
    json targets = json::array();
    for (const auto& t : pair.targets) {
        json item{{"id", t.id}, {"visible", t.visible ? 1 : 0}, {"box", box_json(t.box)},
                  {"context", box_json(t.context)}};
        if (t.motion) item["motion"] = {t.motion->dx, t.motion->dy, t.motion->dw, t.motion->dh};
        targets.push_back(std::move(item));
    }
    return {{"clip", pair.clip}, {"frames", {pair.frame, pair.later_frame}}, {"targets", targets}};
}

json to_json(const ManifestEntry& entry, int batch_index) {
    json j = to_json(entry.pair);
    j["batch"] = batch_index;
    j["category"] = to_string(entry.category);
    return j;
}

void write_manifest(std::ostream& out, const std::vector<BatchManifest>& batches) {
    for (const auto& b : batches)
        for (const auto& e : b.entries) out << to_json(e, b.batch_index).dump() << '\n';
}

json read_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open " + path.string());
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw DataError(path.string() + ": " + e.what());
    }
}

void write_json_file(const std::filesystem::path& path, const json& j) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path);
    if (!out) throw DataError("cannot write " + path.string());
    out << j.dump(2) << '\n';
}

std::vector<ImageRecord> read_image_manifest(const std::filesystem::path& path) {
    const json j = read_json_file(path);
    if (!j.is_array()) throw DataError(path.string() + ": expected a JSON array of image records");
    std::vector<ImageRecord> out;
    try {
        for (const auto& rec : j) {
            ImageRecord r;
            r.image = rec.at("image").get<std::string>();
            if (r.image.is_relative()) r.image = path.parent_path() / r.image;
            r.source_id = rec.value("id", r.image.stem().string());
            for (const auto& b : rec.value("boxes", json::array())) {
                r.boxes.emplace_back(b.at(0).get<double>(), b.at(1).get<double>(), b.at(2).get<double>(),
                                     b.at(3).get<double>());
            }
            out.push_back(std::move(r));
        }
    } catch (const json::exception& e) {
        throw DataError(path.string() + ": " + e.what());
    } catch (const std::invalid_argument& e) {
        throw DataError(path.string() + ": " + e.what());
    }
    return out;
}

void write_hallucinated_video(const std::filesystem::path& dir, const HallucinatedVideo& video,
                              const json& extra) {
    const auto frames_dir = dir / "frames";
    std::filesystem::create_directories(frames_dir);
    for (std::size_t t = 0; t < video.frames.size(); ++t) {
        char name[32];
        std::snprintf(name, sizeof(name), "%06zu.png", t + 1);
        if (!cv::imwrite((frames_dir / name).string(), video.frames[t]))
            throw DataError("cannot write frame " + (frames_dir / name).string());
    }

    std::ofstream ann(dir / "annotations.txt");
    if (!ann) throw DataError("cannot write " + (dir / "annotations.txt").string());
    for (std::size_t t = 0; t < video.frames.size(); ++t) {
        for (const auto& track : video.tracks) {
            const auto& a = track.annotations[t];
            const BoundingBox& b = a.box ? *a.box : a.transformed;
            ann << (a.frame + 1) << ',' << track.id << ',' << number(b.x()) << ',' << number(b.y()) << ','
                << number(b.w()) << ',' << number(b.h()) << ',' << (a.visible() ? 1 : 0) << '\n';
        }
    }

    json windows = json::array();
    for (const auto& w : video.windows) windows.push_back(box_json(w));
    json meta = extra;
    meta["source_id"] = video.source_id;
    meta["fps"] = video.fps;
    meta["frames"] = video.frames.size();
    meta["windows"] = windows;
    write_json_file(dir / "meta.json", meta);
}

AnnotatedClip read_hallucinated_clip(const std::filesystem::path& dir) {
    const auto meta = read_json_file(dir / "meta.json");
    const int frames = meta.at("frames").get<int>();
    const double fps = meta.value("fps", 30.0);

    std::ifstream in(dir / "annotations.txt");
    if (!in) throw DataError("cannot open " + (dir / "annotations.txt").string());
    std::map<int, Tracklet> tracks;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const std::string where = (dir / "annotations.txt").string() + ":" + std::to_string(line_no);
        // Same column layout as a MOT row up to the box; the 7th column is the visibility flag.
        const MotRow row = parse_mot_row(line, where);
        if (row.confidence != 0.0 && row.confidence != 1.0) throw DataError(where + ": visible must be 0 or 1");
        auto& t = tracks[row.id];
        t.id = row.id;
        t.fps = fps;
        if (row.confidence == 1.0) t.points.push_back({row.frame - 1, BoundingBox(row.x, row.y, row.w, row.h)});
    }
    AnnotatedClip clip{dir.string(), {0, frames - 1}, {}};
    for (auto& [id, t] : tracks) clip.tracks.push_back(std::move(t));
    return clip;
}

}  // namespace trackmine

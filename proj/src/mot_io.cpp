#include "trackmine/mot_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "json.hpp"

namespace trackmine {

namespace {

std::string format_double(double v) {
    char buf[32];
    auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, end);
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        out.push_back(trim(line.substr(start, comma == std::string_view::npos ? comma : comma - start)));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

template <typename T>
T parse_number(std::string_view field, const std::string& where, const char* what) {
    T value{};
    if (!field.empty() && field.front() == '+') field.remove_prefix(1);
    auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (ec != std::errc() || ptr != field.data() + field.size())
        throw DataError(where + ": bad " + what + " '" + std::string(field) + "'");
    return value;
}

// Integer columns are sometimes written as floats ("1.0"); accept integral values.
int parse_int(std::string_view field, const std::string& where, const char* what) {
    const double v = parse_number<double>(field, where, what);
    if (v != std::floor(v) || std::abs(v) > 1e9)
        throw DataError(where + ": " + what + " is not an integer '" + std::string(field) + "'");
    return static_cast<int>(v);
}

std::ifstream open_input(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open " + path.string());
    return in;
}

std::ofstream open_output(const std::filesystem::path& path) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path);
    if (!out) throw DataError("cannot write " + path.string());
    return out;
}

}  // namespace

std::string format_mot_row(const MotRow& row) {
    std::string s = std::to_string(row.frame) + "," + std::to_string(row.id) + "," + format_double(row.x) +
                    "," + format_double(row.y) + "," + format_double(row.w) + "," + format_double(row.h) +
                    "," + format_double(row.confidence) + ",-1,-1,-1";
    if (row.flag) s += "," + std::to_string(*row.flag);
    return s;
}

MotRow parse_mot_row(const std::string& line, const std::string& where) {
    const auto fields = split_fields(line);
    if (fields.size() < 6) throw DataError(where + ": expected at least 6 columns, got " + std::to_string(fields.size()));
    MotRow row;
    row.frame = parse_int(fields[0], where, "frame");
    row.id = parse_int(fields[1], where, "id");
    row.x = parse_number<double>(fields[2], where, "x");
    row.y = parse_number<double>(fields[3], where, "y");
    row.w = parse_number<double>(fields[4], where, "width");
    row.h = parse_number<double>(fields[5], where, "height");
    if (fields.size() >= 7) row.confidence = parse_number<double>(fields[6], where, "confidence");
    if (fields.size() >= 11) row.flag = parse_int(fields[10], where, "flag");

    if (row.frame < 1) throw DataError(where + ": frame " + std::to_string(row.frame) + " (frames are 1-based)");
    if (row.id < 1 && row.id != -1) throw DataError(where + ": id must be >= 1 or -1");
    if (!std::isfinite(row.x) || !std::isfinite(row.y) || !(row.w > 0.0) || !(row.h > 0.0) ||
        !std::isfinite(row.w) || !std::isfinite(row.h))
        throw DataError(where + ": box must be finite with positive size");
    return row;
}

std::vector<MotRow> read_mot_rows(std::istream& in, const std::string& source) {
    std::vector<MotRow> rows;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto t = trim(line);
        if (t.empty() || t.front() == '#') continue;
        rows.push_back(parse_mot_row(std::string(t), source + ":" + std::to_string(line_no)));
    }
    return rows;
}

std::vector<MotRow> read_mot_rows(const std::filesystem::path& path) {
    auto in = open_input(path);
    return read_mot_rows(in, path.string());
}

void write_mot_rows(std::ostream& out, const std::vector<MotRow>& rows) {
    for (const auto& r : rows) out << format_mot_row(r) << '\n';
}

std::vector<Tracklet> rows_to_tracks(const std::vector<MotRow>& rows, double fps, MotKind kind,
                                     const std::string& source) {
    std::map<int, Tracklet> by_id;
    std::set<std::pair<int, int>> seen;
    for (const auto& r : rows) {
        if (kind == MotKind::ground_truth && r.confidence == 0.0) continue;
        if (r.id < 1) throw DataError(source + ": track rows need an id >= 1");
        if (!seen.emplace(r.id, r.frame).second)
            throw DataError(source + ": duplicate row for id " + std::to_string(r.id) + " at frame " +
                            std::to_string(r.frame));
        auto& t = by_id[r.id];
        t.id = r.id;
        t.fps = fps;
        t.points.push_back({r.frame - 1, BoundingBox(r.x, r.y, r.w, r.h), r.flag.value_or(0) != 0,
                            r.confidence});
    }
    std::vector<Tracklet> out;
    out.reserve(by_id.size());
    for (auto& [id, t] : by_id) {
        std::sort(t.points.begin(), t.points.end(),
                  [](const TrackPoint& a, const TrackPoint& b) { return a.frame < b.frame; });
        out.push_back(std::move(t));
    }
    return out;
}

std::vector<MotRow> tracks_to_rows(const std::vector<Tracklet>& tracks, bool with_flag) {
    std::vector<MotRow> rows;
    for (const auto& t : tracks) {
        for (const auto& p : t.points) {
            MotRow r{p.frame + 1, t.id, p.box.x(), p.box.y(), p.box.w(), p.box.h(), p.confidence, std::nullopt};
            if (with_flag) r.flag = p.interpolated ? 1 : 0;
            rows.push_back(r);
        }
    }
    std::stable_sort(rows.begin(), rows.end(), [](const MotRow& a, const MotRow& b) {
        return std::pair(a.frame, a.id) < std::pair(b.frame, b.id);
    });
    return rows;
}

std::vector<Tracklet> read_tracks(const std::filesystem::path& path, double fps, MotKind kind) {
    return rows_to_tracks(read_mot_rows(path), fps, kind, path.string());
}

void write_tracks(const std::filesystem::path& path, const std::vector<Tracklet>& tracks, bool with_flag) {
    auto out = open_output(path);
    write_mot_rows(out, tracks_to_rows(tracks, with_flag));
}

std::vector<DetectionRecord> read_detections(const std::filesystem::path& path) {
    std::vector<DetectionRecord> out;
    for (const auto& r : read_mot_rows(path)) {
        if (r.confidence < 0.0 || r.confidence > 1.0)
            throw DataError(path.string() + ": detection confidence outside [0, 1]");
        out.push_back({r.frame - 1, BoundingBox(r.x, r.y, r.w, r.h), r.confidence});
    }
    std::stable_sort(out.begin(), out.end(),
                     [](const DetectionRecord& a, const DetectionRecord& b) { return a.frame < b.frame; });
    return out;
}

void write_detections(const std::filesystem::path& path, const std::vector<DetectionRecord>& dets) {
    auto out = open_output(path);
    for (const auto& d : dets)
        out << format_mot_row({d.frame + 1, -1, d.box.x(), d.box.y(), d.box.w(), d.box.h(), d.confidence,
                               std::nullopt})
            << '\n';
}

std::vector<PredictionRecord> read_predictions(const std::filesystem::path& path) {
    std::vector<PredictionRecord> out;
    std::set<std::pair<int, int>> seen;
    for (const auto& r : read_mot_rows(path)) {
        if (r.id < 1) throw DataError(path.string() + ": prediction rows need a track id >= 1");
        if (r.confidence < 0.0 || r.confidence > 1.0)
            throw DataError(path.string() + ": visibility outside [0, 1]");
        if (!seen.emplace(r.id, r.frame).second)
            throw DataError(path.string() + ": duplicate prediction for track " + std::to_string(r.id) +
                            " at frame " + std::to_string(r.frame));
        out.push_back({r.id, r.frame - 1, BoundingBox(r.x, r.y, r.w, r.h), r.confidence});
    }
    return out;
}

void write_predictions(const std::filesystem::path& path, const std::vector<PredictionRecord>& preds) {
    auto out = open_output(path);
    for (const auto& p : preds)
        out << format_mot_row({p.frame + 1, p.track_id, p.box.x(), p.box.y(), p.box.w(), p.box.h(),
                               p.visibility, std::nullopt})
            << '\n';
}

std::filesystem::path meta_path(const std::filesystem::path& track_file) {
    auto p = track_file;
    p += ".meta.json";
    return p;
}

std::optional<SequenceMeta> read_meta(const std::filesystem::path& track_file) {
    const auto path = meta_path(track_file);
    if (!std::filesystem::exists(path)) return std::nullopt;
    auto in = open_input(path);
    try {
        const auto j = nlohmann::json::parse(in);
        SequenceMeta m;
        m.fps = j.at("fps").get<double>();
        if (!(m.fps > 0.0)) throw DataError(path.string() + ": fps must be positive");
        m.video_id = j.value("video_id", std::string());
        if (j.contains("first_frame")) m.first_frame = j.at("first_frame").get<int>();
        if (j.contains("last_frame")) m.last_frame = j.at("last_frame").get<int>();
        return m;
    } catch (const nlohmann::json::exception& e) {
        throw DataError(path.string() + ": " + e.what());
    }
}

void write_meta(const std::filesystem::path& track_file, const SequenceMeta& meta) {
    nlohmann::json j{{"fps", meta.fps}, {"video_id", meta.video_id}};
    if (meta.first_frame) j["first_frame"] = *meta.first_frame;
    if (meta.last_frame) j["last_frame"] = *meta.last_frame;
    auto out = open_output(meta_path(track_file));
    out << j.dump(2) << '\n';
}

}  // namespace trackmine

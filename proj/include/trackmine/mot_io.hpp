#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "trackmine/associate.hpp"
#include "trackmine/track.hpp"

namespace trackmine {

/// Bad input data (malformed rows, duplicates, missing files). Messages carry
/// the source name and, where known, the 1-based line number.
class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// One comma-separated MOTChallenge row. Frames are 1-based on disk.
/// Columns: frame, id, x, y, w, h[, confidence[, wx, wy, wz[, flag]]].
/// `flag` marks interpolated rows in rectified output.
struct MotRow {
    int frame = 1;
    int id = -1;
    double x = 0.0, y = 0.0, w = 1.0, h = 1.0;
    double confidence = 1.0;
    std::optional<int> flag;

    friend bool operator==(const MotRow&, const MotRow&) = default;
};

std::string format_mot_row(const MotRow& row);

/// Parses one row; throws DataError naming `where` on malformed input.
MotRow parse_mot_row(const std::string& line, const std::string& where);

std::vector<MotRow> read_mot_rows(std::istream& in, const std::string& source);
std::vector<MotRow> read_mot_rows(const std::filesystem::path& path);
void write_mot_rows(std::ostream& out, const std::vector<MotRow>& rows);

enum class MotKind {
    tracks,        ///< tracker output or tracklets
    ground_truth,  ///< rows whose confidence column is 0 are ignored
};

/// Groups rows by id into tracklets sorted by id, frames converted to 0-based.
/// Throws DataError on duplicate (id, frame) rows or ids below 1.
std::vector<Tracklet> rows_to_tracks(const std::vector<MotRow>& rows, double fps, MotKind kind,
                                     const std::string& source);
std::vector<MotRow> tracks_to_rows(const std::vector<Tracklet>& tracks, bool with_flag);

std::vector<Tracklet> read_tracks(const std::filesystem::path& path, double fps,
                                  MotKind kind = MotKind::tracks);
void write_tracks(const std::filesystem::path& path, const std::vector<Tracklet>& tracks,
                  bool with_flag = false);

/// Detection rows (id column ignored, conventionally -1), frames 0-based.
std::vector<DetectionRecord> read_detections(const std::filesystem::path& path);
void write_detections(const std::filesystem::path& path, const std::vector<DetectionRecord>& dets);

/// Prediction rows: frame, track id, x, y, w, h, visibility. Duplicate
/// (track, frame) pairs are rejected.
std::vector<PredictionRecord> read_predictions(const std::filesystem::path& path);
void write_predictions(const std::filesystem::path& path, const std::vector<PredictionRecord>& preds);

/// Metadata kept beside each track file as `<file>.meta.json`, since MOT
/// rows carry no frame rate.
struct SequenceMeta {
    double fps = 30.0;
    std::string video_id;
    std::optional<int> first_frame;  ///< 0-based, inclusive
    std::optional<int> last_frame;
};

std::filesystem::path meta_path(const std::filesystem::path& track_file);
std::optional<SequenceMeta> read_meta(const std::filesystem::path& track_file);
void write_meta(const std::filesystem::path& track_file, const SequenceMeta& meta);

}  // namespace trackmine

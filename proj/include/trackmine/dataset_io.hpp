#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"
#include "trackmine/hallucinate.hpp"
#include "trackmine/rectify.hpp"
#include "trackmine/sampler.hpp"

namespace trackmine {

nlohmann::json to_json(const MergeLog& log);
MergeLog merge_log_from_json(const nlohmann::json& j);

nlohmann::json to_json(const HardClip& clip);
HardClip hard_clip_from_json(const nlohmann::json& j);

nlohmann::json to_json(const TrainingPair& pair);
nlohmann::json to_json(const ManifestEntry& entry, int batch_index);

/// One JSON object per line, one line per training pair.
void write_manifest(std::ostream& out, const std::vector<BatchManifest>& batches);

nlohmann::json read_json_file(const std::filesystem::path& path);
void write_json_file(const std::filesystem::path& path, const nlohmann::json& j);

/// Entry of the image annotation manifest consumed by `hallucinate`:
///   [{"image": "path.jpg", "id": "optional-name", "boxes": [[x, y, w, h], ...]}, ...]
/// Relative image paths resolve against the manifest's directory.
struct ImageRecord {
    std::filesystem::path image;
    std::string source_id;
    std::vector<BoundingBox> boxes;
};

std::vector<ImageRecord> read_image_manifest(const std::filesystem::path& path);

/// Writes `<dir>/frames/000001.png ...`, the annotation sidecar
/// `<dir>/annotations.txt` (frame, id, x, y, w, h, visible; frames 1-based,
/// invisible rows carry the unclipped transformed box) and `<dir>/meta.json`
/// with `extra` merged in.
void write_hallucinated_video(const std::filesystem::path& dir, const HallucinatedVideo& video,
                              const nlohmann::json& extra = nlohmann::json::object());

/// Loads an annotation sidecar as a sampling clip; frames are not read.
AnnotatedClip read_hallucinated_clip(const std::filesystem::path& dir);

}  // namespace trackmine

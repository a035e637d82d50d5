#pragma once

#include "moodshift/types.hpp"

#include <array>
#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

namespace moodshift {

/// Per-track metadata after ingestion: exactly one mood and one genre,
/// multi-label instruments (possibly empty, kept sorted and deduplicated).
struct TrackMeta {
  std::string id;
  std::string artist;
  int mood = 0;
  int genre = 0;
  std::vector<int> instruments;
};

/// Raw metadata before single-label reduction: mood/genre candidate lists.
struct RawTrackMeta {
  std::string id;
  std::string artist;
  std::vector<int> moods;
  std::vector<int> genres;
  std::vector<int> instruments;
};

/// Immutable track catalog. Embeddings are stored raw (not pre-normalized),
/// one column per track, in catalog order; cosine computations normalize at
/// the point of use.
struct Catalog {
  MatF embeddings;  // dim x size
  std::vector<TrackMeta> tracks;
  int dim = 0;
  int mood_count = 0;
  int genre_count = 0;       // max genre id + 1
  int instrument_count = 0;  // max instrument id + 1, 0 when unlabeled
  std::unordered_map<std::string, int> id_to_index;

  int size() const { return static_cast<int>(tracks.size()); }

  /// Index of a track id, or -1 when absent.
  int index_of(const std::string& id) const {
    auto it = id_to_index.find(id);
    return it == id_to_index.end() ? -1 : it->second;
  }

  Eigen::Ref<const MatF> embedding(int i) const { return embeddings.col(i); }
};

/// Validates and assembles a catalog; infers genre/instrument counts from the
/// data. Throws ValidationError with the offending row on any violation.
Catalog make_catalog(MatF embeddings, std::vector<TrackMeta> tracks, int mood_count);

/// Loads the paired binary-embeddings + JSONL-metadata files. Row i of the
/// embeddings file binds to metadata line i (both 0-based in error messages).
Catalog load_catalog(const std::string& embeddings_path,
                     const std::string& metadata_path, int mood_count = 4);

void save_catalog(const Catalog& catalog, const std::string& embeddings_path,
                  const std::string& metadata_path);

std::vector<RawTrackMeta> load_raw_metadata(const std::string& path);

/// Uniform single-label reduction for mood and genre candidate lists;
/// instruments pass through unchanged. Deterministic given the seed.
std::vector<TrackMeta> reduce_multilabels(const std::vector<RawTrackMeta>& raw,
                                          std::uint64_t rng_seed);
void reduce_multilabels_file(const std::string& raw_path,
                             const std::string& out_path, std::uint64_t rng_seed);

enum class Split { Train = 0, Val = 1, Test = 2 };

const char* split_name(Split s);
Split parse_split(const std::string& name);

/// Artist-disjoint split: every track of an artist shares the artist's split.
struct SplitAssignment {
  std::unordered_map<std::string, Split> by_track;
  std::vector<std::string> warnings;

  Split of(const std::string& track_id) const;

  /// Track indices of one split, in catalog order.
  std::vector<int> tracks_in(const Catalog& catalog, Split s) const;
};

/// Greedy stratified artist bin-packing: artists (weighted by track count,
/// classed by majority mood) are placed into the split with the largest
/// remaining per-mood deficit, then global deficit. Mood proportions beyond
/// 5 pp of global produce warnings, not errors.
SplitAssignment split_catalog(const Catalog& catalog,
                              const std::array<double, 3>& ratios,
                              std::uint64_t rng_seed);

/// k independent 8:1:1 splits drawn with derived seeds.
std::vector<SplitAssignment> kfold_split(const Catalog& catalog, int k,
                                         std::uint64_t rng_seed);

void save_split(const SplitAssignment& split, const std::string& path);
SplitAssignment load_split(const std::string& path);

}  // namespace moodshift

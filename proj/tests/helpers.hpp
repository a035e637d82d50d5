#pragma once

#include "moodshift/catalog.hpp"
#include "moodshift/rng.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace testutil {

using moodshift::Catalog;
using moodshift::MatF;
using moodshift::TrackMeta;

/// Fresh scratch directory under the system temp dir, wiped on construction.
class TempDir {
 public:
  explicit TempDir(const std::string& name)
      : path_(std::filesystem::temp_directory_path() / ("moodshift_test_" + name)) {
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() { std::filesystem::remove_all(path_); }

  std::string file(const std::string& name) const { return (path_ / name).string(); }
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

inline std::string padded_id(const char* prefix, int i, int width = 5) {
  std::string n = std::to_string(i);
  return prefix + std::string(width - std::min<std::size_t>(width, n.size()), '0') + n;
}

/// Random catalog with independent gaussian embeddings; artists get
/// `tracks_per_artist` consecutive tracks, moods/genres drawn uniformly.
inline Catalog random_catalog(int n_tracks, int dim, int mood_count, int genre_count,
                              int tracks_per_artist, std::uint64_t seed,
                              int instrument_count = 0) {
  moodshift::Rng rng(seed);
  MatF emb(dim, n_tracks);
  std::vector<TrackMeta> tracks(n_tracks);
  for (int i = 0; i < n_tracks; ++i) {
    for (int r = 0; r < dim; ++r) emb(r, i) = static_cast<float>(rng.normal());
    tracks[i].id = padded_id("t", i);
    tracks[i].artist = padded_id("a", i / tracks_per_artist);
    tracks[i].mood = rng.uniform_int(mood_count);
    tracks[i].genre = rng.uniform_int(genre_count);
    for (int c = 0; c < instrument_count; ++c) {
      if (rng.uniform() < 0.25) tracks[i].instruments.push_back(c);
    }
  }
  return moodshift::make_catalog(std::move(emb), std::move(tracks), mood_count);
}

}  // namespace testutil

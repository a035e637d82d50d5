#include "moodshift/catalog.hpp"

#include "moodshift/io.hpp"
#include "moodshift/rng.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <set>

namespace moodshift {

using nlohmann::json;

namespace {

constexpr char kEmbeddingMagic[4] = {'E', 'M', 'B', '1'};
constexpr std::uint32_t kEmbeddingVersion = 1;

void sort_unique(std::vector<int>& v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

json track_to_json(const TrackMeta& t) {
  return json{{"id", t.id},
              {"artist", t.artist},
              {"mood", t.mood},
              {"genre", t.genre},
              {"instruments", t.instruments}};
}

std::vector<int> int_array_field(const json& obj, const char* key, std::size_t line) {
  const auto it = obj.find(key);
  if (it == obj.end() || !it->is_array()) {
    throw ValidationError("missing or non-array field '" + std::string(key) +
                          "', line " + std::to_string(line));
  }
  std::vector<int> out;
  out.reserve(it->size());
  for (const auto& v : *it) {
    if (!v.is_number_integer()) {
      throw ValidationError("non-integer entry in '" + std::string(key) +
                            "', line " + std::to_string(line));
    }
    out.push_back(v.get<int>());
  }
  return out;
}

}  // namespace

Catalog make_catalog(MatF embeddings, std::vector<TrackMeta> tracks, int mood_count) {
  if (mood_count < 2) throw ValidationError("mood_count must be >= 2");
  if (embeddings.cols() != static_cast<Index>(tracks.size())) {
    throw ValidationError("embedding count (" + std::to_string(embeddings.cols()) +
                          ") does not match metadata line count (" +
                          std::to_string(tracks.size()) + ")");
  }
  if (embeddings.rows() < 1) throw ValidationError("embedding dimension must be >= 1");

  Catalog c;
  c.dim = static_cast<int>(embeddings.rows());
  c.mood_count = mood_count;
  c.embeddings = std::move(embeddings);
  c.tracks = std::move(tracks);
  c.id_to_index.reserve(c.tracks.size());

  for (int i = 0; i < c.size(); ++i) {
    TrackMeta& t = c.tracks[i];
    const std::string row = std::to_string(i);
    if (t.id.empty()) throw ValidationError("empty track id, line " + row);
    if (!c.id_to_index.emplace(t.id, i).second) {
      throw ValidationError("duplicate track id '" + t.id + "', line " + row);
    }
    if (t.mood < 0 || t.mood >= c.mood_count) {
      throw ValidationError("mood out of range, line " + row);
    }
    if (t.genre < 0) throw ValidationError("negative genre id, line " + row);
    for (int inst : t.instruments) {
      if (inst < 0) throw ValidationError("negative instrument id, line " + row);
    }
    sort_unique(t.instruments);
    c.genre_count = std::max(c.genre_count, t.genre + 1);
    if (!t.instruments.empty()) {
      c.instrument_count = std::max(c.instrument_count, t.instruments.back() + 1);
    }

    const auto col = c.embeddings.col(i);
    if (!col.allFinite()) throw ValidationError("non-finite embedding at row " + row);
    if (col.norm() == 0.0f) throw ValidationError("zero-norm embedding at row " + row);
  }
  return c;
}

Catalog load_catalog(const std::string& embeddings_path,
                     const std::string& metadata_path, int mood_count) {
  BinaryReader reader(embeddings_path);
  reader.expect_magic(kEmbeddingMagic);
  const std::uint32_t version = reader.read_u32("version");
  if (version != kEmbeddingVersion) {
    throw ValidationError(embeddings_path + ": unsupported version " +
                          std::to_string(version));
  }
  const std::uint64_t rows = reader.read_u64("row count");
  const std::uint32_t dim = reader.read_u32("dimension");
  if (dim == 0) throw ValidationError(embeddings_path + ": zero dimension");

  MatF embeddings(static_cast<Index>(dim), static_cast<Index>(rows));
  for (std::uint64_t r = 0; r < rows; ++r) {
    const std::size_t got = reader.read_f32_array_partial(embeddings.col(static_cast<Index>(r)).data(), dim);
    if (got != dim) {
      throw ValidationError(embeddings_path + ": truncated payload at row " +
                            std::to_string(r));
    }
  }

  const std::vector<std::string> lines = read_lines(metadata_path);
  if (lines.size() != rows) {
    throw ValidationError(metadata_path + ": metadata line count (" +
                          std::to_string(lines.size()) +
                          ") does not match embedding rows (" +
                          std::to_string(rows) + ")");
  }

  std::vector<TrackMeta> tracks;
  tracks.reserve(lines.size());
  for (std::size_t i = 0; i < lines.size(); ++i) {
    json obj;
    try {
      obj = json::parse(lines[i]);
    } catch (const json::exception& e) {
      throw ValidationError(metadata_path + ": bad JSON, line " + std::to_string(i) +
                            ": " + e.what());
    }
    TrackMeta t;
    try {
      t.id = obj.at("id").get<std::string>();
      t.artist = obj.at("artist").get<std::string>();
      t.mood = obj.at("mood").get<int>();
      t.genre = obj.at("genre").get<int>();
      t.instruments = obj.at("instruments").get<std::vector<int>>();
    } catch (const json::exception& e) {
      throw ValidationError(metadata_path + ": bad metadata, line " +
                            std::to_string(i) + ": " + e.what());
    }
    tracks.push_back(std::move(t));
  }
  return make_catalog(std::move(embeddings), std::move(tracks), mood_count);
}

void save_catalog(const Catalog& catalog, const std::string& embeddings_path,
                  const std::string& metadata_path) {
  BinaryWriter writer(embeddings_path);
  writer.write_magic(kEmbeddingMagic);
  writer.write_u32(kEmbeddingVersion);
  writer.write_u64(static_cast<std::uint64_t>(catalog.size()));
  writer.write_u32(static_cast<std::uint32_t>(catalog.dim));
  // Column-major d x N storage is exactly the file's row-major N x d payload.
  writer.write_f32_array(catalog.embeddings.data(),
                         static_cast<std::size_t>(catalog.embeddings.size()));
  writer.close();

  std::string meta;
  for (const TrackMeta& t : catalog.tracks) {
    meta += track_to_json(t).dump();
    meta += '\n';
  }
  write_text_file(metadata_path, meta);
}

std::vector<RawTrackMeta> load_raw_metadata(const std::string& path) {
  const std::vector<std::string> lines = read_lines(path);
  std::vector<RawTrackMeta> out;
  out.reserve(lines.size());
  for (std::size_t i = 0; i < lines.size(); ++i) {
    json obj;
    try {
      obj = json::parse(lines[i]);
    } catch (const json::exception& e) {
      throw ValidationError(path + ": bad JSON, line " + std::to_string(i) + ": " +
                            e.what());
    }
    RawTrackMeta t;
    try {
      t.id = obj.at("id").get<std::string>();
      t.artist = obj.at("artist").get<std::string>();
    } catch (const json::exception& e) {
      throw ValidationError(path + ": bad metadata, line " + std::to_string(i) +
                            ": " + e.what());
    }
    t.moods = int_array_field(obj, "moods", i);
    t.genres = int_array_field(obj, "genres", i);
    t.instruments = int_array_field(obj, "instruments", i);
    out.push_back(std::move(t));
  }
  return out;
}

std::vector<TrackMeta> reduce_multilabels(const std::vector<RawTrackMeta>& raw,
                                          std::uint64_t rng_seed) {
  Rng rng(derive_seed(rng_seed, 0x6c6162656cULL));  // "label" stream
  std::vector<TrackMeta> out;
  out.reserve(raw.size());
  for (const RawTrackMeta& r : raw) {
    if (r.moods.empty()) {
      throw ValidationError("track '" + r.id + "' has no mood candidates");
    }
    if (r.genres.empty()) {
      throw ValidationError("track '" + r.id + "' has no genre candidates");
    }
    TrackMeta t;
    t.id = r.id;
    t.artist = r.artist;
    t.mood = r.moods[rng.uniform_index(r.moods.size())];
    t.genre = r.genres[rng.uniform_index(r.genres.size())];
    t.instruments = r.instruments;
    sort_unique(t.instruments);
    out.push_back(std::move(t));
  }
  return out;
}

void reduce_multilabels_file(const std::string& raw_path,
                             const std::string& out_path, std::uint64_t rng_seed) {
  const auto reduced = reduce_multilabels(load_raw_metadata(raw_path), rng_seed);
  std::string text;
  for (const TrackMeta& t : reduced) {
    text += track_to_json(t).dump();
    text += '\n';
  }
  write_text_file(out_path, text);
}

const char* split_name(Split s) {
  switch (s) {
    case Split::Train: return "train";
    case Split::Val: return "val";
    case Split::Test: return "test";
  }
  return "?";
}

Split parse_split(const std::string& name) {
  if (name == "train") return Split::Train;
  if (name == "val") return Split::Val;
  if (name == "test") return Split::Test;
  throw ValidationError("unknown split name '" + name + "'");
}

Split SplitAssignment::of(const std::string& track_id) const {
  const auto it = by_track.find(track_id);
  if (it == by_track.end()) {
    throw ValidationError("track '" + track_id + "' has no split assignment");
  }
  return it->second;
}

std::vector<int> SplitAssignment::tracks_in(const Catalog& catalog, Split s) const {
  std::vector<int> out;
  for (int i = 0; i < catalog.size(); ++i) {
    if (of(catalog.tracks[i].id) == s) out.push_back(i);
  }
  return out;
}

namespace {

struct ArtistGroup {
  std::string artist;
  std::vector<int> track_indices;
  int majority_mood = 0;
};

int majority_mood_of(const Catalog& catalog, const std::vector<int>& tracks,
                     int mood_count) {
  std::vector<int> counts(mood_count, 0);
  for (int i : tracks) counts[catalog.tracks[i].mood]++;
  return static_cast<int>(std::max_element(counts.begin(), counts.end()) -
                          counts.begin());  // ties -> lowest mood index
}

}  // namespace

SplitAssignment split_catalog(const Catalog& catalog,
                              const std::array<double, 3>& ratios,
                              std::uint64_t rng_seed) {
  double ratio_sum = 0.0;
  for (double r : ratios) {
    if (r <= 0.0) throw ValidationError("split ratios must be positive");
    ratio_sum += r;
  }
  if (std::abs(ratio_sum - 1.0) > 1e-9) {
    throw ValidationError("split ratios must sum to 1");
  }

  // Group tracks by artist, preserving first-seen order.
  std::vector<ArtistGroup> artists;
  std::unordered_map<std::string, int> artist_index;
  for (int i = 0; i < catalog.size(); ++i) {
    const std::string& a = catalog.tracks[i].artist;
    auto [it, inserted] = artist_index.emplace(a, static_cast<int>(artists.size()));
    if (inserted) artists.push_back(ArtistGroup{a, {}, 0});
    artists[it->second].track_indices.push_back(i);
  }
  if (artists.size() < 3) {
    throw ValidationError("fewer artists (" + std::to_string(artists.size()) +
                          ") than splits (3)");
  }
  for (ArtistGroup& g : artists) {
    g.majority_mood = majority_mood_of(catalog, g.track_indices, catalog.mood_count);
  }

  SplitAssignment result;

  std::vector<int> artists_per_mood(catalog.mood_count, 0);
  std::vector<double> mood_totals(catalog.mood_count, 0.0);
  for (const ArtistGroup& g : artists) {
    artists_per_mood[g.majority_mood]++;
    mood_totals[g.majority_mood] += static_cast<double>(g.track_indices.size());
  }
  for (int mu = 0; mu < catalog.mood_count; ++mu) {
    if (artists_per_mood[mu] > 0 && artists_per_mood[mu] < 3) {
      result.warnings.push_back("mood " + std::to_string(mu) + " has only " +
                                std::to_string(artists_per_mood[mu]) +
                                " artists; stratification is degraded");
    }
  }

  // Shuffled order breaks ties among equally-sized artists; the stable sort
  // then packs heavy artists first.
  std::vector<int> order(artists.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
  Rng rng(derive_seed(rng_seed, 0x73706c6974ULL));  // "split" stream
  rng.shuffle(order);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return artists[a].track_indices.size() > artists[b].track_indices.size();
  });

  const double total_tracks = static_cast<double>(catalog.size());
  std::array<std::vector<double>, 3> mood_assigned;
  for (auto& v : mood_assigned) v.assign(catalog.mood_count, 0.0);
  std::array<double, 3> global_assigned = {0.0, 0.0, 0.0};

  for (int idx : order) {
    const ArtistGroup& g = artists[idx];
    const double w = static_cast<double>(g.track_indices.size());
    int best = 0;
    double best_mood_deficit = 0.0, best_global_deficit = 0.0;
    for (int s = 0; s < 3; ++s) {
      const double mood_deficit =
          ratios[s] * mood_totals[g.majority_mood] - mood_assigned[s][g.majority_mood];
      const double global_deficit = ratios[s] * total_tracks - global_assigned[s];
      const bool better =
          mood_deficit > best_mood_deficit + 1e-12 ||
          (std::abs(mood_deficit - best_mood_deficit) <= 1e-12 &&
           global_deficit > best_global_deficit + 1e-12);
      if (s == 0 || better) {
        best = s;
        best_mood_deficit = mood_deficit;
        best_global_deficit = global_deficit;
      }
    }
    mood_assigned[best][g.majority_mood] += w;
    global_assigned[best] += w;
    for (int t : g.track_indices) {
      result.by_track.emplace(catalog.tracks[t].id, static_cast<Split>(best));
    }
  }

  // Post-check actual per-split mood proportions against global, 5 pp budget.
  std::vector<double> global_mood(catalog.mood_count, 0.0);
  std::array<std::vector<double>, 3> split_mood;
  for (auto& v : split_mood) v.assign(catalog.mood_count, 0.0);
  std::array<double, 3> split_sizes = {0.0, 0.0, 0.0};
  for (int i = 0; i < catalog.size(); ++i) {
    const int s = static_cast<int>(result.of(catalog.tracks[i].id));
    global_mood[catalog.tracks[i].mood] += 1.0;
    split_mood[s][catalog.tracks[i].mood] += 1.0;
    split_sizes[s] += 1.0;
  }
  for (int s = 0; s < 3; ++s) {
    if (split_sizes[s] == 0.0) {
      result.warnings.push_back(std::string("empty split: ") +
                                split_name(static_cast<Split>(s)));
      continue;
    }
    for (int mu = 0; mu < catalog.mood_count; ++mu) {
      const double p_split = split_mood[s][mu] / split_sizes[s];
      const double p_global = global_mood[mu] / total_tracks;
      if (std::abs(p_split - p_global) > 0.05) {
        result.warnings.push_back(
            "stratification tolerance exceeded: split " +
            std::string(split_name(static_cast<Split>(s))) + ", mood " +
            std::to_string(mu) + ": " + std::to_string(p_split * 100.0) +
            "% vs global " + std::to_string(p_global * 100.0) + "%");
      }
    }
  }
  return result;
}

std::vector<SplitAssignment> kfold_split(const Catalog& catalog, int k,
                                         std::uint64_t rng_seed) {
  if (k < 2) throw ValidationError("k must be >= 2");
  std::vector<SplitAssignment> folds;
  folds.reserve(k);
  for (int i = 0; i < k; ++i) {
    folds.push_back(split_catalog(catalog, {0.8, 0.1, 0.1},
                                  derive_seed(rng_seed, 0x666f6c64ULL, i)));
  }
  return folds;
}

void save_split(const SplitAssignment& split, const std::string& path) {
  json obj = json::object();
  for (const auto& [id, s] : split.by_track) obj[id] = split_name(s);
  write_text_file(path, obj.dump(2) + "\n");
}

SplitAssignment load_split(const std::string& path) {
  json obj;
  try {
    obj = json::parse(read_text_file(path));
  } catch (const json::exception& e) {
    throw ValidationError(path + ": bad JSON: " + e.what());
  }
  if (!obj.is_object()) throw ValidationError(path + ": expected a JSON object");
  SplitAssignment split;
  for (const auto& [id, value] : obj.items()) {
    if (!value.is_string()) throw ValidationError(path + ": non-string split for '" + id + "'");
    split.by_track.emplace(id, parse_split(value.get<std::string>()));
  }
  return split;
}

}  // namespace moodshift

#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <istream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace cinesent {

struct SubtitleCue {
  int index = 1;
  std::int64_t start_ms = 0;
  std::int64_t end_ms = 0;
  std::vector<std::string> lines;

  std::int64_t duration_ms() const noexcept { return end_ms - start_ms; }
  friend bool operator==(const SubtitleCue&, const SubtitleCue&) = default;
};

struct SubtitleDocument {
  std::string film_id;
  std::vector<SubtitleCue> cues;

  friend bool operator==(const SubtitleDocument&, const SubtitleDocument&) = default;
};

struct ParseReport {
  std::size_t skipped_blocks = 0;
  bool reordered = false;
  std::vector<std::string> warnings;

  bool empty() const noexcept { return skipped_blocks == 0 && !reordered && warnings.empty(); }
};

struct ParsedSubtitles {
  SubtitleDocument document;
  ParseReport report;
};

/// Parses SubRip text. Malformed blocks are skipped and counted; `<...>` and
/// `{...}` formatting tags are removed from text lines. Cues come back stably
/// sorted by start time.
///
/// Throws FormatError when non-blank input yields no well-formed cue.
ParsedSubtitles parse_srt(std::string_view text, std::string film_id = {});

/// Stream variant; throws IoError if the stream cannot be read.
ParsedSubtitles parse_srt(std::istream& in, std::string film_id = {});

ParsedSubtitles parse_srt_file(const std::filesystem::path& path, std::string film_id);

std::string serialize_srt(const SubtitleDocument& doc);

/// `HH:MM:SS,mmm`
std::string format_timestamp(std::int64_t ms);

enum class Genre { Action, Comedy, Drama, Thriller };
inline constexpr std::array<Genre, 4> kGenres = {Genre::Action, Genre::Comedy, Genre::Drama,
                                                 Genre::Thriller};

enum class AwardClass { Oscar, Blockbuster };

std::string_view to_string(Genre g);
std::string_view to_string(AwardClass a);
AwardClass parse_award_class(std::string_view s);

/// Reduces an ordered IMDb genre list to one of the four analysis groups.
/// Action/Adventure/Crime -> Action, Horror/Thriller -> Thriller, Comedy and
/// Drama map to themselves. The first mappable entry wins; throws
/// UnmappedGenreError when none maps.
Genre merge_genre(std::span<const std::string> raw_genres);

inline constexpr int kMinCatalogYear = 1950;
inline constexpr int kMaxCatalogYear = 2024;

struct FilmCatalogEntry {
  std::string film_id;
  std::string title;
  int year = kMinCatalogYear;
  AwardClass award_class = AwardClass::Oscar;
  std::vector<std::string> raw_genres;
  Genre genre = Genre::Action;
};

struct Catalog {
  std::vector<FilmCatalogEntry> entries;
  // Rows whose optional `genre` column disagreed with merge_genre.
  std::vector<std::string> warnings;

  std::array<std::size_t, kGenres.size()> genre_counts() const;
  const FilmCatalogEntry* find(std::string_view film_id) const;
};

/// CSV with header `film_id,title,year,award_class,genres` (genres are
/// `|`-separated). An optional trailing `genre` column is cross-checked.
/// Throws CatalogError on duplicate ids, out-of-range years or malformed rows.
Catalog parse_catalog(std::string_view csv_text);
Catalog load_catalog(const std::filesystem::path& path);

}  // namespace cinesent

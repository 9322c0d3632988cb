#include "cinesent/corpus.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <optional>
#include <sstream>
#include <unordered_set>

#include "cinesent/errors.hpp"
#include "cinesent/util.hpp"

namespace cinesent {
namespace {

std::optional<std::int64_t> parse_digits(std::string_view s, std::size_t min_len, std::size_t max_len) {
  if (s.size() < min_len || s.size() > max_len) return std::nullopt;
  std::int64_t v = 0;
  for (char c : s) {
    if (c < '0' || c > '9') return std::nullopt;
    v = v * 10 + (c - '0');
  }
  return v;
}

// H+:MM:SS,mmm
std::optional<std::int64_t> parse_timestamp(std::string_view s) {
  const auto c1 = s.find(':');
  if (c1 == std::string_view::npos) return std::nullopt;
  const auto c2 = s.find(':', c1 + 1);
  const auto comma = s.find(',', c1 + 1);
  if (c2 == std::string_view::npos || comma == std::string_view::npos || comma < c2) return std::nullopt;
  const auto h = parse_digits(s.substr(0, c1), 1, 3);
  const auto m = parse_digits(s.substr(c1 + 1, c2 - c1 - 1), 2, 2);
  const auto sec = parse_digits(s.substr(c2 + 1, comma - c2 - 1), 2, 2);
  const auto ms = parse_digits(s.substr(comma + 1), 3, 3);
  if (!h || !m || !sec || !ms || *m > 59 || *sec > 59) return std::nullopt;
  return ((*h * 60 + *m) * 60 + *sec) * 1000 + *ms;
}

struct TimeRange {
  std::int64_t start;
  std::int64_t end;
};

std::optional<TimeRange> parse_time_line(std::string_view line) {
  line = trim(line);
  const auto arrow = line.find("-->");
  if (arrow == std::string_view::npos) return std::nullopt;
  const auto start = parse_timestamp(trim(line.substr(0, arrow)));
  std::string_view rest = trim(line.substr(arrow + 3));
  // Some writers append position coordinates after the end time.
  const auto space = rest.find_first_of(" \t");
  if (space != std::string_view::npos) rest = rest.substr(0, space);
  const auto end = parse_timestamp(rest);
  if (!start || !end) return std::nullopt;
  return TimeRange{*start, *end};
}

std::string strip_tags(std::string_view line) {
  std::string out;
  out.reserve(line.size());
  std::size_t i = 0;
  while (i < line.size()) {
    const char c = line[i];
    if (c == '<' || c == '{') {
      const char close = c == '<' ? '>' : '}';
      const auto j = line.find(close, i + 1);
      if (j != std::string_view::npos) {
        i = j + 1;
        continue;
      }
    }
    out += c;
    ++i;
  }
  return out;
}

bool is_blank(std::string_view line) { return trim(line).empty(); }

}  // namespace

std::string format_timestamp(std::int64_t ms) {
  const std::int64_t h = ms / 3'600'000;
  const std::int64_t m = ms / 60'000 % 60;
  const std::int64_t s = ms / 1000 % 60;
  const std::int64_t milli = ms % 1000;
  char buf[48];
  std::snprintf(buf, sizeof buf, "%02lld:%02lld:%02lld,%03lld", static_cast<long long>(h),
                static_cast<long long>(m), static_cast<long long>(s), static_cast<long long>(milli));
  return buf;
}

ParsedSubtitles parse_srt(std::string_view text, std::string film_id) {
  ParsedSubtitles result;
  result.document.film_id = std::move(film_id);
  if (text.starts_with("\xEF\xBB\xBF")) text.remove_prefix(3);

  std::vector<std::string_view> lines;
  for (auto line : split(text, '\n')) {
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
  }

  auto& cues = result.document.cues;
  auto& report = result.report;
  bool saw_content = false;
  std::size_t i = 0;
  while (i < lines.size()) {
    if (is_blank(lines[i])) {
      ++i;
      continue;
    }
    saw_content = true;
    const std::size_t block_line = i + 1;
    std::vector<std::string_view> block;
    while (i < lines.size() && !is_blank(lines[i])) block.push_back(lines[i++]);

    auto skip = [&](const std::string& why) {
      ++report.skipped_blocks;
      report.warnings.push_back("line " + std::to_string(block_line) + ": " + why);
    };
    if (block.size() < 3) {
      skip("incomplete cue block");
      continue;
    }
    const auto index = parse_digits(trim(block[0]), 1, 9);
    if (!index || *index < 1) {
      skip("invalid cue index");
      continue;
    }
    const auto range = parse_time_line(block[1]);
    if (!range) {
      skip("invalid time line");
      continue;
    }
    if (range->start >= range->end) {
      skip("cue ends before it starts");
      continue;
    }
    SubtitleCue cue;
    cue.index = static_cast<int>(*index);
    cue.start_ms = range->start;
    cue.end_ms = range->end;
    for (std::size_t k = 2; k < block.size(); ++k) {
      const std::string stripped = strip_tags(block[k]);
      const auto t = trim(stripped);
      if (!t.empty()) cue.lines.emplace_back(t);
    }
    if (cue.lines.empty()) {
      skip("cue has no text");
      continue;
    }
    cues.push_back(std::move(cue));
  }

  if (saw_content && cues.empty()) {
    throw FormatError("no well-formed subtitle cues" +
                      (result.document.film_id.empty() ? std::string() : " in " + result.document.film_id));
  }
  const auto by_start = [](const SubtitleCue& a, const SubtitleCue& b) { return a.start_ms < b.start_ms; };
  if (!std::is_sorted(cues.begin(), cues.end(), by_start)) {
    std::stable_sort(cues.begin(), cues.end(), by_start);
    report.reordered = true;
    report.warnings.emplace_back("cues were out of order and have been sorted by start time");
  }
  return result;
}

ParsedSubtitles parse_srt(std::istream& in, std::string film_id) {
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw IoError("error reading subtitle stream");
  return parse_srt(std::string_view(ss.str()), std::move(film_id));
}

ParsedSubtitles parse_srt_file(const std::filesystem::path& path, std::string film_id) {
  const std::string text = read_file(path);
  return parse_srt(std::string_view(text), std::move(film_id));
}

std::string serialize_srt(const SubtitleDocument& doc) {
  std::string out;
  for (const auto& cue : doc.cues) {
    out += std::to_string(cue.index);
    out += '\n';
    out += format_timestamp(cue.start_ms);
    out += " --> ";
    out += format_timestamp(cue.end_ms);
    out += '\n';
    for (const auto& line : cue.lines) {
      out += line;
      out += '\n';
    }
    out += '\n';
  }
  return out;
}

std::string_view to_string(Genre g) {
  switch (g) {
    case Genre::Action: return "Action";
    case Genre::Comedy: return "Comedy";
    case Genre::Drama: return "Drama";
    case Genre::Thriller: return "Thriller";
  }
  return "?";
}

std::string_view to_string(AwardClass a) {
  return a == AwardClass::Oscar ? "oscar" : "blockbuster";
}

AwardClass parse_award_class(std::string_view s) {
  const std::string v = to_lower_ascii(trim(s));
  if (v == "oscar") return AwardClass::Oscar;
  if (v == "blockbuster") return AwardClass::Blockbuster;
  throw CatalogError("unknown award class '" + std::string(s) + "'");
}

Genre merge_genre(std::span<const std::string> raw_genres) {
  for (const auto& raw : raw_genres) {
    const std::string g = to_lower_ascii(trim(raw));
    if (g == "action" || g == "adventure" || g == "crime") return Genre::Action;
    if (g == "horror" || g == "thriller") return Genre::Thriller;
    if (g == "comedy") return Genre::Comedy;
    if (g == "drama") return Genre::Drama;
  }
  throw UnmappedGenreError("no mappable genre in [" + join(raw_genres, ", ") + "]");
}

std::array<std::size_t, kGenres.size()> Catalog::genre_counts() const {
  std::array<std::size_t, kGenres.size()> counts{};
  for (const auto& e : entries) ++counts[static_cast<std::size_t>(e.genre)];
  return counts;
}

const FilmCatalogEntry* Catalog::find(std::string_view film_id) const {
  for (const auto& e : entries) {
    if (e.film_id == film_id) return &e;
  }
  return nullptr;
}

Catalog parse_catalog(std::string_view csv_text) {
  Catalog catalog;
  CsvReader reader(csv_text);
  std::vector<std::string> fields;
  if (!reader.next(fields)) throw CatalogError("catalog is empty (missing header)");

  static constexpr std::array<std::string_view, 5> kHeader = {"film_id", "title", "year", "award_class",
                                                              "genres"};
  bool has_genre_column = false;
  if (fields.size() == 6 && to_lower_ascii(trim(fields[5])) == "genre") {
    has_genre_column = true;
  } else if (fields.size() != kHeader.size()) {
    throw CatalogError("catalog header must be film_id,title,year,award_class,genres");
  }
  for (std::size_t k = 0; k < kHeader.size(); ++k) {
    if (to_lower_ascii(trim(fields[k])) != kHeader[k]) {
      throw CatalogError("catalog header column " + std::to_string(k + 1) + " must be '" +
                         std::string(kHeader[k]) + "'");
    }
  }

  std::unordered_set<std::string> seen;
  while (reader.next(fields)) {
    const std::string where = "catalog line " + std::to_string(reader.line());
    if (fields.size() != (has_genre_column ? 6u : 5u)) {
      throw CatalogError(where + ": expected " + std::to_string(has_genre_column ? 6 : 5) + " fields, got " +
                         std::to_string(fields.size()));
    }
    FilmCatalogEntry entry;
    entry.film_id = std::string(trim(fields[0]));
    entry.title = std::string(trim(fields[1]));
    if (entry.film_id.empty()) throw CatalogError(where + ": empty film_id");
    if (!seen.insert(entry.film_id).second) {
      throw CatalogError(where + ": duplicate film_id '" + entry.film_id + "'");
    }

    const auto year_text = trim(fields[2]);
    int year = 0;
    const auto [ptr, ec] = std::from_chars(year_text.data(), year_text.data() + year_text.size(), year);
    if (ec != std::errc{} || ptr != year_text.data() + year_text.size()) {
      throw CatalogError(where + ": malformed year '" + std::string(year_text) + "'");
    }
    if (year < kMinCatalogYear || year > kMaxCatalogYear) {
      throw CatalogError(where + ": year " + std::to_string(year) + " outside [1950, 2024]");
    }
    entry.year = year;

    try {
      entry.award_class = parse_award_class(fields[3]);
    } catch (const CatalogError& e) {
      throw CatalogError(where + ": " + e.what());
    }

    for (auto g : split(fields[4], '|')) {
      g = trim(g);
      if (g.empty()) throw CatalogError(where + ": empty genre entry");
      entry.raw_genres.emplace_back(g);
    }
    if (entry.raw_genres.size() > 3) throw CatalogError(where + ": more than three genres");
    try {
      entry.genre = merge_genre(entry.raw_genres);
    } catch (const UnmappedGenreError& e) {
      throw CatalogError(where + ": " + e.what());
    }
    if (has_genre_column) {
      const std::string declared(trim(fields[5]));
      if (!declared.empty() && to_lower_ascii(declared) != to_lower_ascii(to_string(entry.genre))) {
        catalog.warnings.push_back(entry.film_id + ": declared genre '" + declared + "' but merged genre is " +
                                   std::string(to_string(entry.genre)));
      }
    }
    catalog.entries.push_back(std::move(entry));
  }
  return catalog;
}

Catalog load_catalog(const std::filesystem::path& path) {
  return parse_catalog(read_file(path));
}

}  // namespace cinesent

#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "malseries/dates.hpp"

namespace malseries {

/// The six studied package ecosystems; everything else maps to Other.
enum class EcosystemName { CRAN, Go, Maven, Npm, PyPI, RubyGems, Other };

EcosystemName parse_ecosystem(std::string_view name);
std::string_view to_string(EcosystemName e);
bool is_studied(EcosystemName e);

/// The six studied ecosystems in canonical (alphabetical) order.
std::span<const EcosystemName> studied_ecosystems();

enum class RecordKind { Malware, Vulnerability };

std::string_view to_string(RecordKind k);

struct OsvReference {
  std::string type;
  std::string url;
};

/// One parsed OSV database entry.
struct OsvRecord {
  std::string id;
  /// Distinct ecosystems of the affected packages, in order of appearance.
  std::vector<EcosystemName> ecosystems;
  std::optional<Date> published;
  std::optional<Date> modified;
  std::vector<OsvReference> references;

  /// Ecosystem of the first affected-package entry (Other when none).
  EcosystemName ecosystem() const {
    return ecosystems.empty() ? EcosystemName::Other : ecosystems.front();
  }
};

struct EventRow {
  Date date;
  EcosystemName ecosystem;
  RecordKind kind;
  int advisory_count = 0;
  int article_count = 0;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& msg, size_t byte_offset)
      : std::runtime_error(msg), byte_offset_(byte_offset) {}
  size_t byte_offset() const { return byte_offset_; }

 private:
  size_t byte_offset_;
};

class SchemaError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Parses one OSV JSON document. References lacking a "type" are kept with
/// type "OTHER". Throws ParseError on malformed JSON (with byte offset) and
/// SchemaError on missing id or missing published and modified dates.
OsvRecord parse_record(std::string_view json_text);

/// Malware iff the id begins with the literal prefix "MAL-".
RecordKind classify_record(const OsvRecord& record);
RecordKind classify_id(std::string_view id);

/// Counts references typed exactly "ADVISORY" and "ARTICLE" (case-sensitive).
std::pair<int, int> count_references(const OsvRecord& record);

struct ScanStats {
  size_t files_seen = 0;
  size_t records_parsed = 0;
  size_t dropped_other_ecosystem = 0;
  size_t skipped_unreadable = 0;
};

/// Walks a snapshot directory tree (plain .json files and/or .zip archives of
/// them), producing one EventRow per (record, distinct studied ecosystem).
/// Rows are sorted by (date, ecosystem, record id) so the result does not
/// depend on filesystem enumeration order. Unreadable or schema-violating
/// files are counted and skipped; zero readable records is a hard error.
std::vector<EventRow> scan_snapshot(const std::filesystem::path& root,
                                    ScanStats* stats = nullptr);

/// EventRows from an already-parsed record (empty if no studied ecosystem).
std::vector<EventRow> event_rows(const OsvRecord& record);

void write_events_csv(const std::string& path, std::span<const EventRow> rows);
std::vector<EventRow> read_events_csv(const std::string& path);

}  // namespace malseries

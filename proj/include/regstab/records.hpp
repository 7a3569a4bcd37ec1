#pragma once

#include <array>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "regstab/numerics.hpp"

namespace regstab::ingest {

/// The seven stability indexes, in their canonical (schema) order.
enum class Index { LAP, AAT, FO, DO, AMS, LL, PSR };

inline constexpr std::array<Index, 7> kAllIndexes = {Index::LAP, Index::AAT, Index::FO, Index::DO,
                                                     Index::AMS, Index::LL,  Index::PSR};
/// Indexes every record must carry.
inline constexpr std::array<Index, 5> kCoreIndexes = {Index::LAP, Index::AAT, Index::FO, Index::AMS, Index::PSR};

std::string_view short_name(Index idx) noexcept;   // "LAP"
std::string_view csv_column(Index idx) noexcept;   // "lap_mm"
std::string_view unit(Index idx) noexcept;         // "mm"
std::optional<Index> index_from_name(std::string_view short_or_column);

struct CountryYearRecord {
  std::string country;
  int year = 0;
  double lap_mm = 0.0;
  double aat_c = 0.0;
  double fo = 0.0;
  double ams_pct = 0.0;  // percentage points of GDP
  double psr_pct = 0.0;  // percentage points
  std::optional<double> ll;
  std::optional<double> do_;
  std::optional<double> fsi;  // raw fragility label
  std::optional<double> rs;   // externally supplied stability index

  std::optional<double> get(Index idx) const noexcept;

  friend bool operator==(const CountryYearRecord&, const CountryYearRecord&) = default;
};

using Records = std::vector<CountryYearRecord>;

/// Numeric cell parsing: surrounding blanks and a trailing '%' are ignored,
/// and a lone decimal comma ("2,89") is read as a decimal point.
std::optional<double> parse_number(std::string_view cell);

/// Splits one CSV line, honouring double-quoted fields with "" escapes.
std::vector<std::string> split_csv_line(std::string_view line);

/// Reads records with the header
///   country,year,lap_mm,aat_c,fo,ams_pct,psr_pct[,ll,do,fsi,rs]
/// Columns may appear in any order; unknown columns are ignored.
Records read_csv(std::istream& in, const std::string& source = "<stream>");
Records load_csv(const std::filesystem::path& path);

/// Appends `more` to `into`, rejecting (country, year) collisions.
void merge_records(Records& into, const Records& more);

/// Writes canonical CSV (shortest round-trip decimals, optional columns only
/// when at least one record carries them).
void write_csv(std::ostream& out, const Records& records);

/// True when every record carries the index.
bool all_have(const Records& records, Index idx);

/// n x p matrix of the requested indexes; throws MissingColumn when any
/// record lacks one of them.
numerics::DataMatrix to_data_matrix(const Records& records, std::span<const Index> indexes);

struct OutlierFlag {
  std::size_t record = 0;  // position in the input
  Index index = Index::LAP;
  double z = 0.0;
};

struct Preprocessed {
  Records clean;
  Records flagged;
  std::vector<OutlierFlag> flags;
};

inline constexpr double kDefaultOutlierCutoff = 4.0;

/// Flags a record when |z| of any index column exceeds the cutoff. Columns
/// not carried by every record, or with zero spread, are skipped. Flagged
/// records stay in `clean` unless drop_flagged is set.
Preprocessed preprocess(const Records& records, double cutoff = kDefaultOutlierCutoff, bool drop_flagged = false);

/// Records grouped per country (map order), each group sorted by year.
std::map<std::string, Records> by_country(const Records& records);

}  // namespace regstab::ingest

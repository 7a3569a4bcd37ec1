#include "regstab/records.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>

#include "regstab/error.hpp"
#include "text.hpp"

namespace regstab::ingest {

namespace {

struct IndexInfo {
  Index idx;
  std::string_view name;
  std::string_view column;
  std::string_view unit;
};

constexpr std::array<IndexInfo, 7> kInfo = {{
    {Index::LAP, "LAP", "lap_mm", "mm"},
    {Index::AAT, "AAT", "aat_c", "degC"},
    {Index::FO, "FO", "fo", "count"},
    {Index::DO, "DO", "do", "count"},
    {Index::AMS, "AMS", "ams_pct", "%"},
    {Index::LL, "LL", "ll", "score"},
    {Index::PSR, "PSR", "psr_pct", "%"},
}};

const IndexInfo& info(Index idx) { return kInfo[static_cast<std::size_t>(idx)]; }

std::string shortest(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string where(const std::string& source, std::size_t line, std::string_view column) {
  return source + " line " + std::to_string(line) + ", column " + std::string(column);
}

}  // namespace

std::string_view short_name(Index idx) noexcept { return info(idx).name; }
std::string_view csv_column(Index idx) noexcept { return info(idx).column; }
std::string_view unit(Index idx) noexcept { return info(idx).unit; }

std::optional<Index> index_from_name(std::string_view s) {
  for (const auto& i : kInfo)
    if (s == i.name || s == i.column) return i.idx;
  // Older tables label drought occurrence "DF".
  if (s == "DF") return Index::DO;
  return std::nullopt;
}

std::optional<double> CountryYearRecord::get(Index idx) const noexcept {
  switch (idx) {
    case Index::LAP: return lap_mm;
    case Index::AAT: return aat_c;
    case Index::FO: return fo;
    case Index::DO: return do_;
    case Index::AMS: return ams_pct;
    case Index::LL: return ll;
    case Index::PSR: return psr_pct;
  }
  return std::nullopt;
}

std::optional<double> parse_number(std::string_view cell) {
  cell = text::trim(cell);
  if (!cell.empty() && cell.back() == '%') cell = text::trim(cell.substr(0, cell.size() - 1));
  std::string s(cell);
  const auto comma = s.find(',');
  if (comma != std::string::npos) {
    if (s.find('.') != std::string::npos || s.find(',', comma + 1) != std::string::npos) return std::nullopt;
    s[comma] = '.';
  }
  return text::parse_double(s);
}

std::vector<std::string> split_csv_line(std::string_view line) {
  std::vector<std::string> fields(1);
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          fields.back() += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        fields.back() += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.emplace_back();
    } else if (c != '\r' && c != '\n') {
      fields.back() += c;
    }
  }
  if (quoted) throw Error(ErrorKind::ParseError, "unterminated quoted field");
  return fields;
}

Records read_csv(std::istream& in, const std::string& source) {
  std::string line;
  std::size_t line_no = 0;
  std::vector<std::string> header;
  while (std::getline(in, line)) {
    ++line_no;
    if (line_no == 1 && line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
    if (!text::trim(line).empty()) {
      header = split_csv_line(line);
      break;
    }
  }
  if (header.empty()) throw Error(ErrorKind::MissingColumn, source + ": no header row");
  for (auto& h : header) h = std::string(text::trim(h));

  auto find = [&](std::string_view name) -> std::optional<std::size_t> {
    auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) return std::nullopt;
    return static_cast<std::size_t>(it - header.begin());
  };
  auto require = [&](std::string_view name) {
    auto pos = find(name);
    if (!pos) throw Error(ErrorKind::MissingColumn, source + ": " + std::string(name));
    return *pos;
  };
  const std::size_t c_country = require("country");
  const std::size_t c_year = require("year");
  std::array<std::size_t, 5> c_core{};
  for (std::size_t i = 0; i < kCoreIndexes.size(); ++i) c_core[i] = require(csv_column(kCoreIndexes[i]));
  const auto c_ll = find("ll");
  auto c_do = find("do");
  if (!c_do) c_do = find("DF");
  const auto c_fsi = find("fsi");
  const auto c_rs = find("rs");

  Records out;
  std::set<std::pair<std::string, int>> seen;
  while (std::getline(in, line)) {
    ++line_no;
    if (text::trim(line).empty()) continue;
    std::vector<std::string> cells;
    try {
      cells = split_csv_line(line);
    } catch (const Error&) {
      throw Error(ErrorKind::ParseError, where(source, line_no, "<row>") + ": unterminated quote");
    }
    if (cells.size() < header.size())
      throw Error(ErrorKind::ParseError, where(source, line_no, "<row>") + ": expected " +
                                             std::to_string(header.size()) + " fields");

    CountryYearRecord rec;
    rec.country = std::string(text::trim(cells[c_country]));
    if (rec.country.empty()) throw Error(ErrorKind::ParseError, where(source, line_no, "country"));
    auto year = text::parse_int<int>(cells[c_year]);
    if (!year) throw Error(ErrorKind::ParseError, where(source, line_no, "year"));
    rec.year = *year;

    auto number = [&](std::size_t col, std::string_view name) {
      auto v = parse_number(cells[col]);
      if (!v) throw Error(ErrorKind::ParseError, where(source, line_no, name) + ": '" + cells[col] + "'");
      if (!std::isfinite(*v)) throw Error(ErrorKind::RangeViolation, where(source, line_no, name) + ": not finite");
      return *v;
    };
    auto optional_number = [&](std::optional<std::size_t> col, std::string_view name) -> std::optional<double> {
      if (!col || text::trim(cells[*col]).empty()) return std::nullopt;
      return number(*col, name);
    };
    auto at_least_zero = [&](double v, std::string_view name) {
      if (v < 0.0) throw Error(ErrorKind::RangeViolation, where(source, line_no, name) + ": must be >= 0");
    };

    rec.lap_mm = number(c_core[0], "lap_mm");
    rec.aat_c = number(c_core[1], "aat_c");
    rec.fo = number(c_core[2], "fo");
    rec.ams_pct = number(c_core[3], "ams_pct");
    rec.psr_pct = number(c_core[4], "psr_pct");
    rec.ll = optional_number(c_ll, "ll");
    rec.do_ = optional_number(c_do, "do");
    rec.fsi = optional_number(c_fsi, "fsi");
    rec.rs = optional_number(c_rs, "rs");

    at_least_zero(rec.lap_mm, "lap_mm");
    at_least_zero(rec.fo, "fo");
    at_least_zero(rec.ams_pct, "ams_pct");
    if (rec.psr_pct < 0.0 || rec.psr_pct > 100.0)
      throw Error(ErrorKind::RangeViolation, where(source, line_no, "psr_pct") + ": must lie in [0, 100]");
    if (rec.do_) at_least_zero(*rec.do_, "do");

    if (!seen.emplace(rec.country, rec.year).second)
      throw Error(ErrorKind::DuplicateKey, rec.country + " " + std::to_string(rec.year));
    out.push_back(std::move(rec));
  }
  return out;
}

Records load_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot open " + path.string());
  return read_csv(in, path.string());
}

void merge_records(Records& into, const Records& more) {
  std::set<std::pair<std::string, int>> seen;
  for (const auto& r : into) seen.emplace(r.country, r.year);
  for (const auto& r : more) {
    if (!seen.emplace(r.country, r.year).second)
      throw Error(ErrorKind::DuplicateKey, r.country + " " + std::to_string(r.year));
    into.push_back(r);
  }
}

void write_csv(std::ostream& out, const Records& records) {
  auto any = [&](auto member) {
    return std::any_of(records.begin(), records.end(), [&](const auto& r) { return (r.*member).has_value(); });
  };
  const bool has_ll = any(&CountryYearRecord::ll);
  const bool has_do = any(&CountryYearRecord::do_);
  const bool has_fsi = any(&CountryYearRecord::fsi);
  const bool has_rs = any(&CountryYearRecord::rs);

  auto quote = [](const std::string& s) {
    if (s.find_first_of(",\"") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) q += (c == '"') ? std::string("\"\"") : std::string(1, c);
    return q + "\"";
  };
  auto opt = [](const std::optional<double>& v) { return v ? shortest(*v) : std::string(); };

  out << "country,year,lap_mm,aat_c,fo,ams_pct,psr_pct";
  if (has_ll) out << ",ll";
  if (has_do) out << ",do";
  if (has_fsi) out << ",fsi";
  if (has_rs) out << ",rs";
  out << '\n';
  for (const auto& r : records) {
    out << quote(r.country) << ',' << r.year << ',' << shortest(r.lap_mm) << ',' << shortest(r.aat_c) << ','
        << shortest(r.fo) << ',' << shortest(r.ams_pct) << ',' << shortest(r.psr_pct);
    if (has_ll) out << ',' << opt(r.ll);
    if (has_do) out << ',' << opt(r.do_);
    if (has_fsi) out << ',' << opt(r.fsi);
    if (has_rs) out << ',' << opt(r.rs);
    out << '\n';
  }
}

bool all_have(const Records& records, Index idx) {
  return std::all_of(records.begin(), records.end(), [idx](const auto& r) { return r.get(idx).has_value(); });
}

numerics::DataMatrix to_data_matrix(const Records& records, std::span<const Index> indexes) {
  Matrix m(records.size(), indexes.size());
  std::vector<std::string> names;
  std::vector<std::string> units;
  for (std::size_t c = 0; c < indexes.size(); ++c) {
    names.emplace_back(short_name(indexes[c]));
    units.emplace_back(unit(indexes[c]));
    for (std::size_t r = 0; r < records.size(); ++r) {
      auto v = records[r].get(indexes[c]);
      if (!v)
        throw Error(ErrorKind::MissingColumn, std::string(csv_column(indexes[c])) + " absent for " +
                                                  records[r].country + " " + std::to_string(records[r].year));
      m(r, c) = *v;
    }
  }
  return numerics::DataMatrix(std::move(m), std::move(names), std::move(units));
}

Preprocessed preprocess(const Records& records, double cutoff, bool drop_flagged) {
  if (records.size() < 3)
    throw Error(ErrorKind::TooFewRecords, std::to_string(records.size()) + " records, need at least 3");
  if (std::isnan(cutoff) || cutoff < 0.0) throw Error(ErrorKind::OutOfRange, "outlier cutoff must be >= 0");

  Preprocessed out;
  std::vector<bool> flagged(records.size(), false);
  for (Index idx : kAllIndexes) {
    if (!all_have(records, idx)) continue;
    Matrix col(records.size(), 1);
    for (std::size_t i = 0; i < records.size(); ++i) col(i, 0) = *records[i].get(idx);
    const auto stats = numerics::column_stats(col);
    if (!(stats.sample_variances[0] > 0.0)) continue;
    const double sd = std::sqrt(stats.sample_variances[0]);
    for (std::size_t i = 0; i < records.size(); ++i) {
      const double z = (col(i, 0) - stats.means[0]) / sd;
      if (std::abs(z) > cutoff) {
        out.flags.push_back({i, idx, z});
        flagged[i] = true;
      }
    }
  }
  for (std::size_t i = 0; i < records.size(); ++i) {
    if (flagged[i]) out.flagged.push_back(records[i]);
    if (!flagged[i] || !drop_flagged) out.clean.push_back(records[i]);
  }
  std::stable_sort(out.flags.begin(), out.flags.end(),
                   [](const OutlierFlag& a, const OutlierFlag& b) { return a.record < b.record; });
  return out;
}

std::map<std::string, Records> by_country(const Records& records) {
  std::map<std::string, Records> groups;
  for (const auto& r : records) groups[r.country].push_back(r);
  for (auto& [name, rows] : groups)
    std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) { return a.year < b.year; });
  return groups;
}

}  // namespace regstab::ingest

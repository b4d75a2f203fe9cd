#pragma once

#include <charconv>
#include <cstdint>
#include <fstream>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "rids/frame.hpp"

namespace rids {

inline constexpr const char* kCsvHeader =
    "frame_number,timestamp_us,kind,src,dst,bssid,ssid,suite,"
    "beacon_interval_tu,eapol_msg,retry,reason_code,label";

struct CsvError : std::runtime_error {
  size_t line;
  size_t column;  // 1-based field index
  CsvError(size_t ln, size_t col, const std::string& what)
      : std::runtime_error("line " + std::to_string(ln) + ", column " +
                           std::to_string(col) + ": " + what),
        line(ln),
        column(col) {}
};

namespace detail {

inline bool csv_needs_quoting(std::string_view field) {
  return field.find_first_of(",\"\r\n") != std::string_view::npos;
}

inline void csv_append_field(std::string& out, std::string_view field) {
  if (!csv_needs_quoting(field)) {
    out.append(field);
    return;
  }
  out.push_back('"');
  for (char c : field) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
}

inline std::vector<std::string> csv_split(std::string_view row, size_t line_no) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  size_t i = 0;
  while (i < row.size()) {
    char c = row[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < row.size() && row[i + 1] == '"') {
          cur.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur.push_back(c);
      }
    } else if (c == '"') {
      if (!cur.empty())
        throw CsvError(line_no, fields.size() + 1, "stray quote inside field");
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
    ++i;
  }
  if (quoted) throw CsvError(line_no, fields.size() + 1, "unterminated quote");
  fields.push_back(std::move(cur));
  return fields;
}

template <typename T>
T csv_number(const std::string& field, size_t line_no, size_t col) {
  T value{};
  auto [ptr, ec] =
      std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc() || ptr != field.data() + field.size())
    throw CsvError(line_no, col, "bad number '" + field + "'");
  return value;
}

inline MacAddr csv_mac(const std::string& field, size_t line_no, size_t col) {
  auto m = MacAddr::parse(field);
  if (!m) throw CsvError(line_no, col, "bad mac address '" + field + "'");
  return *m;
}

}  // namespace detail

inline std::string frame_to_csv_row(const Frame& f) {
  std::string row;
  row.reserve(96);
  row += std::to_string(f.frame_number);
  row += ',';
  row += std::to_string(f.timestamp_us);
  row += ',';
  row += to_string(f.kind);
  row += ',';
  row += f.src.to_string();
  row += ',';
  row += f.dst.to_string();
  row += ',';
  row += f.bssid.to_string();
  row += ',';
  detail::csv_append_field(row, f.ssid);
  row += ',';
  row += to_string(f.suite);
  row += ',';
  row += std::to_string(f.beacon_interval_tu);
  row += ',';
  row += std::to_string(f.eapol_msg);
  row += ',';
  row += f.retry ? '1' : '0';
  row += ',';
  row += std::to_string(f.reason_code);
  row += ',';
  row += to_string(f.label);
  return row;
}

inline Frame csv_row_to_frame(std::string_view row, size_t line_no = 0) {
  auto fields = detail::csv_split(row, line_no);
  if (fields.size() != 13)
    throw CsvError(line_no, fields.size(),
                   "expected 13 columns, got " + std::to_string(fields.size()));
  Frame f;
  f.frame_number = detail::csv_number<uint64_t>(fields[0], line_no, 1);
  f.timestamp_us = detail::csv_number<uint64_t>(fields[1], line_no, 2);
  auto kind = frame_kind_from(fields[2]);
  if (!kind) throw CsvError(line_no, 3, "unknown kind '" + fields[2] + "'");
  f.kind = *kind;
  f.src = detail::csv_mac(fields[3], line_no, 4);
  f.dst = detail::csv_mac(fields[4], line_no, 5);
  f.bssid = detail::csv_mac(fields[5], line_no, 6);
  if (fields[6].size() > kMaxSsidBytes)
    throw CsvError(line_no, 7, "ssid longer than 32 bytes");
  f.ssid = fields[6];
  auto suite = suite_from(fields[7]);
  if (!suite) throw CsvError(line_no, 8, "unknown suite '" + fields[7] + "'");
  f.suite = *suite;
  f.beacon_interval_tu = detail::csv_number<uint16_t>(fields[8], line_no, 9);
  f.eapol_msg = detail::csv_number<uint8_t>(fields[9], line_no, 10);
  if (fields[10] == "0")
    f.retry = false;
  else if (fields[10] == "1")
    f.retry = true;
  else
    throw CsvError(line_no, 11, "retry must be 0 or 1");
  f.reason_code = detail::csv_number<uint16_t>(fields[11], line_no, 12);
  auto label = label_from(fields[12]);
  if (!label) throw CsvError(line_no, 13, "unknown label '" + fields[12] + "'");
  f.label = *label;
  return f;
}

inline std::string frames_to_csv(std::span<const Frame> frames) {
  std::string out(kCsvHeader);
  out += '\n';
  for (const Frame& f : frames) {
    out += frame_to_csv_row(f);
    out += '\n';
  }
  return out;
}

inline std::vector<Frame> frames_from_csv(std::string_view text) {
  std::vector<Frame> frames;
  size_t line_no = 0;
  size_t pos = 0;
  while (pos < text.size()) {
    size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    ++line_no;
    if (line_no == 1) {
      if (line != kCsvHeader)
        throw CsvError(1, 1, "unexpected header line");
    } else if (!line.empty()) {
      frames.push_back(csv_row_to_frame(line, line_no));
    }
    pos = end + 1;
  }
  if (line_no == 0) throw CsvError(0, 1, "empty csv input");
  return frames;
}

}  // namespace rids

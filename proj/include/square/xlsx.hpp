#pragma once

#include <zlib.h>

#include <cstdint>
#include <cstring>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "square/cells.hpp"
#include "square/errors.hpp"

namespace square::xlsx {

// ---------------------------------------------------------------------------
// Minimal ZIP reading: central directory walk, stored and deflate entries.
// ---------------------------------------------------------------------------

namespace detail {

inline std::uint16_t rd16(const std::string& b, std::size_t off) {
  return static_cast<std::uint16_t>(static_cast<unsigned char>(b[off]) |
                                    (static_cast<unsigned char>(b[off + 1]) << 8));
}

inline std::uint32_t rd32(const std::string& b, std::size_t off) {
  return static_cast<std::uint32_t>(static_cast<unsigned char>(b[off])) |
         (static_cast<std::uint32_t>(static_cast<unsigned char>(b[off + 1])) << 8) |
         (static_cast<std::uint32_t>(static_cast<unsigned char>(b[off + 2])) << 16) |
         (static_cast<std::uint32_t>(static_cast<unsigned char>(b[off + 3])) << 24);
}

inline std::string inflate_raw(const std::string& data, std::size_t expected_size,
                               const std::string& path) {
  z_stream strm{};
  if (inflateInit2(&strm, -MAX_WBITS) != Z_OK)
    throw ParseError(path, "zlib init failed");
  std::string out;
  out.resize(expected_size ? expected_size : data.size() * 4 + 64);
  strm.next_in = reinterpret_cast<Bytef*>(const_cast<char*>(data.data()));
  strm.avail_in = static_cast<uInt>(data.size());
  std::size_t written = 0;
  int rc = Z_OK;
  while (rc != Z_STREAM_END) {
    if (written == out.size()) out.resize(out.size() * 2);
    strm.next_out = reinterpret_cast<Bytef*>(out.data() + written);
    strm.avail_out = static_cast<uInt>(out.size() - written);
    rc = inflate(&strm, Z_NO_FLUSH);
    if (rc != Z_OK && rc != Z_STREAM_END) {
      inflateEnd(&strm);
      throw ParseError(path, "corrupt deflate stream in archive");
    }
    written = out.size() - strm.avail_out;
    if (rc == Z_OK && strm.avail_in == 0 && strm.avail_out > 0) {
      inflateEnd(&strm);
      throw ParseError(path, "truncated deflate stream in archive");
    }
  }
  inflateEnd(&strm);
  out.resize(written);
  return out;
}

}  // namespace detail

class ZipArchive {
public:
  static ZipArchive from_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FileNotFoundError(path);
    std::ostringstream buf;
    buf << in.rdbuf();
    ZipArchive zip;
    zip.path_ = path;
    zip.bytes_ = buf.str();
    zip.parse_directory();
    return zip;
  }

  bool has(const std::string& name) const { return entries_.count(name) > 0; }

  std::string read(const std::string& name) const {
    auto it = entries_.find(name);
    if (it == entries_.end())
      throw ParseError(path_, "archive member missing: " + name);
    const Entry& e = it->second;
    // local header: 30 fixed bytes, then name and extra fields
    if (e.local_offset + 30 > bytes_.size() ||
        detail::rd32(bytes_, e.local_offset) != 0x04034b50)
      throw ParseError(path_, "bad local header for: " + name);
    std::size_t nlen = detail::rd16(bytes_, e.local_offset + 26);
    std::size_t xlen = detail::rd16(bytes_, e.local_offset + 28);
    std::size_t data_off = e.local_offset + 30 + nlen + xlen;
    if (data_off + e.comp_size > bytes_.size())
      throw ParseError(path_, "truncated archive member: " + name);
    std::string raw = bytes_.substr(data_off, e.comp_size);
    if (e.method == 0) return raw;
    if (e.method == 8) return detail::inflate_raw(raw, e.uncomp_size, path_);
    throw ParseError(path_, "unsupported compression method for: " + name);
  }

private:
  struct Entry {
    std::uint16_t method = 0;
    std::uint32_t comp_size = 0;
    std::uint32_t uncomp_size = 0;
    std::uint32_t local_offset = 0;
  };

  void parse_directory() {
    if (bytes_.size() < 22) throw ParseError(path_, "not a ZIP archive");
    // end-of-central-directory record: scan backwards past any comment
    std::size_t scan_floor = bytes_.size() > 65557 ? bytes_.size() - 65557 : 0;
    std::size_t eocd = std::string::npos;
    for (std::size_t i = bytes_.size() - 22; ; --i) {
      if (detail::rd32(bytes_, i) == 0x06054b50) {
        eocd = i;
        break;
      }
      if (i == scan_floor) break;
    }
    if (eocd == std::string::npos) throw ParseError(path_, "not a ZIP archive");
    std::uint16_t count = detail::rd16(bytes_, eocd + 10);
    std::uint32_t cd_offset = detail::rd32(bytes_, eocd + 16);
    std::size_t pos = cd_offset;
    for (std::uint16_t i = 0; i < count; ++i) {
      if (pos + 46 > bytes_.size() || detail::rd32(bytes_, pos) != 0x02014b50)
        throw ParseError(path_, "corrupt central directory");
      Entry e;
      e.method = detail::rd16(bytes_, pos + 10);
      e.comp_size = detail::rd32(bytes_, pos + 20);
      e.uncomp_size = detail::rd32(bytes_, pos + 24);
      std::size_t nlen = detail::rd16(bytes_, pos + 28);
      std::size_t xlen = detail::rd16(bytes_, pos + 30);
      std::size_t clen = detail::rd16(bytes_, pos + 32);
      e.local_offset = detail::rd32(bytes_, pos + 42);
      std::string name = bytes_.substr(pos + 46, nlen);
      entries_[name] = e;
      pos += 46 + nlen + xlen + clen;
    }
  }

  std::string path_;
  std::string bytes_;
  std::map<std::string, Entry> entries_;
};

// ---------------------------------------------------------------------------
// Targeted XML scanning for the handful of OOXML shapes we consume.
// ---------------------------------------------------------------------------

namespace detail {

inline std::string xml_unescape(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  std::size_t i = 0;
  while (i < s.size()) {
    if (s[i] != '&') {
      out.push_back(s[i++]);
      continue;
    }
    std::size_t semi = s.find(';', i);
    if (semi == std::string::npos || semi - i > 10) {
      out.push_back(s[i++]);
      continue;
    }
    std::string ent = s.substr(i + 1, semi - i - 1);
    if (ent == "amp") out.push_back('&');
    else if (ent == "lt") out.push_back('<');
    else if (ent == "gt") out.push_back('>');
    else if (ent == "quot") out.push_back('"');
    else if (ent == "apos") out.push_back('\'');
    else if (!ent.empty() && ent[0] == '#') {
      long code = 0;
      try {
        code = (ent.size() > 1 && (ent[1] == 'x' || ent[1] == 'X'))
                   ? std::stol(ent.substr(2), nullptr, 16)
                   : std::stol(ent.substr(1));
      } catch (...) {
        code = -1;
      }
      if (code >= 0 && code < 0x80) {
        out.push_back(static_cast<char>(code));
      } else if (code >= 0x80) {
        // UTF-8 encode
        if (code < 0x800) {
          out.push_back(static_cast<char>(0xC0 | (code >> 6)));
          out.push_back(static_cast<char>(0x80 | (code & 0x3F)));
        } else if (code < 0x10000) {
          out.push_back(static_cast<char>(0xE0 | (code >> 12)));
          out.push_back(static_cast<char>(0x80 | ((code >> 6) & 0x3F)));
          out.push_back(static_cast<char>(0x80 | (code & 0x3F)));
        } else {
          out.push_back(static_cast<char>(0xF0 | (code >> 18)));
          out.push_back(static_cast<char>(0x80 | ((code >> 12) & 0x3F)));
          out.push_back(static_cast<char>(0x80 | ((code >> 6) & 0x3F)));
          out.push_back(static_cast<char>(0x80 | (code & 0x3F)));
        }
      }
    }
    i = semi + 1;
  }
  return out;
}

struct XmlElement {
  std::string attrs;
  std::string inner;
};

// Collects every <tag ...>...</tag> or <tag .../> occurrence. Assumes the
// tag does not nest within itself, which holds for the OOXML parts we read.
inline std::vector<XmlElement> elements(const std::string& doc, const std::string& tag) {
  std::vector<XmlElement> out;
  std::string open = "<" + tag;
  std::string close = "</" + tag + ">";
  std::size_t pos = 0;
  while (true) {
    std::size_t start = doc.find(open, pos);
    if (start == std::string::npos) break;
    std::size_t after = start + open.size();
    if (after < doc.size() && doc[after] != ' ' && doc[after] != '>' &&
        doc[after] != '/' && doc[after] != '\t' && doc[after] != '\n' &&
        doc[after] != '\r') {
      pos = after;  // prefix of a longer tag name
      continue;
    }
    std::size_t gt = doc.find('>', after);
    if (gt == std::string::npos) break;
    XmlElement el;
    bool self_closing = gt > start && doc[gt - 1] == '/';
    el.attrs = doc.substr(after, (self_closing ? gt - 1 : gt) - after);
    if (!self_closing) {
      std::size_t end = doc.find(close, gt + 1);
      if (end == std::string::npos) break;
      el.inner = doc.substr(gt + 1, end - gt - 1);
      pos = end + close.size();
    } else {
      pos = gt + 1;
    }
    out.push_back(std::move(el));
  }
  return out;
}

inline std::optional<std::string> attr(const std::string& attrs, const std::string& name) {
  std::size_t pos = 0;
  while (true) {
    std::size_t at = attrs.find(name, pos);
    if (at == std::string::npos) return std::nullopt;
    // whole attribute name followed by '='; a ":" prefix admits namespaced
    // forms such as r:id
    bool start_ok = at == 0 || attrs[at - 1] == ' ' || attrs[at - 1] == '\t' ||
                    attrs[at - 1] == '\n' || attrs[at - 1] == '\r' || attrs[at - 1] == ':';
    std::size_t eq = at + name.size();
    if (!start_ok || eq >= attrs.size() || attrs[eq] != '=') {
      pos = at + 1;
      continue;
    }
    std::size_t q1 = attrs.find('"', eq);
    if (q1 == std::string::npos) return std::nullopt;
    std::size_t q2 = attrs.find('"', q1 + 1);
    if (q2 == std::string::npos) return std::nullopt;
    return xml_unescape(attrs.substr(q1 + 1, q2 - q1 - 1));
  }
}

// Concatenates the contents of every <t> element (plain and rich-text runs).
inline std::string gather_text(const std::string& inner) {
  std::string out;
  for (const auto& t : elements(inner, "t")) out += xml_unescape(t.inner);
  return out;
}

// "BC12" -> row 11, col 54
inline bool parse_cell_ref(const std::string& ref, long& row, long& col) {
  std::size_t i = 0;
  long c = 0;
  while (i < ref.size() && ref[i] >= 'A' && ref[i] <= 'Z') {
    c = c * 26 + (ref[i] - 'A' + 1);
    ++i;
  }
  if (i == 0 || i >= ref.size()) return false;
  long r = 0;
  for (; i < ref.size(); ++i) {
    if (ref[i] < '0' || ref[i] > '9') return false;
    r = r * 10 + (ref[i] - '0');
  }
  if (r <= 0 || c <= 0) return false;
  row = r - 1;
  col = c - 1;
  return true;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Workbook assembly
// ---------------------------------------------------------------------------

inline Sheet parse_worksheet(const std::string& xml, const std::vector<std::string>& shared,
                             const std::string& name, const std::string& path);

inline Workbook load(const std::string& path) {
  ZipArchive zip = ZipArchive::from_file(path);
  if (!zip.has("xl/workbook.xml"))
    throw ParseError(path, "missing xl/workbook.xml; not a spreadsheet archive");

  // shared strings are optional
  std::vector<std::string> shared;
  if (zip.has("xl/sharedStrings.xml")) {
    std::string ss = zip.read("xl/sharedStrings.xml");
    for (const auto& si : detail::elements(ss, "si"))
      shared.push_back(detail::gather_text(si.inner));
  }

  // relationship id -> worksheet part
  std::map<std::string, std::string> rel_target;
  if (zip.has("xl/_rels/workbook.xml.rels")) {
    std::string rels = zip.read("xl/_rels/workbook.xml.rels");
    for (const auto& rel : detail::elements(rels, "Relationship")) {
      auto id = detail::attr(rel.attrs, "Id");
      auto target = detail::attr(rel.attrs, "Target");
      if (!id || !target) continue;
      std::string t = *target;
      if (!t.empty() && t[0] == '/') t = t.substr(1);
      else t = "xl/" + t;
      rel_target[*id] = t;
    }
  }

  Workbook wb;
  wb.source_path = path;
  std::string wbxml = zip.read("xl/workbook.xml");
  int ordinal = 0;
  for (const auto& sh : detail::elements(wbxml, "sheet")) {
    auto name = detail::attr(sh.attrs, "name");
    auto rid = detail::attr(sh.attrs, "id");  // matches r:id via suffix rule
    ++ordinal;
    std::string part;
    if (rid && rel_target.count(*rid)) part = rel_target[*rid];
    else part = "xl/worksheets/sheet" + std::to_string(ordinal) + ".xml";
    if (!zip.has(part))
      throw ParseError(path, "worksheet part missing: " + part);
    Sheet sheet = parse_worksheet(zip.read(part), shared,
                                  name ? *name : ("Sheet" + std::to_string(ordinal)), path);
    for (const auto& existing : wb.sheets) {
      if (existing.name == sheet.name)
        throw ParseError(path, "duplicate sheet name: " + sheet.name);
    }
    wb.sheets.push_back(std::move(sheet));
  }
  if (wb.sheets.empty()) throw ParseError(path, "workbook has no sheets");
  return wb;
}

inline Sheet parse_worksheet(const std::string& xml, const std::vector<std::string>& shared,
                             const std::string& name, const std::string& path) {
  struct RawCell {
    long row, col;
    CellValue value;
  };
  std::vector<RawCell> cells;
  long max_row = -1, max_col = -1;

  for (const auto& row_el : detail::elements(xml, "row")) {
    for (const auto& c : detail::elements(row_el.inner, "c")) {
      auto ref = detail::attr(c.attrs, "r");
      long r = 0, col = 0;
      if (!ref || !detail::parse_cell_ref(*ref, r, col))
        throw ParseError(path, "cell without a valid reference");
      std::string type = detail::attr(c.attrs, "t").value_or("");
      std::string v;
      auto vs = detail::elements(c.inner, "v");
      if (!vs.empty()) v = detail::xml_unescape(vs.front().inner);

      CellValue value;
      if (type == "s") {
        std::size_t idx = 0;
        try {
          idx = static_cast<std::size_t>(std::stoul(v));
        } catch (...) {
          throw ParseError(path, "bad shared string index", r, col);
        }
        if (idx >= shared.size())
          throw ParseError(path, "shared string index out of range", r, col);
        value = CellValue::from_text(shared[idx]);
      } else if (type == "inlineStr") {
        value = CellValue::from_text(detail::gather_text(c.inner));
      } else if (type == "str") {
        // cached formula result; the formula itself is dropped
        value = CellValue::from_text(v);
      } else if (type == "b") {
        value.kind = CellKind::Boolean;
        value.boolean_value = (v == "1");
        value.text_form = value.boolean_value ? "TRUE" : "FALSE";
      } else if (type == "d") {
        value = CellValue::from_text(v);
        if (value.kind != CellKind::Date && !v.empty()) {
          value.kind = CellKind::Date;
          value.iso_date = v;
        }
      } else if (type == "e") {
        value = CellValue::from_text(v);
      } else {
        if (!v.empty()) {
          value.kind = CellKind::Number;
          value.text_form = v;
          try {
            value.numeric_form = std::stod(v);
          } catch (...) {
            throw ParseError(path, "bad numeric cell value: " + v, r, col);
          }
        }
      }
      if (!value.empty()) {
        cells.push_back({r, col, std::move(value)});
        max_row = std::max(max_row, r);
        max_col = std::max(max_col, col);
      }
    }
  }

  std::vector<MergedRegion> merges;
  for (const auto& mc : detail::elements(xml, "mergeCell")) {
    auto ref = detail::attr(mc.attrs, "ref");
    if (!ref) continue;
    std::size_t colon = ref->find(':');
    if (colon == std::string::npos)
      throw ParseError(path, "bad merge reference: " + *ref);
    long r1, c1, r2, c2;
    if (!detail::parse_cell_ref(ref->substr(0, colon), r1, c1) ||
        !detail::parse_cell_ref(ref->substr(colon + 1), r2, c2))
      throw ParseError(path, "bad merge reference: " + *ref);
    MergedRegion m{std::min(r1, r2), std::min(c1, c2), std::max(r1, r2), std::max(c1, c2)};
    if (m.area() < 2) continue;  // a 1x1 region is not a merge
    merges.push_back(m);
    max_row = std::max(max_row, m.bottom);
    max_col = std::max(max_col, m.right);
  }

  Sheet sheet;
  sheet.name = name;
  if (max_row >= 0 && max_col >= 0) {
    CellGrid grid(static_cast<std::size_t>(max_row + 1), static_cast<std::size_t>(max_col + 1));
    for (auto& rc : cells) grid.set(static_cast<std::size_t>(rc.row),
                                    static_cast<std::size_t>(rc.col), std::move(rc.value));
    long keep_rows = 0, keep_cols = 0;
    for (const auto& m : merges) {
      keep_rows = std::max(keep_rows, m.bottom + 1);
      keep_cols = std::max(keep_cols, m.right + 1);
    }
    grid.trim_trailing_empty(static_cast<std::size_t>(keep_rows),
                             static_cast<std::size_t>(keep_cols));
    sheet.grid = std::move(grid);
  }
  sheet.merges = std::move(merges);
  validate_sheet(sheet, path);
  return sheet;
}

}  // namespace square::xlsx

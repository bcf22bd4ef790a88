#include "orbit/io.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "orbit/errors.hpp"

namespace orbit {

namespace fs = std::filesystem;

std::string format_real(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

double parse_real(std::string_view token, const std::string& where) {
  double v = 0.0;
  const char* first = token.data();
  const char* last = token.data() + token.size();
  if (!token.empty() && *first == '+') ++first;
  auto res = std::from_chars(first, last, v);
  if (token.empty() || res.ec != std::errc() || res.ptr != last) {
    throw DataError(where + ": non-numeric token '" + std::string(token) + "'");
  }
  if (!std::isfinite(v)) throw DataError(where + ": non-finite value '" + std::string(token) + "'");
  return v;
}

namespace {

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    const std::size_t start = i;
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    if (i > start) out.push_back(line.substr(start, i - start));
  }
  return out;
}

// Lines with '#' comments stripped, paired with 1-based line numbers.
std::vector<std::pair<std::size_t, std::string_view>> content_lines(std::string_view text) {
  std::vector<std::pair<std::size_t, std::string_view>> out;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t end = std::min(text.find('\n', pos), text.size());
    std::string_view line = text.substr(pos, end - pos);
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    if (!split_ws(line).empty()) out.emplace_back(line_no, line);
    if (end == text.size()) break;
    pos = end + 1;
  }
  return out;
}

long parse_int(std::string_view token, const std::string& where) {
  long v = 0;
  auto res = std::from_chars(token.data(), token.data() + token.size(), v);
  if (token.empty() || res.ec != std::errc() || res.ptr != token.data() + token.size()) {
    throw DataError(where + ": expected an integer, got '" + std::string(token) + "'");
  }
  return v;
}

// Header tokens of a PNM file: whitespace separated, '#' comments to end of
// line. Leaves `pos` just past the last token read.
class PnmHeader {
 public:
  explicit PnmHeader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  std::string next(const char* what) {
    for (;;) {
      while (pos_ < bytes_.size() && std::isspace(bytes_[pos_])) ++pos_;
      if (pos_ < bytes_.size() && bytes_[pos_] == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
        continue;
      }
      break;
    }
    std::string tok;
    while (pos_ < bytes_.size() && !std::isspace(bytes_[pos_]) && bytes_[pos_] != '#') {
      tok.push_back(static_cast<char>(bytes_[pos_++]));
    }
    if (tok.empty()) {
      throw DataError("PGM: malformed header, missing " + std::string(what) + " at byte " + std::to_string(pos_));
    }
    return tok;
  }

  std::size_t pos() const { return pos_; }
  void skip(std::size_t n) { pos_ += n; }

 private:
  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

std::uint32_t read_be32(std::span<const std::uint8_t> b, std::size_t at) {
  return (std::uint32_t{b[at]} << 24) | (std::uint32_t{b[at + 1]} << 16) | (std::uint32_t{b[at + 2]} << 8) |
         std::uint32_t{b[at + 3]};
}

}  // namespace

GrayImage read_pgm(std::span<const std::uint8_t> bytes) {
  PnmHeader hdr(bytes);
  const std::string magic = hdr.next("magic");
  if (magic != "P5" && magic != "P2") {
    throw DataError("PGM: unsupported format '" + magic + "' (expected P5 or P2)");
  }
  const long width = parse_int(hdr.next("width"), "PGM header width");
  const long height = parse_int(hdr.next("height"), "PGM header height");
  const long maxval = parse_int(hdr.next("maxval"), "PGM header maxval");
  if (width <= 0 || height <= 0) throw DataError("PGM: non-positive dimensions");
  if (maxval <= 0 || maxval > 65535) throw DataError("PGM: maxval " + std::to_string(maxval) + " outside 1..65535");
  const auto w = static_cast<std::size_t>(width);
  const auto h = static_cast<std::size_t>(height);
  Grid g(h, w);
  const double scale = static_cast<double>(maxval);

  if (magic == "P5") {
    if (hdr.pos() >= bytes.size() || !std::isspace(bytes[hdr.pos()])) {
      throw DataError("PGM: missing whitespace after maxval");
    }
    hdr.skip(1);
    const std::size_t bpp = maxval > 255 ? 2 : 1;
    const std::size_t need = w * h * bpp;
    const std::size_t have = bytes.size() - hdr.pos();
    if (have < need) {
      throw DataError("PGM: truncated payload, expected " + std::to_string(need) + " bytes, got " +
                      std::to_string(have));
    }
    std::size_t at = hdr.pos();
    for (std::size_t r = 0; r < h; ++r) {
      for (std::size_t c = 0; c < w; ++c) {
        unsigned v = bytes[at++];
        if (bpp == 2) v = (v << 8) | bytes[at++];
        if (v > static_cast<unsigned>(maxval)) throw DataError("PGM: sample exceeds maxval");
        g.at(h - 1 - r, c) = v / scale;
      }
    }
  } else {
    for (std::size_t r = 0; r < h; ++r) {
      for (std::size_t c = 0; c < w; ++c) {
        std::string tok;
        try {
          tok = hdr.next("pixel value");
        } catch (const DataError&) {
          throw DataError("PGM: truncated payload, expected " + std::to_string(w * h) + " values, got " +
                          std::to_string(r * w + c));
        }
        const long v = parse_int(tok, "PGM pixel " + std::to_string(r * w + c));
        if (v < 0 || v > maxval) throw DataError("PGM: sample exceeds maxval");
        g.at(h - 1 - r, c) = static_cast<double>(v) / scale;
      }
    }
  }
  return GrayImage(std::move(g));
}

namespace {

std::uint8_t to_byte(double v) {
  return static_cast<std::uint8_t>(std::floor(std::clamp(v, 0.0, 1.0) * 255.0 + 0.5));
}

}  // namespace

Bytes write_pgm(const GrayImage& img) {
  const std::string header =
      "P5\n" + std::to_string(img.width()) + " " + std::to_string(img.height()) + "\n255\n";
  Bytes out(header.begin(), header.end());
  out.reserve(header.size() + img.width() * img.height());
  for (std::size_t r = 0; r < img.height(); ++r) {
    for (std::size_t c = 0; c < img.width(); ++c) out.push_back(to_byte(img.at(img.height() - 1 - r, c)));
  }
  return out;
}

GrayImage quantize8(const GrayImage& img) {
  Grid g = img.grid();
  for (double& v : g.values) v = to_byte(v) / 255.0;
  return GrayImage(std::move(g));
}

std::vector<GrayImage> read_idx_images(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 16) throw DataError("IDX images: header needs 16 bytes, got " + std::to_string(bytes.size()));
  if (read_be32(bytes, 0) != 0x00000803) throw DataError("IDX images: bad magic (expected 0x00000803)");
  const std::size_t n = read_be32(bytes, 4);
  const std::size_t rows = read_be32(bytes, 8);
  const std::size_t cols = read_be32(bytes, 12);
  if (rows != cols || rows == 0) throw DataError("IDX images: only square non-empty images are supported");
  const std::size_t need = 16 + n * rows * cols;
  if (bytes.size() < need) {
    throw DataError("IDX images: truncated, expected " + std::to_string(need) + " bytes, got " +
                    std::to_string(bytes.size()));
  }
  std::vector<GrayImage> out;
  out.reserve(n);
  std::size_t at = 16;
  for (std::size_t k = 0; k < n; ++k) {
    Grid g(rows, cols);
    for (std::size_t r = 0; r < rows; ++r) {
      for (std::size_t c = 0; c < cols; ++c) g.at(rows - 1 - r, c) = bytes[at++] / 255.0;
    }
    out.emplace_back(std::move(g));
  }
  return out;
}

std::vector<int> read_idx_labels(std::span<const std::uint8_t> bytes, int max_label) {
  if (bytes.size() < 8) throw DataError("IDX labels: header needs 8 bytes, got " + std::to_string(bytes.size()));
  if (read_be32(bytes, 0) != 0x00000801) throw DataError("IDX labels: bad magic (expected 0x00000801)");
  const std::size_t n = read_be32(bytes, 4);
  if (bytes.size() < 8 + n) {
    throw DataError("IDX labels: truncated, expected " + std::to_string(8 + n) + " bytes, got " +
                    std::to_string(bytes.size()));
  }
  std::vector<int> out(n);
  for (std::size_t k = 0; k < n; ++k) {
    out[k] = bytes[8 + k];
    if (out[k] > max_label) {
      throw DataError("IDX labels: label " + std::to_string(out[k]) + " at item " + std::to_string(k) +
                      " outside 0.." + std::to_string(max_label));
    }
  }
  return out;
}

PointCloud read_xyz(std::string_view text) {
  PointCloud cloud;
  for (const auto& [line_no, line] : content_lines(text)) {
    const auto toks = split_ws(line);
    const std::string where = "XYZ line " + std::to_string(line_no);
    if (toks.size() != 3) {
      throw DataError(where + ": expected 3 values, got " + std::to_string(toks.size()));
    }
    cloud.points.push_back({parse_real(toks[0], where), parse_real(toks[1], where), parse_real(toks[2], where)});
  }
  return cloud;
}

std::string write_xyz(const PointCloud& cloud) {
  std::string out;
  for (const auto& p : cloud.points) {
    out += format_real(p[0]) + " " + format_real(p[1]) + " " + format_real(p[2]) + "\n";
  }
  return out;
}

PointCloud read_off(std::string_view text) {
  const auto lines = content_lines(text);
  if (lines.empty()) throw DataError("OFF: empty file");
  auto first = split_ws(lines[0].second);
  if (first[0] != "OFF") throw DataError("OFF line " + std::to_string(lines[0].first) + ": missing OFF header");
  std::size_t next = 1;
  std::vector<std::string_view> counts(first.begin() + 1, first.end());
  std::size_t counts_line = lines[0].first;
  if (counts.empty()) {
    if (lines.size() < 2) throw DataError("OFF: missing counts line");
    counts = split_ws(lines[1].second);
    counts_line = lines[1].first;
    next = 2;
  }
  const std::string where = "OFF line " + std::to_string(counts_line);
  if (counts.size() < 2) throw DataError(where + ": expected vertex and face counts");
  const long nv = parse_int(counts[0], where);
  const long nf = parse_int(counts[1], where);
  if (nv < 0 || nf < 0) throw DataError(where + ": negative counts");
  const std::size_t available = lines.size() - next;
  if (available < static_cast<std::size_t>(nv + nf)) {
    throw DataError("OFF: header declares " + std::to_string(nv) + " vertices and " + std::to_string(nf) +
                    " faces but only " + std::to_string(available) + " data lines follow");
  }
  PointCloud cloud;
  for (long v = 0; v < nv; ++v) {
    const auto& [line_no, line] = lines[next + static_cast<std::size_t>(v)];
    const auto toks = split_ws(line);
    const std::string at = "OFF line " + std::to_string(line_no);
    if (toks.size() < 3) throw DataError(at + ": vertex needs 3 coordinates");
    cloud.points.push_back({parse_real(toks[0], at), parse_real(toks[1], at), parse_real(toks[2], at)});
  }
  return cloud;
}

ReportDocument to_document(const AuditReport& r) {
  return {r.sweep, r.scheme, r.canonicalized, r.samples, r.clean, r.average, r.worst,
          r.curve, r.clean_correct, r.worst_correct};
}

std::string write_report_csv(const ReportDocument& doc) {
  std::string out = "index,param_a,param_b,correct,samples,accuracy\n";
  for (std::size_t k = 0; k < doc.curve.size(); ++k) {
    const auto& g = doc.curve[k];
    out += std::to_string(k) + "," + format_real(g.param_a) + "," + format_real(g.param_b) + "," +
           std::to_string(g.correct) + "," + std::to_string(doc.samples) + "," + format_real(g.accuracy) + "\n";
  }
  return out;
}

namespace {

std::vector<std::string_view> split_char(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  for (;;) {
    const std::size_t end = s.find(sep, pos);
    out.push_back(s.substr(pos, end == std::string_view::npos ? std::string_view::npos : end - pos));
    if (end == std::string_view::npos) break;
    pos = end + 1;
  }
  return out;
}

std::vector<std::string_view> text_lines(std::string_view text) {
  auto lines = split_char(text, '\n');
  if (!lines.empty() && lines.back().empty()) lines.pop_back();
  return lines;
}

std::string flags_to_string(const std::vector<std::uint8_t>& flags) {
  std::string s;
  for (auto f : flags) s.push_back(f ? '1' : '0');
  return s.empty() ? "-" : s;
}

std::vector<std::uint8_t> flags_from_string(std::string_view s, const std::string& where) {
  std::vector<std::uint8_t> out;
  if (s == "-") return out;
  for (char c : s) {
    if (c != '0' && c != '1') throw DataError(where + ": flags must be 0/1");
    out.push_back(c == '1');
  }
  return out;
}

}  // namespace

void read_report_csv(std::string_view text, ReportDocument& doc) {
  const auto lines = text_lines(text);
  if (lines.empty() || lines[0] != "index,param_a,param_b,correct,samples,accuracy") {
    throw DataError("report CSV: missing or unexpected header");
  }
  doc.curve.clear();
  for (std::size_t l = 1; l < lines.size(); ++l) {
    const std::string where = "report CSV line " + std::to_string(l + 1);
    const auto f = split_char(lines[l], ',');
    if (f.size() != 6) throw DataError(where + ": expected 6 fields");
    if (parse_int(f[0], where) != static_cast<long>(l - 1)) throw DataError(where + ": index out of sequence");
    GridPoint g;
    g.param_a = parse_real(f[1], where);
    g.param_b = parse_real(f[2], where);
    g.correct = static_cast<std::size_t>(parse_int(f[3], where));
    doc.samples = static_cast<std::size_t>(parse_int(f[4], where));
    g.accuracy = parse_real(f[5], where);
    doc.curve.push_back(g);
  }
}

std::string write_report_text(const ReportDocument& doc) {
  std::ostringstream os;
  os << "sweep " << doc.sweep << "\n"
     << "scheme " << doc.scheme << "\n"
     << "canonicalized " << (doc.canonicalized ? 1 : 0) << "\n"
     << "samples " << doc.samples << "\n"
     << "clean " << format_real(doc.clean) << "\n"
     << "average " << format_real(doc.average) << "\n"
     << "worst " << format_real(doc.worst) << "\n"
     << "grid_points " << doc.curve.size() << "\n"
     << "clean_flags " << flags_to_string(doc.clean_correct) << "\n"
     << "worst_flags " << flags_to_string(doc.worst_correct) << "\n";
  return os.str();
}

void read_report_text(std::string_view text, ReportDocument& doc) {
  std::map<std::string, std::string, std::less<>> kv;
  const auto lines = text_lines(text);
  for (std::size_t l = 0; l < lines.size(); ++l) {
    const auto toks = split_ws(lines[l]);
    if (toks.empty()) continue;
    if (toks.size() != 2) throw DataError("report line " + std::to_string(l + 1) + ": expected 'key value'");
    kv[std::string(toks[0])] = std::string(toks[1]);
  }
  auto get = [&kv](const char* key) -> const std::string& {
    auto it = kv.find(key);
    if (it == kv.end()) throw DataError(std::string("report: missing key '") + key + "'");
    return it->second;
  };
  doc.sweep = get("sweep");
  doc.scheme = get("scheme");
  doc.canonicalized = parse_int(get("canonicalized"), "report canonicalized") != 0;
  doc.samples = static_cast<std::size_t>(parse_int(get("samples"), "report samples"));
  doc.clean = parse_real(get("clean"), "report clean");
  doc.average = parse_real(get("average"), "report average");
  doc.worst = parse_real(get("worst"), "report worst");
  doc.clean_correct = flags_from_string(get("clean_flags"), "report clean_flags");
  doc.worst_correct = flags_from_string(get("worst_flags"), "report worst_flags");
}

namespace {

constexpr char kModelMagic[8] = {'O', 'R', 'B', 'I', 'T', 'L', 'S', 'M'};
constexpr std::uint32_t kModelVersion = 1;

void put_u32(Bytes& out, std::uint32_t v) {
  for (int k = 0; k < 4; ++k) out.push_back(static_cast<std::uint8_t>(v >> (8 * k)));
}

void put_f64(Bytes& out, double v) {
  const auto bits = std::bit_cast<std::uint64_t>(v);
  for (int k = 0; k < 8; ++k) out.push_back(static_cast<std::uint8_t>(bits >> (8 * k)));
}

class Reader {
 public:
  explicit Reader(std::span<const std::uint8_t> b) : b_(b) {}

  void need(std::size_t n) const {
    if (pos_ + n > b_.size()) {
      throw DataError("model file truncated at byte " + std::to_string(pos_) + " (need " + std::to_string(n) +
                      " more, file has " + std::to_string(b_.size()) + ")");
    }
  }
  std::uint8_t u8() {
    need(1);
    return b_[pos_++];
  }
  std::uint32_t u32() {
    need(4);
    std::uint32_t v = 0;
    for (int k = 0; k < 4; ++k) v |= std::uint32_t{b_[pos_++]} << (8 * k);
    return v;
  }
  double f64() {
    need(8);
    std::uint64_t v = 0;
    for (int k = 0; k < 8; ++k) v |= std::uint64_t{b_[pos_++]} << (8 * k);
    return std::bit_cast<double>(v);
  }
  std::size_t pos() const { return pos_; }

 private:
  std::span<const std::uint8_t> b_;
  std::size_t pos_ = 0;
};

}  // namespace

Bytes write_model(const LinearSoftmaxModel& m) {
  Bytes out(std::begin(kModelMagic), std::end(kModelMagic));
  put_u32(out, kModelVersion);
  out.push_back(static_cast<std::uint8_t>(m.kind));
  out.push_back(static_cast<std::uint8_t>(m.canonicalize));
  out.push_back(static_cast<std::uint8_t>(m.scheme));
  out.push_back(0);
  put_f64(out, m.sigma);
  put_u32(out, static_cast<std::uint32_t>(m.dim0));
  put_u32(out, static_cast<std::uint32_t>(m.dim1));
  put_u32(out, static_cast<std::uint32_t>(m.classes));
  put_u32(out, static_cast<std::uint32_t>(m.features));
  for (double w : m.weights) put_f64(out, w);
  for (double b : m.bias) put_f64(out, b);
  return out;
}

LinearSoftmaxModel read_model(std::span<const std::uint8_t> bytes) {
  Reader r(bytes);
  r.need(8);
  if (!std::equal(std::begin(kModelMagic), std::end(kModelMagic), bytes.begin())) {
    throw DataError("model file: bad magic");
  }
  for (int k = 0; k < 8; ++k) r.u8();
  if (const auto v = r.u32(); v != kModelVersion) {
    throw DataError("model file: unsupported version " + std::to_string(v));
  }
  LinearSoftmaxModel m;
  const auto kind = r.u8();
  const auto canon = r.u8();
  const auto scheme = r.u8();
  r.u8();
  if (kind > 1 || canon > 2 || scheme > 2) throw DataError("model file: invalid enum field");
  m.kind = static_cast<DataKind>(kind);
  m.canonicalize = static_cast<CanonMode>(canon);
  m.scheme = static_cast<InterpolationScheme>(scheme);
  m.sigma = r.f64();
  m.dim0 = r.u32();
  m.dim1 = r.u32();
  m.classes = r.u32();
  m.features = r.u32();
  if (m.dim0 * m.dim1 != m.features) throw DataError("model file: feature count does not match input shape");
  if (m.classes == 0) throw DataError("model file: zero classes");
  r.need((m.classes * m.features + m.classes) * 8);
  m.weights.resize(m.classes * m.features);
  for (double& w : m.weights) w = r.f64();
  m.bias.resize(m.classes);
  for (double& b : m.bias) b = r.f64();
  if (r.pos() != bytes.size()) throw DataError("model file: trailing bytes");
  for (double w : m.weights) {
    if (!std::isfinite(w)) throw DataError("model file: non-finite weight");
  }
  return m;
}

Bytes read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path.string() + "'");
  return Bytes(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

std::string read_text_file(const fs::path& path) {
  const Bytes b = read_file(path);
  return std::string(b.begin(), b.end());
}

void write_file(const fs::path& path, std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write '" + path.string() + "'");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw DataError("write failed for '" + path.string() + "'");
}

void write_text_file(const fs::path& path, std::string_view text) {
  write_file(path, std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

void save_dataset(const LabeledDataset& data, const fs::path& dir) {
  data.validate();
  fs::create_directories(dir);
  std::string classes;
  for (std::size_t c = 0; c < data.class_names.size(); ++c) {
    classes += (c ? "," : "") + data.class_names[c];
  }
  write_text_file(dir / "dataset.txt", "kind " + std::string(kind_name(data.kind)) + "\nseed " +
                                           std::to_string(data.seed) + "\nclasses " + classes + "\nsamples " +
                                           std::to_string(data.size()) + "\n");
  std::string manifest = "file,label\n";
  for (std::size_t i = 0; i < data.size(); ++i) {
    char name[32];
    std::snprintf(name, sizeof(name), "sample_%05zu.%s", i, data.kind == DataKind::image ? "pgm" : "xyz");
    if (data.kind == DataKind::image) {
      write_file(dir / name, write_pgm(data.images[i]));
    } else {
      write_text_file(dir / name, write_xyz(data.clouds[i]));
    }
    manifest += std::string(name) + "," + std::to_string(data.labels[i]) + "\n";
  }
  write_text_file(dir / "manifest.csv", manifest);
}

LabeledDataset load_dataset(const fs::path& dir) {
  LabeledDataset ds;
  if (!fs::exists(dir / "dataset.txt")) {
    if (fs::exists(dir / "images.idx") && fs::exists(dir / "labels.idx")) {
      ds.kind = DataKind::image;
      ds.images = read_idx_images(read_file(dir / "images.idx"));
      ds.labels = read_idx_labels(read_file(dir / "labels.idx"));
      if (ds.images.size() != ds.labels.size()) {
        throw DataError("IDX: " + std::to_string(ds.images.size()) + " images but " +
                        std::to_string(ds.labels.size()) + " labels");
      }
      int max_label = 0;
      for (int l : ds.labels) max_label = std::max(max_label, l);
      for (int c = 0; c <= max_label; ++c) ds.class_names.push_back(std::to_string(c));
      ds.validate();
      return ds;
    }
    throw DataError("'" + dir.string() + "' has neither dataset.txt nor images.idx/labels.idx");
  }
  std::map<std::string, std::string, std::less<>> kv;
  const std::string header = read_text_file(dir / "dataset.txt");
  for (const auto& [line_no, line] : content_lines(header)) {
    const auto toks = split_ws(line);
    if (toks.size() != 2) throw DataError("dataset.txt line " + std::to_string(line_no) + ": expected 'key value'");
    kv[std::string(toks[0])] = std::string(toks[1]);
  }
  if (!kv.count("kind") || !kv.count("classes")) throw DataError("dataset.txt: missing kind or classes");
  if (kv["kind"] == "images") {
    ds.kind = DataKind::image;
  } else if (kv["kind"] == "clouds") {
    ds.kind = DataKind::cloud;
  } else {
    throw DataError("dataset.txt: unknown kind '" + kv["kind"] + "'");
  }
  if (kv.count("seed")) ds.seed = static_cast<std::uint64_t>(parse_int(kv["seed"], "dataset.txt seed"));
  for (auto name : split_char(kv["classes"], ',')) ds.class_names.emplace_back(name);

  const std::string manifest_text = read_text_file(dir / "manifest.csv");
  const auto manifest = text_lines(manifest_text);
  if (manifest.empty() || manifest[0] != "file,label") throw DataError("manifest.csv: missing header");
  for (std::size_t l = 1; l < manifest.size(); ++l) {
    const std::string where = "manifest.csv line " + std::to_string(l + 1);
    const auto f = split_char(manifest[l], ',');
    if (f.size() != 2) throw DataError(where + ": expected file,label");
    const fs::path file = dir / std::string(f[0]);
    if (ds.kind == DataKind::image) {
      ds.images.push_back(read_pgm(read_file(file)));
    } else if (file.extension() == ".off") {
      ds.clouds.push_back(read_off(read_text_file(file)));
    } else {
      ds.clouds.push_back(read_xyz(read_text_file(file)));
    }
    ds.labels.push_back(static_cast<int>(parse_int(f[1], where)));
  }
  ds.validate();
  return ds;
}

}  // namespace orbit

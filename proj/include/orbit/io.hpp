#pragma once

// Readers and writers for images (PGM, IDX), point clouds (XYZ, OFF),
// audit reports (CSV + key/value text), trained models (binary) and
// dataset directories.
//
// Raster files store the top row first; in memory row 0 is the bottom row,
// so readers and writers flip the row order.

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "orbit/audit.hpp"

namespace orbit {

using Bytes = std::vector<std::uint8_t>;

/// 17 significant digits; parse_real(format_real(v)) == v.
std::string format_real(double v);
/// Parses a full token as a finite double; `where` prefixes error messages.
double parse_real(std::string_view token, const std::string& where);

/// P5 (binary) or P2 (ASCII), maxval up to 65535, '#' comments in the header.
GrayImage read_pgm(std::span<const std::uint8_t> bytes);
/// P5 with maxval 255, rounding half up.
Bytes write_pgm(const GrayImage& img);
/// The image write_pgm/read_pgm would give back.
GrayImage quantize8(const GrayImage& img);

/// Big-endian IDX files (magic 0x00000803 / 0x00000801). Images must be
/// square; labels must lie in 0..max_label.
std::vector<GrayImage> read_idx_images(std::span<const std::uint8_t> bytes);
std::vector<int> read_idx_labels(std::span<const std::uint8_t> bytes, int max_label = 9);

/// Whitespace-separated triples, one point per line, '#' starts a comment.
PointCloud read_xyz(std::string_view text);
std::string write_xyz(const PointCloud& cloud);
/// Vertex positions of an OFF mesh; faces are counted but ignored.
PointCloud read_off(std::string_view text);

/// Serializable form of an AuditReport (everything except the full
/// per-sample, per-grid-point matrix).
struct ReportDocument {
  std::string sweep;
  std::string scheme;
  bool canonicalized = false;
  std::size_t samples = 0;
  double clean = 0.0;
  double average = 0.0;
  double worst = 0.0;
  std::vector<GridPoint> curve;
  std::vector<std::uint8_t> clean_correct;
  std::vector<std::uint8_t> worst_correct;

  bool operator==(const ReportDocument&) const = default;
};

ReportDocument to_document(const AuditReport& r);

/// Header "index,param_a,param_b,correct,samples,accuracy", one row per
/// grid point, LF line endings.
std::string write_report_csv(const ReportDocument& doc);
/// Reads the grid rows back into doc.curve (and doc.samples).
void read_report_csv(std::string_view text, ReportDocument& doc);
/// "key value" lines with the summary and per-sample flags.
std::string write_report_text(const ReportDocument& doc);
/// Fills everything except the curve.
void read_report_text(std::string_view text, ReportDocument& doc);

/// Little-endian layout: magic "ORBITLSM", u32 version, u8 kind,
/// u8 canonicalize, u8 scheme, u8 reserved, f64 sigma, u32 dim0, u32 dim1,
/// u32 classes, u32 features, f64 weights (row-major), f64 bias.
Bytes write_model(const LinearSoftmaxModel& model);
LinearSoftmaxModel read_model(std::span<const std::uint8_t> bytes);

Bytes read_file(const std::filesystem::path& path);
std::string read_text_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);
void write_text_file(const std::filesystem::path& path, std::string_view text);

/// Writes dataset.txt, manifest.csv and one PGM/XYZ file per sample.
void save_dataset(const LabeledDataset& data, const std::filesystem::path& dir);
/// Reads a directory written by save_dataset, or a directory holding
/// images.idx + labels.idx.
LabeledDataset load_dataset(const std::filesystem::path& dir);

}  // namespace orbit

#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <functional>
#include <string>

#include <unistd.h>

#include "orbit/audit.hpp"
#include "orbit/errors.hpp"
#include "orbit/io.hpp"
#include "orbit/rng.hpp"
#include "support.hpp"

using namespace orbit;
namespace fs = std::filesystem;

namespace {

Bytes bytes_of(const std::string& s) { return Bytes(s.begin(), s.end()); }

void put_be32(Bytes& b, std::uint32_t v) {
  for (int s = 24; s >= 0; s -= 8) b.push_back(static_cast<std::uint8_t>(v >> s));
}

Bytes idx_images(std::uint32_t n, std::uint32_t rows, std::uint32_t cols, std::size_t payload) {
  Bytes b;
  put_be32(b, 0x00000803);
  put_be32(b, n);
  put_be32(b, rows);
  put_be32(b, cols);
  for (std::size_t i = 0; i < payload; ++i) b.push_back(static_cast<std::uint8_t>(i * 37 % 256));
  return b;
}

Bytes idx_labels(const std::vector<std::uint8_t>& labels) {
  Bytes b;
  put_be32(b, 0x00000801);
  put_be32(b, static_cast<std::uint32_t>(labels.size()));
  b.insert(b.end(), labels.begin(), labels.end());
  return b;
}

std::string error_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const DataError& e) {
    return e.what();
  }
  return "";
}

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / name) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST_CASE("real numbers round-trip through 17 digits") {
  Rng rng(1);
  for (int t = 0; t < 1000; ++t) {
    const double v = rng.normal() * std::pow(10.0, rng.uniform(-20, 20));
    REQUIRE(parse_real(format_real(v), "t") == v);
  }
  CHECK(format_real(0.5) == "0.5");
  CHECK(parse_real("+1.5", "t") == 1.5);
  CHECK_THROWS_AS(parse_real("1.5x", "here"), DataError);
  CHECK_THROWS_AS(parse_real("inf", "here"), DataError);
  CHECK(error_of([] { parse_real("abc", "line 7"); }).find("line 7") != std::string::npos);
}

TEST_CASE("PGM reader") {
  SUBCASE("ASCII example, top row first in the file") {
    const GrayImage img = read_pgm(bytes_of("P2\n# comment\n2 2\n255\n0 255\n255 0\n"));
    CHECK(img.height() == 2);
    // File row 0 is the top row; memory row 0 is the bottom row.
    CHECK(img.at(1, 0) == 0.0);
    CHECK(img.at(1, 1) == 1.0);
    CHECK(img.at(0, 0) == 1.0);
    CHECK(img.at(0, 1) == 0.0);
  }
  SUBCASE("binary with 16-bit samples") {
    Bytes b = bytes_of("P5 1 2 65535\n");
    for (std::uint8_t v : {0xFF, 0xFF, 0x00, 0x00}) b.push_back(v);
    const GrayImage img = read_pgm(b);
    CHECK(img.at(1, 0) == 1.0);
    CHECK(img.at(0, 0) == 0.0);
  }
  SUBCASE("errors") {
    CHECK(error_of([] { read_pgm(bytes_of("P6 1 1 255\n\x01\x02\x03")); }).find("unsupported") != std::string::npos);
    CHECK(error_of([] { read_pgm(bytes_of("P5 2 2 255\n\x01\x02")); }).find("expected 4 bytes, got 2") !=
          std::string::npos);
    CHECK_THROWS_AS(read_pgm(bytes_of("P5 2")), DataError);
    CHECK_THROWS_AS(read_pgm(bytes_of("P2 1 1 70000 5")), DataError);
    CHECK_THROWS_AS(read_pgm(bytes_of("P2 1 1 255 300")), DataError);
    CHECK_THROWS_AS(read_pgm(bytes_of("P2 2 1 255 3")), DataError);
  }
}

TEST_CASE("PGM write then read equals the 8-bit quantization") {
  Rng rng(2);
  for (int t = 0; t < 20; ++t) {
    Grid g(3 + rng.below(6), 3 + rng.below(6));
    for (double& v : g.values) v = rng.uniform();
    const GrayImage img(g);
    REQUIRE(read_pgm(write_pgm(img)) == quantize8(img));
  }
  // Half-up rounding: 0.5 / 255 above a level rounds up.
  const GrayImage half(Grid(1, 1, std::vector<double>{10.5 / 255.0}));
  CHECK(quantize8(half).at(0, 0) == 11.0 / 255.0);
  const Bytes b = write_pgm(GrayImage(Grid(1, 2, std::vector<double>{0.0, 1.0})));
  CHECK(std::string(b.begin(), b.begin() + 11) == "P5\n2 1\n255\n");
}

TEST_CASE("IDX readers") {
  const auto ten = read_idx_images(idx_images(10, 3, 3, 90));
  CHECK(ten.size() == 10);
  CHECK(ten[0].height() == 3);
  // Same top-row-first convention as PGM.
  CHECK(ten[0].at(2, 0) == 0.0);
  CHECK(ten[0].at(2, 1) == 37.0 / 255.0);
  const std::string msg = error_of([] { read_idx_images(idx_images(10, 3, 3, 80)); });
  CHECK(msg.find("106") != std::string::npos);
  CHECK(msg.find("96") != std::string::npos);
  CHECK_THROWS_AS(read_idx_images(idx_images(1, 2, 3, 6)), DataError);
  Bytes bad_magic = idx_images(1, 2, 2, 4);
  bad_magic[3] = 0x01;
  CHECK_THROWS_AS(read_idx_images(bad_magic), DataError);

  CHECK(read_idx_labels(idx_labels({0, 9, 3})) == std::vector<int>{0, 9, 3});
  CHECK_THROWS_AS(read_idx_labels(idx_labels({0, 10})), DataError);
  Bytes short_labels = idx_labels({1, 2, 3});
  short_labels.pop_back();
  CHECK_THROWS_AS(read_idx_labels(short_labels), DataError);
}

TEST_CASE("XYZ and OFF") {
  const PointCloud c = read_xyz("0 0 0\n1 2 3");
  CHECK(c.size() == 2);
  CHECK(c.points[1] == Vec3{1, 2, 3});
  CHECK(read_xyz("# header\n  1 2 3 # trailing\n\n4 5 6\n").size() == 2);
  CHECK(error_of([] { read_xyz("1 2 3\n4 x 6\n"); }).find("line 2") != std::string::npos);
  CHECK_THROWS_AS(read_xyz("1 2\n"), DataError);

  Rng rng(3);
  const PointCloud x = testing_support::random_cloud(rng, 100);
  CHECK(read_xyz(write_xyz(x)) == x);

  const std::string off = "OFF\n5 1 0\n0 0 0\n1 0 0\n0 1 0\n0 0 1\n1 1 1\n3 0 1 2\n";
  const PointCloud v = read_off(off);
  CHECK(v.size() == 5);
  CHECK(v.points[4] == Vec3{1, 1, 1});
  CHECK_THROWS_AS(read_off("OFF\n5 0 0\n0 0 0\n1 0 0\n0 1 0\n0 0 1\n"), DataError);
  CHECK_THROWS_AS(read_off("PLY\n1 0 0\n0 0 0\n"), DataError);
}

TEST_CASE("report documents round-trip exactly") {
  ReportDocument doc;
  doc.sweep = "rot2d";
  doc.scheme = "bicubic";
  doc.canonicalized = true;
  doc.samples = 3;
  doc.clean = 2.0 / 3.0;
  doc.average = 0.1 + 0.2;
  doc.worst = 1.0 / 3.0;
  doc.curve = {{0.0, 0.0, 2, 2.0 / 3.0}, {1.0, 0.0, 1, 1.0 / 3.0}, {2.0, 15.0, 3, 1.0}};
  doc.clean_correct = {1, 0, 1};
  doc.worst_correct = {1, 0, 0};

  const std::string csv = write_report_csv(doc);
  CHECK(csv.rfind("index,param_a,param_b,correct,samples,accuracy\n", 0) == 0);
  CHECK(csv.find('\r') == std::string::npos);
  ReportDocument back;
  read_report_text(write_report_text(doc), back);
  read_report_csv(csv, back);
  CHECK(back == doc);
  CHECK_THROWS_AS(read_report_csv("bad header\n", back), DataError);
}

TEST_CASE("model files round-trip") {
  LinearSoftmaxModel m;
  m.kind = DataKind::cloud;
  m.dim0 = 4;
  m.dim1 = 3;
  m.canonicalize = CanonMode::test_only;
  m.scheme = InterpolationScheme::bicubic;
  m.sigma = 1.25;
  m.classes = 2;
  m.features = 12;
  Rng rng(4);
  for (int i = 0; i < 24; ++i) m.weights.push_back(rng.normal());
  m.bias = {0.1, -0.2};
  const Bytes b = write_model(m);
  CHECK(std::string(b.begin(), b.begin() + 8) == "ORBITLSM");
  CHECK(b.size() == 8 + 4 + 4 + 8 + 16 + 8 * (24 + 2));
  CHECK(read_model(b) == m);
  Bytes truncated = b;
  truncated.pop_back();
  CHECK_THROWS_AS(read_model(truncated), DataError);
  Bytes bad = b;
  bad[0] = 'X';
  CHECK_THROWS_AS(read_model(bad), DataError);
}

TEST_CASE("datasets round-trip through a directory") {
  TempDir dir("orbit_io_test_" + std::to_string(::getpid()));
  const auto clouds = gen_synthetic_clouds(3, 2);
  save_dataset(clouds, dir.path / "c");
  const auto back = load_dataset(dir.path / "c");
  CHECK(back.kind == DataKind::cloud);
  CHECK(back.labels == clouds.labels);
  CHECK(back.class_names == clouds.class_names);
  CHECK(back.clouds == clouds.clouds);

  const auto images = gen_synthetic_images(3, 1, 16);
  save_dataset(images, dir.path / "i");
  const auto iback = load_dataset(dir.path / "i");
  REQUIRE(iback.images.size() == images.images.size());
  for (std::size_t i = 0; i < images.size(); ++i) CHECK(iback.images[i] == quantize8(images.images[i]));

  fs::create_directories(dir.path / "idx");
  write_file(dir.path / "idx" / "images.idx", idx_images(4, 3, 3, 36));
  write_file(dir.path / "idx" / "labels.idx", idx_labels({0, 1, 1, 0}));
  const auto idx = load_dataset(dir.path / "idx");
  CHECK(idx.size() == 4);
  CHECK(idx.num_classes() == 2);

  CHECK_THROWS_AS(load_dataset(dir.path / "missing"), DataError);
}

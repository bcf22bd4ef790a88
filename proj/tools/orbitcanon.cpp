// orbitcanon: canonicalization, synthetic data, training and robustness
// audits from the command line.
//
// Exit codes: 0 ok, 1 usage, 2 data error, 3 degenerate input, 4 selftest.

#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <iostream>
#include <numbers>
#include <string>

#include "orbit/audit.hpp"
#include "orbit/cloud.hpp"
#include "orbit/dataset.hpp"
#include "orbit/errors.hpp"
#include "orbit/image.hpp"
#include "orbit/io.hpp"
#include "orbit/selftest.hpp"
#include "orbit/train.hpp"

namespace fs = std::filesystem;
using namespace orbit;

namespace {

enum Exit { kOk = 0, kUsage = 1, kData = 2, kDegenerate = 3, kSelftest = 4 };

PointCloud load_cloud(const fs::path& path) {
  const std::string text = read_text_file(path);
  return path.extension() == ".off" ? read_off(text) : read_xyz(text);
}

void write_report(const AuditReport& report, const fs::path& out) {
  const ReportDocument doc = to_document(report);
  write_text_file(out, write_report_csv(doc));
  fs::path summary = out;
  summary.replace_extension(".txt");
  write_text_file(summary, write_report_text(doc));
  std::cout << report.sweep << " clean " << format_real(report.clean) << " average "
            << format_real(report.average) << " worst " << format_real(report.worst) << "\n";
}

std::string vec_row(const std::string& key, const Vec3& v) {
  return key + "," + format_real(v[0]) + "," + format_real(v[1]) + "," + format_real(v[2]) + "\n";
}

struct Options {
  std::string in, out, report, frame, data, model, sample;
  std::string scheme = "bilinear";
  double sigma = kDefaultSigma;
  std::string kind;
  std::uint64_t seed = 1;
  std::size_t per_class = 50;
  std::size_t size = 32;
  std::size_t points = 64;
  std::string mode = "plain";
  std::string canon = "off";
  int k = 10;
  double lambda = 0.0;
  int epochs = 60;
  double lr = 0.5;
  std::size_t batch = 16;
  std::size_t threads = 0;
  int label = 0;
};

int canon_image(const Options& o) {
  const GrayImage img = read_pgm(read_file(o.in));
  if (img.height() != img.width()) throw DataError("canon-image needs a square image");
  const ImageCanon c = canonicalize_image(img, parse_scheme(o.scheme), o.sigma);
  write_file(o.out, write_pgm(c.canonical));
  if (!o.report.empty()) {
    write_text_file(o.report, "angle,degenerate,magnitude\n" + format_real(c.element) + "," +
                                  (c.degenerate ? "1" : "0") + "," + format_real(c.energy) + "\n");
  }
  if (c.degenerate) std::cerr << "warning: mean gradient below threshold, image left unrotated\n";
  return kOk;
}

int canon_cloud(const Options& o) {
  const CloudCanon c = canonicalize_similarity(load_cloud(o.in));
  write_text_file(o.out, write_xyz(c.cloud));
  if (!o.frame.empty()) {
    const Mat3 r = c.frame.rotation();
    std::string text = "field,x,y,z\n";
    text += vec_row("centroid", c.frame.centroid);
    text += "scale," + format_real(c.frame.scale) + ",,\n";
    for (int i = 0; i < 3; ++i) text += vec_row("rotation" + std::to_string(i), r[i]);
    text += vec_row("signs", c.frame.signs);
    text += vec_row("singular_values", c.frame.singular_values);
    text += std::string("degenerate,") + (c.frame.degenerate ? "1" : "0") + ",,\n";
    write_text_file(o.frame, text);
  }
  if (c.frame.degenerate) std::cerr << "warning: ambiguous principal axes, tie-break applied\n";
  return kOk;
}

int gen_data(const Options& o) {
  const LabeledDataset data = o.kind == "images" ? gen_synthetic_images(o.seed, o.per_class, o.size)
                                                 : gen_synthetic_clouds(o.seed, o.per_class, o.points);
  save_dataset(data, o.out);
  return kOk;
}

int train(const Options& o) {
  TrainConfig cfg;
  cfg.mode = parse_mode(o.mode);
  cfg.k = o.k;
  cfg.lambda = o.lambda;
  cfg.epochs = o.epochs;
  cfg.learning_rate = o.lr;
  cfg.batch_size = o.batch;
  cfg.seed = o.seed;
  cfg.canonicalize = parse_canon(o.canon);
  cfg.scheme = parse_scheme(o.scheme);
  cfg.sigma = o.sigma;
  const LabeledDataset data = load_dataset(o.data);
  const LinearSoftmaxModel model = train_classifier(data, cfg);
  write_file(o.model, write_model(model));
  std::cout << "training accuracy " << format_real(training_accuracy(model, data)) << "\n";
  return kOk;
}

int curve(const Options& o) {
  const LinearSoftmaxModel model = read_model(read_file(o.model));
  const fs::path sample(o.sample);
  std::vector<double> degrees;
  std::vector<double> probs;
  if (model.kind == DataKind::image) {
    for (int d = 0; d < kSweepDegrees; ++d) degrees.push_back(d);
    std::vector<double> radians;
    for (double d : degrees) radians.push_back(d * std::numbers::pi / 180.0);
    probs = softmax_curve_image(model, read_pgm(read_file(sample)), o.label, radians, parse_scheme(o.scheme),
                                model.canonicalize_at_test());
  } else {
    std::vector<double> radians;
    for (int a = 0; a < kGridSteps; ++a) {
      degrees.push_back(360.0 * a / kGridSteps);
      radians.push_back(2.0 * std::numbers::pi * a / kGridSteps);
    }
    probs = softmax_curve_cloud(model, load_cloud(sample), o.label, radians, model.canonicalize_at_test());
  }
  std::string text = "angle_deg,probability\n";
  for (std::size_t i = 0; i < probs.size(); ++i) text += format_real(degrees[i]) + "," + format_real(probs[i]) + "\n";
  write_text_file(o.out, text);
  return kOk;
}

int selftest() {
  bool ok = true;
  for (const auto& r : run_selftest()) {
    std::cout << (r.passed ? "PASS " : "FAIL ") << r.name << ": " << r.detail << "\n";
    ok = ok && r.passed;
  }
  return ok ? kOk : kSelftest;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Orbit-mapping canonicalization toolkit"};
  app.require_subcommand(1);
  Options o;
  const auto schemes = CLI::IsMember({"nearest", "bilinear", "bicubic"});

  auto* ci = app.add_subcommand("canon-image", "Rotate a PGM image into its canonical pose");
  ci->add_option("--in", o.in, "input PGM")->required()->check(CLI::ExistingFile);
  ci->add_option("--out", o.out, "output PGM")->required();
  ci->add_option("--scheme", o.scheme, "interpolation")->check(schemes);
  ci->add_option("--sigma", o.sigma, "blur sigma in pixels")->check(CLI::PositiveNumber);
  ci->add_option("--report", o.report, "angle report CSV");

  auto* cc = app.add_subcommand("canon-cloud", "Canonicalize an XYZ/OFF point cloud");
  cc->add_option("--in", o.in, "input .xyz or .off")->required()->check(CLI::ExistingFile);
  cc->add_option("--out", o.out, "output XYZ")->required();
  cc->add_option("--frame", o.frame, "frame CSV");

  auto* gd = app.add_subcommand("gen-data", "Write a synthetic dataset");
  gd->add_option("--kind", o.kind, "images or clouds")->required()->check(CLI::IsMember({"images", "clouds"}));
  gd->add_option("--seed", o.seed, "seed");
  gd->add_option("--per-class", o.per_class, "samples per class")->check(CLI::Range(1, 1000000));
  gd->add_option("--size", o.size, "image side length")->check(CLI::Range(16, 4096));
  gd->add_option("--points", o.points, "points per cloud")->check(CLI::Range(3, 1000000));
  gd->add_option("--out", o.out, "output directory")->required();

  auto* tr = app.add_subcommand("train", "Train a linear softmax classifier");
  tr->add_option("--data", o.data, "dataset directory")->required()->check(CLI::ExistingDirectory);
  tr->add_option("--mode", o.mode, "training mode")
      ->check(CLI::IsMember({"plain", "ra", "adv", "mixed", "adv-alp", "adv-kl"}));
  tr->add_option("--k", o.k, "transforms per adversarial step")->check(CLI::Range(1, 1000000));
  tr->add_option("--lambda", o.lambda, "regularizer weight")->check(CLI::NonNegativeNumber);
  tr->add_option("--canon", o.canon, "canonicalization")->check(CLI::IsMember({"off", "train", "test"}));
  tr->add_option("--seed", o.seed, "seed");
  tr->add_option("--epochs", o.epochs, "epochs")->check(CLI::Range(1, 1000000));
  tr->add_option("--lr", o.lr, "learning rate")->check(CLI::PositiveNumber);
  tr->add_option("--batch", o.batch, "minibatch size")->check(CLI::Range(1, 1000000));
  tr->add_option("--scheme", o.scheme, "image interpolation")->check(schemes);
  tr->add_option("--sigma", o.sigma, "blur sigma in pixels")->check(CLI::PositiveNumber);
  tr->add_option("--model", o.model, "output model file")->required();

  std::vector<CLI::App*> audits;
  for (const char* name : {"audit-rot2d", "audit-rot3d", "audit-scale"}) {
    auto* a = app.add_subcommand(name, "Accuracy sweep (CSV plus .txt summary)");
    a->add_option("--model", o.model, "model file")->required()->check(CLI::ExistingFile);
    a->add_option("--data", o.data, "dataset directory")->required()->check(CLI::ExistingDirectory);
    a->add_option("--out", o.out, "report CSV")->required();
    a->add_option("--threads", o.threads, "worker threads, 0 = all cores");
    audits.push_back(a);
  }
  audits[0]->add_option("--scheme", o.scheme, "interpolation")->check(schemes);

  auto* cu = app.add_subcommand("curve", "True-class probability under rotation");
  cu->add_option("--model", o.model, "model file")->required()->check(CLI::ExistingFile);
  cu->add_option("--sample", o.sample, "PGM, XYZ or OFF sample")->required()->check(CLI::ExistingFile);
  cu->add_option("--label", o.label, "true class index")->check(CLI::NonNegativeNumber);
  cu->add_option("--scheme", o.scheme, "image interpolation")->check(schemes);
  cu->add_option("--out", o.out, "curve CSV")->required();

  auto* st = app.add_subcommand("selftest", "Run the invariant suite");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n\n";
    const CLI::App* failing = &app;
    for (auto* sub : app.get_subcommands()) failing = sub;
    std::cerr << failing->help();
    return kUsage;
  }

  try {
    if (ci->parsed()) return canon_image(o);
    if (cc->parsed()) return canon_cloud(o);
    if (gd->parsed()) return gen_data(o);
    if (tr->parsed()) return train(o);
    if (audits[0]->parsed() || audits[1]->parsed() || audits[2]->parsed()) {
      const LinearSoftmaxModel model = read_model(read_file(o.model));
      const LabeledDataset data = load_dataset(o.data);
      const bool canon = model.canonicalize_at_test();
      AuditReport report;
      if (audits[0]->parsed()) {
        report = evaluate_rotation_sweep_2d(model, data, parse_scheme(o.scheme), canon, o.threads);
      } else if (audits[1]->parsed()) {
        report = evaluate_rotation_grid_3d(model, data, canon, o.threads);
      } else {
        report = evaluate_scale_sweep(model, data, canon, o.threads);
      }
      write_report(report, o.out);
      return kOk;
    }
    if (cu->parsed()) return curve(o);
    if (st->parsed()) return selftest();
  } catch (const DegenerateInput& e) {
    std::cerr << "degenerate input: " << e.what() << "\n";
    return kDegenerate;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kData;
  }
  return kUsage;
}

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include <cosntf/images.hpp>
#include <cosntf/io.hpp>
#include <cosntf/recovery.hpp>
#include <cosntf/sweep.hpp>
#include <cosntf/synthetic.hpp>

#include "test_util.hpp"

using namespace cosntf;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("cosntf_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

void write_text(const fs::path& p, const std::string& s) {
  std::ofstream os(p, std::ios::binary);
  os << s;
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, sep)) out.push_back(cell);
  return out;
}

SynthSpec tiny_spec() {
  SynthSpec s;
  s.m = 12;
  s.n = 10;
  s.p = 3;
  s.r1 = 3;
  s.r2 = 2;
  return s;
}

}  // namespace

TEST(T3tFormat, RoundTripIsBitExact) {
  std::mt19937_64 rng(61);
  Tensor3 t = testutil::random_tensor(4, 3, 5, rng, -1e3, 1e3);
  t(0, 0, 0) = 1e-300;
  t(1, 2, 3) = -0.0;
  t(2, 1, 4) = 5e-324;
  std::stringstream ss;
  write_t3t(ss, t);
  const Tensor3 back = read_t3t(ss);
  ASSERT_EQ(back.m(), 4);
  for (Index i = 0; i < t.size(); ++i) {
    EXPECT_EQ(std::bit_cast<std::uint64_t>(back.data()[static_cast<std::size_t>(i)]),
              std::bit_cast<std::uint64_t>(t.data()[static_cast<std::size_t>(i)]));
  }
  std::stringstream first;
  write_t3t(first, t);
  EXPECT_EQ(first.str().rfind("t3 4 3 5\n", 0), 0u);
}

TEST(T3tFormat, RejectsMalformedInput) {
  for (const char* bad : {"t3 0 2 2\n", "t2 1 1 1\n1\n", "t3 1 1 2\n1\n", "t3 1 1 1\n1 2\n",
                          "t3 1 1 1\nnan\n", "t3 1 1 1\ninf\n", "t3 1 1 1\nabc\n", "", "t3 -1 1 1\n"}) {
    std::stringstream ss(bad);
    EXPECT_THROW(read_t3t(ss), FormatError) << bad;
  }
  EXPECT_THROW(read_t3t(fs::path("/nonexistent/x.t3t")), IoError);
}

TEST(IdxFormat, RoundTripPreservesOrder) {
  const IndexList I(Mode::horizontal, {5, 0, 2}), J(Mode::lateral, {3, 1});
  std::stringstream ss;
  write_idx(ss, I, J);
  EXPECT_EQ(ss.str(), "I: 6,1,3\nJ: 4,2\n");
  const auto [I2, J2] = read_idx(ss);
  EXPECT_EQ(I2, I);
  EXPECT_EQ(J2, J);
  for (const char* bad : {"I: 1,2\n", "J: 1\nI: 1\n", "I: 0\nJ: 1\n", "I: 1,x\nJ: 1\n", "I:\nJ: 1\n"}) {
    std::stringstream b(bad);
    EXPECT_THROW(read_idx(b), FormatError) << bad;
  }
}

TEST(FormatDouble, ShortestRoundTrip) {
  EXPECT_EQ(format_double(0.1), "0.1");
  EXPECT_EQ(format_double(1e-7), "1e-07");
  const double x = 0.1 + 0.2;
  EXPECT_EQ(std::stod(format_double(x)), x);
}

TEST(Synthetic, SliceSumsHitTargetAndStructure) {
  SynthSpec spec;  // 100 x 100 x 10, co-(10, 3)
  spec.seed = 3;
  const SynthData d = gen_synthetic(spec);
  ASSERT_EQ(d.tensor.m(), 100);
  ASSERT_EQ(d.tensor.n(), 100);
  ASSERT_EQ(d.tensor.p(), 10);
  EXPECT_EQ(d.tensor, d.noiseless);
  for (Index i = 0; i < 100; ++i) {
    double s = 0.0;
    for (Index j = 0; j < 100; ++j)
      for (Index k = 0; k < 10; ++k) s += d.tensor(i, j, k);
    EXPECT_NEAR(s, 100.0, 1e-6) << "row " << i;
  }
  for (Index j = 0; j < 100; ++j) {
    double s = 0.0;
    for (Index i = 0; i < 100; ++i)
      for (Index k = 0; k < 10; ++k) s += d.tensor(i, j, k);
    EXPECT_NEAR(s, 100.0, 1e-6) << "column " << j;
  }
  EXPECT_EQ(d.I.size(), 10);
  EXPECT_EQ(d.J.size(), 3);
  EXPECT_TRUE(std::is_sorted(d.I.begin(), d.I.end()));
}

TEST(Synthetic, NoiselessIsExactlyCoseparable) {
  SynthSpec spec = tiny_spec();
  spec.seed = 5;
  const SynthData d = gen_synthetic(spec);
  const CosepModel mdl = recover_factors(d.tensor, d.I, d.J);
  EXPECT_LE(rel_error(d.tensor, reconstruct(mdl)), 1e-8);
}

TEST(Synthetic, DeterministicAndNoiseScaled) {
  SynthSpec spec = tiny_spec();
  spec.seed = 11;
  spec.noise = 1e-2;
  const SynthData a = gen_synthetic(spec);
  const SynthData b = gen_synthetic(spec);
  EXPECT_EQ(a.tensor, b.tensor);
  EXPECT_EQ(a.I, b.I);
  for (double v : a.tensor.data()) EXPECT_GE(v, 0.0);
  // Clipping only removes mass, so the perturbation is at most epsilon.
  EXPECT_LE(fnorm(a.tensor - a.noiseless), 1e-2 * fnorm(a.noiseless) * (1.0 + 1e-12));
  EXPECT_GT(fnorm(a.tensor - a.noiseless), 0.5e-2 * fnorm(a.noiseless));

  spec.noise = 0.0;
  const SynthData clean = gen_synthetic(spec);
  EXPECT_EQ(clean.noiseless, a.noiseless);
  spec.seed = 12;
  EXPECT_FALSE(gen_synthetic(spec).tensor == clean.tensor);
}

TEST(Synthetic, RectangularAndEdgeRanks) {
  SynthSpec spec = tiny_spec();
  spec.r1 = spec.m;
  spec.r2 = 1;
  const SynthData d = gen_synthetic(spec);
  EXPECT_EQ(d.I.size(), spec.m);
  spec.r1 = spec.m + 1;
  EXPECT_THROW(gen_synthetic(spec), InvalidArgument);
}

TEST(Sinkhorn, BalancesPositiveMatrix) {
  Matrix T(3, 4);
  T << 1, 2, 3, 4, 2, 1, 1, 1, 5, 1, 2, 0.5;
  const auto [dr, dc] = sinkhorn(T, 4.0, 3.0);
  const Matrix S = dr.asDiagonal() * T * dc.asDiagonal();
  for (Index i = 0; i < 3; ++i) EXPECT_NEAR(S.row(i).sum(), 4.0, 1e-8);
  for (Index j = 0; j < 4; ++j) EXPECT_NEAR(S.col(j).sum(), 3.0, 1e-8);
}

TEST(Pgm, ReadWriteAndFormats) {
  const fs::path dir = scratch_dir("pgm");
  write_text(dir / "a.pgm", "P2\n# comment\n2 2\n255\n0 51\n102 255\n");
  const GrayImage img = read_pgm(dir / "a.pgm");
  ASSERT_EQ(img.height, 2);
  ASSERT_EQ(img.width, 2);
  EXPECT_DOUBLE_EQ(img.at(0, 1), 51.0 / 255.0);
  EXPECT_DOUBLE_EQ(img.at(1, 1), 1.0);

  write_pgm(dir / "b.pgm", img);
  const GrayImage back = read_pgm(dir / "b.pgm");
  EXPECT_EQ(back.pixels, img.pixels);

  std::string p16 = "P5 1 2 65535\n";
  p16 += std::string{'\xff', '\xff', '\x00', '\x01'};
  write_text(dir / "c.pgm", p16);
  const GrayImage wide = read_pgm(dir / "c.pgm");
  EXPECT_DOUBLE_EQ(wide.at(0, 0), 1.0);
  EXPECT_DOUBLE_EQ(wide.at(1, 0), 1.0 / 65535.0);

  write_text(dir / "bad.pgm", "P6\n1 1\n255\nabc");
  EXPECT_THROW(read_pgm(dir / "bad.pgm"), FormatError);
  EXPECT_THROW(read_pgm(dir / "missing.pgm"), IoError);
}

TEST(Resize, ConstantAndIdentity) {
  GrayImage c{3, 4, std::vector<double>(12, 0.375)};
  const GrayImage r = resize_bilinear(c, 7, 5);
  ASSERT_EQ(r.pixels.size(), 35u);
  for (double v : r.pixels) EXPECT_NEAR(v, 0.375, 1e-15);
  GrayImage g{2, 2, {0.0, 1.0, 0.5, 0.25}};
  EXPECT_EQ(resize_bilinear(g, 2, 2).pixels, g.pixels);
  // Upsampling a 1x2 ramp keeps the end values and interpolates between.
  GrayImage ramp{1, 2, {0.0, 1.0}};
  const GrayImage up = resize_bilinear(ramp, 1, 4);
  EXPECT_DOUBLE_EQ(up.pixels[0], 0.0);
  EXPECT_DOUBLE_EQ(up.pixels[1], 0.25);
  EXPECT_DOUBLE_EQ(up.pixels[2], 0.75);
  EXPECT_DOUBLE_EQ(up.pixels[3], 1.0);
}

TEST(Ingest, LayoutResizeAndErrors) {
  const fs::path dir = scratch_dir("ingest");
  write_text(dir / "img0.pgm", "P2\n2 2\n255\n0 51\n102 255\n");
  Tensor3 one = ingest_images(dir);
  ASSERT_EQ(one.m(), 2);
  ASSERT_EQ(one.n(), 1);
  ASSERT_EQ(one.p(), 2);
  EXPECT_DOUBLE_EQ(one(0, 0, 1), 51.0 / 255.0);
  EXPECT_DOUBLE_EQ(one(1, 0, 0), 102.0 / 255.0);

  write_text(dir / "img1.pgm", "P2\n2 2\n255\n0 51\n102 255\n");
  write_text(dir / "img2.pgm", "P2\n2 2\n255\n0 51\n102 255\n");
  write_text(dir / "notes.txt", "ignored");
  const Tensor3 three = ingest_images(dir, std::make_pair<Index, Index>(3, 5));
  ASSERT_EQ(three.n(), 3);
  ASSERT_EQ(three.m(), 3);
  ASSERT_EQ(three.p(), 5);
  EXPECT_EQ(cols_of(three, std::vector<Index>{0}), cols_of(three, std::vector<Index>{2}));

  write_text(dir / "img3.pgm", "P2\n3 2\n255\n0 0 0\n0 0 0\n");
  EXPECT_THROW(ingest_images(dir), DimensionError);
  EXPECT_THROW(ingest_images(scratch_dir("empty")), IoError);
}

TEST(Sweep, TinyNoiselessCosntfIsExact) {
  SweepConfig cfg;
  cfg.base = tiny_spec();
  cfg.noise_levels = {0.0};
  cfg.trials = 1;
  cfg.methods = {Method::cosntf};
  const SweepResult res = run_sweep(cfg);
  ASSERT_EQ(res.trials.size(), 1u);
  EXPECT_LE(res.trials[0].rel_error, 1e-6);
  EXPECT_NEAR(res.trials[0].rel_approx, 1.0 - res.trials[0].rel_error, 1e-12);
  EXPECT_TRUE(res.trials[0].error.empty());
}

TEST(Sweep, DefaultGridShapeMeansAndDeterminism) {
  SweepConfig cfg;
  cfg.base = tiny_spec();
  cfg.trials = 2;
  cfg.seed = 40;
  const SweepResult res = run_sweep(cfg);
  EXPECT_EQ(res.trials.size(), 7u * 2u * 5u);
  ASSERT_EQ(res.means.size(), 7u * 5u);
  std::map<std::string, int> per_method;
  for (const MeanRecord& m : res.means) ++per_method[std::string(method_name(m.method))];
  for (const auto& [name, count] : per_method) EXPECT_EQ(count, 7) << name;

  for (const MeanRecord& m : res.means) {
    double s = 0.0;
    int c = 0;
    for (const ExperimentRecord& r : res.trials) {
      if (r.method == m.method && r.noise == m.noise && r.error.empty()) {
        s += r.rel_error;
        ++c;
      }
    }
    ASSERT_EQ(c, m.count);
    EXPECT_NEAR(m.rel_error, s / c, 1e-12);
  }

  std::stringstream a, b;
  write_sweep_csv(a, res);
  write_sweep_csv(b, run_sweep(cfg));
  EXPECT_EQ(a.str(), b.str());

  std::string line;
  std::getline(a, line);
  EXPECT_EQ(line, "method,r1,r2,seed,noise,rel_error,rel_approx,wall_ms");
  std::getline(a, line);
  const auto cells = split(line, ',');
  ASSERT_EQ(cells.size(), 8u);
  EXPECT_EQ(cells[0], "cosntf");
  EXPECT_EQ(cells[3], "40");
  EXPECT_EQ(cells[4], "1e-07");
  EXPECT_EQ(cells[7], "0");
  int mean_rows = 0;
  while (std::getline(a, line)) mean_rows += split(line, ',')[3] == "mean";
  EXPECT_EQ(mean_rows, 35);
}

TEST(Sweep, MethodNamesRoundTrip) {
  for (Method m : all_methods()) EXPECT_EQ(parse_method(method_name(m)), m);
  EXPECT_FALSE(parse_method("nmf").has_value());
}

TEST(Sweep, FailedTrialRecordedNotFatal) {
  const SynthData d = gen_synthetic(tiny_spec());
  // r1 larger than m makes selection throw.
  const ExperimentRecord r = run_trial(d, Method::cosntf, 50, 2, 0, {}, {});
  EXPECT_TRUE(std::isnan(r.rel_error));
  EXPECT_FALSE(r.error.empty());
}

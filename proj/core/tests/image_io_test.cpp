#include "gaminv/image_io.hpp"

#include <gtest/gtest.h>

#include <bit>
#include <cmath>
#include <cstring>

#include "gaminv/error.hpp"
#include "gaminv/synth.hpp"
#include "support.hpp"

namespace gaminv::io {
namespace {

const std::filesystem::path kData = GAMINV_TEST_DATA;

std::string pgm_2x2() { return std::string("P5\n2 2\n255\n") + std::string("\x00\x80\xff\x40", 4); }

TEST(Pgm, Parse) {
  const GrayImage img = parse_pgm(pgm_2x2());
  ASSERT_EQ(img.width, 2);
  ASSERT_EQ(img.height, 2);
  EXPECT_EQ(img.pixels, (std::vector<std::uint8_t>{0, 128, 255, 64}));
  const ScalarField f = to_field(img);
  EXPECT_EQ(f(0, 0), 0.0);
  EXPECT_EQ(f(1, 0), 128.0);
  EXPECT_EQ(f(0, 1), 255.0);
  EXPECT_EQ(f(1, 1), 64.0);
  EXPECT_EQ(f.margin(), 0);
}

TEST(Pgm, CommentsAndWhitespace) {
  const std::string bytes = std::string("P5 # comment\n2\t2 # more\n255\n") + std::string("\x00\x80\xff\x40", 4);
  EXPECT_EQ(parse_pgm(bytes).pixels, parse_pgm(pgm_2x2()).pixels);
}

TEST(Pgm, RoundTripIsByteIdentical) {
  EXPECT_EQ(encode_pgm(parse_pgm(pgm_2x2())), pgm_2x2());
  const auto dir = testing::scratch_dir("pgm");
  const GrayImage img = to_gray(synth_image(SynthKind::ripple, 1, 33, 17));
  write_pgm(dir / "a.pgm", img);
  const GrayImage back = read_pgm(dir / "a.pgm");
  EXPECT_EQ(back.pixels, img.pixels);
  write_pgm(dir / "b.pgm", back);
  EXPECT_EQ(read_file(dir / "a.pgm"), read_file(dir / "b.pgm"));
}

TEST(Pgm, Rejections) {
  EXPECT_THROW(parse_pgm("P5\n2 2\n65535\n" + std::string(8, '\0')), InputError);
  EXPECT_THROW(parse_pgm("P2\n2 2\n255\n0 1 2 3\n"), InputError);
  EXPECT_THROW(parse_pgm("P5\n2 2\n255\n" + std::string(3, '\0')), InputError);
  EXPECT_THROW(parse_pgm("P5\n2\n"), InputError);
  EXPECT_THROW(parse_pgm("P5\n0 2\n255\n"), InputError);
  EXPECT_THROW(parse_pgm(""), InputError);
  EXPECT_THROW(read_pgm(kData / "missing.pgm"), InputError);
}

TEST(Png, Gray8) {
  const ScalarField f = load_image(kData / "gray8.png");
  ASSERT_EQ(f.width(), 2);
  EXPECT_EQ(f(0, 0), 0.0);
  EXPECT_EQ(f(1, 0), 128.0);
  EXPECT_EQ(f(0, 1), 255.0);
  EXPECT_EQ(f(1, 1), 64.0);
}

TEST(Png, OtherFormatsRejected) {
  EXPECT_THROW(read_png(kData / "gray16.png"), InputError);
  EXPECT_THROW(read_png(kData / "rgb.png"), InputError);
  EXPECT_THROW(load_image(kData / "gray16.png"), InputError);
}

TEST(ToGray, RoundsAndClamps) {
  const ScalarField f(4, 1, std::vector<double>{-3.0, 1.49, 1.5, 300.0});
  EXPECT_EQ(to_gray(f).pixels, (std::vector<std::uint8_t>{0, 1, 2, 255}));
}

TEST(Map, RoundTripIsBitExact) {
  ScalarField f = testing::make_field(13, 7, [](double x, double y) { return std::sin(x) * 100.0 + y / 3.0; });
  f.set_margin(2);
  f.zero_invalid();
  f(5, 3) = -0.1234567890123456789;
  const std::string bytes = encode_map(f);
  ASSERT_EQ(bytes.size(), 16u + 13u * 7u * 8u);
  EXPECT_EQ(bytes.substr(0, 4), "GINV");
  std::uint32_t w, h, m;
  std::memcpy(&w, bytes.data() + 4, 4);
  std::memcpy(&h, bytes.data() + 8, 4);
  std::memcpy(&m, bytes.data() + 12, 4);
  if constexpr (std::endian::native == std::endian::little) {
    EXPECT_EQ(w, 13u);
    EXPECT_EQ(h, 7u);
    EXPECT_EQ(m, 2u);
  }
  const ScalarField g = decode_map(bytes);
  EXPECT_EQ(g.margin(), 2);
  for (std::size_t i = 0; i < f.size(); ++i) EXPECT_EQ(std::bit_cast<std::uint64_t>(g.samples()[i]),
                                                       std::bit_cast<std::uint64_t>(f.samples()[i]));
  EXPECT_EQ(encode_map(g), bytes);
}

TEST(Map, MaskedPixelsAreWrittenAsZero) {
  ScalarField f(2, 1, std::vector<double>{1.0, 2.0});
  f.set_mask({1, 0});
  const ScalarField g = decode_map(encode_map(f));
  EXPECT_EQ(g(0, 0), 1.0);
  EXPECT_EQ(g(1, 0), 0.0);
}

TEST(Map, Rejections) {
  EXPECT_THROW(decode_map("GINX" + std::string(12, '\0')), InputError);
  std::string b = encode_map(ScalarField(3, 3, 1.0));
  EXPECT_THROW(decode_map(b.substr(0, b.size() - 1)), InputError);
  EXPECT_THROW(decode_map("GIN"), InputError);
}

TEST(LoadField, DetectsFormat) {
  const auto dir = testing::scratch_dir("load_field");
  write_map(dir / "m.ginv", ScalarField(3, 2, 0.25));
  write_file(dir / "i.pgm", pgm_2x2());
  EXPECT_EQ(load_field(dir / "m.ginv")(2, 1), 0.25);
  EXPECT_EQ(load_field(dir / "i.pgm")(1, 0), 128.0);
  write_file(dir / "junk.bin", "hello");
  EXPECT_THROW(load_field(dir / "junk.bin"), InputError);
}

TEST(Render, VisualizeAndMask) {
  ScalarField f(3, 1, std::vector<double>{-1.0, 0.0, 1.0});
  EXPECT_EQ(visualize(f, -1.0, 1.0).pixels, (std::vector<std::uint8_t>{0, 128, 255}));
  f.set_margin(0);
  f.set_mask({1, 0, 1});
  EXPECT_EQ(visualize(f, -1.0, 1.0, 7).pixels, (std::vector<std::uint8_t>{0, 7, 255}));
  EXPECT_EQ(render_mask(3, 1, {1, 0, 1}, 0, 255).pixels, (std::vector<std::uint8_t>{0, 255, 0}));
}

TEST(Synth, DeterministicAndPositive) {
  for (SynthKind k : {SynthKind::gaussians, SynthKind::ripple, SynthKind::checker_blur}) {
    const ScalarField a = synth_image(k, 7, 50, 40);
    const ScalarField b = synth_image(k, 7, 50, 40);
    const ScalarField c = synth_image(k, 8, 50, 40);
    bool differs = false;
    for (std::size_t i = 0; i < a.size(); ++i) {
      ASSERT_EQ(a.samples()[i], b.samples()[i]);
      EXPECT_GE(a.samples()[i], 1.0);
      EXPECT_LE(a.samples()[i], 255.0);
      differs |= a.samples()[i] != c.samples()[i];
    }
    EXPECT_TRUE(differs) << to_string(k);
  }
  EXPECT_EQ(parse_synth_kind("checker_blur"), SynthKind::checker_blur);
  EXPECT_THROW(parse_synth_kind("noise"), InputError);
}

TEST(Synth, RngReferenceSequence) {
  // splitmix64-seeded xoshiro256**, seed 42
  Rng r(42);
  EXPECT_EQ(r.next(), 0x15780b2e0c2ec716ULL);
  EXPECT_EQ(r.next(), 0x6104d9866d113a7eULL);
  EXPECT_EQ(r.next(), 0xae17533239e499a1ULL);
}

}  // namespace
}  // namespace gaminv::io

// Copyright The frag Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cmath>
#include <cstring>
#include <limits>

#include "frag/io.hpp"
#include "frag/tensor.hpp"
#include "oracles.hpp"
#include "temp_dir.hpp"

using frag::Dims;
using frag::ErrorCode;
using frag::LatentSequence;

namespace {

template <class Fn>
ErrorCode code_of(Fn&& fn)
{
    try {
        fn();
    } catch (const frag::Error& e) {
        return e.code();
    }
    ADD_FAILURE() << "expected frag::Error";
    return ErrorCode::invalid_argument;
}

std::string pgm(std::size_t w, std::size_t h, unsigned char value)
{
    std::string s = "P5\n" + std::to_string(w) + " " + std::to_string(h) + "\n255\n";
    s.append(w * h, char(value));
    return s;
}

} // namespace

TEST(Tensor, LayoutMatchesFileOrder)
{
    LatentSequence s(2, 3, 4, 5);
    EXPECT_EQ(s.offset(1, 2, 1, 3), ((1 * 4 + 2) * 3 + 1) * 5 + 3);
    s(1, 2, 1, 3) = 7.0f;
    EXPECT_EQ(s.data()[s.offset(1, 2, 1, 3)], 7.0f);
    EXPECT_EQ(s.frame(1).size(), 3u * 4 * 5);
    EXPECT_EQ(s.frame(1)[(2 * 3 + 1) * 5 + 3], 7.0f);
}

TEST(Tensor, RejectsEmptyDims)
{
    EXPECT_EQ(code_of([] { LatentSequence(0, 4, 4, 1); }), ErrorCode::invalid_argument);
    EXPECT_EQ(code_of([] { LatentSequence(Dims{1, 2, 2, 1}, std::vector<float>(3)); }),
              ErrorCode::dimension_mismatch);
}

TEST(Tensor, FrameMaskZeroRectClips)
{
    frag::FrameMask m(4, 3);
    EXPECT_EQ(m.count(), 12u);
    m.zero_rect(2, 1, 10, 10);
    EXPECT_EQ(m.count(), 8u);
    EXPECT_FALSE(m(1, 2));
    EXPECT_TRUE(m(0, 3));
}

TEST(TensorIo, RoundTripIsBitIdentical)
{
    TempDir dir;
    oracle::Rng rng(1);
    auto x = oracle::random_sequence(Dims{3, 5, 4, 2}, rng);
    x.data()[0] = -0.0f;
    x.data()[1] = std::numeric_limits<float>::denorm_min();
    frag::write_latents(x, dir / "x.frag");
    const auto y = frag::read_latents(dir / "x.frag");
    ASSERT_EQ(y.dims(), x.dims());
    EXPECT_EQ(std::memcmp(x.data().data(), y.data().data(), x.size() * sizeof(float)), 0);
    EXPECT_FALSE(dir.path().empty());
    EXPECT_FALSE(std::filesystem::exists(dir / "x.frag.tmp"));
}

TEST(TensorIo, HeaderLayout)
{
    LatentSequence x(1, 2, 1, 1);
    x(0, 0, 1, 0) = 1.0f;
    const auto b = frag::encode_latents(x);
    ASSERT_EQ(b.size(), 28u + 8u);
    EXPECT_EQ(std::string(b.begin(), b.begin() + 8), "FRAG0001");
    EXPECT_EQ(b[8], 1);   // version, little endian
    EXPECT_EQ(b[12], 1);  // L
    EXPECT_EQ(b[16], 2);  // W
    EXPECT_EQ(b[20], 1);  // H
    EXPECT_EQ(b[24], 1);  // C
    // 1.0f = 0x3f800000 little endian
    EXPECT_EQ(b[32], 0x00);
    EXPECT_EQ(b[35], 0x3f);
}

TEST(TensorIo, DefaultShapeZeros)
{
    TempDir dir;
    const LatentSequence x(48, 64, 64, 4);
    frag::write_latents(x, dir / "z.frag");
    const auto y = frag::read_latents(dir / "z.frag");
    EXPECT_EQ(y.dims(), (Dims{48, 64, 64, 4}));
    for (float v : y.data())
        ASSERT_EQ(v, 0.0f);
}

TEST(TensorIo, RepeatedWritesAreByteIdentical)
{
    TempDir dir;
    oracle::Rng rng(2);
    const auto x = oracle::random_sequence(Dims{2, 8, 8, 3}, rng);
    frag::write_latents(x, dir / "a.frag");
    frag::write_latents(x, dir / "b.frag");
    EXPECT_EQ(slurp(dir / "a.frag"), slurp(dir / "b.frag"));
}

TEST(TensorIo, ShortPayloadIsTruncation)
{
    const LatentSequence x(2, 2, 2, 1, 0.5f);
    auto b = frag::encode_latents(x);
    b.resize(b.size() - 4);
    EXPECT_EQ(code_of([&] { frag::decode_latents(b); }), ErrorCode::truncated);
    b.resize(10);
    EXPECT_EQ(code_of([&] { frag::decode_latents(b); }), ErrorCode::truncated);
}

TEST(TensorIo, TrailingBytesRejected)
{
    auto b = frag::encode_latents(LatentSequence(1, 1, 1, 1));
    b.push_back(0);
    EXPECT_EQ(code_of([&] { frag::decode_latents(b); }), ErrorCode::dimension_mismatch);
}

TEST(TensorIo, BadMagicAndVersion)
{
    auto b = frag::encode_latents(LatentSequence(1, 1, 1, 1));
    auto bad = b;
    bad[0] = 'X';
    EXPECT_EQ(code_of([&] { frag::decode_latents(bad); }), ErrorCode::bad_magic);
    bad = b;
    bad[8] = 2;
    EXPECT_EQ(code_of([&] { frag::decode_latents(bad); }), ErrorCode::bad_version);
    bad = b;
    bad[12] = 0;  // L = 0
    EXPECT_EQ(code_of([&] { frag::decode_latents(bad); }), ErrorCode::invalid_argument);
}

TEST(TensorIo, NonFiniteRejectedBothWays)
{
    LatentSequence x(1, 2, 2, 1);
    x(0, 1, 1, 0) = std::numeric_limits<float>::quiet_NaN();
    TempDir dir;
    EXPECT_EQ(code_of([&] { frag::write_latents(x, dir / "nan.frag"); }), ErrorCode::non_finite);
    EXPECT_FALSE(std::filesystem::exists(dir / "nan.frag"));

    auto b = frag::encode_latents(LatentSequence(1, 1, 1, 1));
    const float inf = std::numeric_limits<float>::infinity();
    std::memcpy(b.data() + 28, &inf, 4);
    EXPECT_EQ(code_of([&] { frag::decode_latents(b); }), ErrorCode::non_finite);
}

TEST(TensorIo, MissingFileIsIoFailure)
{
    TempDir dir;
    EXPECT_EQ(code_of([&] { frag::read_latents(dir / "nope.frag"); }), ErrorCode::io_failure);
}

TEST(Ingest, IdenticalWhiteFrames)
{
    TempDir dir;
    for (int i = 0; i < 3; ++i)
        spit(dir / ("f" + std::to_string(i) + ".pgm"), pgm(8, 8, 255));
    const auto z = frag::ingest_frames(dir.path());
    EXPECT_EQ(z.dims(), (Dims{3, 8, 8, 1}));
    for (float v : z.data())
        ASSERT_EQ(v, 1.0f);
}

TEST(Ingest, PpmChannelsScaleLinearly)
{
    TempDir dir;
    std::string ppm = "P6\n# comment\n1 1\n255\n";
    ppm += char(0);
    ppm += char(128);
    ppm += char(255);
    spit(dir / "a.ppm", ppm);
    const auto z = frag::ingest_frames(dir.path());
    EXPECT_EQ(z.dims(), (Dims{1, 1, 1, 3}));
    EXPECT_FLOAT_EQ(z(0, 0, 0, 0), 0.0f);
    EXPECT_FLOAT_EQ(z(0, 0, 0, 1), 128.0f / 255.0f);
    EXPECT_FLOAT_EQ(z(0, 0, 0, 2), 1.0f);
}

TEST(Ingest, LexicographicOrder)
{
    TempDir dir;
    spit(dir / "b.pgm", pgm(2, 2, 20));
    spit(dir / "a.pgm", pgm(2, 2, 10));
    spit(dir / "notes.txt", "ignored");
    const auto z = frag::ingest_frames(dir.path());
    ASSERT_EQ(z.frames(), 2u);
    EXPECT_FLOAT_EQ(z(0, 0, 0, 0), 10.0f / 255.0f);
    EXPECT_FLOAT_EQ(z(1, 0, 0, 0), 20.0f / 255.0f);
}

TEST(Ingest, MixedSizesRejected)
{
    TempDir dir;
    spit(dir / "a.pgm", pgm(8, 8, 1));
    spit(dir / "b.pgm", pgm(16, 16, 1));
    EXPECT_EQ(code_of([&] { frag::ingest_frames(dir.path()); }), ErrorCode::dimension_mismatch);
}

TEST(Ingest, MixedKindsAndBadFiles)
{
    TempDir dir;
    spit(dir / "a.pgm", pgm(1, 1, 1));
    spit(dir / "b.ppm", "P6\n1 1\n255\nabc");
    EXPECT_EQ(code_of([&] { frag::ingest_frames(dir.path()); }), ErrorCode::unsupported_format);

    TempDir ascii;
    spit(ascii / "a.pgm", "P2\n1 1\n255\n7\n");
    EXPECT_EQ(code_of([&] { frag::ingest_frames(ascii.path()); }), ErrorCode::unsupported_format);

    TempDir deep;
    spit(deep / "a.pgm", "P5\n1 1\n65535\n\x01\x02");
    EXPECT_EQ(code_of([&] { frag::ingest_frames(deep.path()); }), ErrorCode::unsupported_format);

    TempDir shortdir;
    spit(shortdir / "a.pgm", "P5\n4 4\n255\nxx");
    EXPECT_EQ(code_of([&] { frag::ingest_frames(shortdir.path()); }), ErrorCode::truncated);

    TempDir empty;
    EXPECT_EQ(code_of([&] { frag::ingest_frames(empty.path()); }), ErrorCode::io_failure);
}

TEST(Pnm, EncodeDecodeRoundTrip)
{
    frag::Image img{3, 2, 1, {0, 1, 2, 3, 4, 255}};
    const std::string s = frag::encode_pnm(img);
    const auto back =
        frag::decode_pnm(std::span(reinterpret_cast<const unsigned char*>(s.data()), s.size()));
    EXPECT_EQ(back.width, 3u);
    EXPECT_EQ(back.height, 2u);
    EXPECT_EQ(back.pixels, img.pixels);
}

// Copyright The frag Authors
// SPDX-License-Identifier: Apache-2.0

// Tensor files, binary PGM/PPM images and atomic file output.
//
// Tensor file layout (all integers little-endian):
//   bytes  0..7   ASCII "FRAG0001"
//   bytes  8..11  u32 version (= 1)
//   bytes 12..27  u32 L, W, H, C
//   then L*W*H*C f32 LE values, element (l,y,x,c) at ((l*H + y)*W + x)*C + c

#pragma once

#include <algorithm>
#include <array>
#include <bit>
#include <cctype>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "frag/error.hpp"
#include "frag/tensor.hpp"

namespace frag {

inline constexpr std::array<char, 8> tensor_magic{'F', 'R', 'A', 'G', '0', '0', '0', '1'};
inline constexpr std::uint32_t tensor_version = 1;
inline constexpr std::size_t tensor_header_size = 28;

struct TensorHeader {
    std::array<char, 8> magic = tensor_magic;
    std::uint32_t version = tensor_version;
    Dims dims;
};

namespace detail {

inline void store_u32(unsigned char* p, std::uint32_t v) noexcept
{
    for (int i = 0; i < 4; ++i)
        p[i] = static_cast<unsigned char>((v >> (8 * i)) & 0xffu);
}

inline std::uint32_t get_u32(const unsigned char* p)
{
    return std::uint32_t(p[0]) | (std::uint32_t(p[1]) << 8) | (std::uint32_t(p[2]) << 16) |
           (std::uint32_t(p[3]) << 24);
}

inline std::vector<unsigned char> read_all(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    require(bool(in), ErrorCode::io_failure, "cannot open " + path.string());
    std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                     std::istreambuf_iterator<char>());
    require(!in.bad(), ErrorCode::io_failure, "read failed: " + path.string());
    return bytes;
}

} // namespace detail

/// Write `bytes` to a sibling temp file and rename it over `path`.
inline void write_file_atomic(const std::filesystem::path& path, std::string_view bytes)
{
    namespace fs = std::filesystem;
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        require(bool(out), ErrorCode::io_failure, "cannot open " + tmp.string());
        out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
        out.flush();
        require(bool(out), ErrorCode::io_failure, "write failed: " + tmp.string());
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    require(!ec, ErrorCode::io_failure, "rename failed: " + path.string() + ": " + ec.message());
}

inline std::vector<unsigned char> encode_latents(const LatentSequence& x)
{
    require(x.dims().valid(), ErrorCode::invalid_argument, "cannot encode an empty tensor");
    require(x.all_finite(), ErrorCode::non_finite, "tensor contains NaN or Inf");
    std::vector<unsigned char> out(tensor_header_size + 4 * x.size());
    std::memcpy(out.data(), tensor_magic.data(), tensor_magic.size());
    unsigned char* p = out.data() + tensor_magic.size();
    detail::store_u32(p, tensor_version);
    p += 4;
    for (std::size_t d : {x.frames(), x.width(), x.height(), x.channels()}) {
        require(d <= 0xffffffffu, ErrorCode::invalid_argument, "dimension exceeds u32");
        detail::store_u32(p, static_cast<std::uint32_t>(d));
        p += 4;
    }
    for (float v : x.data()) {
        detail::store_u32(p, std::bit_cast<std::uint32_t>(v));
        p += 4;
    }
    return out;
}

inline TensorHeader decode_header(std::span<const unsigned char> bytes)
{
    require(bytes.size() >= tensor_header_size, ErrorCode::truncated, "file shorter than header");
    TensorHeader h;
    std::memcpy(h.magic.data(), bytes.data(), 8);
    require(h.magic == tensor_magic, ErrorCode::bad_magic, "bad magic, expected FRAG0001");
    h.version = detail::get_u32(bytes.data() + 8);
    require(h.version == tensor_version, ErrorCode::bad_version,
            "unsupported tensor version " + std::to_string(h.version));
    h.dims = Dims{detail::get_u32(bytes.data() + 12), detail::get_u32(bytes.data() + 16),
                  detail::get_u32(bytes.data() + 20), detail::get_u32(bytes.data() + 24)};
    require(h.dims.valid(), ErrorCode::invalid_argument, "header dims must all be >= 1");
    return h;
}

inline LatentSequence decode_latents(std::span<const unsigned char> bytes)
{
    const TensorHeader h = decode_header(bytes);
    const std::size_t n = h.dims.size();
    const std::size_t payload = bytes.size() - tensor_header_size;
    require(payload >= 4 * n, ErrorCode::truncated,
            "payload holds " + std::to_string(payload / 4) + " values, header needs " +
                std::to_string(n));
    require(payload == 4 * n, ErrorCode::dimension_mismatch,
            "trailing bytes after payload (" + std::to_string(payload - 4 * n) + ")");
    std::vector<float> data(n);
    const unsigned char* p = bytes.data() + tensor_header_size;
    for (std::size_t i = 0; i < n; ++i, p += 4) {
        data[i] = std::bit_cast<float>(detail::get_u32(p));
        require(std::isfinite(data[i]), ErrorCode::non_finite,
                "non-finite value at payload index " + std::to_string(i));
    }
    return LatentSequence(h.dims, std::move(data));
}

inline LatentSequence read_latents(const std::filesystem::path& path)
{
    return decode_latents(detail::read_all(path));
}

inline void write_latents(const LatentSequence& x, const std::filesystem::path& path)
{
    const auto bytes = encode_latents(x);
    write_file_atomic(path, std::string_view(reinterpret_cast<const char*>(bytes.data()),
                                             bytes.size()));
}

// ---------------------------------------------------------------------------
// PGM / PPM

/// One decoded binary PNM image, samples row-major with interleaved channels.
struct Image {
    std::size_t width = 0;
    std::size_t height = 0;
    std::size_t channels = 0;
    std::vector<unsigned char> pixels;
};

namespace detail {

inline void skip_pnm_space(std::span<const unsigned char> b, std::size_t& pos)
{
    while (pos < b.size()) {
        if (b[pos] == '#') {
            while (pos < b.size() && b[pos] != '\n')
                ++pos;
        } else if (std::isspace(b[pos])) {
            ++pos;
        } else {
            break;
        }
    }
}

inline std::size_t read_pnm_uint(std::span<const unsigned char> b, std::size_t& pos)
{
    skip_pnm_space(b, pos);
    require(pos < b.size() && std::isdigit(b[pos]), ErrorCode::unsupported_format,
            "malformed PNM header");
    std::size_t v = 0;
    while (pos < b.size() && std::isdigit(b[pos]))
        v = v * 10 + (b[pos++] - '0');
    return v;
}

} // namespace detail

inline Image decode_pnm(std::span<const unsigned char> b)
{
    require(b.size() >= 2 && b[0] == 'P' && (b[1] == '5' || b[1] == '6'),
            ErrorCode::unsupported_format, "only binary PGM (P5) and PPM (P6) are supported");
    Image img;
    img.channels = b[1] == '5' ? 1 : 3;
    std::size_t pos = 2;
    img.width = detail::read_pnm_uint(b, pos);
    img.height = detail::read_pnm_uint(b, pos);
    const std::size_t maxval = detail::read_pnm_uint(b, pos);
    require(maxval == 255, ErrorCode::unsupported_format, "only maxval 255 is supported");
    require(img.width > 0 && img.height > 0, ErrorCode::unsupported_format, "empty image");
    require(pos < b.size() && std::isspace(b[pos]), ErrorCode::unsupported_format,
            "malformed PNM header");
    ++pos;
    const std::size_t n = img.width * img.height * img.channels;
    require(b.size() - pos >= n, ErrorCode::truncated, "PNM pixel data truncated");
    img.pixels.assign(b.begin() + static_cast<std::ptrdiff_t>(pos),
                      b.begin() + static_cast<std::ptrdiff_t>(pos + n));
    return img;
}

inline Image read_pnm(const std::filesystem::path& path)
{
    return decode_pnm(detail::read_all(path));
}

inline std::string encode_pnm(const Image& img)
{
    require(img.channels == 1 || img.channels == 3, ErrorCode::unsupported_format,
            "PNM needs 1 or 3 channels");
    std::ostringstream os;
    os << (img.channels == 1 ? "P5" : "P6") << '\n'
       << img.width << ' ' << img.height << "\n255\n";
    std::string out = os.str();
    out.append(img.pixels.begin(), img.pixels.end());
    return out;
}

inline void write_pnm(const Image& img, const std::filesystem::path& path)
{
    write_file_atomic(path, encode_pnm(img));
}

/// Load every *.pgm / *.ppm in `dir` (lexicographic filename order) as one frame
/// each, scaling samples to [0, 1].
inline LatentSequence ingest_frames(const std::filesystem::path& dir)
{
    namespace fs = std::filesystem;
    require(fs::is_directory(dir), ErrorCode::io_failure, "not a directory: " + dir.string());
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (!entry.is_regular_file())
            continue;
        auto ext = entry.path().extension().string();
        std::transform(ext.begin(), ext.end(), ext.begin(),
                       [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
        if (ext == ".pgm" || ext == ".ppm")
            files.push_back(entry.path());
    }
    require(!files.empty(), ErrorCode::io_failure, "no PGM/PPM frames in " + dir.string());
    std::sort(files.begin(), files.end(),
              [](const fs::path& a, const fs::path& b) {
                  return a.filename().string() < b.filename().string();
              });

    std::vector<Image> images;
    images.reserve(files.size());
    for (const auto& f : files) {
        images.push_back(read_pnm(f));
        const Image& first = images.front();
        const Image& cur = images.back();
        require(cur.width == first.width && cur.height == first.height,
                ErrorCode::dimension_mismatch,
                f.filename().string() + " is " + std::to_string(cur.width) + "x" +
                    std::to_string(cur.height) + ", expected " + std::to_string(first.width) +
                    "x" + std::to_string(first.height));
        require(cur.channels == first.channels, ErrorCode::unsupported_format,
                "mixed PGM and PPM frames in " + dir.string());
    }

    const Image& first = images.front();
    LatentSequence out(images.size(), first.width, first.height, first.channels);
    for (std::size_t l = 0; l < images.size(); ++l) {
        auto frame = out.frame(l);
        for (std::size_t i = 0; i < frame.size(); ++i)
            frame[i] = static_cast<float>(images[l].pixels[i]) / 255.0f;
    }
    return out;
}

} // namespace frag

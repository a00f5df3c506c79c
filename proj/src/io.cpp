/* Copyright 2026 The dirseg Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/
#include "dirseg/io.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <sstream>

namespace dirseg {

namespace {

constexpr std::array<std::uint8_t, 4> kDftMagic{'D', 'F', 'T', '1'};
constexpr std::size_t kDftHeader = 16;

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v)
{
    for (int i = 0; i < 4; ++i)
        out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

std::uint32_t get_u32(const std::uint8_t* p)
{
    return static_cast<std::uint32_t>(p[0]) | static_cast<std::uint32_t>(p[1]) << 8 |
           static_cast<std::uint32_t>(p[2]) << 16 | static_cast<std::uint32_t>(p[3]) << 24;
}

std::vector<std::uint8_t> read_file(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error("cannot open " + path.string());
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file(const std::filesystem::path& path, const std::vector<std::uint8_t>& bytes)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw Error("cannot write " + path.string());
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out)
        throw Error("write failed for " + path.string());
}

std::string trim(const std::string& s)
{
    const auto begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string::npos)
        return {};
    const auto end = s.find_last_not_of(" \t\r\n");
    return s.substr(begin, end - begin + 1);
}

double parse_double(const std::string& key, const std::string& text)
{
    double v = 0.0;
    const char* first = text.data();
    const char* last = text.data() + text.size();
    if (!text.empty() && *first == '+')
        ++first;
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last || !std::isfinite(v))
        throw Error("config key '" + key + "' is not a number: " + text);
    return v;
}

long long parse_int(const std::string& key, const std::string& text)
{
    long long v = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || ptr != text.data() + text.size())
        throw Error("config key '" + key + "' is not an integer: " + text);
    return v;
}

std::string format_decimal(double v)
{
    std::array<char, 128> buf{};
    const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v, std::chars_format::fixed);
    if (ec != std::errc())
        throw Error("cannot format value");
    return {buf.data(), ptr};
}

}  // namespace

std::vector<std::uint8_t> encode_dft(const RawFeatureMap& tensor)
{
    std::vector<std::uint8_t> out;
    out.reserve(kDftHeader + 4 * tensor.values().size());
    for (std::uint8_t b : kDftMagic)
        out.push_back(b);
    put_u32(out, static_cast<std::uint32_t>(tensor.channels()));
    put_u32(out, static_cast<std::uint32_t>(tensor.height()));
    put_u32(out, static_cast<std::uint32_t>(tensor.width()));
    for (double v : tensor.values())
        put_u32(out, std::bit_cast<std::uint32_t>(static_cast<float>(v)));
    return out;
}

RawFeatureMap decode_dft(const std::vector<std::uint8_t>& bytes)
{
    if (bytes.size() < kDftMagic.size() || !std::equal(kDftMagic.begin(), kDftMagic.end(), bytes.begin()))
        throw Error("bad magic");
    if (bytes.size() < kDftHeader)
        throw Error("truncated header");
    const std::uint64_t c = get_u32(bytes.data() + 4);
    const std::uint64_t h = get_u32(bytes.data() + 8);
    const std::uint64_t w = get_u32(bytes.data() + 12);
    if (c == 0 || h == 0 || w == 0)
        throw Error("size mismatch: zero dimension in header");
    const std::uint64_t expected = kDftHeader + 4 * c * h * w;
    if (bytes.size() < expected)
        throw Error("truncated payload");
    if (bytes.size() > expected)
        throw Error("size mismatch: " + std::to_string(bytes.size() - expected) + " trailing bytes");

    std::vector<double> data(c * h * w);
    const std::uint8_t* p = bytes.data() + kDftHeader;
    for (std::size_t i = 0; i < data.size(); ++i, p += 4)
        data[i] = static_cast<double>(std::bit_cast<float>(get_u32(p)));
    return RawFeatureMap(c, {h, w}, std::move(data));
}

void write_dft(const std::filesystem::path& path, const RawFeatureMap& tensor)
{
    write_file(path, encode_dft(tensor));
}

RawFeatureMap read_dft(const std::filesystem::path& path)
{
    return decode_dft(read_file(path));
}

std::uint8_t quantize(double v)
{
    return static_cast<std::uint8_t>(std::lround(std::clamp(v, 0.0, 1.0) * 255.0));
}

void write_pgm(const std::filesystem::path& path, const Grid<std::uint8_t>& bytes)
{
    const std::string header = "P5\n" + std::to_string(bytes.width()) + " " + std::to_string(bytes.height()) +
                               "\n255\n";
    std::vector<std::uint8_t> out(header.begin(), header.end());
    out.insert(out.end(), bytes.values().begin(), bytes.values().end());
    write_file(path, out);
}

void write_pgm(const std::filesystem::path& path, const SoftMask& mask)
{
    Grid<std::uint8_t> bytes(mask.shape());
    for (std::size_t i = 0; i < mask.size(); ++i)
        bytes[i] = quantize(mask[i]);
    write_pgm(path, bytes);
}

Grid<std::uint8_t> read_pgm_bytes(const std::filesystem::path& path)
{
    const std::vector<std::uint8_t> bytes = read_file(path);
    std::size_t pos = 0;

    auto skip_space_and_comments = [&] {
        while (pos < bytes.size()) {
            if (std::isspace(bytes[pos])) {
                ++pos;
            } else if (bytes[pos] == '#') {
                while (pos < bytes.size() && bytes[pos] != '\n')
                    ++pos;
            } else {
                break;
            }
        }
    };
    auto read_number = [&]() -> std::size_t {
        skip_space_and_comments();
        std::size_t v = 0;
        std::size_t digits = 0;
        while (pos < bytes.size() && std::isdigit(bytes[pos])) {
            v = v * 10 + (bytes[pos++] - '0');
            ++digits;
        }
        if (digits == 0)
            throw Error("malformed PGM header in " + path.string());
        return v;
    };

    if (bytes.size() < 2 || bytes[0] != 'P' || bytes[1] != '5')
        throw Error("not a binary P5 graymap: " + path.string());
    pos = 2;
    const std::size_t width = read_number();
    const std::size_t height = read_number();
    const std::size_t maxval = read_number();
    if (maxval != 255)
        throw Error("unsupported PGM maxval " + std::to_string(maxval) + " (expected 255)");
    if (width == 0 || height == 0)
        throw Error("malformed PGM header in " + path.string());
    if (pos >= bytes.size() || !std::isspace(bytes[pos]))
        throw Error("malformed PGM header in " + path.string());
    ++pos;
    if (bytes.size() - pos < width * height)
        throw Error("truncated PGM pixel data in " + path.string());

    return Grid<std::uint8_t>({height, width}, std::vector<std::uint8_t>(bytes.begin() + static_cast<long>(pos),
                                                                         bytes.begin() + static_cast<long>(pos + width * height)));
}

SoftMask read_pgm(const std::filesystem::path& path)
{
    const auto bytes = read_pgm_bytes(path);
    Grid<double> out(bytes.shape());
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = bytes[i] / 255.0;
    return SoftMask(std::move(out));
}

BinaryMask read_pgm_binary(const std::filesystem::path& path)
{
    auto bytes = read_pgm_bytes(path);
    for (auto& b : bytes.values())
        b = b >= 128 ? 1 : 0;
    return bytes;
}

Config Config::parse(const std::string& text)
{
    Config config;
    std::istringstream in(text);
    std::string line;
    std::size_t number = 0;
    while (std::getline(in, line)) {
        ++number;
        if (const auto hash = line.find('#'); hash != std::string::npos)
            line.erase(hash);
        line = trim(line);
        if (line.empty())
            continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw Error("config line " + std::to_string(number) + " is not 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty())
            throw Error("config line " + std::to_string(number) + " has an empty key");
        config.values_[key] = value;
    }
    return config;
}

Config Config::load(const std::filesystem::path& path)
{
    const auto bytes = read_file(path);
    return parse(std::string(bytes.begin(), bytes.end()));
}

std::string Config::get_string(const std::string& key) const
{
    const auto it = values_.find(key);
    if (it == values_.end())
        throw Error("missing config key '" + key + "'");
    return it->second;
}

double Config::get_double(const std::string& key) const
{
    return parse_double(key, get_string(key));
}

double Config::get_double(const std::string& key, double fallback) const
{
    return has(key) ? get_double(key) : fallback;
}

long long Config::get_int(const std::string& key) const
{
    return parse_int(key, get_string(key));
}

long long Config::get_int(const std::string& key, long long fallback) const
{
    return has(key) ? get_int(key) : fallback;
}

std::string format_head(const FusionHead& head)
{
    std::string out;
    for (std::size_t c = 0; c < kCueChannels; ++c)
        out += "w" + std::to_string(c) + " = " + format_decimal(head.weights[c]) + "\n";
    out += "b = " + format_decimal(head.bias) + "\n";
    return out;
}

FusionHead parse_head(const Config& config)
{
    FusionHead head;
    for (std::size_t c = 0; c < kCueChannels; ++c)
        head.weights[c] = config.get_double("w" + std::to_string(c));
    head.bias = config.get_double("b");
    return head;
}

void write_head(const std::filesystem::path& path, const FusionHead& head)
{
    const std::string text = format_head(head);
    write_file(path, std::vector<std::uint8_t>(text.begin(), text.end()));
}

FusionHead read_head(const std::filesystem::path& path)
{
    return parse_head(Config::load(path));
}

std::string frame_name(std::size_t index, const std::string& extension)
{
    std::array<char, 32> buf{};
    std::snprintf(buf.data(), buf.size(), "frame_%05zu", index);
    return std::string(buf.data()) + extension;
}

}  // namespace dirseg

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
#ifndef DIRSEG_IO_HPP
#define DIRSEG_IO_HPP

#include "dirseg/directional.hpp"
#include "dirseg/fusion.hpp"
#include "dirseg/grid.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace dirseg {

// DFT1 tensor files: "DFT1", then C, H, W as little-endian uint32, then
// C*H*W little-endian IEEE-754 float32 values in (c, h, w) row-major order.
// Values are stored as float32, so a map round-trips bit-exactly when every
// value is representable as a float.

std::vector<std::uint8_t> encode_dft(const RawFeatureMap& tensor);
RawFeatureMap decode_dft(const std::vector<std::uint8_t>& bytes);

void write_dft(const std::filesystem::path& path, const RawFeatureMap& tensor);
RawFeatureMap read_dft(const std::filesystem::path& path);

// Binary P5 graymaps with maxval 255. Soft values are stored as
// round(255 * v) and read back as byte / 255.

void write_pgm(const std::filesystem::path& path, const Grid<std::uint8_t>& bytes);
void write_pgm(const std::filesystem::path& path, const SoftMask& mask);
Grid<std::uint8_t> read_pgm_bytes(const std::filesystem::path& path);
SoftMask read_pgm(const std::filesystem::path& path);

/// Bytes >= 128 are foreground.
BinaryMask read_pgm_binary(const std::filesystem::path& path);

std::uint8_t quantize(double v);

/// `key = value` lines; `#` starts a comment; blank lines ignored.
class Config {
public:
    static Config parse(const std::string& text);
    static Config load(const std::filesystem::path& path);

    bool has(const std::string& key) const { return values_.contains(key); }
    std::string get_string(const std::string& key) const;
    double get_double(const std::string& key) const;
    double get_double(const std::string& key, double fallback) const;
    long long get_int(const std::string& key) const;
    long long get_int(const std::string& key, long long fallback) const;
    const std::map<std::string, std::string>& values() const { return values_; }

private:
    std::map<std::string, std::string> values_;
};

/// w0..w6 and b, one `key = value` line each.
std::string format_head(const FusionHead& head);
FusionHead parse_head(const Config& config);
void write_head(const std::filesystem::path& path, const FusionHead& head);
FusionHead read_head(const std::filesystem::path& path);

/// "frame_%05d" + extension.
std::string frame_name(std::size_t index, const std::string& extension);

}  // namespace dirseg

#endif  // DIRSEG_IO_HPP

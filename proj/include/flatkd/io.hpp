#pragma once

#include <filesystem>
#include <string>

#include "flatkd/tree.hpp"

namespace flatkd::io {

// Binary layout, all little endian:
//   magic (4 bytes) | u32 version | u32 k | u64 count | count*k f32, row major
// Point files use magic "FKDT", tree files "FKDX"; a tree file is just the
// level-order node array, so the payload is identical in shape. The CSV
// alternative is one point per line, coordinates comma separated. Readers
// detect the encoding from the leading bytes.
inline constexpr char kPointsMagic[5] = "FKDT";
inline constexpr char kTreeMagic[5] = "FKDX";
inline constexpr std::uint32_t kFormatVersion = 1;

enum class Format { binary, csv };

// %.9g: enough digits to round-trip any float, few enough to stay stable.
std::string format_float(float v);

void write_points(const std::filesystem::path& path, const PointSet& points, Format format);
PointSet read_points(const std::filesystem::path& path);

void write_tree(const std::filesystem::path& path, const KdTree& tree, Format format);
KdTree read_tree(const std::filesystem::path& path);

} // namespace flatkd::io

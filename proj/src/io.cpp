#include "flatkd/io.hpp"

#include <bit>
#include <charconv>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <limits>
#include <vector>

namespace flatkd::io {

namespace {

void put_u32(std::string& buf, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) buf += static_cast<char>((v >> (8 * i)) & 0xff);
}

void put_u64(std::string& buf, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) buf += static_cast<char>((v >> (8 * i)) & 0xff);
}

std::uint32_t get_u32(const char* p) {
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(static_cast<unsigned char>(p[i])) << (8 * i);
    return v;
}

std::uint64_t get_u64(const char* p) {
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(static_cast<unsigned char>(p[i])) << (8 * i);
    return v;
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open " + path.string());
    std::string data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (in.bad()) throw DataError("read failed on " + path.string());
    return data;
}

void write_file(const std::filesystem::path& path, std::string_view data) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot create " + path.string());
    out.write(data.data(), static_cast<std::streamsize>(data.size()));
    if (!out) throw DataError("write failed on " + path.string());
}

std::string encode_binary(const char* magic, const PointSet& pts) {
    std::string buf;
    buf.reserve(16 + pts.raw().size() * 4);
    buf.append(magic, 4);
    put_u32(buf, kFormatVersion);
    put_u32(buf, static_cast<std::uint32_t>(pts.dim()));
    put_u64(buf, static_cast<std::uint64_t>(pts.size()));
    if constexpr (std::endian::native == std::endian::little) {
        buf.append(reinterpret_cast<const char*>(pts.raw().data()), pts.raw().size() * 4);
    } else {
        for (float f : pts.raw()) put_u32(buf, std::bit_cast<std::uint32_t>(f));
    }
    return buf;
}

PointSet decode_binary(const std::string& data, const char* magic, const std::string& what) {
    if (data.size() < 16) throw DataError(what + ": truncated header");
    if (std::memcmp(data.data(), magic, 4) != 0) {
        const char* other = std::memcmp(magic, kPointsMagic, 4) == 0 ? kTreeMagic : kPointsMagic;
        if (std::memcmp(data.data(), other, 4) == 0)
            throw DataError(what + ": file has magic " + std::string(other, 4) +
                            ", expected " + std::string(magic, 4));
        throw DataError(what + ": bad magic");
    }
    const std::uint32_t version = get_u32(data.data() + 4);
    if (version != kFormatVersion)
        throw DataError(what + ": unsupported version " + std::to_string(version));
    const std::uint32_t k = get_u32(data.data() + 8);
    const std::uint64_t count = get_u64(data.data() + 12);
    if (count > 0 && k == 0) throw DataError(what + ": zero dimension with nonzero count");
    if (count > static_cast<std::uint64_t>(std::numeric_limits<int>::max()))
        throw DataError(what + ": point count does not fit a 32-bit index");
    if (k > static_cast<std::uint64_t>(std::numeric_limits<int>::max()) / std::max<std::uint64_t>(count, 1))
        throw DataError(what + ": dimension too large");
    const std::uint64_t floats = count * k;
    if (data.size() != 16 + floats * 4)
        throw DataError(what + ": payload size does not match header (" +
                        std::to_string(data.size() - 16) + " bytes for " +
                        std::to_string(floats) + " floats)");
    std::vector<float> coords(floats);
    if constexpr (std::endian::native == std::endian::little) {
        std::memcpy(coords.data(), data.data() + 16, floats * 4);
    } else {
        for (std::uint64_t i = 0; i < floats; ++i)
            coords[i] = std::bit_cast<float>(get_u32(data.data() + 16 + i * 4));
    }
    PointSet pts(static_cast<int>(k), std::move(coords));
    require_finite(pts, what.c_str());
    return pts;
}

std::string encode_csv(const PointSet& pts) {
    std::string buf;
    for (int i = 0; i < pts.size(); ++i) {
        const auto p = pts[i];
        for (std::size_t d = 0; d < p.size(); ++d) {
            if (d) buf += ',';
            buf += format_float(p[d]);
        }
        buf += '\n';
    }
    return buf;
}

PointSet decode_csv(const std::string& data, const std::string& what) {
    std::vector<float> coords;
    int dim = 0;
    int line_no = 0;
    std::size_t pos = 0;
    while (pos < data.size()) {
        std::size_t eol = data.find('\n', pos);
        if (eol == std::string::npos) eol = data.size();
        std::string_view line(data.data() + pos, eol - pos);
        pos = eol + 1;
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (line.empty()) continue;

        int fields = 0;
        std::size_t start = 0;
        while (start <= line.size()) {
            std::size_t comma = line.find(',', start);
            if (comma == std::string_view::npos) comma = line.size();
            std::string_view cell = line.substr(start, comma - start);
            while (!cell.empty() && (cell.front() == ' ' || cell.front() == '\t')) cell.remove_prefix(1);
            while (!cell.empty() && (cell.back() == ' ' || cell.back() == '\t')) cell.remove_suffix(1);
            float v = 0.0f;
            const auto res = std::from_chars(cell.data(), cell.data() + cell.size(), v);
            if (res.ec != std::errc{} || res.ptr != cell.data() + cell.size())
                throw DataError(what + ": line " + std::to_string(line_no) + ": bad number '" +
                                std::string(cell) + "'");
            coords.push_back(v);
            ++fields;
            if (comma == line.size()) break;
            start = comma + 1;
        }
        if (dim == 0)
            dim = fields;
        else if (fields != dim)
            throw DataError(what + ": line " + std::to_string(line_no) + " has " +
                            std::to_string(fields) + " fields, expected " + std::to_string(dim));
    }
    PointSet pts(dim, std::move(coords));
    require_finite(pts, what.c_str());
    return pts;
}

bool looks_binary(const std::string& data, const char* magic) {
    return data.size() >= 4 && std::memcmp(data.data(), magic, 4) == 0;
}

} // namespace

std::string format_float(float v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.9g", static_cast<double>(v));
    return buf;
}

void write_points(const std::filesystem::path& path, const PointSet& points, Format format) {
    write_file(path, format == Format::binary ? encode_binary(kPointsMagic, points)
                                              : encode_csv(points));
}

PointSet read_points(const std::filesystem::path& path) {
    const std::string data = read_file(path);
    if (looks_binary(data, kPointsMagic) || looks_binary(data, kTreeMagic))
        return decode_binary(data, kPointsMagic, "points file " + path.string());
    return decode_csv(data, "points file " + path.string());
}

void write_tree(const std::filesystem::path& path, const KdTree& tree, Format format) {
    if (!tree.split_policy().round_robin())
        throw DataError("tree files carry no split policy; only round-robin trees persist");
    write_file(path, format == Format::binary ? encode_binary(kTreeMagic, tree.nodes())
                                              : encode_csv(tree.nodes()));
}

KdTree read_tree(const std::filesystem::path& path) {
    const std::string data = read_file(path);
    PointSet nodes = (looks_binary(data, kTreeMagic) || looks_binary(data, kPointsMagic))
                         ? decode_binary(data, kTreeMagic, "tree file " + path.string())
                         : decode_csv(data, "tree file " + path.string());
    return KdTree::from_level_order(std::move(nodes));
}

} // namespace flatkd::io

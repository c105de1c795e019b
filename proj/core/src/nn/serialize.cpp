#include "morphkit/nn/serialize.hpp"

#include <cstring>
#include <istream>
#include <ostream>

#include "morphkit/common/error.hpp"

namespace morphkit::nn {

void write_u32(std::ostream& out, std::uint32_t v) {
    unsigned char b[4];
    for (int i = 0; i < 4; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
    out.write(reinterpret_cast<const char*>(b), 4);
}

void write_u64(std::ostream& out, std::uint64_t v) {
    unsigned char b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
    out.write(reinterpret_cast<const char*>(b), 8);
}

void write_string(std::ostream& out, const std::string& s) {
    write_u64(out, s.size());
    out.write(s.data(), static_cast<std::streamsize>(s.size()));
}

void write_tensor(std::ostream& out, const Tensor& t) {
    write_u32(out, static_cast<std::uint32_t>(t.rank()));
    for (int i = 0; i < t.rank(); ++i) write_u32(out, static_cast<std::uint32_t>(t.dim(i)));
    // bulk little-endian double payload
    std::vector<unsigned char> buf(static_cast<std::size_t>(t.size()) * 8);
    for (std::int64_t i = 0; i < t.size(); ++i) {
        std::uint64_t bits;
        const double v = t[i];
        std::memcpy(&bits, &v, 8);
        for (int bi = 0; bi < 8; ++bi)
            buf[static_cast<std::size_t>(i) * 8 + bi] = static_cast<unsigned char>(bits >> (8 * bi));
    }
    out.write(reinterpret_cast<const char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
}

std::uint32_t read_u32(std::istream& in) {
    unsigned char b[4];
    in.read(reinterpret_cast<char*>(b), 4);
    if (!in) throw IoError("checkpoint: truncated stream");
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= std::uint32_t(b[i]) << (8 * i);
    return v;
}

std::uint64_t read_u64(std::istream& in) {
    unsigned char b[8];
    in.read(reinterpret_cast<char*>(b), 8);
    if (!in) throw IoError("checkpoint: truncated stream");
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= std::uint64_t(b[i]) << (8 * i);
    return v;
}

std::string read_string(std::istream& in) {
    const std::uint64_t n = read_u64(in);
    std::string s(n, '\0');
    in.read(s.data(), static_cast<std::streamsize>(n));
    if (!in) throw IoError("checkpoint: truncated stream");
    return s;
}

Tensor read_tensor(std::istream& in) {
    const std::uint32_t rank = read_u32(in);
    std::vector<int> shape(rank);
    for (auto& d : shape) d = static_cast<int>(read_u32(in));
    Tensor t(shape);
    std::vector<unsigned char> buf(static_cast<std::size_t>(t.size()) * 8);
    in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
    if (!in) throw IoError("checkpoint: truncated tensor payload");
    for (std::int64_t i = 0; i < t.size(); ++i) {
        std::uint64_t bits = 0;
        for (int bi = 0; bi < 8; ++bi)
            bits |= std::uint64_t(buf[static_cast<std::size_t>(i) * 8 + bi]) << (8 * bi);
        double v;
        std::memcpy(&v, &bits, 8);
        t[i] = v;
    }
    return t;
}

void write_params(std::ostream& out, const ParamStore& params) {
    write_u64(out, params.count());
    for (std::size_t i = 0; i < params.count(); ++i) {
        write_string(out, params.name(i));
        write_tensor(out, params.at(i)->value);
    }
}

void read_params(std::istream& in, const ParamStore& params) {
    const std::uint64_t n = read_u64(in);
    if (n != params.count()) throw IoError("checkpoint: parameter count mismatch");
    for (std::size_t i = 0; i < params.count(); ++i) {
        const std::string name = read_string(in);
        if (name != params.name(i))
            throw IoError("checkpoint: parameter name mismatch: expected " + params.name(i) +
                          ", got " + name);
        Tensor t = read_tensor(in);
        if (!t.same_shape(params.at(i)->value))
            throw IoError("checkpoint: shape mismatch for parameter " + name);
        params.at(i)->value = std::move(t);
    }
}

}  // namespace morphkit::nn

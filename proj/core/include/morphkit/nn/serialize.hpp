#pragma once

#include <iosfwd>
#include <string>

#include "morphkit/nn/params.hpp"
#include "morphkit/nn/tensor.hpp"

namespace morphkit::nn {

// Raw little-endian binary tensor records. Doubles are written bit-exactly,
// which is what makes checkpoint round-trips reproducible.
void write_u32(std::ostream& out, std::uint32_t v);
void write_u64(std::ostream& out, std::uint64_t v);
void write_string(std::ostream& out, const std::string& s);
void write_tensor(std::ostream& out, const Tensor& t);

std::uint32_t read_u32(std::istream& in);
std::uint64_t read_u64(std::istream& in);
std::string read_string(std::istream& in);
Tensor read_tensor(std::istream& in);

/// Writes all parameters (names, shapes, values) in store order.
void write_params(std::ostream& out, const ParamStore& params);
/// Loads values into an already-constructed store; names and shapes must match.
void read_params(std::istream& in, const ParamStore& params);

}  // namespace morphkit::nn

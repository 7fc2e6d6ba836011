#pragma once

#include <string>

#include "tpa/tensor.hpp"

namespace tpa {

// Tensor file I/O. Format is inferred from the extension:
//   .json  {"dims":[n1,n2,n3],"data":[... slice-major ...]}
//   .t3b   12-byte header (n1,n2,n3 as little-endian u32) + float64
//          slice-major payload
// Binary round trips are bit-exact; JSON serialization is value-exact
// (shortest round-trip representation). Malformed content throws ParseError,
// filesystem failures throw IoError.
Tensor3 read_tensor(const std::string& path);
void write_tensor(const std::string& path, const Tensor3& a);

}  // namespace tpa

#include "tpa/io.hpp"

#include <bit>
#include <cstdint>
#include <fstream>
#include <vector>

#include <json.hpp>

#include "tpa/errors.hpp"

namespace tpa {

namespace {

using nlohmann::json;

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() &&
         s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

std::int64_t checked_size(const std::string& path, std::int64_t n1, std::int64_t n2,
                          std::int64_t n3) {
  if (n1 < 1 || n2 < 1 || n3 < 1) {
    throw ParseError(path + ": dims must be positive, got [" + std::to_string(n1) + "," +
                     std::to_string(n2) + "," + std::to_string(n3) + "]");
  }
  if (n1 > (1 << 20) || n2 > (1 << 20) || n3 > (1 << 20) ||
      n1 * n2 * n3 > (std::int64_t{1} << 28)) {
    throw ParseError(path + ": dims implausibly large");
  }
  return n1 * n2 * n3;
}

Tensor3 assemble(const std::string& path, int n1, int n2, int n3, std::vector<double> data) {
  try {
    return Tensor3(n1, n2, n3, std::move(data));
  } catch (const NonFiniteValue&) {
    throw ParseError(path + ": tensor entries must be finite");
  }
}

Tensor3 read_json_tensor(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ParseError(path + ": " + e.what());
  }
  try {
    const auto dims = j.at("dims").get<std::vector<std::int64_t>>();
    if (dims.size() != 3) throw ParseError(path + ": dims must have exactly 3 entries");
    const std::int64_t total = checked_size(path, dims[0], dims[1], dims[2]);
    const json& data = j.at("data");
    if (!data.is_array() || static_cast<std::int64_t>(data.size()) != total) {
      throw ParseError(path + ": data length " + std::to_string(data.size()) +
                       " does not match dims (" + std::to_string(total) + " entries)");
    }
    std::vector<double> values(static_cast<std::size_t>(total));
    for (std::int64_t i = 0; i < total; ++i) {
      if (!data[i].is_number()) throw ParseError(path + ": data entries must be numbers");
      values[i] = data[i].get<double>();
    }
    return assemble(path, static_cast<int>(dims[0]), static_cast<int>(dims[1]),
                    static_cast<int>(dims[2]), std::move(values));
  } catch (const json::exception& e) {
    throw ParseError(path + ": " + e.what());
  }
}

void write_json_tensor(const std::string& path, const Tensor3& a) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open for writing: " + path);
  json j;
  j["dims"] = {a.n1(), a.n2(), a.n3()};
  j["data"] = a.data();
  out << j.dump() << '\n';
  if (!out) throw IoError("write failed: " + path);
}

static_assert(std::endian::native == std::endian::little,
              "binary tensor format assumes a little-endian host");

Tensor3 read_binary_tensor(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open: " + path);
  std::uint32_t dims[3];
  in.read(reinterpret_cast<char*>(dims), sizeof dims);
  if (!in) throw ParseError(path + ": truncated header");
  const std::int64_t total = checked_size(path, dims[0], dims[1], dims[2]);
  std::vector<double> values(static_cast<std::size_t>(total));
  in.read(reinterpret_cast<char*>(values.data()),
          static_cast<std::streamsize>(total * sizeof(double)));
  if (!in) throw ParseError(path + ": truncated payload");
  in.peek();
  if (!in.eof()) throw ParseError(path + ": trailing bytes after payload");
  return assemble(path, static_cast<int>(dims[0]), static_cast<int>(dims[1]),
                  static_cast<int>(dims[2]), std::move(values));
}

void write_binary_tensor(const std::string& path, const Tensor3& a) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path);
  const std::uint32_t dims[3] = {static_cast<std::uint32_t>(a.n1()),
                                 static_cast<std::uint32_t>(a.n2()),
                                 static_cast<std::uint32_t>(a.n3())};
  out.write(reinterpret_cast<const char*>(dims), sizeof dims);
  out.write(reinterpret_cast<const char*>(a.data().data()),
            static_cast<std::streamsize>(a.size() * sizeof(double)));
  if (!out) throw IoError("write failed: " + path);
}

}  // namespace

Tensor3 read_tensor(const std::string& path) {
  if (ends_with(path, ".json")) return read_json_tensor(path);
  if (ends_with(path, ".t3b")) return read_binary_tensor(path);
  throw ParseError(path + ": unknown tensor extension (expected .json or .t3b)");
}

void write_tensor(const std::string& path, const Tensor3& a) {
  if (ends_with(path, ".json")) return write_json_tensor(path, a);
  if (ends_with(path, ".t3b")) return write_binary_tensor(path, a);
  throw ParseError(path + ": unknown tensor extension (expected .json or .t3b)");
}

}  // namespace tpa

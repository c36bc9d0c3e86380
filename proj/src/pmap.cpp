#include "himix/io.hpp"

#include <bit>
#include <cmath>
#include <fstream>
#include <sstream>

namespace himix {

namespace {

constexpr char kMagic[4] = {'P', 'M', 'A', 'P'};
constexpr std::size_t kHeaderBytes = 16;

void put_u32(std::string& out, std::uint32_t v) {
  for (int b = 0; b < 4; ++b)
    out.push_back(static_cast<char>((v >> (8 * b)) & 0xFFu));
}

std::uint32_t get_u32(std::string_view in, std::size_t pos) {
  std::uint32_t v = 0;
  for (int b = 0; b < 4; ++b)
    v |= static_cast<std::uint32_t>(static_cast<unsigned char>(in[pos + static_cast<std::size_t>(b)])) << (8 * b);
  return v;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw DataError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

void write_file_atomic(const std::filesystem::path& path, std::string_view bytes) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out)
      throw DataError("cannot write " + tmp.string());
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    out.flush();
    if (!out)
      throw DataError("write failed for " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw DataError("cannot rename onto " + path.string());
  }
}

std::string encode_pmap(const ProbMap& probs) {
  std::string out(kMagic, 4);
  out.reserve(kHeaderBytes + static_cast<std::size_t>(probs.pixels().size()) * 4);
  put_u32(out, static_cast<std::uint32_t>(probs.height()));
  put_u32(out, static_cast<std::uint32_t>(probs.width()));
  put_u32(out, static_cast<std::uint32_t>(probs.num_classes()));
  const float* data = probs.pixels().data();
  for (Index i = 0; i < probs.pixels().size(); ++i)
    put_u32(out, std::bit_cast<std::uint32_t>(data[i]));
  return out;
}

ProbMap decode_pmap(std::string_view bytes) {
  if (bytes.size() < kHeaderBytes || bytes.substr(0, 4) != std::string_view(kMagic, 4))
    throw DataError("not a PMAP file");
  const std::uint64_t h = get_u32(bytes, 4);
  const std::uint64_t w = get_u32(bytes, 8);
  const std::uint64_t c = get_u32(bytes, 12);
  if (h == 0 || w == 0 || c == 0)
    throw DataError("PMAP dimensions must be positive");
  if (bytes.size() != kHeaderBytes + h * w * c * 4)
    throw DataError("PMAP payload length does not match header");
  ProbMap probs(static_cast<Index>(h), static_cast<Index>(w), static_cast<int>(c), false);
  float* data = probs.pixels().data();
  for (std::uint64_t i = 0; i < h * w * c; ++i)
    data[i] = std::bit_cast<float>(get_u32(bytes, kHeaderBytes + 4 * i));
  bool normalized = true;
  for (Index i = 0; i < probs.size() && normalized; ++i)
    normalized = std::abs(probs.pixels().row(i).cast<double>().sum() - 1.0) <= kNormalizationTolerance;
  probs.set_normalized(normalized);
  return probs;
}

void save_pmap(const ProbMap& probs, const std::filesystem::path& path) {
  write_file_atomic(path, encode_pmap(probs));
}

ProbMap load_pmap(const std::filesystem::path& path) {
  return decode_pmap(read_file(path));
}

}  // namespace himix

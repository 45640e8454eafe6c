#include "holodepth/holo/image_io.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>

#include "holodepth/common/error.hpp"
#include "holodepth/common/kv.hpp"

namespace holodepth::holo {
namespace {

// Reads one whitespace-delimited header token starting at `pos`.
std::string next_token(const std::string& bytes, std::size_t& pos) {
  while (pos < bytes.size() && std::isspace(static_cast<unsigned char>(bytes[pos]))) ++pos;
  const std::size_t start = pos;
  while (pos < bytes.size() && !std::isspace(static_cast<unsigned char>(bytes[pos]))) ++pos;
  if (start == pos) throw ParseError("unexpected end of header", start);
  return bytes.substr(start, pos - start);
}

int header_int(const std::string& bytes, std::size_t& pos, const char* what) {
  const std::size_t at = pos;
  const std::string tok = next_token(bytes, pos);
  try {
    const long long v = parse_int(tok, what);
    if (v < 1 || v > (1 << 24)) throw ParseError(std::string(what) + " out of range", at);
    return static_cast<int>(v);
  } catch (const InvalidArgument&) {
    throw ParseError(std::string("bad ") + what + " '" + tok + "'", at);
  }
}

}  // namespace

std::string encode_pfm(const FloatMap& map) {
  std::string out = "Pf\n" + std::to_string(map.width) + " " + std::to_string(map.height) + "\n-1.0\n";
  const std::size_t header = out.size();
  out.resize(header + map.samples.size() * 4);
  std::size_t k = header;
  for (int r = map.height - 1; r >= 0; --r) {
    for (int c = 0; c < map.width; ++c) {
      const auto bits = std::bit_cast<std::uint32_t>(
          static_cast<float>(map.samples[static_cast<std::size_t>(r) * map.width + c]));
      for (int b = 0; b < 4; ++b) out[k++] = static_cast<char>((bits >> (8 * b)) & 0xFF);
    }
  }
  return out;
}

FloatMap decode_pfm(const std::string& bytes) {
  std::size_t pos = 0;
  if (next_token(bytes, pos) != "Pf") throw ParseError("not a grayscale PFM (expected 'Pf')", 0);
  FloatMap map;
  map.width = header_int(bytes, pos, "width");
  map.height = header_int(bytes, pos, "height");
  const std::size_t scale_at = pos;
  const std::string scale_tok = next_token(bytes, pos);
  double scale = 0.0;
  try {
    scale = parse_double(scale_tok, "PFM scale");
  } catch (const InvalidArgument&) {
    throw ParseError("bad PFM scale '" + scale_tok + "'", scale_at);
  }
  if (scale == 0.0 || !std::isfinite(scale)) throw ParseError("PFM scale must be nonzero", scale_at);
  if (pos >= bytes.size() || !std::isspace(static_cast<unsigned char>(bytes[pos])))
    throw ParseError("missing whitespace after PFM header", pos);
  ++pos;  // exactly one whitespace byte separates header and raster
  const bool little = scale < 0.0;
  const std::size_t count = static_cast<std::size_t>(map.width) * static_cast<std::size_t>(map.height);
  if (bytes.size() - pos != count * 4)
    throw ParseError("PFM raster has " + std::to_string(bytes.size() - pos) + " bytes, expected " +
                         std::to_string(count * 4),
                     pos);
  map.samples.resize(count);
  std::size_t k = pos;
  for (int r = map.height - 1; r >= 0; --r) {
    for (int c = 0; c < map.width; ++c) {
      std::uint32_t bits = 0;
      for (int b = 0; b < 4; ++b) {
        const auto byte = static_cast<std::uint32_t>(static_cast<unsigned char>(bytes[k + b]));
        bits |= little ? byte << (8 * b) : byte << (8 * (3 - b));
      }
      k += 4;
      map.samples[static_cast<std::size_t>(r) * map.width + c] = std::bit_cast<float>(bits);
    }
  }
  return map;
}

std::string encode_pgm16(const FloatMap& map, double lo, double hi) {
  std::string out = "P5\n" + std::to_string(map.width) + " " + std::to_string(map.height) + "\n65535\n";
  const double span = hi - lo;
  for (double v : map.samples) {
    double t = span > 0.0 ? (v - lo) / span : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    const auto q = static_cast<std::uint16_t>(std::lround(t * 65535.0));
    out.push_back(static_cast<char>(q >> 8));
    out.push_back(static_cast<char>(q & 0xFF));
  }
  return out;
}

FloatMap decode_pgm16(const std::string& bytes, double lo, double hi) {
  std::size_t pos = 0;
  if (next_token(bytes, pos) != "P5") throw ParseError("not a binary PGM (expected 'P5')", 0);
  FloatMap map;
  map.width = header_int(bytes, pos, "width");
  map.height = header_int(bytes, pos, "height");
  const std::size_t maxval_at = pos;
  if (header_int(bytes, pos, "maxval") != 65535) throw ParseError("only 16-bit PGM is supported", maxval_at);
  ++pos;
  const std::size_t count = static_cast<std::size_t>(map.width) * static_cast<std::size_t>(map.height);
  if (bytes.size() < pos || bytes.size() - pos != count * 2)
    throw ParseError("PGM raster size mismatch", pos);
  map.samples.resize(count);
  for (std::size_t i = 0; i < count; ++i) {
    const auto hi_b = static_cast<unsigned char>(bytes[pos + 2 * i]);
    const auto lo_b = static_cast<unsigned char>(bytes[pos + 2 * i + 1]);
    const double t = ((hi_b << 8) | lo_b) / 65535.0;
    map.samples[i] = lo + t * (hi - lo);
  }
  return map;
}

KeyValues grid_key_values(const OpticalGrid& grid) {
  return {{"width", std::to_string(grid.width)},
          {"height", std::to_string(grid.height)},
          {"pitch", format_double(grid.pitch)},
          {"wavelength", format_double(grid.wavelength)}};
}

OpticalGrid parse_grid(const std::string& text, const std::string& file) {
  const auto kv = parse_key_values(text);
  OpticalGrid g;
  g.width = static_cast<int>(parse_int(require_key(kv, "width", file), file + " width"));
  g.height = static_cast<int>(parse_int(require_key(kv, "height", file), file + " height"));
  g.pitch = parse_double(require_key(kv, "pitch", file), file + " pitch");
  g.wavelength = parse_double(require_key(kv, "wavelength", file), file + " wavelength");
  g.validate();
  return g;
}

std::filesystem::path grid_sidecar(const std::filesystem::path& pfm_path) {
  std::filesystem::path p = pfm_path;
  p.replace_extension(".grid");
  return p;
}

void save_real_image(const std::filesystem::path& path, const RealImage& image) {
  FloatMap map{image.width(), image.height(), image.data()};
  write_file_atomic(path, encode_pfm(map));
  write_file_atomic(grid_sidecar(path), format_key_values(grid_key_values(image.grid())));
}

RealImage load_real_image(const std::filesystem::path& path) {
  const OpticalGrid grid = parse_grid(read_text_file(grid_sidecar(path)), grid_sidecar(path).string());
  FloatMap map = decode_pfm(read_text_file(path));
  if (map.width != grid.width || map.height != grid.height)
    throw ParseError(path.string() + ": raster size disagrees with grid sidecar", 0);
  return RealImage(grid, std::move(map.samples));
}

std::vector<std::filesystem::path> save_complex_field(const std::filesystem::path& stem, const ComplexField& field) {
  std::filesystem::path hdr = stem, re = stem, im = stem;
  hdr += ".hdr";
  re += ".re.pfm";
  im += ".im.pfm";
  FloatMap real_part{field.width(), field.height(), {}}, imag_part{field.width(), field.height(), {}};
  real_part.samples.reserve(field.size());
  imag_part.samples.reserve(field.size());
  for (const auto& v : field.samples()) {
    real_part.samples.push_back(v.real());
    imag_part.samples.push_back(v.imag());
  }
  write_file_atomic(hdr, format_key_values(grid_key_values(field.grid())));
  write_file_atomic(re, encode_pfm(real_part));
  write_file_atomic(im, encode_pfm(imag_part));
  return {hdr, re, im};
}

ComplexField load_complex_field(const std::filesystem::path& stem) {
  std::filesystem::path hdr = stem, re = stem, im = stem;
  hdr += ".hdr";
  re += ".re.pfm";
  im += ".im.pfm";
  const OpticalGrid grid = parse_grid(read_text_file(hdr), hdr.string());
  const FloatMap real_part = decode_pfm(read_text_file(re));
  const FloatMap imag_part = decode_pfm(read_text_file(im));
  if (real_part.width != grid.width || real_part.height != grid.height || imag_part.width != grid.width ||
      imag_part.height != grid.height)
    throw ParseError(stem.string() + ": component size disagrees with header", 0);
  ComplexField field(grid);
  auto dst = field.samples();
  for (std::size_t i = 0; i < dst.size(); ++i) dst[i] = {real_part.samples[i], imag_part.samples[i]};
  return field;
}

void save_pgm16_with_range(const std::filesystem::path& path, const FloatMap& map, double lo, double hi) {
  write_file_atomic(path, encode_pgm16(map, lo, hi));
  std::filesystem::path range = path;
  range += ".range";
  write_file_atomic(range, format_key_values({{"min", format_double(lo)}, {"max", format_double(hi)}}));
}

}  // namespace holodepth::holo

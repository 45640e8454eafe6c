#include "holodepth/stereo/depth_io.hpp"

#include "holodepth/common/error.hpp"
#include "holodepth/common/kv.hpp"
#include "holodepth/holo/image_io.hpp"

namespace holodepth::stereo {

void save_depth_map(const std::filesystem::path& path, const DepthMap& map) {
  if (!map.normalized) {
    holo::save_real_image(path, map.values);
    return;
  }
  const holo::FloatMap fm{map.values.width(), map.values.height(), map.values.data()};
  holo::save_pgm16_with_range(path, fm, 0.0, 1.0);
  write_file_atomic(holo::grid_sidecar(path), format_key_values(holo::grid_key_values(map.values.grid())));
}

DepthMap load_depth_map(const std::filesystem::path& path) {
  if (path.extension() == ".pfm") return {holo::load_real_image(path), false};
  if (path.extension() != ".pgm") throw InvalidArgument("depth map must be .pfm (raw) or .pgm (normalised)");
  std::filesystem::path range = path;
  range += ".range";
  const auto kv = parse_key_values(read_text_file(range));
  const double lo = parse_double(require_key(kv, "min", range.string()), "min");
  const double hi = parse_double(require_key(kv, "max", range.string()), "max");
  const auto grid = holo::parse_grid(read_text_file(holo::grid_sidecar(path)), holo::grid_sidecar(path).string());
  holo::FloatMap fm = holo::decode_pgm16(read_text_file(path), lo, hi);
  if (fm.width != grid.width || fm.height != grid.height)
    throw ParseError(path.string() + ": raster size disagrees with grid sidecar", 0);
  return {holo::RealImage(grid, std::move(fm.samples)), true};
}

}  // namespace holodepth::stereo

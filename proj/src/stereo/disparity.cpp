#include "holodepth/stereo/disparity.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "holodepth/common/error.hpp"
#include "holodepth/common/kv.hpp"

namespace holodepth::stereo {
namespace {

// Per-block mean-subtracted samples and their energy, laid out so the
// score loop reads each block contiguously.
struct CenteredBlocks {
  int k = 0;
  int rows = 0;  // valid centre rows
  int cols = 0;  // valid centre columns
  std::vector<double> samples;
  std::vector<double> energy;

  const double* block(int r, int c) const {
    return samples.data() + (static_cast<std::size_t>(r) * cols + c) * static_cast<std::size_t>(k) * k;
  }
};

CenteredBlocks centered_blocks(const holo::RealImage& image, int k) {
  CenteredBlocks b;
  b.k = k;
  b.rows = image.height() - k + 1;
  b.cols = image.width() - k + 1;
  const std::size_t kk = static_cast<std::size_t>(k) * k;
  b.samples.resize(static_cast<std::size_t>(b.rows) * b.cols * kk);
  b.energy.resize(static_cast<std::size_t>(b.rows) * b.cols);
  for (int r = 0; r < b.rows; ++r)
    for (int c = 0; c < b.cols; ++c) {
      double* dst = b.samples.data() + (static_cast<std::size_t>(r) * b.cols + c) * kk;
      double sum = 0.0;
      bool constant = true;
      for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) {
          sum += image.at(r + i, c + j);
          constant = constant && image.at(r + i, c + j) == image.at(r, c);
        }
      const double mean = sum / static_cast<double>(kk);
      double e = 0.0;
      for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) {
          const double v = image.at(r + i, c + j) - mean;
          dst[i * k + j] = v;
          e += v * v;
        }
      b.energy[static_cast<std::size_t>(r) * b.cols + c] = constant ? 0.0 : e;
    }
  return b;
}

double score(const double* a, double ea, const double* b, double eb, std::size_t n) {
  if (ea == 0.0 || eb == 0.0) return 0.0;
  double cross = 0.0;
  for (std::size_t i = 0; i < n; ++i) cross += a[i] * b[i];
  return cross / std::sqrt(ea * eb);
}

}  // namespace

void DisparityConfig::validate(int width, int height) const {
  if (block_size < 3 || block_size % 2 == 0)
    throw InvalidArgument("disparity: block size must be odd and >= 3, got " + std::to_string(block_size));
  if (block_size > std::min(width, height))
    throw InvalidArgument("disparity: block size " + std::to_string(block_size) + " exceeds the image");
  const int s = resolved_max_shift(width);
  if (s < 1 || s >= width) throw InvalidArgument("disparity: max shift must be in [1, width)");
  if (workers < 1) throw InvalidArgument("disparity: workers must be >= 1");
}

double ncc_score(std::span<const double> reference, std::span<const double> candidate) {
  if (reference.size() != candidate.size() || reference.empty())
    throw InvalidArgument("ncc_score: blocks must have the same non-zero size");
  const auto is_constant = [](std::span<const double> v) {
    return std::all_of(v.begin(), v.end(), [&](double x) { return x == v.front(); });
  };
  if (is_constant(reference) || is_constant(candidate)) return 0.0;
  const double n = static_cast<double>(reference.size());
  double sr = 0.0, sc = 0.0;
  for (std::size_t i = 0; i < reference.size(); ++i) {
    sr += reference[i];
    sc += candidate[i];
  }
  const double mr = sr / n, mc = sc / n;
  double cross = 0.0, er = 0.0, ec = 0.0;
  for (std::size_t i = 0; i < reference.size(); ++i) {
    const double a = reference[i] - mr, b = candidate[i] - mc;
    cross += a * b;
    er += a * a;
    ec += b * b;
  }
  if (er == 0.0 || ec == 0.0) return 0.0;
  return cross / std::sqrt(er * ec);
}

DepthMap disparity_map(const StereoPair& pair, const DisparityConfig& config) {
  if (!(pair.left.grid() == pair.right.grid())) throw InvalidArgument("disparity_map: images are on different grids");
  const int w = pair.left.width(), h = pair.left.height();
  config.validate(w, h);
  const int k = config.block_size, half = k / 2;
  const int max_shift = config.resolved_max_shift(w);

  const CenteredBlocks left = centered_blocks(pair.left, k);
  const CenteredBlocks right = centered_blocks(pair.right, k);
  const std::size_t kk = static_cast<std::size_t>(k) * k;

  // Raw winners on the valid (block-fits) region, indexed by block origin.
  std::vector<double> winners(static_cast<std::size_t>(left.rows) * left.cols, 0.0);
  auto work = [&](int row_begin, int row_end) {
    for (int r = row_begin; r < row_end; ++r)
      for (int c = 0; c < left.cols; ++c) {
        const double* ref = left.block(r, c);
        const double eref = left.energy[static_cast<std::size_t>(r) * left.cols + c];
        double best = -2.0;
        int best_shift = 0;
        const int limit = std::min(max_shift, c);  // candidate origin c - delta >= 0
        for (int d = 0; d <= limit; ++d) {
          const double s = score(ref, eref, right.block(r, c - d),
                                 right.energy[static_cast<std::size_t>(r) * right.cols + (c - d)], kk);
          if (s > best) {
            best = s;
            best_shift = d;
          }
        }
        winners[static_cast<std::size_t>(r) * left.cols + c] = best_shift;
      }
  };
  const int workers = std::min(config.workers, left.rows);
  if (workers <= 1) {
    work(0, left.rows);
  } else {
    std::vector<std::thread> threads;
    for (int t = 0; t < workers; ++t)
      threads.emplace_back(work, left.rows * t / workers, left.rows * (t + 1) / workers);
    for (auto& t : threads) t.join();
  }

  DepthMap map{holo::RealImage(pair.left.grid()), false};
  for (int r = 0; r < h; ++r)
    for (int c = 0; c < w; ++c) {
      const int vr = std::clamp(r - half, 0, left.rows - 1);
      const int vc = std::clamp(c - half, 0, left.cols - 1);
      map.values.at(r, c) = winners[static_cast<std::size_t>(vr) * left.cols + vc];
    }
  return map;
}

DepthMap normalize_depth(const DepthMap& map) {
  DepthMap out{map.values, true};
  const auto [lo, hi] = std::minmax_element(map.values.samples().begin(), map.values.samples().end());
  const double min = *lo, span = *hi - *lo;
  for (double& v : out.values.samples()) v = span > 0.0 ? (v - min) / span : 0.5;
  return out;
}

std::vector<double> extract_profile(const DepthMap& map, int row) {
  if (row < 0 || row >= map.values.height())
    throw InvalidArgument("extract_profile: row " + std::to_string(row) + " outside [0, " +
                          std::to_string(map.values.height()) + ")");
  const auto s = map.values.samples().subspan(static_cast<std::size_t>(row) * map.values.width(),
                                              static_cast<std::size_t>(map.values.width()));
  return {s.begin(), s.end()};
}

std::string format_profile_csv(std::span<const double> profile) {
  std::string out = "column,value\n";
  for (std::size_t c = 0; c < profile.size(); ++c) out += std::to_string(c) + "," + format_double(profile[c]) + "\n";
  return out;
}

std::vector<double> parse_profile_csv(const std::string& text) {
  std::vector<double> values;
  std::size_t offset = 0;
  bool header = true;
  while (offset < text.size()) {
    std::size_t end = text.find('\n', offset);
    if (end == std::string::npos) end = text.size();
    std::string line = text.substr(offset, end - offset);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (header) {
      if (line != "column,value") throw ParseError("profile CSV must start with 'column,value'", offset);
      header = false;
    } else if (!line.empty()) {
      const auto comma = line.find(',');
      if (comma == std::string::npos) throw ParseError("expected 'column,value'", offset);
      try {
        if (parse_int(line.substr(0, comma), "column") != static_cast<long long>(values.size()))
          throw ParseError("profile columns must be 0, 1, 2, ...", offset);
        values.push_back(parse_double(line.substr(comma + 1), "value"));
      } catch (const InvalidArgument& e) {
        throw ParseError(e.what(), offset);
      }
    }
    offset = end + 1;
  }
  if (header) throw ParseError("empty profile file", 0);
  return values;
}

double pearson_correlation(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size() || a.empty()) throw InvalidArgument("pearson_correlation: size mismatch");
  if (std::all_of(a.begin(), a.end(), [&](double x) { return x == a.front(); }) ||
      std::all_of(b.begin(), b.end(), [&](double x) { return x == b.front(); }))
    return 0.0;
  const double n = static_cast<double>(a.size());
  double ma = 0.0, mb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ma += a[i];
    mb += b[i];
  }
  ma /= n;
  mb /= n;
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sab += (a[i] - ma) * (b[i] - mb);
    saa += (a[i] - ma) * (a[i] - ma);
    sbb += (b[i] - mb) * (b[i] - mb);
  }
  if (saa == 0.0 || sbb == 0.0) return 0.0;
  return sab / std::sqrt(saa * sbb);
}

}  // namespace holodepth::stereo

#include "axplore/encode.hpp"

#include <algorithm>
#include <fstream>
#include <iterator>
#include <numeric>
#include <string>

namespace axplore::encode {

namespace {

std::vector<std::uint8_t> slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IdxError(IdxErrorKind::Unreadable, "cannot open " + path.string());
  }
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::uint32_t read_be32(const std::vector<std::uint8_t>& buf, std::size_t offset, const std::filesystem::path& path) {
  if (buf.size() < offset + 4) {
    throw IdxError(IdxErrorKind::TruncatedFile, "truncated header in " + path.string());
  }
  return (std::uint32_t{buf[offset]} << 24) | (std::uint32_t{buf[offset + 1]} << 16) |
         (std::uint32_t{buf[offset + 2]} << 8) | std::uint32_t{buf[offset + 3]};
}

void put_le32(std::ostream& out, std::uint32_t x) {
  const char b[4] = {static_cast<char>(x & 0xff), static_cast<char>((x >> 8) & 0xff),
                     static_cast<char>((x >> 16) & 0xff), static_cast<char>((x >> 24) & 0xff)};
  out.write(b, 4);
}

std::uint32_t get_le32(const std::vector<std::uint8_t>& buf, std::size_t offset) {
  return std::uint32_t{buf[offset]} | (std::uint32_t{buf[offset + 1]} << 8) |
         (std::uint32_t{buf[offset + 2]} << 16) | (std::uint32_t{buf[offset + 3]} << 24);
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Tolerance on the rate_scale * 255 <= 1 bound for floating-point round-off.
constexpr double kRateSlack = 1e-12;

}  // namespace

void EncoderConfig::validate() const {
  if (timesteps < 1) {
    throw ConfigError("encoder needs at least one timestep");
  }
  if (rate_scale < 0.0 || rate_scale * 255.0 > 1.0 + kRateSlack) {
    throw ConfigError("rate_scale must satisfy 0 <= rate_scale * 255 <= 1");
  }
}

std::vector<Image> load_idx(const std::filesystem::path& images_path, const std::filesystem::path& labels_path) {
  const auto img = slurp(images_path);
  const auto lab = slurp(labels_path);

  if (read_be32(img, 0, images_path) != kImagesMagic) {
    throw IdxError(IdxErrorKind::BadMagic, "bad image magic in " + images_path.string());
  }
  if (read_be32(lab, 0, labels_path) != kLabelsMagic) {
    throw IdxError(IdxErrorKind::BadMagic, "bad label magic in " + labels_path.string());
  }
  const std::uint32_t n_images = read_be32(img, 4, images_path);
  const std::uint32_t rows = read_be32(img, 8, images_path);
  const std::uint32_t cols = read_be32(img, 12, images_path);
  const std::uint32_t n_labels = read_be32(lab, 4, labels_path);
  if (rows != kImageSide || cols != kImageSide) {
    throw IdxError(IdxErrorKind::DimensionMismatch, "expected 28x28 images, got " + std::to_string(rows) + "x" +
                                                        std::to_string(cols) + " in " + images_path.string());
  }
  if (n_images != n_labels) {
    throw IdxError(IdxErrorKind::CountMismatch, std::to_string(n_images) + " images but " +
                                                    std::to_string(n_labels) + " labels");
  }
  constexpr std::size_t kImageHeader = 16;
  constexpr std::size_t kLabelHeader = 8;
  if (img.size() < kImageHeader + std::size_t{n_images} * kPixels) {
    throw IdxError(IdxErrorKind::TruncatedFile, "image records cut short in " + images_path.string());
  }
  if (lab.size() < kLabelHeader + n_labels) {
    throw IdxError(IdxErrorKind::TruncatedFile, "label records cut short in " + labels_path.string());
  }

  std::vector<Image> out(n_images);
  for (std::size_t n = 0; n < n_images; ++n) {
    const auto* src = img.data() + kImageHeader + n * kPixels;
    std::copy(src, src + kPixels, out[n].pixels.begin());
    out[n].label = lab[kLabelHeader + n];
  }
  return out;
}

double keyed_uniform(std::uint64_t seed, std::uint64_t image, std::uint64_t pixel, std::uint64_t step) {
  std::uint64_t h = splitmix64(seed);
  h = splitmix64(h ^ image);
  h = splitmix64(h ^ pixel);
  h = splitmix64(h ^ step);
  return static_cast<double>(h >> 11) * 0x1.0p-53;
}

snn::SpikeTrain encode(const Image& image, std::uint64_t image_index, const EncoderConfig& config) {
  config.validate();
  snn::SpikeTrain train(config.timesteps, kPixels);
  for (std::size_t p = 0; p < kPixels; ++p) {
    const double prob = config.rate_scale * image.pixels[p];
    if (prob <= 0.0) {
      continue;
    }
    for (std::size_t t = 0; t < config.timesteps; ++t) {
      if (prob >= 1.0 || keyed_uniform(config.seed, image_index, p, t) < prob) {
        train.set(t, p);
      }
    }
  }
  return train;
}

double expected_spikes(const Image& image, const EncoderConfig& config) {
  double sum = 0.0;
  for (auto px : image.pixels) {
    sum += std::min(1.0, config.rate_scale * px);
  }
  return sum * static_cast<double>(config.timesteps);
}

double calibrate_rate(std::span<const Image> images, std::size_t timesteps, double target_total) {
  if (!(target_total > 0.0)) {
    throw UnreachableTarget("target spike count must be positive");
  }
  if (images.empty() || timesteps == 0) {
    throw UnreachableTarget("calibration needs at least one image and one timestep");
  }
  double intensity = 0.0;
  for (const auto& img : images) {
    intensity += std::accumulate(img.pixels.begin(), img.pixels.end(), 0.0);
  }
  intensity /= static_cast<double>(images.size());
  if (intensity <= 0.0) {
    throw UnreachableTarget("images carry no intensity");
  }
  const double rate = target_total / (static_cast<double>(timesteps) * intensity);
  if (rate * 255.0 > 1.0 + kRateSlack) {
    throw UnreachableTarget("target needs rate_scale " + std::to_string(rate) + " above the 1/255 bound");
  }
  return std::min(rate, 1.0 / 255.0);
}

void write_cache(const std::filesystem::path& path, const snn::SpikeTrain& train) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw Error("cannot write " + path.string());
  }
  out.write("SPKT", 4);
  put_le32(out, kCacheVersion);
  put_le32(out, static_cast<std::uint32_t>(train.steps()));
  put_le32(out, static_cast<std::uint32_t>(train.width()));
  const std::size_t row_bytes = (train.width() + 7) / 8;
  std::vector<char> row(row_bytes);
  for (std::size_t t = 0; t < train.steps(); ++t) {
    std::fill(row.begin(), row.end(), 0);
    for (std::size_t j = 0; j < train.width(); ++j) {
      if (train.get(t, j)) {
        row[j / 8] = static_cast<char>(row[j / 8] | (1 << (j % 8)));
      }
    }
    out.write(row.data(), static_cast<std::streamsize>(row.size()));
  }
  if (!out) {
    throw Error("failed writing " + path.string());
  }
}

snn::SpikeTrain read_cache(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error("cannot open spike cache " + path.string());
  }
  const std::vector<std::uint8_t> buf{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  if (buf.size() < 16 || !std::equal(buf.begin(), buf.begin() + 4, "SPKT")) {
    throw Error("not a spike cache: " + path.string());
  }
  if (get_le32(buf, 4) != kCacheVersion) {
    throw Error("unsupported spike cache version in " + path.string());
  }
  const std::size_t steps = get_le32(buf, 8);
  const std::size_t width = get_le32(buf, 12);
  const std::size_t row_bytes = (width + 7) / 8;
  if (buf.size() != 16 + steps * row_bytes) {
    throw Error("spike cache size does not match its header: " + path.string());
  }
  snn::SpikeTrain train(steps, width);
  for (std::size_t t = 0; t < steps; ++t) {
    const auto* row = buf.data() + 16 + t * row_bytes;
    for (std::size_t j = 0; j < width; ++j) {
      if ((row[j / 8] >> (j % 8)) & 1) {
        train.set(t, j);
      }
    }
  }
  return train;
}

}  // namespace axplore::encode

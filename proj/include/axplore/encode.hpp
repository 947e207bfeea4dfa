#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "axplore/error.hpp"
#include "axplore/snn.hpp"

// MNIST ingestion and Poisson rate coding of images into spike trains.
namespace axplore::encode {

inline constexpr std::size_t kImageSide = 28;
inline constexpr std::size_t kPixels = kImageSide * kImageSide;

struct Image {
  std::array<std::uint8_t, kPixels> pixels{};
  std::uint8_t label = 0;
};

struct EncoderConfig {
  std::size_t timesteps = 350;
  // Per-step spike probability is rate_scale * intensity; must keep
  // rate_scale * 255 <= 1.
  double rate_scale = 0.0;
  std::uint64_t seed = 0;

  void validate() const;
};

enum class IdxErrorKind { BadMagic, DimensionMismatch, CountMismatch, TruncatedFile, Unreadable };

class IdxError : public Error {
 public:
  IdxError(IdxErrorKind kind, const std::string& what) : Error(what), kind_(kind) {}
  IdxErrorKind kind() const { return kind_; }

 private:
  IdxErrorKind kind_;
};

class UnreachableTarget : public Error {
 public:
  using Error::Error;
};

inline constexpr std::uint32_t kImagesMagic = 0x00000803;
inline constexpr std::uint32_t kLabelsMagic = 0x00000801;

// Reads an IDX3 image file and the matching IDX1 label file.
std::vector<Image> load_idx(const std::filesystem::path& images, const std::filesystem::path& labels);

// Bernoulli draw per pixel per step; the draw for (seed, image, pixel, step)
// does not depend on any other draw.
snn::SpikeTrain encode(const Image& image, std::uint64_t image_index, const EncoderConfig& config);

// rate_scale giving target_total expected spikes per image over `timesteps`
// steps, from the mean summed intensity of `images`.
double calibrate_rate(std::span<const Image> images, std::size_t timesteps, double target_total);

// Expected spikes for one image under the given config.
double expected_spikes(const Image& image, const EncoderConfig& config);

// Counter-based uniform draw in [0, 1).
double keyed_uniform(std::uint64_t seed, std::uint64_t image, std::uint64_t pixel, std::uint64_t step);

// Spike-train cache: 16-byte header ("SPKT", u32 version, u32 steps,
// u32 width; little-endian) then one LSB-first bitset of ceil(width/8)
// bytes per step.
inline constexpr std::uint32_t kCacheVersion = 1;
void write_cache(const std::filesystem::path& path, const snn::SpikeTrain& train);
snn::SpikeTrain read_cache(const std::filesystem::path& path);

}  // namespace axplore::encode

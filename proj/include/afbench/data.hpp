#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "afbench/matrix.hpp"
#include "afbench/random.hpp"

namespace afbench {

/// Features in [0, 1], one row per sample, with labels in [0, num_classes).
struct Dataset {
  Matrix features;
  std::vector<int> labels;
  std::size_t num_classes = 0;

  [[nodiscard]] std::size_t size() const noexcept { return labels.size(); }
  [[nodiscard]] std::size_t dim() const noexcept { return features.cols(); }

  /// Throws DomainError if any invariant is broken.
  void validate() const;

  friend bool operator==(const Dataset&, const Dataset&) = default;
};

/// Reads an IDX image file (magic 0x00000803, dims n x rows x cols, unsigned
/// bytes) and an IDX label file (magic 0x00000801). Pixels are scaled by 1/255.
/// num_classes defaults to max label + 1.
Dataset load_idx(const std::filesystem::path& images_path, const std::filesystem::path& labels_path,
                 std::optional<std::size_t> num_classes = std::nullopt);

/// Inverse of load_idx; features are written as round(v * 255).
void write_idx(const std::filesystem::path& images_path, const std::filesystem::path& labels_path,
               const Dataset& data, std::size_t image_rows, std::size_t image_cols);

/// Gaussian blobs around class means drawn uniformly from [0, 1]^d, clamped to
/// [0, 1]. Sample i belongs to class i % classes.
Dataset synth_blobs(std::size_t n, std::size_t d, std::size_t classes, double spread,
                    RandomStream& rng);

struct Batch {
  Matrix x;
  std::vector<int> labels;
};

/// One random permutation of 0..n-1 cut into contiguous chunks; the last
/// chunk may be short.
std::vector<std::vector<std::size_t>> batch_indices(std::size_t n, std::size_t batch_size,
                                                    RandomStream& rng);
std::vector<Batch> batches(const Dataset& data, std::size_t batch_size, RandomStream& rng);

Dataset subset(const Dataset& data, std::span<const std::size_t> indices);
Batch gather(const Dataset& data, std::span<const std::size_t> indices);

/// Shuffled split into (train, test); test gets round(test_fraction * n) samples.
std::pair<Dataset, Dataset> split(const Dataset& data, double test_fraction, RandomStream& rng);

}  // namespace afbench

#include "afbench/data.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iterator>

#include "afbench/error.hpp"

namespace afbench {

namespace {

constexpr std::uint32_t kImageMagic = 0x00000803;
constexpr std::uint32_t kLabelMagic = 0x00000801;

std::vector<unsigned char> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::uint32_t read_be32(const std::vector<unsigned char>& bytes, std::size_t offset,
                        const std::filesystem::path& path) {
  if (bytes.size() < offset + 4) {
    throw FormatError("'" + path.string() + "': truncated header");
  }
  return (std::uint32_t{bytes[offset]} << 24) | (std::uint32_t{bytes[offset + 1]} << 16) |
         (std::uint32_t{bytes[offset + 2]} << 8) | std::uint32_t{bytes[offset + 3]};
}

void check_magic(const std::vector<unsigned char>& bytes, std::uint32_t expected,
                 const std::filesystem::path& path) {
  const std::uint32_t magic = read_be32(bytes, 0, path);
  if (magic != expected) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "bad magic bytes %02x %02x %02x %02x (expected %08x)",
                  bytes[0], bytes[1], bytes[2], bytes[3], expected);
    throw FormatError("'" + path.string() + "': " + buf);
  }
}

void put_be32(std::ofstream& out, std::uint32_t v) {
  const std::array<char, 4> b = {static_cast<char>(v >> 24), static_cast<char>(v >> 16),
                                 static_cast<char>(v >> 8), static_cast<char>(v)};
  out.write(b.data(), 4);
}

}  // namespace

void Dataset::validate() const {
  if (features.rows() != labels.size()) {
    throw DomainError("dataset: " + std::to_string(features.rows()) + " feature rows but " +
                      std::to_string(labels.size()) + " labels");
  }
  if (num_classes == 0) throw DomainError("dataset: num_classes must be positive");
  for (double v : features.values()) {
    if (!(v >= 0.0 && v <= 1.0)) {
      throw DomainError("dataset: feature value " + std::to_string(v) + " outside [0, 1]");
    }
  }
  for (int y : labels) {
    if (y < 0 || static_cast<std::size_t>(y) >= num_classes) {
      throw DomainError("dataset: label " + std::to_string(y) + " outside [0, " +
                        std::to_string(num_classes) + ")");
    }
  }
}

Dataset load_idx(const std::filesystem::path& images_path, const std::filesystem::path& labels_path,
                 std::optional<std::size_t> num_classes) {
  const auto images = read_file(images_path);
  check_magic(images, kImageMagic, images_path);
  const std::size_t n = read_be32(images, 4, images_path);
  const std::size_t rows = read_be32(images, 8, images_path);
  const std::size_t cols = read_be32(images, 12, images_path);
  constexpr std::size_t kImageHeader = 16;
  if (images.size() != kImageHeader + n * rows * cols) {
    throw FormatError("'" + images_path.string() + "': expected " +
                      std::to_string(n * rows * cols) + " pixel bytes, found " +
                      std::to_string(images.size() - std::min(images.size(), kImageHeader)));
  }

  const auto label_bytes = read_file(labels_path);
  check_magic(label_bytes, kLabelMagic, labels_path);
  const std::size_t n_labels = read_be32(label_bytes, 4, labels_path);
  constexpr std::size_t kLabelHeader = 8;
  if (label_bytes.size() != kLabelHeader + n_labels) {
    throw FormatError("'" + labels_path.string() + "': header declares " +
                      std::to_string(n_labels) + " labels, file holds " +
                      std::to_string(label_bytes.size() - std::min(label_bytes.size(), kLabelHeader)));
  }
  if (n_labels != n) {
    throw FormatError("label count " + std::to_string(n_labels) + " does not match image count " +
                      std::to_string(n));
  }

  Dataset data;
  const std::size_t d = rows * cols;
  data.features = Matrix(n, d);
  auto values = data.features.values();
  for (std::size_t i = 0; i < n * d; ++i) values[i] = images[kImageHeader + i] / 255.0;
  data.labels.resize(n);
  int max_label = -1;
  for (std::size_t i = 0; i < n; ++i) {
    data.labels[i] = label_bytes[kLabelHeader + i];
    max_label = std::max(max_label, data.labels[i]);
  }
  data.num_classes = num_classes.value_or(static_cast<std::size_t>(max_label + 1));
  data.validate();
  return data;
}

void write_idx(const std::filesystem::path& images_path, const std::filesystem::path& labels_path,
               const Dataset& data, std::size_t image_rows, std::size_t image_cols) {
  data.validate();
  if (image_rows * image_cols != data.dim()) {
    throw ShapeError("write_idx: " + std::to_string(image_rows) + "x" + std::to_string(image_cols) +
                     " images do not match " + std::to_string(data.dim()) + " features");
  }
  for (int y : data.labels) {
    if (y > 255) throw DomainError("write_idx: label " + std::to_string(y) + " exceeds one byte");
  }
  std::ofstream img(images_path, std::ios::binary);
  if (!img) throw IoError("cannot write '" + images_path.string() + "'");
  put_be32(img, kImageMagic);
  put_be32(img, static_cast<std::uint32_t>(data.size()));
  put_be32(img, static_cast<std::uint32_t>(image_rows));
  put_be32(img, static_cast<std::uint32_t>(image_cols));
  for (double v : data.features.values()) {
    img.put(static_cast<char>(static_cast<unsigned char>(std::lround(v * 255.0))));
  }
  std::ofstream lab(labels_path, std::ios::binary);
  if (!lab) throw IoError("cannot write '" + labels_path.string() + "'");
  put_be32(lab, kLabelMagic);
  put_be32(lab, static_cast<std::uint32_t>(data.size()));
  for (int y : data.labels) lab.put(static_cast<char>(static_cast<unsigned char>(y)));
  if (!img || !lab) throw IoError("write_idx: write failed");
}

Dataset synth_blobs(std::size_t n, std::size_t d, std::size_t classes, double spread,
                    RandomStream& rng) {
  if (classes == 0 || n < classes || d == 0 || !(spread > 0.0)) {
    throw DomainError("synth_blobs: need n >= classes >= 1, d >= 1, spread > 0 (got n=" +
                      std::to_string(n) + ", d=" + std::to_string(d) + ", classes=" +
                      std::to_string(classes) + ", spread=" + std::to_string(spread) + ")");
  }
  const Matrix means = rng_uniform(rng, 0.0, 1.0, classes, d);
  Dataset data;
  data.num_classes = classes;
  data.features = Matrix(n, d);
  data.labels.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t c = i % classes;
    data.labels[i] = static_cast<int>(c);
    auto row = data.features.row(i);
    for (std::size_t j = 0; j < d; ++j) {
      row[j] = std::clamp(means(c, j) + spread * rng.normal(), 0.0, 1.0);
    }
  }
  return data;
}

std::vector<std::vector<std::size_t>> batch_indices(std::size_t n, std::size_t batch_size,
                                                    RandomStream& rng) {
  if (batch_size == 0) throw DomainError("batches: batch size must be positive");
  const std::vector<std::size_t> order = rng.permutation(n);
  std::vector<std::vector<std::size_t>> out;
  for (std::size_t start = 0; start < n; start += batch_size) {
    const std::size_t stop = std::min(n, start + batch_size);
    out.emplace_back(order.begin() + static_cast<std::ptrdiff_t>(start),
                     order.begin() + static_cast<std::ptrdiff_t>(stop));
  }
  return out;
}

Batch gather(const Dataset& data, std::span<const std::size_t> indices) {
  Batch b{Matrix(indices.size(), data.dim()), std::vector<int>(indices.size())};
  for (std::size_t i = 0; i < indices.size(); ++i) {
    const auto src = data.features.row(indices[i]);
    std::copy(src.begin(), src.end(), b.x.row(i).begin());
    b.labels[i] = data.labels[indices[i]];
  }
  return b;
}

std::vector<Batch> batches(const Dataset& data, std::size_t batch_size, RandomStream& rng) {
  std::vector<Batch> out;
  for (const auto& idx : batch_indices(data.size(), batch_size, rng)) {
    out.push_back(gather(data, idx));
  }
  return out;
}

Dataset subset(const Dataset& data, std::span<const std::size_t> indices) {
  Batch b = gather(data, indices);
  return Dataset{std::move(b.x), std::move(b.labels), data.num_classes};
}

std::pair<Dataset, Dataset> split(const Dataset& data, double test_fraction, RandomStream& rng) {
  if (!(test_fraction >= 0.0 && test_fraction < 1.0)) {
    throw DomainError("split: test fraction " + std::to_string(test_fraction) +
                      " outside [0, 1)");
  }
  const std::vector<std::size_t> order = rng.permutation(data.size());
  const auto n_test = static_cast<std::size_t>(
      std::llround(test_fraction * static_cast<double>(data.size())));
  const std::span<const std::size_t> all(order);
  return {subset(data, all.subspan(n_test)), subset(data, all.first(n_test))};
}

}  // namespace afbench

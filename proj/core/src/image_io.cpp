#include "hoifit/image_io.hpp"

#include <png.h>

#include <cstdio>
#include <cstring>
#include <fstream>
#include <memory>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace hoifit {

namespace {

[[noreturn]] void fail(const std::filesystem::path& path, const std::string& why) {
  throw std::runtime_error(path.string() + ": " + why);
}

struct FileCloser {
  void operator()(std::FILE* f) const {
    if (f) std::fclose(f);
  }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

// Reads a grayscale PNG at the requested bit depth (8 or 16), expanding or
// stripping as needed. Returns row-major samples.
std::vector<uint16_t> read_gray_png(const std::filesystem::path& path, int want_bits,
                                    int& width, int& height) {
  FilePtr fp(std::fopen(path.string().c_str(), "rb"));
  if (!fp) fail(path, "cannot open");

  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png_create_info_struct(png);
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    fail(path, "libpng read error");
  }
  png_init_io(png, fp.get());
  png_read_info(png, info);

  width = png_get_image_width(png, info);
  height = png_get_image_height(png, info);
  int bit_depth = png_get_bit_depth(png, info);
  int color_type = png_get_color_type(png, info);

  if (color_type == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
  if (color_type & PNG_COLOR_MASK_COLOR) png_set_rgb_to_gray_fixed(png, 1, -1, -1);
  if (color_type & PNG_COLOR_MASK_ALPHA) png_set_strip_alpha(png);
  if (want_bits == 16 && bit_depth < 16) png_set_expand_gray_1_2_4_to_8(png);
  if (want_bits == 8 && bit_depth == 16) png_set_strip_16(png);
  if (want_bits == 16) png_set_swap(png);  // PNG stores big-endian
  png_read_update_info(png, info);

  const size_t bytes_per_sample = want_bits / 8;
  std::vector<uint16_t> out(static_cast<size_t>(width) * height);
  std::vector<uint8_t> row(static_cast<size_t>(width) * bytes_per_sample * 2);
  for (int y = 0; y < height; ++y) {
    png_read_row(png, row.data(), nullptr);
    for (int x = 0; x < width; ++x) {
      uint16_t v;
      if (want_bits == 16) {
        if (bit_depth < 16) {
          v = static_cast<uint16_t>(row[x]);
        } else {
          std::memcpy(&v, row.data() + 2 * x, 2);
        }
      } else {
        v = row[x];
      }
      out[static_cast<size_t>(y) * width + x] = v;
    }
  }
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);
  return out;
}

void write_gray_png(const std::filesystem::path& path, const uint16_t* samples,
                    int width, int height, int bits) {
  FilePtr fp(std::fopen(path.string().c_str(), "wb"));
  if (!fp) fail(path, "cannot open for writing");

  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  png_infop info = png_create_info_struct(png);
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    fail(path, "libpng write error");
  }
  png_init_io(png, fp.get());
  png_set_IHDR(png, info, width, height, bits, PNG_COLOR_TYPE_GRAY, PNG_INTERLACE_NONE,
               PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  if (bits == 16) png_set_swap(png);

  std::vector<uint8_t> row(static_cast<size_t>(width) * bits / 8);
  for (int y = 0; y < height; ++y) {
    if (bits == 16) {
      std::memcpy(row.data(), samples + static_cast<size_t>(y) * width, row.size());
    } else {
      for (int x = 0; x < width; ++x) {
        row[x] = static_cast<uint8_t>(samples[static_cast<size_t>(y) * width + x]);
      }
    }
    png_write_row(png, row.data());
  }
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
}

}  // namespace

DepthFrame load_depth_png(const std::filesystem::path& path) {
  int width, height;
  auto samples = read_gray_png(path, 16, width, height);
  DepthFrame f = DepthFrame::zeros(width, height);
  for (size_t i = 0; i < samples.size(); ++i) {
    f.depth[i] = samples[i] / 1000.0f;  // millimeters to meters, 0 stays invalid
  }
  return f;
}

void save_depth_png(const DepthFrame& depth, const std::filesystem::path& path) {
  std::vector<uint16_t> samples(depth.depth.size());
  for (size_t i = 0; i < samples.size(); ++i) {
    float mm = depth.depth[i] * 1000.0f;
    if (!(mm > 0.0f) || !std::isfinite(mm)) {
      samples[i] = 0;
    } else {
      samples[i] = static_cast<uint16_t>(std::min(65535.0f, mm + 0.5f));
    }
  }
  write_gray_png(path, samples.data(), depth.width, depth.height, 16);
}

DepthFrame load_depth_raw(const std::filesystem::path& path) {
  auto sidecar = path;
  sidecar.replace_extension(".json");
  std::ifstream meta(sidecar);
  if (!meta) fail(sidecar, "missing raw depth sidecar");
  nlohmann::json j = nlohmann::json::parse(meta);
  DepthFrame f = DepthFrame::zeros(j.at("width").get<int>(), j.at("height").get<int>());
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(path, "cannot open");
  in.read(reinterpret_cast<char*>(f.depth.data()),
          static_cast<std::streamsize>(f.depth.size() * sizeof(float)));
  if (!in) fail(path, "truncated raw depth payload");
  return f;
}

void save_depth_raw(const DepthFrame& depth, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(path, "cannot open for writing");
  out.write(reinterpret_cast<const char*>(depth.depth.data()),
            static_cast<std::streamsize>(depth.depth.size() * sizeof(float)));
  auto sidecar = path;
  sidecar.replace_extension(".json");
  std::ofstream meta(sidecar);
  meta << nlohmann::json{{"width", depth.width}, {"height", depth.height}}.dump(2) << "\n";
}

DepthFrame load_depth(const std::filesystem::path& path) {
  auto ext = path.extension().string();
  if (ext == ".png") return load_depth_png(path);
  if (ext == ".raw") return load_depth_raw(path);
  fail(path, "unsupported depth format (expected .png or .raw)");
}

BinaryMask load_mask_png(const std::filesystem::path& path) {
  int width, height;
  auto samples = read_gray_png(path, 8, width, height);
  BinaryMask m = BinaryMask::zeros(width, height);
  for (size_t i = 0; i < samples.size(); ++i) m.data[i] = samples[i] ? 255 : 0;
  return m;
}

void save_mask_png(const BinaryMask& mask, const std::filesystem::path& path) {
  std::vector<uint16_t> samples(mask.data.size());
  for (size_t i = 0; i < samples.size(); ++i) samples[i] = mask.data[i] ? 255 : 0;
  write_gray_png(path, samples.data(), mask.width, mask.height, 8);
}

}  // namespace hoifit

#include "strkit/imageio.hpp"

#include <png.h>

#include <cstdio>
#include <cstring>
#include <memory>

#include <jpeglib.h>

#include "strkit/color.hpp"

namespace strkit {
namespace {

struct FileCloser {
  void operator()(std::FILE* f) const {
    if (f) std::fclose(f);
  }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

FilePtr open_file(const std::filesystem::path& path, const char* mode) {
  FilePtr f(std::fopen(path.string().c_str(), mode));
  if (!f) {
    if (mode[0] == 'r')
      throw Error(ErrorCode::NotFound, "cannot open " + path.string());
    throw Error(ErrorCode::IoError, "cannot write " + path.string());
  }
  return f;
}

bool is_png(const unsigned char* magic, std::size_t n) {
  return n >= 8 && png_sig_cmp(magic, 0, 8) == 0;
}

bool is_jpeg(const unsigned char* magic, std::size_t n) {
  return n >= 2 && magic[0] == 0xFF && magic[1] == 0xD8;
}

RgbImage decode_png(std::FILE* f, const std::filesystem::path& path) {
  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!png) throw Error(ErrorCode::DecodeError, "libpng init failed");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_read_struct(&png, nullptr, nullptr);
    throw Error(ErrorCode::DecodeError, "libpng init failed");
  }
  std::vector<png_bytep> rows;
  RgbImage img;
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw Error(ErrorCode::DecodeError, "corrupt PNG: " + path.string());
  }
  png_init_io(png, f);
  png_read_info(png, info);

  // normalize anything decodable to 8-bit RGB
  png_set_palette_to_rgb(png);
  png_set_expand_gray_1_2_4_to_8(png);
  if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(png);
  png_set_strip_16(png);
  png_set_strip_alpha(png);
  png_set_gray_to_rgb(png);
  png_read_update_info(png, info);

  const png_uint_32 w = png_get_image_width(png, info);
  const png_uint_32 h = png_get_image_height(png, info);
  if (w < 1 || h < 1 || png_get_channels(png, info) != 3) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw Error(ErrorCode::DecodeError, "unsupported PNG layout: " + path.string());
  }
  img = RgbImage(static_cast<int>(w), static_cast<int>(h));
  rows.resize(h);
  for (png_uint_32 y = 0; y < h; ++y) rows[y] = img.data.data() + img.idx(0, static_cast<int>(y));
  png_read_image(png, rows.data());
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);
  return img;
}

struct JpegErrorMgr {
  jpeg_error_mgr pub;
  jmp_buf jump;
};

void jpeg_error_exit(j_common_ptr cinfo) {
  auto* mgr = reinterpret_cast<JpegErrorMgr*>(cinfo->err);
  longjmp(mgr->jump, 1);
}

RgbImage decode_jpeg(std::FILE* f, const std::filesystem::path& path) {
  jpeg_decompress_struct cinfo;
  JpegErrorMgr err;
  cinfo.err = jpeg_std_error(&err.pub);
  err.pub.error_exit = jpeg_error_exit;
  if (setjmp(err.jump)) {
    jpeg_destroy_decompress(&cinfo);
    throw Error(ErrorCode::DecodeError, "corrupt JPEG: " + path.string());
  }
  jpeg_create_decompress(&cinfo);
  jpeg_stdio_src(&cinfo, f);
  jpeg_read_header(&cinfo, TRUE);
  cinfo.out_color_space = JCS_RGB;
  jpeg_start_decompress(&cinfo);
  RgbImage img(static_cast<int>(cinfo.output_width), static_cast<int>(cinfo.output_height));
  while (cinfo.output_scanline < cinfo.output_height) {
    JSAMPROW row = img.data.data() + img.idx(0, static_cast<int>(cinfo.output_scanline));
    jpeg_read_scanlines(&cinfo, &row, 1);
  }
  jpeg_finish_decompress(&cinfo);
  jpeg_destroy_decompress(&cinfo);
  return img;
}

// type: PNG_COLOR_TYPE_RGB / _GRAY; depth 8 or 16. Rows must match.
void write_png_rows(const std::filesystem::path& path, int width, int height,
                    int color_type, int bit_depth,
                    const std::vector<png_bytep>& rows) {
  FilePtr f = open_file(path, "wb");
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!png) throw Error(ErrorCode::IoError, "libpng init failed");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_write_struct(&png, nullptr);
    throw Error(ErrorCode::IoError, "libpng init failed");
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw Error(ErrorCode::IoError, "PNG write failed: " + path.string());
  }
  png_init_io(png, f.get());
  png_set_IHDR(png, info, width, height, bit_depth, color_type,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
               PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  if (bit_depth == 16) png_set_swap(png);  // rows carry native-endian uint16
  png_write_image(png, const_cast<png_bytepp>(rows.data()));
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
}

RgbImage load_rgb_any(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path))
    throw Error(ErrorCode::NotFound, path.string());
  FilePtr f = open_file(path, "rb");
  unsigned char magic[8] = {};
  const std::size_t got = std::fread(magic, 1, sizeof(magic), f.get());
  std::rewind(f.get());
  if (is_png(magic, got)) return decode_png(f.get(), path);
  if (is_jpeg(magic, got)) return decode_jpeg(f.get(), path);
  throw Error(ErrorCode::DecodeError, "not a PNG or JPEG: " + path.string());
}

}  // namespace

RgbImage load_rgb(const std::filesystem::path& path) { return load_rgb_any(path); }

GrayImage load_gray(const std::filesystem::path& path) {
  return rgb_to_gray(load_rgb_any(path));
}

BinaryMask load_mask(const std::filesystem::path& path) {
  const GrayImage g = load_gray(path);
  return threshold(g, 128);
}

void save_png(const std::filesystem::path& path, const RgbImage& img) {
  std::vector<png_bytep> rows(img.height);
  for (int y = 0; y < img.height; ++y)
    rows[y] = const_cast<png_bytep>(img.data.data() + img.idx(0, y));
  write_png_rows(path, img.width, img.height, PNG_COLOR_TYPE_RGB, 8, rows);
}

void save_png(const std::filesystem::path& path, const GrayImage& img) {
  std::vector<png_bytep> rows(img.height);
  for (int y = 0; y < img.height; ++y)
    rows[y] = const_cast<png_bytep>(img.data.data() + img.idx(0, y));
  write_png_rows(path, img.width, img.height, PNG_COLOR_TYPE_GRAY, 8, rows);
}

void save_png(const std::filesystem::path& path, const BinaryMask& mask) {
  GrayImage g(mask.width, mask.height);
  for (std::size_t i = 0; i < mask.data.size(); ++i)
    g.data[i] = mask.data[i] ? 255 : 0;
  save_png(path, g);
}

void save_label_png16(const std::filesystem::path& path, const LabelMap& labels) {
  std::vector<std::uint16_t> buf(labels.pixel_count());
  for (std::size_t i = 0; i < buf.size(); ++i) {
    const std::int32_t v = labels.labels[i];
    buf[i] = static_cast<std::uint16_t>(v < 0 ? 0 : (v > 65535 ? 65535 : v));
  }
  std::vector<png_bytep> rows(labels.height);
  for (int y = 0; y < labels.height; ++y)
    rows[y] = reinterpret_cast<png_bytep>(buf.data() + static_cast<std::size_t>(y) * labels.width);
  write_png_rows(path, labels.width, labels.height, PNG_COLOR_TYPE_GRAY, 16, rows);
}

}  // namespace strkit

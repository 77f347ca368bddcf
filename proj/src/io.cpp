#include "parallax/io.hpp"

#include <algorithm>
#include <cmath>
#include <csetjmp>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include <jpeglib.h>
#include <png.h>

#include <json.hpp>

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace parallax {

namespace {

std::vector<std::uint8_t> slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open " + path.string());
    std::vector<std::uint8_t> buf((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
    if (in.bad()) throw InputError("cannot read " + path.string());
    return buf;
}

bool has_magic(const std::vector<std::uint8_t>& buf, std::initializer_list<int> magic) {
    if (buf.size() < magic.size()) return false;
    std::size_t i = 0;
    for (int b : magic) {
        if (buf[i++] != static_cast<std::uint8_t>(b)) return false;
    }
    return true;
}

// ---------------------------------------------------------------- PNG read

struct PngReadCtx {
    const std::uint8_t* data;
    std::size_t size;
    std::size_t pos;
};

void png_mem_read(png_structp png, png_bytep out, png_size_t n) {
    auto* ctx = static_cast<PngReadCtx*>(png_get_io_ptr(png));
    if (ctx->pos + n > ctx->size) png_error(png, "unexpected end of data");
    std::memcpy(out, ctx->data + ctx->pos, n);
    ctx->pos += n;
}

void png_quiet_warn(png_structp, png_const_charp) {}

struct PngGray {
    int width = 0;
    int height = 0;
    int bit_depth = 0;            // 8 or 16 after transforms
    std::vector<std::uint16_t> samples;  // row-major
};

// Grayscale or palette-index raster; rejects RGB content.
PngGray decode_png_gray(const std::vector<std::uint8_t>& buf, const fs::path& path) {
    PngGray out;
    std::vector<std::uint8_t> rows;
    std::vector<png_bytep> row_ptrs;

    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!png) throw InputError("libpng init failed for " + path.string());
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_read_struct(&png, nullptr, nullptr);
        throw InputError("libpng init failed for " + path.string());
    }
    png_set_error_fn(png, png_get_error_ptr(png), nullptr, png_quiet_warn);
    PngReadCtx ctx{buf.data(), buf.size(), 0};

    if (setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw InputError("undecodable or truncated PNG: " + path.string());
    }

    png_set_read_fn(png, &ctx, png_mem_read);
    png_read_info(png, info);

    const int color = png_get_color_type(png, info);
    const int depth = png_get_bit_depth(png, info);
    if (color == PNG_COLOR_TYPE_RGB || color == PNG_COLOR_TYPE_RGB_ALPHA) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw InputError("expected a grayscale raster, got color: " + path.string());
    }
    if (color == PNG_COLOR_TYPE_PALETTE) {
        png_set_packing(png);  // raw palette indices, one per byte
    } else if (depth < 8) {
        png_set_expand_gray_1_2_4_to_8(png);
    }
    if (color == PNG_COLOR_TYPE_GRAY_ALPHA) {
        std::cerr << "warning: " << path.string() << ": alpha channel dropped\n";
        png_set_strip_alpha(png);
    }
    png_read_update_info(png, info);

    out.width = static_cast<int>(png_get_image_width(png, info));
    out.height = static_cast<int>(png_get_image_height(png, info));
    out.bit_depth = png_get_bit_depth(png, info);
    const std::size_t rowbytes = png_get_rowbytes(png, info);
    rows.resize(rowbytes * out.height);
    row_ptrs.resize(out.height);
    for (int r = 0; r < out.height; ++r) row_ptrs[r] = rows.data() + rowbytes * r;
    png_read_image(png, row_ptrs.data());
    png_read_end(png, nullptr);
    png_destroy_read_struct(&png, &info, nullptr);

    out.samples.resize(static_cast<std::size_t>(out.width) * out.height);
    for (int r = 0; r < out.height; ++r) {
        const std::uint8_t* row = rows.data() + rowbytes * r;
        for (int c = 0; c < out.width; ++c) {
            std::uint16_t v;
            if (out.bit_depth == 16) {
                v = static_cast<std::uint16_t>((row[2 * c] << 8) | row[2 * c + 1]);
            } else {
                v = row[c];
            }
            out.samples[static_cast<std::size_t>(r) * out.width + c] = v;
        }
    }
    return out;
}

RgbImage decode_png_rgb(const std::vector<std::uint8_t>& buf, const fs::path& path) {
    RgbImage out;
    std::vector<std::uint8_t> rows;
    std::vector<png_bytep> row_ptrs;

    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!png) throw InputError("libpng init failed for " + path.string());
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_read_struct(&png, nullptr, nullptr);
        throw InputError("libpng init failed for " + path.string());
    }
    png_set_error_fn(png, png_get_error_ptr(png), nullptr, png_quiet_warn);
    PngReadCtx ctx{buf.data(), buf.size(), 0};

    if (setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw InputError("undecodable or truncated PNG: " + path.string());
    }

    png_set_read_fn(png, &ctx, png_mem_read);
    png_read_info(png, info);

    const int color = png_get_color_type(png, info);
    if (color == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
    if (color == PNG_COLOR_TYPE_GRAY && png_get_bit_depth(png, info) < 8) {
        png_set_expand_gray_1_2_4_to_8(png);
    }
    png_set_strip_16(png);
    if (color == PNG_COLOR_TYPE_GRAY || color == PNG_COLOR_TYPE_GRAY_ALPHA) {
        png_set_gray_to_rgb(png);
    }
    // palette expansion can surface a tRNS alpha channel, so decide before
    // the one allowed png_read_update_info call
    if ((color & PNG_COLOR_MASK_ALPHA) != 0 || png_get_valid(png, info, PNG_INFO_tRNS)) {
        std::cerr << "warning: " << path.string() << ": alpha channel dropped\n";
        png_set_strip_alpha(png);
    }
    png_read_update_info(png, info);
    if (png_get_channels(png, info) != 3) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw InputError("unsupported PNG channel layout: " + path.string());
    }

    out.width = static_cast<int>(png_get_image_width(png, info));
    out.height = static_cast<int>(png_get_image_height(png, info));
    const std::size_t rowbytes = png_get_rowbytes(png, info);
    rows.resize(rowbytes * out.height);
    row_ptrs.resize(out.height);
    for (int r = 0; r < out.height; ++r) row_ptrs[r] = rows.data() + rowbytes * r;
    png_read_image(png, row_ptrs.data());
    png_read_end(png, nullptr);
    png_destroy_read_struct(&png, &info, nullptr);

    out.data.resize(static_cast<std::size_t>(out.width) * out.height * 3);
    for (int r = 0; r < out.height; ++r) {
        std::memcpy(out.data.data() + out.offset(r, 0), rows.data() + rowbytes * r,
                    static_cast<std::size_t>(out.width) * 3);
    }
    return out;
}

// ---------------------------------------------------------------- PNG write

void png_file_write(png_structp png, png_bytep data, png_size_t n) {
    auto* f = static_cast<std::FILE*>(png_get_io_ptr(png));
    if (std::fwrite(data, 1, n, f) != n) png_error(png, "write failed");
}

void png_file_flush(png_structp png) {
    std::fflush(static_cast<std::FILE*>(png_get_io_ptr(png)));
}

void encode_png(const std::uint8_t* data, int width, int height, int channels,
                const fs::path& path) {
    int color;
    switch (channels) {
        case 1: color = PNG_COLOR_TYPE_GRAY; break;
        case 3: color = PNG_COLOR_TYPE_RGB; break;
        case 4: color = PNG_COLOR_TYPE_RGB_ALPHA; break;
        default: throw OutputError("unsupported channel count for " + path.string());
    }
    std::FILE* f = std::fopen(path.string().c_str(), "wb");
    if (!f) throw OutputError("cannot open for writing: " + path.string());

    std::vector<png_bytep> row_ptrs(static_cast<std::size_t>(height));
    const std::size_t rowbytes = static_cast<std::size_t>(width) * channels;
    for (int r = 0; r < height; ++r) {
        row_ptrs[r] = const_cast<png_bytep>(data + rowbytes * r);
    }

    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!png) {
        std::fclose(f);
        throw OutputError("libpng init failed for " + path.string());
    }
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_write_struct(&png, nullptr);
        std::fclose(f);
        throw OutputError("libpng init failed for " + path.string());
    }
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        std::fclose(f);
        throw OutputError("PNG encode failed for " + path.string());
    }
    png_set_write_fn(png, f, png_file_write, png_file_flush);
    // fixed encoder settings so equal pixels give equal bytes across runs
    png_set_compression_level(png, 6);
    png_set_filter(png, 0, PNG_ALL_FILTERS);
    png_set_IHDR(png, info, static_cast<png_uint_32>(width), static_cast<png_uint_32>(height), 8,
                 color, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
                 PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    png_write_image(png, row_ptrs.data());
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
    if (std::fclose(f) != 0) throw OutputError("write failed: " + path.string());
}

// ---------------------------------------------------------------- JPEG read

struct JpegErr {
    jpeg_error_mgr mgr;
    std::jmp_buf jump;
    char message[JMSG_LENGTH_MAX];
};

void jpeg_throwing_exit(j_common_ptr cinfo) {
    auto* err = reinterpret_cast<JpegErr*>(cinfo->err);
    (*cinfo->err->format_message)(cinfo, err->message);
    std::longjmp(err->jump, 1);
}

void jpeg_quiet_emit(j_common_ptr, int) {}

RgbImage decode_jpeg(const std::vector<std::uint8_t>& buf, const fs::path& path) {
    RgbImage out;
    jpeg_decompress_struct cinfo;
    JpegErr err;
    cinfo.err = jpeg_std_error(&err.mgr);
    err.mgr.error_exit = jpeg_throwing_exit;
    err.mgr.emit_message = jpeg_quiet_emit;

    if (setjmp(err.jump)) {
        jpeg_destroy_decompress(&cinfo);
        throw InputError("undecodable JPEG: " + path.string() + " (" + err.message + ")");
    }

    jpeg_create_decompress(&cinfo);
    jpeg_mem_src(&cinfo, buf.data(), static_cast<unsigned long>(buf.size()));
    jpeg_read_header(&cinfo, TRUE);
    cinfo.out_color_space = JCS_RGB;
    jpeg_start_decompress(&cinfo);

    out.width = static_cast<int>(cinfo.output_width);
    out.height = static_cast<int>(cinfo.output_height);
    out.data.resize(static_cast<std::size_t>(out.width) * out.height * 3);
    while (cinfo.output_scanline < cinfo.output_height) {
        JSAMPROW row = out.data.data() + out.offset(static_cast<int>(cinfo.output_scanline), 0);
        jpeg_read_scanlines(&cinfo, &row, 1);
    }
    jpeg_finish_decompress(&cinfo);
    jpeg_destroy_decompress(&cinfo);
    return out;
}

// ---------------------------------------------------------------- PNM / PFM

struct PnmHeader {
    int width = 0;
    int height = 0;
    int maxval = 0;
    std::size_t data_start = 0;
};

// Header fields separated by whitespace, '#' comments run to end of line.
PnmHeader parse_pnm_header(const std::vector<std::uint8_t>& buf, const fs::path& path) {
    std::size_t pos = 2;  // past the magic
    auto next_int = [&]() -> int {
        while (pos < buf.size()) {
            if (buf[pos] == '#') {
                while (pos < buf.size() && buf[pos] != '\n') ++pos;
            } else if (std::isspace(buf[pos])) {
                ++pos;
            } else {
                break;
            }
        }
        if (pos >= buf.size() || !std::isdigit(buf[pos])) {
            throw InputError("malformed header: " + path.string());
        }
        long v = 0;
        while (pos < buf.size() && std::isdigit(buf[pos])) {
            v = v * 10 + (buf[pos] - '0');
            if (v > 1 << 30) throw InputError("malformed header: " + path.string());
            ++pos;
        }
        return static_cast<int>(v);
    };
    PnmHeader h;
    h.width = next_int();
    h.height = next_int();
    h.maxval = next_int();
    if (pos >= buf.size() || !std::isspace(buf[pos])) {
        throw InputError("malformed header: " + path.string());
    }
    h.data_start = pos + 1;
    if (h.width < 1 || h.height < 1 || h.maxval < 1 || h.maxval > 65535) {
        throw InputError("unsupported dimensions or maxval: " + path.string());
    }
    return h;
}

std::vector<std::uint16_t> read_pnm_samples(const std::vector<std::uint8_t>& buf,
                                            const PnmHeader& h, int channels,
                                            const fs::path& path) {
    const std::size_t n = static_cast<std::size_t>(h.width) * h.height * channels;
    const int bytes = h.maxval > 255 ? 2 : 1;
    if (h.data_start + n * bytes > buf.size()) {
        throw InputError("truncated file: " + path.string());
    }
    std::vector<std::uint16_t> samples(n);
    const std::uint8_t* p = buf.data() + h.data_start;
    for (std::size_t i = 0; i < n; ++i) {
        samples[i] = bytes == 2 ? static_cast<std::uint16_t>((p[2 * i] << 8) | p[2 * i + 1])
                                : p[i];
    }
    return samples;
}

RgbImage decode_ppm(const std::vector<std::uint8_t>& buf, const fs::path& path) {
    const PnmHeader h = parse_pnm_header(buf, path);
    const std::vector<std::uint16_t> samples = read_pnm_samples(buf, h, 3, path);
    RgbImage out(h.width, h.height);
    for (std::size_t i = 0; i < samples.size(); ++i) {
        out.data[i] = static_cast<std::uint8_t>((samples[i] * 255 + h.maxval / 2) / h.maxval);
    }
    return out;
}

struct GrayRaster {
    int width = 0;
    int height = 0;
    std::vector<double> values;
};

GrayRaster decode_pgm(const std::vector<std::uint8_t>& buf, const fs::path& path) {
    const PnmHeader h = parse_pnm_header(buf, path);
    const std::vector<std::uint16_t> samples = read_pnm_samples(buf, h, 1, path);
    GrayRaster out{h.width, h.height, {}};
    out.values.assign(samples.begin(), samples.end());
    return out;
}

GrayRaster decode_pfm(const std::vector<std::uint8_t>& buf, const fs::path& path) {
    if (has_magic(buf, {'P', 'F'})) {
        throw InputError("3-channel PFM is not supported (single channel expected): " +
                         path.string());
    }
    std::size_t pos = 2;
    auto next_token = [&]() -> std::string {
        while (pos < buf.size() && std::isspace(buf[pos])) ++pos;
        std::string tok;
        while (pos < buf.size() && !std::isspace(buf[pos])) tok.push_back(buf[pos++]);
        if (tok.empty()) throw InputError("malformed header: " + path.string());
        return tok;
    };
    GrayRaster out;
    double scale;
    try {
        out.width = std::stoi(next_token());
        out.height = std::stoi(next_token());
        scale = std::stod(next_token());
    } catch (const std::exception&) {
        throw InputError("malformed header: " + path.string());
    }
    if (out.width < 1 || out.height < 1 || scale == 0.0) {
        throw InputError("malformed header: " + path.string());
    }
    if (pos >= buf.size() || !std::isspace(buf[pos])) {
        throw InputError("malformed header: " + path.string());
    }
    ++pos;

    const std::size_t n = static_cast<std::size_t>(out.width) * out.height;
    if (pos + n * 4 > buf.size()) throw InputError("truncated file: " + path.string());

    const bool file_little = scale < 0.0;
    const std::uint16_t probe = 1;
    const bool host_little = *reinterpret_cast<const std::uint8_t*>(&probe) == 1;

    out.values.resize(n);
    for (int r = 0; r < out.height; ++r) {
        // rows are stored bottom-up
        const std::uint8_t* row = buf.data() + pos +
                                  static_cast<std::size_t>(out.height - 1 - r) * out.width * 4;
        for (int c = 0; c < out.width; ++c) {
            std::uint8_t b[4];
            std::memcpy(b, row + 4 * c, 4);
            if (file_little != host_little) {
                std::swap(b[0], b[3]);
                std::swap(b[1], b[2]);
            }
            float v;
            std::memcpy(&v, b, 4);
            if (!std::isfinite(v)) {
                throw InputError("non-finite depth value: " + path.string());
            }
            out.values[static_cast<std::size_t>(r) * out.width + c] = v;
        }
    }
    return out;
}

GrayRaster load_gray_raster(const fs::path& path) {
    const std::vector<std::uint8_t> buf = slurp(path);
    if (has_magic(buf, {0x89, 'P', 'N', 'G'})) {
        PngGray png = decode_png_gray(buf, path);
        GrayRaster out{png.width, png.height, {}};
        out.values.assign(png.samples.begin(), png.samples.end());
        return out;
    }
    if (has_magic(buf, {'P', '5'})) return decode_pgm(buf, path);
    if (has_magic(buf, {'P', 'f'}) || has_magic(buf, {'P', 'F'})) return decode_pfm(buf, path);
    throw InputError("unrecognized grayscale format: " + path.string());
}

// ------------------------------------------------------------- label maps

InstanceSet labelmap_from_samples(int width, int height, const std::vector<double>& samples,
                                  const fs::path& path) {
    std::map<int, BinaryMask> masks;
    for (int r = 0; r < height; ++r) {
        for (int c = 0; c < width; ++c) {
            const double v = samples[static_cast<std::size_t>(r) * width + c];
            const int label = static_cast<int>(v);
            if (label == 0) continue;
            auto it = masks.try_emplace(label, width, height).first;
            it->second.set(r, c, true);
        }
    }
    if (masks.empty()) {
        throw EmptyInputError("label map contains no object pixels: " + path.string());
    }
    InstanceSet set;
    for (auto& [label, mask] : masks) {
        Instance inst;
        inst.id = label;
        inst.area = count(mask);
        inst.mask = std::move(mask);
        set.instances.push_back(std::move(inst));
    }
    return set;
}

InstanceSet labelmap_from_directory(const fs::path& dir) {
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (!entry.is_regular_file()) continue;
        std::string ext = entry.path().extension().string();
        std::transform(ext.begin(), ext.end(), ext.begin(),
                       [](unsigned char ch) { return std::tolower(ch); });
        if (ext == ".png" || ext == ".pgm") files.push_back(entry.path());
    }
    if (files.empty()) throw InputError("no mask files (*.png, *.pgm) in " + dir.string());
    std::sort(files.begin(), files.end());

    int width = 0, height = 0;
    std::vector<BinaryMask> masks;
    std::vector<int> owner;  // -1 = unclaimed
    bool warned = false;
    for (const fs::path& file : files) {
        const GrayRaster raster = load_gray_raster(file);
        if (masks.empty()) {
            width = raster.width;
            height = raster.height;
            owner.assign(static_cast<std::size_t>(width) * height, -1);
        } else if (raster.width != width || raster.height != height) {
            throw InputError("mask size differs from the first mask: " + file.string());
        }
        BinaryMask mask(width, height);
        const int index = static_cast<int>(masks.size());
        for (std::size_t i = 0; i < mask.bits.size(); ++i) {
            if (raster.values[i] == 0.0) continue;
            mask.bits[i] = 1;
            if (owner[i] >= 0) {
                masks[owner[i]].bits[i] = 0;  // later mask wins
                if (!warned) {
                    std::cerr << "warning: overlapping masks in " << dir.string()
                              << ", keeping the later file's pixels\n";
                    warned = true;
                }
            }
            owner[i] = index;
        }
        masks.push_back(std::move(mask));
    }

    InstanceSet set;
    for (BinaryMask& mask : masks) {
        const std::size_t area = count(mask);
        if (area == 0) continue;  // fully shadowed or empty file
        Instance inst;
        inst.id = static_cast<int>(set.instances.size());
        inst.area = area;
        inst.mask = std::move(mask);
        set.instances.push_back(std::move(inst));
    }
    if (set.empty()) {
        throw EmptyInputError("masks contain no object pixels: " + dir.string());
    }
    return set;
}

// ---------------------------------------------------------------- manifest

std::string movement_name(Movement m) {
    switch (m) {
        case Movement::ZoomIn: return "zoomin";
        case Movement::Left: return "left";
        case Movement::Right: return "right";
    }
    return "left";
}

Movement movement_from_name(const std::string& name) {
    if (name == "zoomin") return Movement::ZoomIn;
    if (name == "left") return Movement::Left;
    if (name == "right") return Movement::Right;
    throw InputError("unknown movement in manifest: " + name);
}

}  // namespace

RgbImage load_rgb(const fs::path& path) {
    const std::vector<std::uint8_t> buf = slurp(path);
    if (has_magic(buf, {0x89, 'P', 'N', 'G'})) return decode_png_rgb(buf, path);
    if (has_magic(buf, {0xFF, 0xD8})) return decode_jpeg(buf, path);
    if (has_magic(buf, {'P', '6'})) return decode_ppm(buf, path);
    throw InputError("unrecognized image format (PNG, JPEG or PPM P6 expected): " +
                     path.string());
}

DepthMap load_depth(const fs::path& path, bool invert) {
    const GrayRaster raster = load_gray_raster(path);
    DepthMap depth(raster.width, raster.height);
    const auto [lo_it, hi_it] = std::minmax_element(raster.values.begin(), raster.values.end());
    const double lo = *lo_it, hi = *hi_it;
    for (std::size_t i = 0; i < raster.values.size(); ++i) {
        double v = hi > lo ? (raster.values[i] - lo) / (hi - lo) : 0.5;
        depth.values[i] = invert ? 1.0 - v : v;
    }
    return depth;
}

InstanceSet load_labelmap(const fs::path& path) {
    if (fs::is_directory(path)) return labelmap_from_directory(path);
    const GrayRaster raster = load_gray_raster(path);
    return labelmap_from_samples(raster.width, raster.height, raster.values, path);
}

void write_png_rgb(const RgbImage& image, const fs::path& path) {
    encode_png(image.data.data(), image.width, image.height, 3, path);
}

void write_png_rgba(const RgbaLayer& layer, const fs::path& path) {
    encode_png(layer.data.data(), layer.width, layer.height, 4, path);
}

void write_png_mask(const BinaryMask& mask, const fs::path& path) {
    std::vector<std::uint8_t> gray(mask.bits.size());
    for (std::size_t i = 0; i < gray.size(); ++i) gray[i] = mask.bits[i] ? 255 : 0;
    encode_png(gray.data(), mask.width, mask.height, 1, path);
}

void write_png_gray(const std::vector<std::uint8_t>& pixels, int width, int height,
                    const fs::path& path) {
    if (pixels.size() != static_cast<std::size_t>(width) * height) {
        throw OutputError("pixel count does not match dimensions for " + path.string());
    }
    encode_png(pixels.data(), width, height, 1, path);
}

std::vector<fs::path> write_frames(const FrameSequence& seq, const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw OutputError("cannot create directory " + dir.string());
    std::vector<fs::path> written;
    written.reserve(seq.frames.size());
    for (std::size_t k = 0; k < seq.frames.size(); ++k) {
        char name[32];
        std::snprintf(name, sizeof name, "frame_%04zu.png", k + 1);
        fs::path path = dir / name;
        write_png_rgb(seq.frames[k], path);
        written.push_back(std::move(path));
    }
    return written;
}

void write_layers_debug(const SceneLayers& layers, const RgbImage& inpainted, const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw OutputError("cannot create directory " + dir.string());
    write_png_rgba(layers.foreground, dir / "foreground.png");
    write_png_rgb(layers.background_with_hole, dir / "background_hole.png");
    write_png_mask(layers.hole, dir / "hole_mask.png");
    write_png_rgb(inpainted, dir / "inpainted.png");
}

std::string manifest_to_json(const RunManifest& m) {
    json j;
    j["tool_version"] = m.tool_version;
    j["fallback_segmenter"] = m.fallback_segmenter;
    j["config"] = {
        {"depth_kernel", m.config.depth_kernel},
        {"blur_kernel", m.config.blur_kernel},
        {"dilate_kernel", m.config.dilate_kernel},
        {"min_relative_area", m.config.min_relative_area},
        {"join_tolerance", m.config.join_tolerance},
        {"binarize_threshold", m.config.binarize_threshold},
        {"inpaint_radius", m.config.inpaint_radius},
        {"two_layer_mode", m.config.two_layer_mode},
        {"feather", m.config.feather},
    };
    j["motion"] = {
        {"movement", movement_name(m.spec.movement)},
        {"frames", m.spec.n},
        {"fore1", m.spec.fore1},
        {"back1", m.spec.back1},
        {"c_fore", m.spec.c_fore},
        {"c_back", m.spec.c_back},
    };
    j["input_digests"] = m.input_digests;
    j["offsets"] = json::array();
    for (const FrameOffsets& off : m.offsets) {
        j["offsets"].push_back({{"fore", off.fore}, {"back", off.back}});
    }
    j["ranking"] = json::array();
    for (const RankingRow& row : m.ranking) {
        j["ranking"].push_back({{"id", row.id},
                                {"area", row.area},
                                {"mean_depth", row.mean_depth},
                                {"layer", row.layer}});
    }
    return j.dump(2) + "\n";
}

RunManifest manifest_from_json(const std::string& text) {
    try {
        const json j = json::parse(text);
        RunManifest m;
        m.tool_version = j.at("tool_version").get<std::string>();
        m.fallback_segmenter = j.at("fallback_segmenter").get<bool>();
        const json& cfg = j.at("config");
        m.config.depth_kernel = cfg.at("depth_kernel").get<int>();
        m.config.blur_kernel = cfg.at("blur_kernel").get<int>();
        m.config.dilate_kernel = cfg.at("dilate_kernel").get<int>();
        m.config.min_relative_area = cfg.at("min_relative_area").get<double>();
        m.config.join_tolerance = cfg.at("join_tolerance").get<double>();
        m.config.binarize_threshold = cfg.at("binarize_threshold").get<double>();
        m.config.inpaint_radius = cfg.at("inpaint_radius").get<double>();
        m.config.two_layer_mode = cfg.at("two_layer_mode").get<bool>();
        m.config.feather = cfg.at("feather").get<bool>();
        const json& mo = j.at("motion");
        m.spec.movement = movement_from_name(mo.at("movement").get<std::string>());
        m.spec.n = mo.at("frames").get<int>();
        m.spec.fore1 = mo.at("fore1").get<double>();
        m.spec.back1 = mo.at("back1").get<double>();
        m.spec.c_fore = mo.at("c_fore").get<double>();
        m.spec.c_back = mo.at("c_back").get<double>();
        m.input_digests = j.at("input_digests").get<std::map<std::string, std::string>>();
        for (const json& off : j.at("offsets")) {
            m.offsets.push_back({off.at("fore").get<double>(), off.at("back").get<double>()});
        }
        for (const json& row : j.at("ranking")) {
            m.ranking.push_back({row.at("id").get<int>(), row.at("area").get<std::uint64_t>(),
                                 row.at("mean_depth").get<double>(),
                                 row.at("layer").get<std::string>()});
        }
        return m;
    } catch (const json::exception& e) {
        throw InputError(std::string("malformed manifest: ") + e.what());
    }
}

void write_manifest(const RunManifest& manifest, const fs::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw OutputError("cannot open for writing: " + path.string());
    out << manifest_to_json(manifest);
    out.flush();
    if (!out) throw OutputError("write failed: " + path.string());
}

RunManifest load_manifest(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return manifest_from_json(ss.str());
}

std::uint64_t fnv1a64(const void* data, std::size_t size) {
    const auto* p = static_cast<const std::uint8_t*>(data);
    std::uint64_t h = 14695981039346656037ull;
    for (std::size_t i = 0; i < size; ++i) {
        h ^= p[i];
        h *= 1099511628211ull;
    }
    return h;
}

std::string file_digest_hex(const fs::path& path) {
    std::uint64_t h = 14695981039346656037ull;
    auto mix = [&h](const void* data, std::size_t size) {
        const auto* p = static_cast<const std::uint8_t*>(data);
        for (std::size_t i = 0; i < size; ++i) {
            h ^= p[i];
            h *= 1099511628211ull;
        }
    };
    if (fs::is_directory(path)) {
        std::vector<fs::path> files;
        for (const auto& entry : fs::directory_iterator(path)) {
            if (entry.is_regular_file()) files.push_back(entry.path());
        }
        std::sort(files.begin(), files.end());
        for (const fs::path& file : files) {
            const std::string name = file.filename().string();
            mix(name.data(), name.size() + 1);  // include the NUL separator
            const std::vector<std::uint8_t> bytes = slurp(file);
            mix(bytes.data(), bytes.size());
        }
    } else {
        const std::vector<std::uint8_t> bytes = slurp(path);
        mix(bytes.data(), bytes.size());
    }
    char hex[17];
    std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(h));
    return hex;
}

}  // namespace parallax

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <atomic>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <random>

#include <jpeglib.h>
#include <png.h>

#include "parallax/io.hpp"

using namespace parallax;
namespace fs = std::filesystem;

namespace {

// Per-test scratch directory, removed on scope exit.
struct ScratchDir {
    fs::path path;

    ScratchDir() {
        static std::atomic<int> counter{0};
        path = fs::temp_directory_path() /
               ("parallax_io_" + std::to_string(counter.fetch_add(1)) + "_" +
                std::to_string(reinterpret_cast<std::uintptr_t>(this)));
        fs::create_directories(path);
    }
    ~ScratchDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
};

void write_bytes(const fs::path& path, const std::vector<std::uint8_t>& bytes) {
    std::ofstream out(path, std::ios::binary);
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    out << text;
}

std::vector<std::uint8_t> read_bytes(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// 16-bit grayscale PNG fixture, written with libpng directly.
void write_gray16_png(const fs::path& path, const std::vector<std::uint16_t>& samples, int w,
                      int h) {
    std::vector<std::uint8_t> row(static_cast<std::size_t>(w) * 2);
    std::FILE* f = std::fopen(path.string().c_str(), "wb");
    REQUIRE(f != nullptr);
    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    png_infop info = png_create_info_struct(png);
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        std::fclose(f);
        FAIL("libpng fixture write failed");
        return;
    }
    png_init_io(png, f);
    png_set_IHDR(png, info, static_cast<png_uint_32>(w), static_cast<png_uint_32>(h), 16,
                 PNG_COLOR_TYPE_GRAY, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
                 PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    for (int r = 0; r < h; ++r) {
        for (int c = 0; c < w; ++c) {
            std::uint16_t v = samples[static_cast<std::size_t>(r) * w + c];
            row[2 * c] = static_cast<std::uint8_t>(v >> 8);
            row[2 * c + 1] = static_cast<std::uint8_t>(v & 0xFF);
        }
        png_write_row(png, row.data());
    }
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
    std::fclose(f);
}

struct RawPng {
    int width = 0;
    int height = 0;
    int channels = 0;
    std::vector<std::uint8_t> data;
};

// Raw 8-bit decode without any channel transforms; used to inspect alpha.
RawPng read_png_raw(const fs::path& path) {
    RawPng out;
    std::FILE* f = std::fopen(path.string().c_str(), "rb");
    REQUIRE(f != nullptr);
    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    png_infop info = png_create_info_struct(png);
    std::vector<std::uint8_t> rows;
    std::vector<png_bytep> row_ptrs;
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, &info, nullptr);
        std::fclose(f);
        FAIL("libpng fixture read failed");
        return out;
    }
    png_init_io(png, f);
    png_read_info(png, info);
    out.width = static_cast<int>(png_get_image_width(png, info));
    out.height = static_cast<int>(png_get_image_height(png, info));
    out.channels = png_get_channels(png, info);
    const std::size_t rowbytes = png_get_rowbytes(png, info);
    rows.resize(rowbytes * out.height);
    row_ptrs.resize(static_cast<std::size_t>(out.height));
    for (int r = 0; r < out.height; ++r) row_ptrs[r] = rows.data() + rowbytes * r;
    png_read_image(png, row_ptrs.data());
    png_read_end(png, nullptr);
    png_destroy_read_struct(&png, &info, nullptr);
    std::fclose(f);
    out.data = std::move(rows);
    return out;
}

void write_jpeg_fixture(const fs::path& path, const RgbImage& img, int quality) {
    jpeg_compress_struct cinfo;
    jpeg_error_mgr jerr;
    cinfo.err = jpeg_std_error(&jerr);
    jpeg_create_compress(&cinfo);
    std::FILE* f = std::fopen(path.string().c_str(), "wb");
    REQUIRE(f != nullptr);
    jpeg_stdio_dest(&cinfo, f);
    cinfo.image_width = static_cast<JDIMENSION>(img.width);
    cinfo.image_height = static_cast<JDIMENSION>(img.height);
    cinfo.input_components = 3;
    cinfo.in_color_space = JCS_RGB;
    jpeg_set_defaults(&cinfo);
    jpeg_set_quality(&cinfo, quality, TRUE);
    jpeg_start_compress(&cinfo, TRUE);
    std::vector<JSAMPLE> row(static_cast<std::size_t>(img.width) * 3);
    while (cinfo.next_scanline < cinfo.image_height) {
        const std::uint8_t* src = img.pixel(static_cast<int>(cinfo.next_scanline), 0);
        std::memcpy(row.data(), src, row.size());
        JSAMPROW rp = row.data();
        jpeg_write_scanlines(&cinfo, &rp, 1);
    }
    jpeg_finish_compress(&cinfo);
    jpeg_destroy_compress(&cinfo);
    std::fclose(f);
}

std::vector<std::uint8_t> pfm_bytes(int w, int h, const std::vector<float>& topdown,
                                    bool little) {
    std::string header = "Pf\n" + std::to_string(w) + " " + std::to_string(h) + "\n" +
                         (little ? "-1.0" : "1.0") + "\n";
    std::vector<std::uint8_t> out(header.begin(), header.end());
    for (int r = h - 1; r >= 0; --r) {  // rows stored bottom-up
        for (int c = 0; c < w; ++c) {
            float v = topdown[static_cast<std::size_t>(r) * w + c];
            std::uint8_t b[4];
            std::memcpy(b, &v, 4);
            if (!little) {  // fixture host is little-endian
                std::swap(b[0], b[3]);
                std::swap(b[1], b[2]);
            }
            out.insert(out.end(), b, b + 4);
        }
    }
    return out;
}

RgbImage patterned(int w, int h, unsigned seed) {
    std::mt19937 rng(seed);
    RgbImage img(w, h);
    for (auto& b : img.data) b = static_cast<std::uint8_t>(rng());
    return img;
}

}  // namespace

TEST_CASE("ppm decoding") {
    ScratchDir tmp;

    std::vector<std::uint8_t> ppm = {'P', '6', '\n', '2', ' ', '2', '\n', '2', '5', '5', '\n'};
    const std::uint8_t px[12] = {255, 0, 0, 0, 255, 0, 0, 0, 255, 10, 20, 30};
    ppm.insert(ppm.end(), px, px + 12);
    write_bytes(tmp.path / "a.ppm", ppm);
    RgbImage img = load_rgb(tmp.path / "a.ppm");
    REQUIRE(img.width == 2);
    REQUIRE(img.height == 2);
    CHECK(std::memcmp(img.data.data(), px, 12) == 0);

    // maxval 100 rescales: v -> (v*255 + 50) / 100
    std::string small = "P6\n# comment\n1 1\n100\n";
    std::vector<std::uint8_t> scaled(small.begin(), small.end());
    scaled.insert(scaled.end(), {0, 50, 100});
    write_bytes(tmp.path / "b.ppm", scaled);
    img = load_rgb(tmp.path / "b.ppm");
    CHECK(img.data == std::vector<std::uint8_t>{0, 128, 255});

    // maxval above 255 switches to big-endian 2-byte samples
    std::string wide = "P6\n1 1\n65535\n";
    std::vector<std::uint8_t> wide_bytes(wide.begin(), wide.end());
    wide_bytes.insert(wide_bytes.end(), {0x00, 0x00, 0x80, 0x00, 0xFF, 0xFF});
    write_bytes(tmp.path / "c.ppm", wide_bytes);
    img = load_rgb(tmp.path / "c.ppm");
    CHECK(img.data == std::vector<std::uint8_t>{0, 128, 255});

    ppm.resize(ppm.size() - 5);
    write_bytes(tmp.path / "trunc.ppm", ppm);
    CHECK_THROWS_AS(load_rgb(tmp.path / "trunc.ppm"), InputError);

    write_text(tmp.path / "bad.ppm", "P6\nnot numbers\n");
    CHECK_THROWS_AS(load_rgb(tmp.path / "bad.ppm"), InputError);
}

TEST_CASE("png round-trips and promotions") {
    ScratchDir tmp;

    RgbImage img = patterned(9, 7, 42);
    write_png_rgb(img, tmp.path / "rgb.png");
    CHECK(load_rgb(tmp.path / "rgb.png") == img);

    std::vector<std::uint8_t> gray(6 * 4);
    for (std::size_t i = 0; i < gray.size(); ++i) gray[i] = static_cast<std::uint8_t>(10 * i);
    write_png_gray(gray, 6, 4, tmp.path / "gray.png");
    RgbImage promoted = load_rgb(tmp.path / "gray.png");
    REQUIRE(promoted.width == 6);
    REQUIRE(promoted.height == 4);
    for (std::size_t i = 0; i < gray.size(); ++i) {
        CHECK(promoted.data[3 * i] == gray[i]);
        CHECK(promoted.data[3 * i + 1] == gray[i]);
        CHECK(promoted.data[3 * i + 2] == gray[i]);
    }

    // alpha is dropped, color channels pass through untouched
    RgbaLayer layer(5, 3);
    std::mt19937 rng(7);
    for (auto& b : layer.data) b = static_cast<std::uint8_t>(rng());
    write_png_rgba(layer, tmp.path / "rgba.png");
    RgbImage dropped = load_rgb(tmp.path / "rgba.png");
    for (int r = 0; r < 3; ++r) {
        for (int c = 0; c < 5; ++c) {
            for (int ch = 0; ch < 3; ++ch) {
                CHECK(dropped.pixel(r, c)[ch] == layer.pixel(r, c)[ch]);
            }
        }
    }

    // a mask survives the 0/255 encoding
    BinaryMask mask(8, 8);
    for (int r = 0; r < 8; ++r) {
        for (int c = 0; c < 8; ++c) mask.set(r, c, (r * c) % 3 == 1);
    }
    write_png_mask(mask, tmp.path / "mask.png");
    RgbImage mask_img = load_rgb(tmp.path / "mask.png");
    for (int r = 0; r < 8; ++r) {
        for (int c = 0; c < 8; ++c) {
            CHECK(mask_img.pixel(r, c)[0] == (mask.at(r, c) ? 255 : 0));
        }
    }
}

TEST_CASE("jpeg decoding") {
    ScratchDir tmp;
    RgbImage solid(16, 16);
    for (std::size_t i = 0; i < solid.data.size(); i += 3) {
        solid.data[i] = 120;
        solid.data[i + 1] = 130;
        solid.data[i + 2] = 140;
    }
    write_jpeg_fixture(tmp.path / "solid.jpg", solid, 100);
    RgbImage decoded = load_rgb(tmp.path / "solid.jpg");
    REQUIRE(decoded.width == 16);
    REQUIRE(decoded.height == 16);
    for (std::size_t i = 0; i < decoded.data.size(); ++i) {
        CHECK(std::abs(static_cast<int>(decoded.data[i]) - static_cast<int>(solid.data[i])) <= 2);
    }
}

TEST_CASE("unreadable inputs") {
    ScratchDir tmp;
    CHECK_THROWS_AS(load_rgb(tmp.path / "absent.png"), InputError);

    write_text(tmp.path / "junk.bin", "this is not an image at all");
    CHECK_THROWS_AS(load_rgb(tmp.path / "junk.bin"), InputError);
    CHECK_THROWS_AS(load_depth(tmp.path / "junk.bin", false), InputError);

    RgbImage img = patterned(12, 12, 3);
    write_png_rgb(img, tmp.path / "whole.png");
    auto bytes = read_bytes(tmp.path / "whole.png");
    bytes.resize(bytes.size() / 2);
    write_bytes(tmp.path / "half.png", bytes);
    CHECK_THROWS_AS(load_rgb(tmp.path / "half.png"), InputError);
}

TEST_CASE("depth from pgm") {
    ScratchDir tmp;
    std::string header = "P5\n3 1\n255\n";
    std::vector<std::uint8_t> pgm(header.begin(), header.end());
    pgm.insert(pgm.end(), {0, 128, 255});
    write_bytes(tmp.path / "d.pgm", pgm);

    DepthMap d = load_depth(tmp.path / "d.pgm", false);
    REQUIRE(d.width == 3);
    CHECK(d.at(0, 0) == 0.0);
    CHECK(d.at(0, 1) == doctest::Approx(128.0 / 255.0).epsilon(1e-12));
    CHECK(d.at(0, 2) == 1.0);
    CHECK(d.at(0, 0) < d.at(0, 1));  // monotone in the file values
    CHECK(d.at(0, 1) < d.at(0, 2));

    DepthMap inv = load_depth(tmp.path / "d.pgm", true);
    CHECK(inv.at(0, 0) == 1.0);
    CHECK(inv.at(0, 2) == 0.0);

    // 16-bit PGM samples are big-endian
    std::string header16 = "P5\n2 1\n65535\n";
    std::vector<std::uint8_t> pgm16(header16.begin(), header16.end());
    pgm16.insert(pgm16.end(), {0x00, 0x00, 0xFF, 0xFF});
    write_bytes(tmp.path / "d16.pgm", pgm16);
    d = load_depth(tmp.path / "d16.pgm", false);
    CHECK(d.at(0, 0) == 0.0);
    CHECK(d.at(0, 1) == 1.0);

    // constant maps settle at 0.5 either way
    std::vector<std::uint8_t> flat(header.begin(), header.end());
    flat.insert(flat.end(), {77, 77, 77});
    write_bytes(tmp.path / "flat.pgm", flat);
    d = load_depth(tmp.path / "flat.pgm", false);
    CHECK(d.at(0, 0) == 0.5);
    CHECK(d.at(0, 2) == 0.5);
    d = load_depth(tmp.path / "flat.pgm", true);
    CHECK(d.at(0, 1) == 0.5);
}

TEST_CASE("depth from 16-bit png") {
    ScratchDir tmp;
    std::vector<std::uint16_t> ramp(256);
    for (int i = 0; i < 256; ++i) ramp[static_cast<std::size_t>(i)] = static_cast<std::uint16_t>(i * 257);
    write_gray16_png(tmp.path / "ramp.png", ramp, 256, 1);

    DepthMap d = load_depth(tmp.path / "ramp.png", false);
    REQUIRE(d.width == 256);
    REQUIRE(d.height == 1);
    CHECK(d.at(0, 0) == 0.0);
    CHECK(d.at(0, 255) == 1.0);
    CHECK(d.at(0, 100) == doctest::Approx(100.0 * 257.0 / 65535.0).epsilon(1e-12));
    CHECK(d.at(0, 200) == doctest::Approx(200.0 * 257.0 / 65535.0).epsilon(1e-12));
    for (int c = 1; c < 256; ++c) CHECK(d.at(0, c - 1) < d.at(0, c));
}

TEST_CASE("depth from pfm") {
    ScratchDir tmp;
    const std::vector<float> topdown = {0.1f, 0.2f, 0.3f, 0.4f, 0.5f, 0.6f};

    write_bytes(tmp.path / "le.pfm", pfm_bytes(3, 2, topdown, true));
    DepthMap d = load_depth(tmp.path / "le.pfm", false);
    REQUIRE(d.width == 3);
    REQUIRE(d.height == 2);
    const float lo = 0.1f, hi = 0.6f;
    for (int r = 0; r < 2; ++r) {
        for (int c = 0; c < 3; ++c) {
            double raw = topdown[static_cast<std::size_t>(r) * 3 + c];
            double want = (raw - lo) / (hi - lo);
            CHECK(d.at(r, c) == doctest::Approx(want).epsilon(1e-6));
        }
    }
    CHECK(d.at(0, 0) == 0.0);
    CHECK(d.at(1, 2) == 1.0);

    write_bytes(tmp.path / "be.pfm", pfm_bytes(3, 2, topdown, false));
    DepthMap be = load_depth(tmp.path / "be.pfm", false);
    CHECK(be == d);

    // color PFM is rejected
    std::vector<std::uint8_t> color = {'P', 'F', '\n', '1', ' ', '1', '\n', '-', '1', '\n'};
    color.insert(color.end(), 12, 0);
    write_bytes(tmp.path / "color.pfm", color);
    CHECK_THROWS_AS(load_depth(tmp.path / "color.pfm", false), InputError);

    std::vector<float> with_nan = topdown;
    with_nan[2] = std::numeric_limits<float>::quiet_NaN();
    write_bytes(tmp.path / "nan.pfm", pfm_bytes(3, 2, with_nan, true));
    CHECK_THROWS_AS(load_depth(tmp.path / "nan.pfm", false), InputError);

    auto short_file = pfm_bytes(3, 2, topdown, true);
    short_file.resize(short_file.size() - 4);
    write_bytes(tmp.path / "short.pfm", short_file);
    CHECK_THROWS_AS(load_depth(tmp.path / "short.pfm", false), InputError);
}

TEST_CASE("label maps from a single file") {
    ScratchDir tmp;
    std::string header = "P5\n4 2\n255\n";
    std::vector<std::uint8_t> pgm(header.begin(), header.end());
    pgm.insert(pgm.end(), {0, 1, 1, 2, 0, 0, 2, 2});
    write_bytes(tmp.path / "labels.pgm", pgm);

    InstanceSet set = load_labelmap(tmp.path / "labels.pgm");
    REQUIRE(set.size() == 2);
    CHECK(set.instances[0].id == 1);
    CHECK(set.instances[0].area == 2);
    CHECK(set.instances[0].mask.at(0, 1));
    CHECK(set.instances[0].mask.at(0, 2));
    CHECK(set.instances[1].id == 2);
    CHECK(set.instances[1].area == 3);
    CHECK(set.instances[1].mask.at(0, 3));
    CHECK(set.instances[1].mask.at(1, 2));
    CHECK(set.instances[1].mask.at(1, 3));

    std::vector<std::uint8_t> zeros(header.begin(), header.end());
    zeros.insert(zeros.end(), 8, 0);
    write_bytes(tmp.path / "zeros.pgm", zeros);
    CHECK_THROWS_AS(load_labelmap(tmp.path / "zeros.pgm"), EmptyInputError);

    // grayscale PNG works the same way
    std::vector<std::uint8_t> gray = {0, 0, 5, 5, 0, 0, 0, 0, 9};
    write_png_gray(gray, 3, 3, tmp.path / "labels.png");
    set = load_labelmap(tmp.path / "labels.png");
    REQUIRE(set.size() == 2);
    CHECK(set.instances[0].id == 5);
    CHECK(set.instances[0].area == 2);
    CHECK(set.instances[1].id == 9);
    CHECK(set.instances[1].area == 1);
}

TEST_CASE("label maps from a mask directory") {
    ScratchDir tmp;
    fs::path dir = tmp.path / "masks";
    fs::create_directories(dir);

    auto write_mask = [&](const std::string& name, std::initializer_list<std::pair<int, int>> px) {
        BinaryMask m(4, 4);
        for (auto [r, c] : px) m.set(r, c, true);
        write_png_mask(m, dir / name);
    };

    write_mask("a.png", {{0, 0}, {0, 1}});
    write_mask("b.png", {{2, 2}});
    write_mask("c.png", {{3, 0}, {3, 1}, {3, 2}});
    InstanceSet set = load_labelmap(dir);
    REQUIRE(set.size() == 3);
    CHECK(set.instances[0].id == 0);
    CHECK(set.instances[0].area == 2);
    CHECK(set.instances[1].id == 1);
    CHECK(set.instances[1].area == 1);
    CHECK(set.instances[2].id == 2);
    CHECK(set.instances[2].area == 3);
    CHECK(set.instances[0].mask.at(0, 0));
    CHECK(set.instances[1].mask.at(2, 2));
    CHECK(set.instances[2].mask.at(3, 2));

    // overlap: the later file steals the shared pixel
    fs::path overlap = tmp.path / "overlap";
    fs::create_directories(overlap);
    BinaryMask first(4, 4);
    first.set(0, 0, true);
    first.set(0, 1, true);
    BinaryMask second(4, 4);
    second.set(0, 1, true);
    second.set(0, 2, true);
    write_png_mask(first, overlap / "a.png");
    write_png_mask(second, overlap / "b.png");
    set = load_labelmap(overlap);
    REQUIRE(set.size() == 2);
    CHECK(set.instances[0].area == 1);
    CHECK(set.instances[0].mask.at(0, 0));
    CHECK_FALSE(set.instances[0].mask.at(0, 1));
    CHECK(set.instances[1].area == 2);

    // a fully shadowed mask disappears and ids stay dense
    fs::path shadow = tmp.path / "shadow";
    fs::create_directories(shadow);
    BinaryMask inner(4, 4);
    inner.set(1, 1, true);
    BinaryMask outer(4, 4);
    outer.set(1, 1, true);
    outer.set(1, 2, true);
    write_png_mask(inner, shadow / "a.png");
    write_png_mask(outer, shadow / "b.png");
    set = load_labelmap(shadow);
    REQUIRE(set.size() == 1);
    CHECK(set.instances[0].id == 0);
    CHECK(set.instances[0].area == 2);

    fs::path blank = tmp.path / "blank";
    fs::create_directories(blank);
    write_png_mask(BinaryMask(4, 4), blank / "a.png");
    CHECK_THROWS_AS(load_labelmap(blank), EmptyInputError);

    fs::path nothing = tmp.path / "nothing";
    fs::create_directories(nothing);
    write_text(nothing / "readme.txt", "no masks here");
    CHECK_THROWS_AS(load_labelmap(nothing), InputError);

    fs::path mixed = tmp.path / "mixed";
    fs::create_directories(mixed);
    write_png_mask(BinaryMask(4, 4), mixed / "a.png");
    write_png_mask(BinaryMask(5, 5), mixed / "b.png");
    CHECK_THROWS_AS(load_labelmap(mixed), InputError);
}

TEST_CASE("frame sequences on disk") {
    ScratchDir tmp;
    FrameSequence seq;
    seq.spec.n = 3;
    for (int k = 0; k < 3; ++k) {
        seq.frames.push_back(patterned(8, 6, static_cast<unsigned>(100 + k)));
        seq.offsets.push_back({4.0 * k, 1.0 * k});
    }

    auto paths = write_frames(seq, tmp.path / "out");
    REQUIRE(paths.size() == 3);
    CHECK(paths[0].filename() == "frame_0001.png");
    CHECK(paths[1].filename() == "frame_0002.png");
    CHECK(paths[2].filename() == "frame_0003.png");
    for (int k = 0; k < 3; ++k) {
        CHECK(load_rgb(paths[static_cast<std::size_t>(k)]) ==
              seq.frames[static_cast<std::size_t>(k)]);
    }

    // the encoder is deterministic byte for byte
    auto again = write_frames(seq, tmp.path / "out2");
    for (int k = 0; k < 3; ++k) {
        CHECK(read_bytes(paths[static_cast<std::size_t>(k)]) ==
              read_bytes(again[static_cast<std::size_t>(k)]));
    }

    write_text(tmp.path / "blocked", "a file, not a directory");
    CHECK_THROWS_AS(write_frames(seq, tmp.path / "blocked"), OutputError);
}

TEST_CASE("debug layer dump") {
    ScratchDir tmp;
    SceneLayers layers;
    layers.foreground = RgbaLayer(10, 10);
    for (int r = 3; r < 7; ++r) {
        for (int c = 3; c < 7; ++c) {
            std::uint8_t* px = layers.foreground.pixel(r, c);
            px[0] = 200, px[1] = 100, px[2] = 50, px[3] = 255;
        }
    }
    layers.background_with_hole = patterned(10, 10, 77);
    layers.hole = BinaryMask(10, 10);
    for (int r = 2; r < 8; ++r) {
        for (int c = 2; c < 8; ++c) layers.hole.set(r, c, true);
    }
    RgbImage inpainted = patterned(10, 10, 78);

    write_layers_debug(layers, inpainted, tmp.path / "debug");
    CHECK(fs::exists(tmp.path / "debug" / "foreground.png"));
    CHECK(fs::exists(tmp.path / "debug" / "background_hole.png"));
    CHECK(fs::exists(tmp.path / "debug" / "hole_mask.png"));
    CHECK(fs::exists(tmp.path / "debug" / "inpainted.png"));
    std::size_t file_count = 0;
    for (const auto& entry : fs::directory_iterator(tmp.path / "debug")) {
        (void)entry;
        ++file_count;
    }
    CHECK(file_count == 4);

    // the mask and the alpha channel survive the disk round-trip exactly
    RawPng hole_png = read_png_raw(tmp.path / "debug" / "hole_mask.png");
    REQUIRE(hole_png.channels == 1);
    for (int r = 0; r < 10; ++r) {
        for (int c = 0; c < 10; ++c) {
            CHECK(hole_png.data[static_cast<std::size_t>(r) * 10 + c] ==
                  (layers.hole.at(r, c) ? 255 : 0));
        }
    }
    RawPng fg_png = read_png_raw(tmp.path / "debug" / "foreground.png");
    REQUIRE(fg_png.channels == 4);
    CHECK(fg_png.data == layers.foreground.data);

    CHECK(load_rgb(tmp.path / "debug" / "background_hole.png") == layers.background_with_hole);
    CHECK(load_rgb(tmp.path / "debug" / "inpainted.png") == inpainted);
}

TEST_CASE("manifest serialization") {
    RunManifest manifest;
    std::string text = manifest_to_json(manifest);
    CHECK(text.find("\"min_relative_area\": 0.05") != std::string::npos);
    CHECK(text.find("\"join_tolerance\": 0.2") != std::string::npos);
    CHECK(text.find("\"depth_kernel\": 5") != std::string::npos);
    CHECK(text.find("\"blur_kernel\": 7") != std::string::npos);
    CHECK(text.find("\"dilate_kernel\": 11") != std::string::npos);
    CHECK(text.find("\"binarize_threshold\": 0.5") != std::string::npos);
    CHECK(text.find("\"fallback_segmenter\": false") != std::string::npos);
    CHECK(text.back() == '\n');
    CHECK(manifest_to_json(manifest) == text);  // stable output

    RunManifest full;
    full.config.depth_kernel = 3;
    full.config.blur_kernel = 9;
    full.config.dilate_kernel = 13;
    full.config.min_relative_area = 0.125;
    full.config.join_tolerance = 0.375;
    full.config.binarize_threshold = 0.25;
    full.config.inpaint_radius = 7.5;
    full.config.two_layer_mode = true;
    full.config.feather = true;
    full.spec.movement = Movement::ZoomIn;
    full.spec.n = 7;
    full.spec.fore1 = -1.25;
    full.spec.back1 = 0.5;
    full.spec.c_fore = 2.5;
    full.spec.c_back = 1.5;
    full.input_digests = {{"depth", "00ff00ff00ff00ff"}, {"image", "85944171f73967e8"}};
    full.offsets = {{-1.25, 0.5}, {1.25, 2.0}};
    full.ranking = {{4, 1000, 0.63459, "foreground"}, {9, 40, 0.27138, "background"}};
    full.fallback_segmenter = true;

    RunManifest back = manifest_from_json(manifest_to_json(full));
    CHECK(back == full);

    CHECK_THROWS_AS(manifest_from_json("{ not json"), InputError);
    CHECK_THROWS_AS(manifest_from_json("{\"tool_version\": \"x\"}"), InputError);
}

TEST_CASE("manifest files") {
    ScratchDir tmp;
    RunManifest manifest;
    manifest.offsets = {{0.0, 0.0}, {4.0, 1.0}};
    manifest.ranking = {{0, 144, 0.9, "foreground"}};
    write_manifest(manifest, tmp.path / "manifest.json");
    CHECK(load_manifest(tmp.path / "manifest.json") == manifest);

    CHECK_THROWS_AS(write_manifest(manifest, tmp.path / "no_dir" / "manifest.json"),
                    OutputError);
    CHECK_THROWS_AS(load_manifest(tmp.path / "absent.json"), InputError);
    write_text(tmp.path / "broken.json", "{\"tool_version\": 3}");
    CHECK_THROWS_AS(load_manifest(tmp.path / "broken.json"), InputError);
}

TEST_CASE("content digests") {
    // published FNV-1a 64-bit test vectors
    CHECK(fnv1a64("", 0) == 0xcbf29ce484222325ull);
    CHECK(fnv1a64("a", 1) == 0xaf63dc4c8601ec8cull);
    CHECK(fnv1a64("foobar", 6) == 0x85944171f73967e8ull);

    ScratchDir tmp;
    write_text(tmp.path / "f.bin", "foobar");
    CHECK(file_digest_hex(tmp.path / "f.bin") == "85944171f73967e8");

    // directory digests chain name, NUL, content over sorted names
    fs::path dir = tmp.path / "bundle";
    fs::create_directories(dir);
    write_text(dir / "b.txt", "world");
    write_text(dir / "a.txt", "hello");
    std::vector<std::uint8_t> chained;
    auto append = [&chained](const std::string& s, bool nul) {
        chained.insert(chained.end(), s.begin(), s.end());
        if (nul) chained.push_back(0);
    };
    append("a.txt", true);
    append("hello", false);
    append("b.txt", true);
    append("world", false);
    char expect[17];
    std::snprintf(expect, sizeof expect, "%016llx",
                  static_cast<unsigned long long>(fnv1a64(chained.data(), chained.size())));
    CHECK(file_digest_hex(dir) == expect);
}

#include "segeval/io.hpp"

#include <png.h>

#include <algorithm>
#include <cctype>
#include <csetjmp>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iterator>

namespace segeval::io {
namespace {

constexpr std::uint8_t kPngSignature[8] = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1a, '\n'};

bool starts_with_png_signature(std::span<const std::uint8_t> bytes) {
    return bytes.size() >= 8 && std::equal(std::begin(kPngSignature), std::end(kPngSignature), bytes.begin());
}

[[noreturn]] void fail(const std::string& source, const std::string& what) {
    throw MaskIoError(source + ": " + what);
}

// ---- PGM ------------------------------------------------------------------

class PgmHeaderReader {
public:
    PgmHeaderReader(std::span<const std::uint8_t> bytes, const std::string& source)
        : bytes_(bytes), source_(source) {}

    // Next whitespace-delimited unsigned integer, skipping '#' comments.
    unsigned long next_number() {
        skip_space_and_comments();
        if (pos_ >= bytes_.size() || !std::isdigit(bytes_[pos_])) fail(source_, "malformed PGM header");
        unsigned long v = 0;
        while (pos_ < bytes_.size() && std::isdigit(bytes_[pos_])) {
            v = v * 10 + (bytes_[pos_] - '0');
            if (v > 1'000'000'000UL) fail(source_, "malformed PGM header (number too large)");
            ++pos_;
        }
        return v;
    }

    // Exactly one whitespace byte separates maxval from the raster.
    std::size_t raster_offset() {
        if (pos_ >= bytes_.size() || !std::isspace(bytes_[pos_])) fail(source_, "malformed PGM header");
        return pos_ + 1;
    }

    void skip(std::size_t n) { pos_ += n; }

private:
    void skip_space_and_comments() {
        while (pos_ < bytes_.size()) {
            if (bytes_[pos_] == '#') {
                while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
            } else if (std::isspace(bytes_[pos_])) {
                ++pos_;
            } else {
                break;
            }
        }
    }

    std::span<const std::uint8_t> bytes_;
    const std::string& source_;
    std::size_t pos_ = 0;
};

LabelMask decode_pgm(std::span<const std::uint8_t> bytes, const std::string& source) {
    PgmHeaderReader reader(bytes, source);
    reader.skip(2);
    const unsigned long width = reader.next_number();
    const unsigned long height = reader.next_number();
    const unsigned long maxval = reader.next_number();
    if (width == 0 || height == 0) fail(source, "empty image");
    if (maxval == 0 || maxval > 255) fail(source, "unsupported bit depth (PGM maxval " + std::to_string(maxval) + ")");
    const std::size_t offset = reader.raster_offset();
    const std::size_t count = width * height;
    if (bytes.size() < offset + count) fail(source, "truncated PGM raster");

    std::vector<Label> labels(bytes.begin() + static_cast<std::ptrdiff_t>(offset),
                              bytes.begin() + static_cast<std::ptrdiff_t>(offset + count));
    if (std::any_of(labels.begin(), labels.end(), [&](Label v) { return v > maxval; })) {
        fail(source, "pixel value exceeds PGM maxval");
    }
    return LabelMask(static_cast<int>(width), static_cast<int>(height), std::move(labels));
}

std::vector<std::uint8_t> encode_pgm(const LabelMask& mask) {
    const std::string header = "P5\n" + std::to_string(mask.width()) + " " + std::to_string(mask.height()) + "\n255\n";
    std::vector<std::uint8_t> out(header.begin(), header.end());
    out.insert(out.end(), mask.labels().begin(), mask.labels().end());
    return out;
}

// ---- PNG ------------------------------------------------------------------

struct PngErrorState {
    std::jmp_buf jump;
    char message[256] = {};
};

void png_error_to_jump(png_structp png, png_const_charp msg) {
    auto* state = static_cast<PngErrorState*>(png_get_error_ptr(png));
    std::snprintf(state->message, sizeof(state->message), "%s", msg);
    std::longjmp(state->jump, 1);
}

void png_ignore_warning(png_structp, png_const_charp) {}

struct ReadCursor {
    std::span<const std::uint8_t> bytes;
    std::size_t pos = 0;
};

void png_read_from_cursor(png_structp png, png_bytep out, png_size_t n) {
    auto* cursor = static_cast<ReadCursor*>(png_get_io_ptr(png));
    if (cursor->pos + n > cursor->bytes.size()) png_error(png, "unexpected end of PNG data");
    std::memcpy(out, cursor->bytes.data() + cursor->pos, n);
    cursor->pos += n;
}

void png_write_to_vector(png_structp png, png_bytep data, png_size_t n) {
    auto* out = static_cast<std::vector<std::uint8_t>*>(png_get_io_ptr(png));
    out->insert(out->end(), data, data + n);
}

void png_flush_noop(png_structp) {}

enum class PngCheck { Ok, BitDepth, ColorType };

// libpng errors longjmp back into this frame; only libpng's own C frames are skipped.
LabelMask decode_png(std::span<const std::uint8_t> bytes, const std::string& source) {
    PngErrorState state;
    ReadCursor cursor{bytes, 0};
    std::vector<Label> labels;
    std::vector<png_bytep> rows;
    png_uint_32 width = 0;
    png_uint_32 height = 0;
    int bit_depth = 0;
    int color_type = 0;
    volatile PngCheck check = PngCheck::Ok;

    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, &state, png_error_to_jump, png_ignore_warning);
    if (png == nullptr) fail(source, "cannot allocate PNG reader");
    png_infop info = png_create_info_struct(png);
    if (info == nullptr) {
        png_destroy_read_struct(&png, nullptr, nullptr);
        fail(source, "cannot allocate PNG info");
    }

    if (setjmp(state.jump)) {
        png_destroy_read_struct(&png, &info, nullptr);
        fail(source, std::string("invalid PNG: ") + state.message);
    }

    png_set_read_fn(png, &cursor, png_read_from_cursor);
    png_read_info(png, info);
    png_get_IHDR(png, info, &width, &height, &bit_depth, &color_type, nullptr, nullptr, nullptr);
    if (color_type != PNG_COLOR_TYPE_GRAY) {
        check = PngCheck::ColorType;
    } else if (bit_depth != 8) {
        check = PngCheck::BitDepth;
    } else {
        png_set_interlace_handling(png);
        png_read_update_info(png, info);
        labels.resize(static_cast<std::size_t>(width) * height);
        rows.resize(height);
        for (png_uint_32 r = 0; r < height; ++r) rows[r] = labels.data() + static_cast<std::size_t>(r) * width;
        png_read_image(png, rows.data());
        png_read_end(png, nullptr);
    }
    png_destroy_read_struct(&png, &info, nullptr);

    switch (check) {
        case PngCheck::ColorType:
            fail(source, "unsupported color type (only 8-bit grayscale masks are accepted)");
        case PngCheck::BitDepth:
            fail(source, "unsupported bit depth (" + std::to_string(bit_depth) + "-bit, expected 8)");
        case PngCheck::Ok:
            break;
    }
    return LabelMask(static_cast<int>(width), static_cast<int>(height), std::move(labels));
}

std::vector<std::uint8_t> encode_png(const LabelMask& mask) {
    PngErrorState state;
    std::vector<std::uint8_t> out;
    std::vector<png_bytep> rows(static_cast<std::size_t>(mask.height()));
    for (int r = 0; r < mask.height(); ++r) {
        rows[static_cast<std::size_t>(r)] = const_cast<png_bytep>(mask.labels().data() + mask.index(r, 0));
    }

    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, &state, png_error_to_jump, png_ignore_warning);
    if (png == nullptr) throw MaskIoError("cannot allocate PNG writer");
    png_infop info = png_create_info_struct(png);
    if (info == nullptr) {
        png_destroy_write_struct(&png, nullptr);
        throw MaskIoError("cannot allocate PNG info");
    }
    if (setjmp(state.jump)) {
        png_destroy_write_struct(&png, &info);
        throw MaskIoError(std::string("PNG encoding failed: ") + state.message);
    }
    png_set_write_fn(png, &out, png_write_to_vector, png_flush_noop);
    png_set_IHDR(png, info, static_cast<png_uint_32>(mask.width()), static_cast<png_uint_32>(mask.height()), 8,
                 PNG_COLOR_TYPE_GRAY, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    png_write_image(png, rows.data());
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
    return out;
}

std::string lower_extension(const std::filesystem::path& path) {
    std::string ext = path.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
    return ext;
}

}  // namespace

LabelMask decode_mask(std::span<const std::uint8_t> bytes, const std::string& source) {
    if (starts_with_png_signature(bytes)) return decode_png(bytes, source);
    if (bytes.size() >= 2 && bytes[0] == 'P' && bytes[1] == '5') return decode_pgm(bytes, source);
    if (bytes.size() >= 2 && bytes[0] == 'P' && (bytes[1] == '6' || bytes[1] == '3')) {
        fail(source, "unsupported color type (PPM color image)");
    }
    fail(source, "unrecognized mask format (expected 8-bit grayscale PNG or binary PGM)");
}

LabelMask load_mask_file(const std::filesystem::path& path, std::optional<Dimensions> expected) {
    const std::string source = path.string();
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(source, "cannot open file");
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (in.bad()) fail(source, "read error");

    LabelMask mask = decode_mask(bytes, source);
    if (expected && (mask.width() != expected->width || mask.height() != expected->height)) {
        fail(source, "dimension mismatch: expected " + std::to_string(expected->width) + "x" +
                         std::to_string(expected->height) + ", got " + mask.shape_string());
    }
    return mask;
}

std::vector<std::uint8_t> encode_mask(const LabelMask& mask, MaskFormat format) {
    return format == MaskFormat::Png ? encode_png(mask) : encode_pgm(mask);
}

MaskFormat format_for_path(const std::filesystem::path& path) {
    const std::string ext = lower_extension(path);
    if (ext == ".png") return MaskFormat::Png;
    if (ext == ".pgm") return MaskFormat::Pgm;
    throw MaskIoError(path.string() + ": unsupported extension '" + ext + "' (use .png or .pgm)");
}

bool is_mask_path(const std::filesystem::path& path) {
    const std::string ext = lower_extension(path);
    return ext == ".png" || ext == ".pgm";
}

void save_mask_file(const LabelMask& mask, const std::filesystem::path& path) {
    const std::vector<std::uint8_t> bytes = encode_mask(mask, format_for_path(path));
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw MaskIoError(path.string() + ": cannot open for writing");
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw MaskIoError(path.string() + ": write failed");
}

}  // namespace segeval::io

#pragma once

// Mask files: 8-bit grayscale PNG or binary PGM (P5). Pixel value = label ID.

#include "segeval/mask.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace segeval::io {

class MaskIoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class MaskFormat { Png, Pgm };

struct Dimensions {
    int width = 0;
    int height = 0;
};

/// Format is sniffed from the file's magic bytes. Throws MaskIoError for
/// unreadable files, non-8-bit depth ("unsupported bit depth"), color images
/// ("unsupported color type") and a mismatch against `expected`.
LabelMask load_mask_file(const std::filesystem::path& path,
                         std::optional<Dimensions> expected = std::nullopt);

LabelMask decode_mask(std::span<const std::uint8_t> bytes, const std::string& source = "<memory>");

std::vector<std::uint8_t> encode_mask(const LabelMask& mask, MaskFormat format);

/// Format from extension: .png or .pgm (case-insensitive).
MaskFormat format_for_path(const std::filesystem::path& path);

void save_mask_file(const LabelMask& mask, const std::filesystem::path& path);

bool is_mask_path(const std::filesystem::path& path);

}  // namespace segeval::io

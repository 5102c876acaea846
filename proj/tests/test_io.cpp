#include "segeval/io.hpp"

#include "segeval/synthgen.hpp"

#include <catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>

using namespace segeval;
using namespace segeval::io;
using Catch::Matchers::ContainsSubstring;

namespace fs = std::filesystem;

namespace {

const fs::path kData = SEGEVAL_TEST_DATA;

fs::path scratch_dir() {
    const fs::path dir = fs::temp_directory_path() / "segeval_test_io";
    fs::create_directories(dir);
    return dir;
}

std::vector<std::uint8_t> raster(const LabelMask& m) {
    std::vector<std::uint8_t> out;
    for (int r = 0; r < m.height(); ++r) {
        for (int c = 0; c < m.width(); ++c) out.push_back(m.at(r, c));
    }
    return out;
}

std::vector<std::uint8_t> file_bytes(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), {}};
}

void require_error(const fs::path& p, const std::string& fragment) {
    try {
        load_mask_file(p);
        FAIL("expected MaskIoError for " << p);
    } catch (const MaskIoError& e) {
        CHECK_THAT(std::string(e.what()), ContainsSubstring(fragment));
        CHECK_THAT(std::string(e.what()), ContainsSubstring(p.filename().string()));
    }
}

}  // namespace

TEST_CASE("PGM decoding is byte-for-byte", "[io]") {
    const LabelMask m = load_mask_file(kData / "two_by_two.pgm");
    CHECK(m.width() == 2);
    CHECK(m.height() == 2);
    CHECK(raster(m) == std::vector<std::uint8_t>{0, 1, 1, 2});

    const std::string inline_pgm = "P5 2 2 255 ";
    std::vector<std::uint8_t> bytes(inline_pgm.begin(), inline_pgm.end());
    bytes.insert(bytes.end(), {0, 1, 1, 2});
    CHECK(raster(decode_mask(bytes)) == std::vector<std::uint8_t>{0, 1, 1, 2});
}

TEST_CASE("PNG decoding keeps raw label values", "[io]") {
    // Written by an independent encoder (Pillow).
    const LabelMask m = load_mask_file(kData / "labels_3x2.png");
    CHECK(m.width() == 3);
    CHECK(m.height() == 2);
    CHECK(raster(m) == std::vector<std::uint8_t>{0, 1, 2, 3, 4, 255});
}

TEST_CASE("unsupported inputs give distinct errors", "[io]") {
    require_error(kData / "gray16.png", "unsupported bit depth");
    require_error(kData / "rgb.png", "unsupported color type");
    require_error(kData / "palette.png", "unsupported color type");
    require_error(kData / "not_a_mask.txt", "unrecognized mask format");
    require_error(kData / "does_not_exist.png", "cannot open file");

    const std::string truncated = "P5 4 4 255 ";
    std::vector<std::uint8_t> bytes(truncated.begin(), truncated.end());
    bytes.push_back(1);
    CHECK_THROWS_WITH(decode_mask(bytes), ContainsSubstring("truncated"));

    const std::string wide = "P5 1 1 65535 ";
    CHECK_THROWS_WITH(decode_mask(std::vector<std::uint8_t>(wide.begin(), wide.end())),
                      ContainsSubstring("unsupported bit depth"));
}

TEST_CASE("expected dimensions are enforced", "[io]") {
    CHECK_NOTHROW(load_mask_file(kData / "two_by_two.pgm", Dimensions{2, 2}));
    CHECK_THROWS_WITH(load_mask_file(kData / "two_by_two.pgm", Dimensions{3, 2}),
                      ContainsSubstring("dimension mismatch"));
}

TEST_CASE("format selection by extension", "[io]") {
    CHECK(format_for_path("a/b.png") == MaskFormat::Png);
    CHECK(format_for_path("a/b.PGM") == MaskFormat::Pgm);
    CHECK_THROWS_AS(format_for_path("a/b.tif"), MaskIoError);
    CHECK(is_mask_path("x.Png"));
    CHECK_FALSE(is_mask_path("x.csv"));
}

TEST_CASE("synthgen outputs round-trip losslessly", "[io][roundtrip]") {
    const fs::path dir = scratch_dir();
    for (synth::Scenario s : synth::all_scenarios()) {
        const auto pair = synth::generate(synth::default_spec(s, 7));
        for (const char* ext : {".png", ".pgm"}) {
            for (const LabelMask* m : {&pair.gt, &pair.pred}) {
                const fs::path p = dir / (std::string(synth::scenario_name(s)) + ext);
                save_mask_file(*m, p);
                const LabelMask back = load_mask_file(p);
                REQUIRE(back.width() == m->width());
                REQUIRE(back.height() == m->height());
                REQUIRE(raster(back) == raster(*m));

                // Re-encoding the decoded mask reproduces the file exactly.
                save_mask_file(back, dir / (std::string("again") + ext));
                REQUIRE(file_bytes(p) == file_bytes(dir / (std::string("again") + ext)));
            }
        }
    }
    fs::remove_all(dir);
}

TEST_CASE("multi-label masks round-trip through memory", "[io][roundtrip]") {
    MaskBuilder b(17, 5);
    for (int r = 0; r < 5; ++r) {
        for (int c = 0; c < 17; ++c) b.set(r, c, static_cast<Label>((r * 17 + c) * 3 % 256));
    }
    const LabelMask m = std::move(b).build();
    for (MaskFormat f : {MaskFormat::Png, MaskFormat::Pgm}) {
        REQUIRE(raster(decode_mask(encode_mask(m, f))) == raster(m));
    }
}

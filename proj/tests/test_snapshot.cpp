#include <gtest/gtest.h>

#include <cstring>
#include <filesystem>
#include <sstream>

#include "photobio/error.hpp"
#include "photobio/snapshot.hpp"

using namespace photobio;

namespace {

Snapshot sample_snapshot() {
    const Grid g(16, 8, 2.75);
    FieldSet s{Field2D(g), Field2D(g), Field2D(g), 1.25};
    for (int j = 0; j < g.rows(); ++j)
        for (int i = 0; i < g.nx; ++i) {
            s.psi(i, j) = std::sin(0.3 * i) * j;
            s.zeta(i, j) = 1.0 / (1 + i + j * j);
            s.n(i, j) = 1.0 + 1e-17 * i - 3e-9 * j;
        }
    return make_snapshot(s, g, 432.5803, 0x1234abcd5678ef00ULL);
}

}  // namespace

TEST(Snapshot, StreamRoundTripBitIdentical) {
    const auto snap = sample_snapshot();
    std::stringstream buf;
    write_snapshot(snap, buf);
    const std::string bytes = buf.str();
    EXPECT_EQ(bytes.size(), snapshot_header_bytes + 3 * 8 * snap.grid.size());
    EXPECT_EQ(bytes.substr(0, 8), "PHOTOBIO");
    const auto back = read_snapshot(buf);
    EXPECT_EQ(back, snap);

    std::stringstream again;
    write_snapshot(back, again);
    EXPECT_EQ(again.str(), bytes);
}

TEST(Snapshot, HeaderFieldsLittleEndian) {
    std::stringstream buf;
    write_snapshot(sample_snapshot(), buf);
    const std::string b = buf.str();
    auto u32 = [&](std::size_t at) {
        std::uint32_t v = 0;
        for (int k = 3; k >= 0; --k) v = (v << 8) | static_cast<unsigned char>(b[at + k]);
        return v;
    };
    EXPECT_EQ(u32(8), snapshot_version);
    EXPECT_EQ(u32(12), 16u);
    EXPECT_EQ(u32(16), 8u);
    EXPECT_EQ(static_cast<unsigned char>(b[24]), 0x00);
    EXPECT_EQ(static_cast<unsigned char>(b[31]), 0x12);
    double t;
    std::memcpy(&t, b.data() + 32, 8);
    EXPECT_EQ(t, 1.25);
}

TEST(Snapshot, UnknownVersionRejected) {
    std::stringstream buf;
    write_snapshot(sample_snapshot(), buf);
    std::string b = buf.str();
    b[8] = 2;
    std::stringstream bad(b);
    EXPECT_THROW(read_snapshot(bad), IoError);
}

TEST(Snapshot, CorruptionRejected) {
    std::stringstream buf;
    write_snapshot(sample_snapshot(), buf);
    const std::string b = buf.str();

    std::stringstream truncated(b.substr(0, b.size() - 3));
    EXPECT_THROW(read_snapshot(truncated), IoError);
    std::stringstream trailing(b + "x");
    EXPECT_THROW(read_snapshot(trailing), IoError);
    std::string magic = b;
    magic[0] = 'Q';
    std::stringstream wrong(magic);
    EXPECT_THROW(read_snapshot(wrong), IoError);
}

TEST(Snapshot, WriterThreadFlushes) {
    const auto dir = std::filesystem::temp_directory_path() / "photobio_snapshot_test";
    std::filesystem::create_directories(dir);
    const auto snap = sample_snapshot();
    {
        SnapshotWriter writer;
        for (int k = 0; k < 5; ++k) writer.submit(snap, dir / ("s" + std::to_string(k) + ".bin"));
        writer.flush();
        for (int k = 0; k < 5; ++k) EXPECT_EQ(read_snapshot(dir / ("s" + std::to_string(k) + ".bin")), snap);
        writer.submit(snap, dir / "late.bin");
    }
    EXPECT_EQ(read_snapshot(dir / "late.bin"), snap);
    std::filesystem::remove_all(dir);
}

TEST(Snapshot, WriterReportsFailure) {
    SnapshotWriter writer;
    writer.submit(sample_snapshot(), "/nonexistent_dir_photobio/x.bin");
    EXPECT_THROW(writer.flush(), IoError);
}

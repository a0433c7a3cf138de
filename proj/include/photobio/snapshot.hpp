#pragma once

#include <condition_variable>
#include <cstdint>
#include <deque>
#include <filesystem>
#include <iosfwd>
#include <mutex>
#include <thread>

#include "photobio/grid.hpp"
#include "photobio/stepper.hpp"

namespace photobio {

inline constexpr std::uint32_t snapshot_version = 1;
inline constexpr std::size_t snapshot_header_bytes = 64;

/// Binary snapshot: a 64-byte little-endian header
///
///   0  char[8]  "PHOTOBIO"
///   8  u32      format version
///   12 u32      nx
///   16 u32      nz (cells; rows = nz + 1)
///   20 u32      reserved, 0
///   24 u64      parameter hash
///   32 f64      t
///   40 f64      domain width lambda
///   48 f64      Rayleigh number
///   56 f64      reserved, 0
///
/// followed by psi, zeta and n as little-endian f64, each row-major by
/// z-level (value(i, j) at j * nx + i).
struct Snapshot {
    std::uint64_t params_hash = 0;
    Grid grid;
    double t = 0.0;
    double rayleigh = 0.0;
    Field2D psi, zeta, n;

    bool operator==(const Snapshot&) const = default;
};

Snapshot make_snapshot(const FieldSet& state, const Grid& grid, double rayleigh, std::uint64_t hash);

void write_snapshot(const Snapshot& snap, std::ostream& out);
Snapshot read_snapshot(std::istream& in);
void write_snapshot(const Snapshot& snap, const std::filesystem::path& path);
Snapshot read_snapshot(const std::filesystem::path& path);

/// Background writer: the stepper hands over finished copies and never waits
/// on disk. Destruction drains the queue.
class SnapshotWriter {
public:
    SnapshotWriter();
    ~SnapshotWriter();
    SnapshotWriter(const SnapshotWriter&) = delete;
    SnapshotWriter& operator=(const SnapshotWriter&) = delete;

    void submit(Snapshot snap, std::filesystem::path path);
    // Block until the queue is empty; rethrows the first write failure.
    void flush();

private:
    void run();

    std::mutex mutex_;
    std::condition_variable wake_, idle_;
    std::deque<std::pair<Snapshot, std::filesystem::path>> queue_;
    bool stop_ = false;
    bool busy_ = false;
    std::exception_ptr failure_;
    std::thread worker_;
};

}  // namespace photobio

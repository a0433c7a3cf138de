#include "photobio/snapshot.hpp"

#include <array>
#include <bit>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>

#include "photobio/error.hpp"

namespace photobio {

namespace {

constexpr std::array<char, 8> magic = {'P', 'H', 'O', 'T', 'O', 'B', 'I', 'O'};

template <class T>
void put(unsigned char* dst, T value) {
    static_assert(sizeof(T) == 4 || sizeof(T) == 8);
    using U = std::conditional_t<sizeof(T) == 4, std::uint32_t, std::uint64_t>;
    U bits = std::bit_cast<U>(value);
    for (std::size_t b = 0; b < sizeof(T); ++b) dst[b] = static_cast<unsigned char>(bits >> (8 * b));
}

template <class T>
T get(const unsigned char* src) {
    using U = std::conditional_t<sizeof(T) == 4, std::uint32_t, std::uint64_t>;
    U bits = 0;
    for (std::size_t b = 0; b < sizeof(T); ++b) bits |= static_cast<U>(src[b]) << (8 * b);
    return std::bit_cast<T>(bits);
}

void write_field(const Field2D& f, std::ostream& out) {
    std::vector<unsigned char> buf(f.values().size() * 8);
    for (std::size_t k = 0; k < f.values().size(); ++k) put(buf.data() + 8 * k, f.values()[k]);
    out.write(reinterpret_cast<const char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
}

Field2D read_field(const Grid& grid, std::istream& in) {
    Field2D f(grid);
    std::vector<unsigned char> buf(grid.size() * 8);
    in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
    if (static_cast<std::size_t>(in.gcount()) != buf.size()) {
        throw IoError("snapshot: payload shorter than header dimensions");
    }
    auto values = f.values();
    for (std::size_t k = 0; k < values.size(); ++k) values[k] = get<double>(buf.data() + 8 * k);
    return f;
}

}  // namespace

Snapshot make_snapshot(const FieldSet& state, const Grid& grid, double rayleigh, std::uint64_t hash) {
    return {hash, grid, state.t, rayleigh, state.psi, state.zeta, state.n};
}

void write_snapshot(const Snapshot& snap, std::ostream& out) {
    std::array<unsigned char, snapshot_header_bytes> header{};
    std::memcpy(header.data(), magic.data(), magic.size());
    put(header.data() + 8, snapshot_version);
    put(header.data() + 12, static_cast<std::uint32_t>(snap.grid.nx));
    put(header.data() + 16, static_cast<std::uint32_t>(snap.grid.nz));
    put(header.data() + 20, std::uint32_t{0});
    put(header.data() + 24, snap.params_hash);
    put(header.data() + 32, snap.t);
    put(header.data() + 40, snap.grid.width);
    put(header.data() + 48, snap.rayleigh);
    put(header.data() + 56, 0.0);
    out.write(reinterpret_cast<const char*>(header.data()), header.size());
    for (const Field2D* f : {&snap.psi, &snap.zeta, &snap.n}) {
        if (!f->matches(snap.grid)) throw IoError("snapshot: field dimensions differ from header");
        write_field(*f, out);
    }
    if (!out) throw IoError("snapshot: write failed");
}

Snapshot read_snapshot(std::istream& in) {
    std::array<unsigned char, snapshot_header_bytes> header{};
    in.read(reinterpret_cast<char*>(header.data()), header.size());
    if (static_cast<std::size_t>(in.gcount()) != header.size()) throw IoError("snapshot: truncated header");
    if (std::memcmp(header.data(), magic.data(), magic.size()) != 0) {
        throw IoError("snapshot: bad magic");
    }
    const auto version = get<std::uint32_t>(header.data() + 8);
    if (version != snapshot_version) {
        throw IoError("snapshot: unsupported format version " + std::to_string(version));
    }
    Snapshot snap;
    const auto nx = get<std::uint32_t>(header.data() + 12);
    const auto nz = get<std::uint32_t>(header.data() + 16);
    snap.params_hash = get<std::uint64_t>(header.data() + 24);
    snap.t = get<double>(header.data() + 32);
    const double width = get<double>(header.data() + 40);
    snap.rayleigh = get<double>(header.data() + 48);
    try {
        snap.grid = Grid(static_cast<int>(nx), static_cast<int>(nz), width);
    } catch (const ConfigError& e) {
        throw IoError(std::string("snapshot: invalid header dimensions: ") + e.what());
    }
    snap.psi = read_field(snap.grid, in);
    snap.zeta = read_field(snap.grid, in);
    snap.n = read_field(snap.grid, in);
    if (in.peek() != std::char_traits<char>::eof()) throw IoError("snapshot: trailing bytes after payload");
    return snap;
}

void write_snapshot(const Snapshot& snap, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("snapshot: cannot open '" + path.string() + "' for writing");
    write_snapshot(snap, out);
}

Snapshot read_snapshot(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("snapshot: cannot open '" + path.string() + "'");
    return read_snapshot(in);
}

SnapshotWriter::SnapshotWriter() : worker_([this] { run(); }) {}

SnapshotWriter::~SnapshotWriter() {
    {
        std::lock_guard lock(mutex_);
        stop_ = true;
    }
    wake_.notify_all();
    worker_.join();
}

void SnapshotWriter::submit(Snapshot snap, std::filesystem::path path) {
    {
        std::lock_guard lock(mutex_);
        queue_.emplace_back(std::move(snap), std::move(path));
    }
    wake_.notify_one();
}

void SnapshotWriter::flush() {
    std::unique_lock lock(mutex_);
    idle_.wait(lock, [this] { return queue_.empty() && !busy_; });
    if (failure_) std::rethrow_exception(std::exchange(failure_, nullptr));
}

void SnapshotWriter::run() {
    std::unique_lock lock(mutex_);
    for (;;) {
        wake_.wait(lock, [this] { return stop_ || !queue_.empty(); });
        if (queue_.empty()) {
            if (stop_) return;
            continue;
        }
        auto job = std::move(queue_.front());
        queue_.pop_front();
        busy_ = true;
        lock.unlock();
        try {
            write_snapshot(job.first, job.second);
        } catch (...) {
            std::lock_guard relock(mutex_);
            if (!failure_) failure_ = std::current_exception();
        }
        lock.lock();
        busy_ = false;
        if (queue_.empty()) idle_.notify_all();
    }
}

}  // namespace photobio

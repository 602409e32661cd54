#include <bit>
#include <cstdint>
#include <iterator>
#include <sstream>

#include <fmt/format.h>

#include "fhn/io.hpp"

namespace fhn {

namespace {

constexpr const char* kMagic = "FHNSNAP 1";

void put_le(std::string& buf, double v) {
    auto bits = std::bit_cast<std::uint64_t>(v);
    for (int b = 0; b < 8; ++b) {
        buf.push_back(static_cast<char>(bits & 0xffu));
        bits >>= 8;
    }
}

double get_le(const char* p) {
    std::uint64_t bits = 0;
    for (int b = 7; b >= 0; --b) bits = (bits << 8) | static_cast<unsigned char>(p[b]);
    return std::bit_cast<double>(bits);
}

std::string field_order(int m) {
    std::string order;
    for (const char* stem : {"u", "w", "rho"}) {
        for (int i = 1; i <= m; ++i) {
            if (!order.empty()) order += ' ';
            order += fmt::format("{}{}", stem, i);
        }
    }
    return order;
}

}  // namespace

void write_snapshot(const NetworkState& state, const std::filesystem::path& path) {
    const int m = state.neurons();
    const std::size_t count = 3 * static_cast<std::size_t>(m) * state.grid.points();
    std::string buf = fmt::format(
        "{}\nm {}\nnx {}\nny {}\ndx {:.17g}\nt {:.17g}\norder {}\npayload float64-le {}\nend\n",
        kMagic, m, state.grid.nx, state.grid.ny, state.grid.dx, state.t, field_order(m), count);
    buf.reserve(buf.size() + 8 * count);
    for (const auto* stack : {&state.u, &state.w, &state.rho}) {
        for (const Field2D& f : *stack) {
            for (double v : f.values()) put_le(buf, v);
        }
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError(fmt::format("cannot open '{}' for writing", path.string()));
    out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
    if (!out) throw IoError(fmt::format("write to '{}' failed", path.string()));
}

NetworkState read_snapshot(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError(fmt::format("cannot read '{}'", path.string()));
    const std::string data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());

    std::size_t pos = 0;
    auto next_line = [&]() -> std::string {
        const auto eol = data.find('\n', pos);
        if (eol == std::string::npos) throw IoError("snapshot header is truncated");
        std::string line = data.substr(pos, eol - pos);
        pos = eol + 1;
        return line;
    };
    auto value_of = [&](const std::string& key) {
        const std::string line = next_line();
        if (line.rfind(key + " ", 0) != 0) {
            throw IoError(fmt::format("snapshot header: expected '{}', found '{}'", key, line));
        }
        return line.substr(key.size() + 1);
    };
    auto to_long = [](const std::string& s) {
        std::size_t used = 0;
        long v = 0;
        try {
            v = std::stol(s, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used != s.size()) throw IoError(fmt::format("snapshot header: bad integer '{}'", s));
        return v;
    };
    auto to_double = [](const std::string& s) {
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(s, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used != s.size()) throw IoError(fmt::format("snapshot header: bad number '{}'", s));
        return v;
    };

    if (next_line() != kMagic) throw IoError("not a snapshot file (bad magic line)");
    const long m = to_long(value_of("m"));
    Grid2D grid;
    grid.nx = static_cast<int>(to_long(value_of("nx")));
    grid.ny = static_cast<int>(to_long(value_of("ny")));
    grid.dx = to_double(value_of("dx"));
    const double t = to_double(value_of("t"));
    if (m < 1 || grid.nx < 1 || grid.ny < 1) throw IoError("snapshot header: bad dimensions");
    if (value_of("order") != field_order(static_cast<int>(m))) {
        throw IoError("snapshot header: unexpected field order");
    }
    const std::string payload = value_of("payload");
    const std::string prefix = "float64-le ";
    if (payload.rfind(prefix, 0) != 0) throw IoError("snapshot header: unknown payload encoding");
    const long declared = to_long(payload.substr(prefix.size()));
    if (next_line() != "end") throw IoError("snapshot header: missing end marker");

    const std::size_t expected = 3 * static_cast<std::size_t>(m) * grid.points();
    if (declared < 0 || static_cast<std::size_t>(declared) != expected) {
        throw IoError(fmt::format("snapshot header declares {} values, dimensions imply {}",
                                  declared, expected));
    }
    if (data.size() - pos != 8 * expected) {
        throw IoError(fmt::format("snapshot payload holds {} bytes, header implies {}",
                                  data.size() - pos, 8 * expected));
    }

    NetworkState state(grid, static_cast<int>(m));
    state.t = t;
    const char* p = data.data() + pos;
    for (auto* stack : {&state.u, &state.w, &state.rho}) {
        for (Field2D& f : *stack) {
            for (double& v : f.values()) {
                v = get_le(p);
                p += 8;
            }
        }
    }
    return state;
}

SnapshotWriter::SnapshotWriter(std::filesystem::path dir) : dir_(std::move(dir)) {
    std::error_code ec;
    std::filesystem::create_directories(dir_, ec);
    if (ec) throw IoError(fmt::format("cannot create '{}': {}", dir_.string(), ec.message()));
}

void SnapshotWriter::on_snapshot(const NetworkState& state, long step) {
    write_snapshot(state, dir_ / fmt::format("snapshot_{:06d}.fhn", step));
}

}  // namespace fhn

#pragma once

#include <array>
#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>
#include <string>

#include "transition_matrix.hpp"

namespace sauter {

// Layout (little endian):
//   0  char[4]  "UPNM"
//   4  uint32   version
//   8  uint64   Nz
//   16 uint64   sample step index
//   24 float64  time
//   32 Nz*Nz x {float64 re, float64 im}, row-major over p then n
inline constexpr std::uint32_t kCheckpointVersion = 1;

static_assert(std::endian::native == std::endian::little, "checkpoint I/O assumes a little-endian host");

namespace detail {
template <class T> void put(std::ofstream &out, T value) {
    out.write(reinterpret_cast<const char *>(&value), sizeof(T));
}
template <class T> T take(std::ifstream &in) {
    T value{};
    in.read(reinterpret_cast<char *>(&value), sizeof(T));
    return value;
}
} // namespace detail

inline void write_checkpoint(const std::string &path, const TransitionMatrix &u) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out.write("UPNM", 4);
    detail::put<std::uint32_t>(out, kCheckpointVersion);
    detail::put<std::uint64_t>(out, u.modes());
    detail::put<std::uint64_t>(out, u.step());
    detail::put<double>(out, u.time());
    for (const complex &z : u.data()) {
        detail::put<double>(out, z.real());
        detail::put<double>(out, z.imag());
    }
    if (!out) throw std::runtime_error("write failed for " + path);
}

inline TransitionMatrix read_checkpoint(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::array<char, 4> magic{};
    in.read(magic.data(), 4);
    if (std::memcmp(magic.data(), "UPNM", 4) != 0) throw std::runtime_error(path + ": bad checkpoint magic");
    const auto version = detail::take<std::uint32_t>(in);
    if (version != kCheckpointVersion) throw std::runtime_error(path + ": unsupported checkpoint version");
    const auto modes = detail::take<std::uint64_t>(in);
    const auto step = detail::take<std::uint64_t>(in);
    const auto time = detail::take<double>(in);
    TransitionMatrix u(modes, step, time);
    for (complex &z : u.data()) {
        const double re = detail::take<double>(in);
        const double im = detail::take<double>(in);
        z = {re, im};
    }
    if (!in) throw std::runtime_error(path + ": truncated checkpoint");
    return u;
}

} // namespace sauter

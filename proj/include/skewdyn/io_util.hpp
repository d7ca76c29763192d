#pragma once

#include <charconv>
#include <complex>
#include <cstdint>
#include <string>
#include <string_view>

namespace skewdyn {

// Shortest round-trip decimal form. Locale-independent, so identical inputs
// always serialize to identical bytes (the determinism contract for CSV and
// report outputs rests on this).
inline std::string fmt_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

inline std::string fmt_complex(std::complex<double> z) {
    return fmt_double(z.real()) + " " + fmt_double(z.imag());
}

// FNV-1a, used to fingerprint configs in run manifests.
inline std::uint64_t fnv1a(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

inline std::string hex64(std::uint64_t v) {
    static const char* digits = "0123456789abcdef";
    std::string s(16, '0');
    for (int i = 15; i >= 0; --i) {
        s[static_cast<size_t>(i)] = digits[v & 0xf];
        v >>= 4;
    }
    return s;
}

}  // namespace skewdyn

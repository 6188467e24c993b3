#pragma once

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <string>
#include <thread>
#include <vector>

namespace necklace {

// Three-valued answer used wherever tolerance or budgets can leave a
// question open.
enum class Tri { No = 0, Yes = 1, Unknown = 2 };

inline Tri tri_and(Tri a, Tri b) {
    if (a == Tri::No || b == Tri::No) return Tri::No;
    if (a == Tri::Unknown || b == Tri::Unknown) return Tri::Unknown;
    return Tri::Yes;
}

inline const char* to_string(Tri t) {
    switch (t) {
        case Tri::No: return "no";
        case Tri::Yes: return "yes";
        default: return "unknown";
    }
}

// Global point budget; NECKLACE_BUDGET overrides.
inline std::size_t point_budget() {
    if (const char* s = std::getenv("NECKLACE_BUDGET")) {
        char* end = nullptr;
        unsigned long long v = std::strtoull(s, &end, 10);
        if (end != s && v > 0) return static_cast<std::size_t>(v);
    }
    return 2'000'000;
}

// Worker count; NECKLACE_THREADS overrides. Results never depend on it.
inline unsigned thread_count() {
    if (const char* s = std::getenv("NECKLACE_THREADS")) {
        long v = std::strtol(s, nullptr, 10);
        if (v >= 1) return static_cast<unsigned>(v);
    }
    unsigned hc = std::thread::hardware_concurrency();
    return hc == 0 ? 1 : hc;
}

// Static-partition parallel loop. Each index writes only its own slots, so
// the outcome is identical for any worker count.
inline void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body) {
    unsigned workers = thread_count();
    if (workers <= 1 || n < 64) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    if (workers > n) workers = static_cast<unsigned>(n);
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            for (std::size_t i = w; i < n; i += workers) body(i);
        });
    }
    for (auto& t : pool) t.join();
}

// 12 significant digits, the format used by all numeric report output.
inline std::string fmt12(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

inline std::string fmt6(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

// FNV-1a, used for content regression checks on rendered output.
inline std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

}  // namespace necklace

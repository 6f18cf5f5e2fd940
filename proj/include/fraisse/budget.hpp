#pragma once

#include <chrono>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>

#include "fraisse/structure.hpp"

namespace fraisse {

/// Node and wall-clock cap shared by the bounded searches. Exhaustion throws ResourceLimit.
class Budget {
public:
    static constexpr std::uint64_t kDefaultNodes = 200'000'000;

    explicit Budget(std::uint64_t max_nodes = kDefaultNodes,
                    std::optional<std::chrono::milliseconds> max_time = std::nullopt)
        : max_nodes_(max_nodes) {
        if (max_time)
            deadline_ = std::chrono::steady_clock::now() + *max_time;
    }

    static Budget unlimited() { return Budget(std::numeric_limits<std::uint64_t>::max()); }

    void tick(std::uint64_t n = 1) {
        used_ += n;
        if (used_ > max_nodes_)
            throw ResourceLimit("node budget of " + std::to_string(max_nodes_) + " exhausted");
        if (deadline_ && (used_ & 0xfff) < n && std::chrono::steady_clock::now() > *deadline_)
            throw ResourceLimit("time budget exhausted");
    }

    [[nodiscard]] std::uint64_t used() const { return used_; }
    [[nodiscard]] std::uint64_t max_nodes() const { return max_nodes_; }

private:
    std::uint64_t max_nodes_;
    std::uint64_t used_ = 0;
    std::optional<std::chrono::steady_clock::time_point> deadline_;
};

} // namespace fraisse

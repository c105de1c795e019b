#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace morphkit {

/// Minimal SHA-256 used for config hashes and artifact digests in run
/// manifests. Streaming interface; `hex()` finalizes.
class Sha256 {
public:
    Sha256();
    void update(const void* data, std::size_t len);
    void update(const std::string& s) { update(s.data(), s.size()); }
    std::string hex();

    static std::string of_string(const std::string& s);
    static std::string of_file(const std::string& path);

private:
    void process_block(const std::uint8_t* block);

    std::uint32_t state_[8];
    std::uint8_t buffer_[64];
    std::uint64_t total_len_ = 0;
    std::size_t buffer_len_ = 0;
    bool finalized_ = false;
};

}  // namespace morphkit

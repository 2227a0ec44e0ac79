#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace cfseq {

std::string base64_encode(const std::vector<std::uint8_t>& bytes);
std::vector<std::uint8_t> base64_decode(const std::string& text);

/// Doubles <-> little-endian bytes, for compact draw/snapshot payloads.
std::vector<std::uint8_t> doubles_to_bytes(const std::vector<double>& values);
std::vector<double> bytes_to_doubles(const std::vector<std::uint8_t>& bytes);

} // namespace cfseq

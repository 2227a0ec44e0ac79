#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace cfseq {

/// Opaque, restorable environment snapshot. The payload layout is owned by
/// the environment that produced it; everyone else treats it as bytes.
/// A name + schema-version header guards against cross-environment restores.
struct Snapshot {
    std::vector<std::uint8_t> bytes;

    bool operator==(const Snapshot&) const = default;

    /// Packs `payload` behind a "name:version" header.
    static Snapshot pack(std::string_view env_name, int version,
                         const std::vector<double>& payload);

    /// Validates the header and unpacks the payload.
    /// Throws InputError when name or version do not match.
    std::vector<double> unpack(std::string_view env_name, int version) const;

    std::string to_base64() const;
    static Snapshot from_base64(const std::string& text);
};

} // namespace cfseq

#include "cfseq/snapshot.hpp"

#include <algorithm>

#include "cfseq/base64.hpp"
#include "cfseq/errors.hpp"

namespace cfseq {

Snapshot Snapshot::pack(std::string_view env_name, int version,
                        const std::vector<double>& payload) {
    Snapshot s;
    const std::string header = std::string(env_name) + ":" + std::to_string(version) + "\n";
    s.bytes.assign(header.begin(), header.end());
    const auto body = doubles_to_bytes(payload);
    s.bytes.insert(s.bytes.end(), body.begin(), body.end());
    return s;
}

std::vector<double> Snapshot::unpack(std::string_view env_name, int version) const {
    const auto nl = std::find(bytes.begin(), bytes.end(), static_cast<std::uint8_t>('\n'));
    if (nl == bytes.end()) throw InputError("snapshot: missing header");
    const std::string header(bytes.begin(), nl);
    const std::string expect = std::string(env_name) + ":" + std::to_string(version);
    if (header != expect)
        throw InputError("snapshot header '" + header + "' does not match '" + expect + "'");
    return bytes_to_doubles(std::vector<std::uint8_t>(nl + 1, bytes.end()));
}

std::string Snapshot::to_base64() const { return base64_encode(bytes); }

Snapshot Snapshot::from_base64(const std::string& text) {
    Snapshot s;
    s.bytes = base64_decode(text);
    return s;
}

} // namespace cfseq

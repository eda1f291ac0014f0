#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace eqs {

/// 17 significant digits, enough for an exact double round trip.
std::string csv_number(double v);

std::string csv_join(const std::vector<std::string>& fields);

/// FNV-1a, 64 bit.
std::uint64_t fnv1a64(std::string_view data);

std::string hex64(std::uint64_t v);

/// "# eqstates <subcommand> config_hash=<hex> seed=<seed>"
std::string csv_header_comment(std::string_view subcommand, std::uint64_t config_hash, std::uint64_t seed);

} // namespace eqs

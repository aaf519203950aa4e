#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "scp/lattice.hpp"

namespace scp {

/// Initial-configuration literals.
///
/// A literal is either one of the presets
///
///     all-empty
///     single-fertile-1@center
///     single-fertile-2@center
///     product(p_{+1}, p_{-1}, p_{+2}, p_{-2})
///
/// or a sequence of run lines `state*count` (state in 0, +1, -1, +2, -2;
/// `*count` may be omitted for a single site) covering the sites in index
/// order. Runs may also be separated by commas or spaces on one line.
/// Blank lines and `#` comments are ignored.
///
/// `product(...)` draws every site independently; the draw at site x only
/// depends on (seed, x).
Torus parse_config(std::string_view literal, const std::shared_ptr<const Geometry>& geometry,
                   std::uint64_t seed = 0);

/// Run-length encoding in the same literal format, one run per line.
std::string format_config(const Torus& t);

Torus product_measure(const std::shared_ptr<const Geometry>& geometry,
                      const std::array<double, 4>& densities, std::uint64_t seed);

/// One character per site: '0' empty, 'A' +1, 'a' -1, 'B' +2, 'b' -2.
std::string pack_config(const Torus& t);
Torus unpack_config(std::string_view packed, const std::shared_ptr<const Geometry>& geometry);

}  // namespace scp

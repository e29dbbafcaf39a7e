#pragma once

#include <string>
#include <string_view>

namespace spherecs {

/// Sampling manifold: the sphere S^2 or the rotation group SO(3).
enum class Domain { S2, SO3 };

inline std::string_view to_string(Domain d) { return d == Domain::S2 ? "S2" : "SO3"; }

/// Parses "S2"/"SO3" (case-insensitive). Throws InvalidArgument otherwise.
Domain parse_domain(std::string_view text);

}  // namespace spherecs

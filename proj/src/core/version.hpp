#pragma once

namespace slicelab {

inline constexpr const char* kVersion = "slicelab 0.1.0";

}  // namespace slicelab

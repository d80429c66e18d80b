// Copyright the geodiverse authors. Licensed under the terms of the Apache 2.0 license.
// See LICENSE in the project root.
#pragma once

#include <stdexcept>
#include <string>

namespace geodiverse {

/// Rejected input: bad schema, dangling reference, out-of-range value.
/// The CLI maps this to exit code 2.
struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A distance cache is absent, stale, or does not cover the corpus.
/// The CLI maps this to exit code 3.
struct MissingCacheError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace geodiverse

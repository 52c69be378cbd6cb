#pragma once

#include <cstdint>
#include <random>

namespace oiglab {

using Rng = std::mt19937_64;

/// Independent stream for (master seed, stream index). Both the engine and
/// std::seed_seq are fully specified by the standard, so streams are
/// reproducible across platforms.
Rng stream_generator(std::uint64_t master_seed, std::uint64_t stream);

/// Uniform integer in [0, bound) by rejection; bound must be positive.
/// Used instead of std::uniform_int_distribution, whose output is
/// implementation-defined.
std::uint64_t uniform_below(Rng& rng, std::uint64_t bound);

}  // namespace oiglab

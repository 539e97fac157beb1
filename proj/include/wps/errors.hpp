#pragma once

#include <stdexcept>
#include <string>

namespace wps {

// Base for all library errors.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Invalid user-supplied data (duplicates, prefix violations, bad ranges, ...).
struct InputError : Error {
    explicit InputError(const std::string& msg) : Error(msg) {}
};

// A randomized construction exhausted its retry budget.
struct BuildError : Error {
    explicit BuildError(const std::string& msg) : Error(msg) {}
};

// Serialized container problems, tagged so callers can tell them apart.
struct ContainerError : Error {
    enum class Tag { BadMagic, VersionMismatch, SectionCorrupt };
    Tag tag;
    ContainerError(Tag t, const std::string& msg) : Error(msg), tag(t) {}
};

} // namespace wps

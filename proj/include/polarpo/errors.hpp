#pragma once

#include <stdexcept>
#include <string>

namespace polarpo {

/// Relation data contradicts itself (cycle, or a ranking that inverts a
/// provable order). Carries the offending channel pair in the message.
class ConsistencyError : public std::runtime_error {
public:
    explicit ConsistencyError(const std::string& what) : std::runtime_error(what) {}
};

/// Malformed serialized data: bad magic, checksum, version, or schema.
class FormatError : public std::runtime_error {
public:
    explicit FormatError(const std::string& what) : std::runtime_error(what) {}
};

/// Request exceeds a built-in size bound.
class ResourceError : public std::runtime_error {
public:
    explicit ResourceError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace polarpo

#pragma once

#include <stdexcept>
#include <string>

namespace flatkd {

// Bad or inconsistent input: files, coordinates, query parameters.
class DataError : public std::runtime_error {
public:
    explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

// A structural invariant that should hold by construction was found broken.
class InvariantError : public std::runtime_error {
public:
    explicit InvariantError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace flatkd

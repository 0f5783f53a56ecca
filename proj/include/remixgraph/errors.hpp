#pragma once

#include <stdexcept>
#include <string>

namespace remixgraph {

/// Base class for every error thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
public:
    using Error::Error;
};

class UnknownDesign : public Error {
public:
    explicit UnknownDesign(const std::string& id) : Error("unknown design '" + id + "'") {}
};

class DuplicateDesign : public Error {
public:
    explicit DuplicateDesign(const std::string& id) : Error("duplicate design '" + id + "'") {}
};

class SelfLoop : public Error {
public:
    explicit SelfLoop(const std::string& id) : Error("design '" + id + "' lists itself as a parent") {}
};

class CycleError : public Error {
public:
    CycleError(const std::string& child, const std::string& parent)
        : Error("edge " + child + " -> " + parent + " would create a cycle") {}
};

class StubDesign : public Error {
public:
    explicit StubDesign(const std::string& id) : Error("design '" + id + "' is an unresolved stub") {}
};

class FrozenGraph : public Error {
public:
    FrozenGraph() : Error("lineage graph is frozen") {}
};

class EmptyTable : public Error {
public:
    EmptyTable() : Error("no rows with defined scores to derive thresholds from") {}
};

class InvalidConfig : public Error {
public:
    using Error::Error;
};

class HeaderMismatch : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

} // namespace remixgraph

#ifndef GTRACE_ERRORS_HPP
#define GTRACE_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace gtrace {

// Base class for all errors thrown by this library.
struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Malformed input document (bad JSON, missing fields, bad rational syntax).
struct ParseError : Error {
    explicit ParseError(const std::string& what) : Error(what) {}
};

// Structurally invalid input (unknown vertex in an edge, duplicate id, ...).
struct ValidationError : Error {
    explicit ValidationError(const std::string& what) : Error(what) {}
};

// compose(p, q) with source(p) != range(q).
struct CompositionError : Error {
    explicit CompositionError(const std::string& what) : Error(what) {}
};

// A loop argument whose representative is not a loop of the given graph.
struct NotALoop : Error {
    explicit NotALoop(const std::string& what) : Error(what) {}
};

// A measure argument that is not vertex-invariant.
struct NotInvariant : Error {
    explicit NotInvariant(const std::string& what) : Error(what) {}
};

// defect() on a measure with T(mu) > mu somewhere.
struct NegativeDefect : Error {
    explicit NegativeDefect(const std::string& what) : Error(what) {}
};

// shift() applied to a length-zero path.
struct ShiftOfVertex : Error {
    explicit ShiftOfVertex(const std::string& what) : Error(what) {}
};

// An enumeration exceeded its configured cap.
struct SizeLimit : Error {
    explicit SizeLimit(const std::string& what) : Error(what) {}
};

// Character subgroup does not match the measure's periodicity.
struct MalformedFunctional : Error {
    explicit MalformedFunctional(const std::string& what) : Error(what) {}
};

// A verification pass failed; signals a bug, never expected on valid input.
struct InternalInconsistency : Error {
    explicit InternalInconsistency(const std::string& what) : Error(what) {}
};

}  // namespace gtrace

#endif  // GTRACE_ERRORS_HPP

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace setcd {

enum class ErrorKind {
    DisconnectedGraph,
    SelfLoop,
    DuplicateEdge,
    NodeOutOfRange,
    OddDegree,
    DegreeTooLarge,
    EigensolverFailure,
    MultipleZeroEigenvalues,
    TooManyEdges,
    NoMatchingAvailable,
    DimensionMismatch,
    NotPositiveDefinite,
    SingularAggregate,
    IndexOutOfRange,
    NonPositiveStep,
    NegativeSuboptimality,
    IsolatedNode,
    InvalidConfig,
    NegativeQuadForm,
    InequalityViolated,
    DescentViolated,
    InsufficientPoints,
    NonPositiveSuboptimality,
    InconsistentSetSpec,
    ParseError,
};

std::string_view to_string(ErrorKind kind);

class Error : public std::runtime_error
{
public:
    Error(ErrorKind kind, const std::string& what);

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

} // namespace setcd

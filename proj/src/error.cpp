#include <setcd/error.hpp>

namespace setcd {

std::string_view to_string(ErrorKind kind)
{
    switch (kind) {
        case ErrorKind::DisconnectedGraph: return "DisconnectedGraph";
        case ErrorKind::SelfLoop: return "SelfLoop";
        case ErrorKind::DuplicateEdge: return "DuplicateEdge";
        case ErrorKind::NodeOutOfRange: return "NodeOutOfRange";
        case ErrorKind::OddDegree: return "OddDegree";
        case ErrorKind::DegreeTooLarge: return "DegreeTooLarge";
        case ErrorKind::EigensolverFailure: return "EigensolverFailure";
        case ErrorKind::MultipleZeroEigenvalues: return "MultipleZeroEigenvalues";
        case ErrorKind::TooManyEdges: return "TooManyEdges";
        case ErrorKind::NoMatchingAvailable: return "NoMatchingAvailable";
        case ErrorKind::DimensionMismatch: return "DimensionMismatch";
        case ErrorKind::NotPositiveDefinite: return "NotPositiveDefinite";
        case ErrorKind::SingularAggregate: return "SingularAggregate";
        case ErrorKind::IndexOutOfRange: return "IndexOutOfRange";
        case ErrorKind::NonPositiveStep: return "NonPositiveStep";
        case ErrorKind::NegativeSuboptimality: return "NegativeSuboptimality";
        case ErrorKind::IsolatedNode: return "IsolatedNode";
        case ErrorKind::InvalidConfig: return "InvalidConfig";
        case ErrorKind::NegativeQuadForm: return "NegativeQuadForm";
        case ErrorKind::InequalityViolated: return "InequalityViolated";
        case ErrorKind::DescentViolated: return "DescentViolated";
        case ErrorKind::InsufficientPoints: return "InsufficientPoints";
        case ErrorKind::NonPositiveSuboptimality: return "NonPositiveSuboptimality";
        case ErrorKind::InconsistentSetSpec: return "InconsistentSetSpec";
        case ErrorKind::ParseError: return "ParseError";
    }
    return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& what)
    : std::runtime_error(std::string(to_string(kind)) + ": " + what)
    , kind_(kind)
{}

} // namespace setcd

#pragma once

#include <stdexcept>
#include <string>

namespace morita {

/// Base class for all library errors.
struct MoritaError : std::runtime_error {
    explicit MoritaError(const std::string& what) : std::runtime_error(what) {}
};

/// Structurally invalid input: bad dimensions, tensor shape mismatches, k = 0, ...
struct MalformedInput : MoritaError {
    using MoritaError::MoritaError;
};

/// Scalars or containers over different fields were mixed in one operation.
struct FieldMismatch : MoritaError {
    using MoritaError::MoritaError;
};

/// The middle algebras of a tensor construction do not agree.
struct AlgebraMismatch : MoritaError {
    using MoritaError::MoritaError;
};

/// An element expected to satisfy e*e = e does not.
struct NotIdempotent : MoritaError {
    using MoritaError::MoritaError;
};

/// The algebra has no two-sided identity but one is required.
struct NoIdentity : MoritaError {
    using MoritaError::MoritaError;
};

/// A context of arity 2 was expected.
struct WrongArity : MoritaError {
    using MoritaError::MoritaError;
};

/// A context failed verification where a verified one is required.
struct ContextInvalid : MoritaError {
    using MoritaError::MoritaError;
};

/// The classical context's corner ring does not match the targeted diagonal block.
struct CornerMismatch : MoritaError {
    using MoritaError::MoritaError;
};

/// A bilinear map is not balanced over the middle algebra; factoring is impossible.
struct NotBalanced : MoritaError {
    using MoritaError::MoritaError;
};

/// f (X) g does not map the source relations into the target relations.
struct RelationsNotPreserved : MoritaError {
    using MoritaError::MoritaError;
};

/// An internal consistency check failed; indicates a bug, not bad input.
struct InvariantViolated : MoritaError {
    using MoritaError::MoritaError;
};

/// The pro-species has a directed cycle, so its tensor ring is infinite-dimensional.
struct CyclicProspecies : MoritaError {
    using MoritaError::MoritaError;
};

/// The requested prime does not satisfy the instance's congruence conditions.
struct BadPrime : MoritaError {
    using MoritaError::MoritaError;
};

/// A two-coloring of the idempotent set left one side empty.
struct IncompletePartition : MoritaError {
    using MoritaError::MoritaError;
};

/// Input text could not be parsed.
struct ParseError : MoritaError {
    using MoritaError::MoritaError;
};

/// A name in a spec file does not resolve to a declared object.
struct UnresolvedReference : MoritaError {
    using MoritaError::MoritaError;
};

}  // namespace morita

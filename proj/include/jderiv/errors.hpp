#ifndef JDERIV_ERRORS_HPP
#define JDERIV_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace jderiv
{

/// Base class of every exception thrown by the library.
class Error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

/// Invalid argument: outside the documented domain of an operation.
class DomainError : public Error
{
public:
    using Error::Error;
};

/// The requested accuracy cannot be reached at the current working precision or
/// truncation order. Callers typically retry with doubled precision.
class PrecisionError : public Error
{
public:
    using Error::Error;
};

/// Evaluation too close to a pole of a rational function (W near 0 or 1728 in p_c,
/// or j'(sigma) vanishing in the Example-2 quotient).
class PoleProximityError : public Error
{
public:
    using Error::Error;
};

/// d Phi_N / dY vanishes: the point lies over a ramification point of the modular curve.
class RamificationError : public Error
{
public:
    using Error::Error;
};

/// A cleared-denominator condition was evaluated on its excluded locus.
class DenominatorLocusError : public Error
{
public:
    using Error::Error;
};

/// Two routes that must agree did not. Always indicates a bug.
class ConsistencyError : public Error
{
public:
    using Error::Error;
};

} // namespace jderiv

#endif

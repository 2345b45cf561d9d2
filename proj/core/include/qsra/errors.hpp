#pragma once

#include <stdexcept>
#include <string>

namespace qsra {

class Error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

// Malformed documents, invariant violations, bad parameters.
class InputError : public Error
{
public:
    using Error::Error;
};

// Failures that only surface once a simulation is set up, e.g. a job that
// needs more qubits than the chip has.
class SimulationError : public Error
{
public:
    using Error::Error;
};

}  // namespace qsra

#ifndef SIG3_ERRORS_HPP
#define SIG3_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace sig3
{

/// Argument outside the mathematical domain of an operation.
class domain_error : public std::domain_error
{
public:
    using std::domain_error::domain_error;
};

/// An iterative method hit its term or iteration cap.
class non_convergence : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

/// Evaluation requested at (or numerically indistinguishable from) a pole.
class pole_error : public std::domain_error
{
public:
    using std::domain_error::domain_error;
};

/// Midpoint values too close together to define a period lattice.
class degenerate_lattice : public std::domain_error
{
public:
    using std::domain_error::domain_error;
};

class quadrature_failure : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

/// Malformed or empty verification grid.
class config_error : public std::invalid_argument
{
public:
    using std::invalid_argument::invalid_argument;
};

} // namespace sig3

#endif

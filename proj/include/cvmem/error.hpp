#ifndef CVMEM_ERROR_HPP
#define CVMEM_ERROR_HPP

#include <stdexcept>
#include <string>

namespace cvmem {

/// Invalid or non-finite input parameter.
class ParameterError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Parameters are finite but outside the region where the operation is defined.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// A numerical procedure failed to reach its tolerance.
class NumericError : public std::runtime_error {
public:
    NumericError(const std::string& what, double achieved_error = 0.0)
        : std::runtime_error(what), m_achieved(achieved_error)
    {
    }

    double achieved_error() const { return m_achieved; }

private:
    double m_achieved;
};

void require_finite(double value, const char* name);
void require_positive(double value, const char* name);

} // namespace cvmem

#endif

#pragma once

#include <stdexcept>
#include <string>

namespace vsj {

/// Malformed vectors, files, parameters or ids.
class InvalidInput : public std::invalid_argument {
public:
	explicit InvalidInput(const std::string &what) : std::invalid_argument(what) {}
};

/// Sampling was requested from a stratum that holds no pairs.
class EmptyStratum : public std::runtime_error {
public:
	explicit EmptyStratum(const std::string &what) : std::runtime_error(what) {}
};

/// The exact oracle refuses inputs above its configured size limit.
class OracleRefusal : public std::runtime_error {
public:
	explicit OracleRefusal(const std::string &what) : std::runtime_error(what) {}
};

} // namespace vsj

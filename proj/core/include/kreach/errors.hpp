#pragma once

#include <stdexcept>
#include <string>

namespace kreach {

// A rigorous bound could not be established under the configured policies:
// the dimension cap was hit before the certificate target (strict mode), or
// no admissible Taylor order exists for the time increment.
class CertificateFailure : public std::runtime_error {
public:
  explicit CertificateFailure(const std::string& message)
      : std::runtime_error(message) {}
};

} // namespace kreach

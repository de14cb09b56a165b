#ifndef LOSTWORK_ERROR_HPP
#define LOSTWORK_ERROR_HPP

#include <stdexcept>
#include <string>
#include <utility>

namespace lw {

/// Runtime failure with a stable machine-readable code (e.g. "invalid_bath",
/// "timeline_too_short"). The code is the contract; the message is for humans.
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& message)
        : std::runtime_error(message), code_(std::move(code)) {}

    const std::string& code() const noexcept { return code_; }

private:
    std::string code_;
};

}  // namespace lw

#endif

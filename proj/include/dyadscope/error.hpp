#pragma once

#include <stdexcept>
#include <string>

namespace dyadscope {

// Anything wrong with user-supplied input: files, formats, config values.
// The CLI maps this to exit code 2; everything else is an internal error (1).
class InputError : public std::runtime_error {
public:
    explicit InputError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace dyadscope

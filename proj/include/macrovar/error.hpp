#pragma once

#include <stdexcept>
#include <string>

namespace macrovar {

enum class Errc {
    config,
    io,
    parse,
    gap,
    duplicate,
    domain,
    insufficient_data,
    no_overlap,
    range,
    collinear,
    degenerate,
    identification,
    bootstrap_failure,
    fetch,
};

// Exit-code family of an error: 2 config, 3 data, 4 numerical.
int exit_code(Errc code) noexcept;

const char* errc_name(Errc code) noexcept;

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}

    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

}  // namespace macrovar

#include "macrovar/error.hpp"

namespace macrovar {

int exit_code(Errc code) noexcept {
    switch (code) {
        case Errc::config:
            return 2;
        case Errc::io:
        case Errc::parse:
        case Errc::gap:
        case Errc::duplicate:
        case Errc::domain:
        case Errc::insufficient_data:
        case Errc::no_overlap:
        case Errc::range:
        case Errc::fetch:
            return 3;
        case Errc::collinear:
        case Errc::degenerate:
        case Errc::identification:
        case Errc::bootstrap_failure:
            return 4;
    }
    return 4;
}

const char* errc_name(Errc code) noexcept {
    switch (code) {
        case Errc::config: return "config";
        case Errc::io: return "io";
        case Errc::parse: return "parse";
        case Errc::gap: return "gap";
        case Errc::duplicate: return "duplicate";
        case Errc::domain: return "domain";
        case Errc::insufficient_data: return "insufficient_data";
        case Errc::no_overlap: return "no_overlap";
        case Errc::range: return "range";
        case Errc::collinear: return "collinear";
        case Errc::degenerate: return "degenerate";
        case Errc::identification: return "identification";
        case Errc::bootstrap_failure: return "bootstrap_failure";
        case Errc::fetch: return "fetch";
    }
    return "unknown";
}

}  // namespace macrovar

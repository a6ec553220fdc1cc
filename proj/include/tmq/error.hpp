#pragma once

#include <stdexcept>
#include <string>

namespace tmq {

enum class Errc {
    not_prime,
    too_small,
    overflow,
    x_divisible_by_q,
    u_not_invertible,
    a_does_not_divide,
    divisibility_violated,
    not_setwise_coprime,
    non_positive_y,
    trivial_character,
    non_generic_character,
    x_out_of_range,
    induced_triple,
    budget_exceeded,
    box_exceeds_modulus,
    usage,
    unknown_suite,
    io,
};

// CamelCase name used in reports, e.g. "NotPrime".
const char* errc_name(Errc e);

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what);
    Errc code() const { return code_; }

private:
    Errc code_;
};

[[noreturn]] void fail(Errc code, const std::string& what);

}  // namespace tmq

#include "tmq/error.hpp"

namespace tmq {

const char* errc_name(Errc e)
{
    switch (e) {
    case Errc::not_prime: return "NotPrime";
    case Errc::too_small: return "TooSmall";
    case Errc::overflow: return "Overflow";
    case Errc::x_divisible_by_q: return "XDivisibleByQ";
    case Errc::u_not_invertible: return "UNotInvertible";
    case Errc::a_does_not_divide: return "ADoesNotDivide";
    case Errc::divisibility_violated: return "DivisibilityViolated";
    case Errc::not_setwise_coprime: return "NotSetwiseCoprime";
    case Errc::non_positive_y: return "NonPositiveY";
    case Errc::trivial_character: return "TrivialCharacter";
    case Errc::non_generic_character: return "NonGenericCharacter";
    case Errc::x_out_of_range: return "XOutOfRange";
    case Errc::induced_triple: return "InducedTriple";
    case Errc::budget_exceeded: return "BudgetExceeded";
    case Errc::box_exceeds_modulus: return "BoxExceedsModulus";
    case Errc::usage: return "UsageError";
    case Errc::unknown_suite: return "UnknownSuite";
    case Errc::io: return "IoError";
    }
    return "Unknown";
}

Error::Error(Errc code, const std::string& what)
    : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code)
{
}

void fail(Errc code, const std::string& what)
{
    throw Error(code, what);
}

}  // namespace tmq

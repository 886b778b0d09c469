#include "flowtri/numeric.hpp"

#include "flowtri/errors.hpp"

namespace flowtri {

std::string rat_to_string(const Rat& r) {
    if (is_integer(r)) return numerator(r).str();
    return numerator(r).str() + "/" + denominator(r).str();
}

Rat rat_from_string(const std::string& s) {
    auto parse_int = [](const std::string& t) -> Int {
        if (t.empty()) throw InvalidInputError("empty integer in rational literal");
        size_t k = (t[0] == '-' || t[0] == '+') ? 1 : 0;
        if (k == t.size()) throw InvalidInputError("malformed rational: '" + t + "'");
        for (; k < t.size(); ++k)
            if (t[k] < '0' || t[k] > '9')
                throw InvalidInputError("malformed rational: '" + t + "'");
        return Int(t);
    };
    auto slash = s.find('/');
    if (slash == std::string::npos) return Rat(parse_int(s));
    Int num = parse_int(s.substr(0, slash));
    Int den = parse_int(s.substr(slash + 1));
    if (den == 0) throw InvalidInputError("zero denominator: '" + s + "'");
    return Rat(num, den);
}

}  // namespace flowtri

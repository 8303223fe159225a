#include "multiform/forms.hpp"

#include <numeric>
#include <sstream>
#include <stdexcept>

namespace multiform {

namespace {
constexpr std::int64_t kCoeffCap = (1LL << 31) - 1;

std::int64_t checked_i64(__int128 v, const char* what) {
    if (v > static_cast<__int128>(INT64_MAX) || v < static_cast<__int128>(INT64_MIN))
        throw std::overflow_error(what);
    return static_cast<std::int64_t>(v);
}
}  // namespace

LinearForm::LinearForm(std::int64_t a_, std::int64_t b_, std::int64_t den_)
    : a(a_), b(b_), den(den_) {
    if (den == 0) throw std::invalid_argument("LinearForm: zero denominator");
    if (a == 0 && b == 0) throw std::invalid_argument("LinearForm: (a,b) = (0,0)");
    if (den < 0) {
        a = -a;
        b = -b;
        den = -den;
    }
    std::int64_t g = std::gcd(std::gcd(std::abs(a), std::abs(b)), den);
    a /= g;
    b /= g;
    den /= g;
    if (std::abs(a) > kCoeffCap || std::abs(b) > kCoeffCap || den > kCoeffCap)
        throw std::invalid_argument("LinearForm: coefficients exceed 32-bit cap");
}

std::optional<std::int64_t> LinearForm::evaluate(std::int64_t x, std::int64_t y) const {
    __int128 t = static_cast<__int128>(a) * x + static_cast<__int128>(b) * y;
    if (t % den != 0) return std::nullopt;
    return checked_i64(t / den, "LinearForm::evaluate overflow");
}

bool LinearForm::proportional_to(const LinearForm& o) const {
    __int128 cross = static_cast<__int128>(a) * o.b - static_cast<__int128>(o.a) * b;
    return cross == 0;
}

std::string LinearForm::str() const {
    std::ostringstream os;
    os << a << "," << b;
    if (den != 1) os << "/" << den;
    return os.str();
}

std::string FormFamily::str() const {
    std::string s;
    for (std::size_t i = 0; i < forms.size(); ++i) {
        if (i) s += "; ";
        s += forms[i].str();
    }
    return s;
}

FormFamily parse_family(const std::string& text) {
    std::vector<LinearForm> forms;
    std::stringstream ss(text);
    std::string part;
    while (std::getline(ss, part, ';')) {
        std::int64_t a, b, den = 1;
        char comma = 0;
        std::stringstream ps(part);
        if (!(ps >> a >> comma >> b) || comma != ',')
            throw std::invalid_argument("parse_family: expected 'a,b[/den]' in '" + part + "'");
        char slash = 0;
        if (ps >> slash) {
            if (slash != '/' || !(ps >> den))
                throw std::invalid_argument("parse_family: bad denominator in '" + part + "'");
        }
        forms.emplace_back(a, b, den);
    }
    if (forms.size() < 2) throw std::invalid_argument("parse_family: need at least L_0 and L_1");
    return FormFamily(std::move(forms));
}

std::optional<FamilyViolation> validate_family(const FormFamily& family, bool require_nonaxis) {
    const auto& fs = family.forms;
    if (fs.size() < 2) return FamilyViolation{"family needs M >= 1", -1, -1};
    if (require_nonaxis) {
        for (std::size_t j = 1; j < fs.size(); ++j) {
            if (fs[j].is_x_axis())
                return FamilyViolation{"L_" + std::to_string(j) + " proportional to (x,y)->x",
                                       static_cast<int>(j), -1};
            if (fs[j].is_y_axis())
                return FamilyViolation{"L_" + std::to_string(j) + " proportional to (x,y)->y",
                                       static_cast<int>(j), -1};
        }
    }
    for (std::size_t i = 0; i < fs.size(); ++i)
        for (std::size_t j = i + 1; j < fs.size(); ++j)
            if (fs[i].proportional_to(fs[j]))
                return FamilyViolation{"L_" + std::to_string(i) + " proportional to L_" +
                                           std::to_string(j),
                                       static_cast<int>(i), static_cast<int>(j)};
    return std::nullopt;
}

std::optional<std::pair<std::int64_t, std::int64_t>> LatticeMap::preimage(std::int64_t u,
                                                                          std::int64_t v) const {
    __int128 xn = static_cast<__int128>(p22) * u - static_cast<__int128>(p12) * v;
    __int128 yn = -static_cast<__int128>(p21) * u + static_cast<__int128>(p11) * v;
    if (xn % det != 0 || yn % det != 0) return std::nullopt;
    return std::make_pair(checked_i64(xn / det, "LatticeMap::preimage overflow"),
                          checked_i64(yn / det, "LatticeMap::preimage overflow"));
}

std::pair<std::int64_t, std::int64_t> LatticeMap::image(std::int64_t x, std::int64_t y) const {
    __int128 u = static_cast<__int128>(p11) * x + static_cast<__int128>(p12) * y;
    __int128 v = static_cast<__int128>(p21) * x + static_cast<__int128>(p22) * y;
    return {checked_i64(u, "LatticeMap::image overflow"),
            checked_i64(v, "LatticeMap::image overflow")};
}

ChangeOfVariables change_of_variables(const FormFamily& family) {
    if (family.degree() < 2)
        throw std::invalid_argument("change_of_variables: need M >= 2");
    const LinearForm& L1 = family.form(1);
    const LinearForm& L2 = family.form(2);
    if (L1.proportional_to(L2))
        throw std::invalid_argument("change_of_variables: L_1 proportional to L_2");

    const std::int64_t lambda = std::lcm(L1.den, L2.den);
    LatticeMap P;
    P.p11 = lambda / L1.den * L1.a;
    P.p12 = lambda / L1.den * L1.b;
    P.p21 = lambda / L2.den * L2.a;
    P.p22 = lambda / L2.den * L2.b;
    P.det = checked_i64(static_cast<__int128>(P.p11) * P.p22 -
                            static_cast<__int128>(P.p12) * P.p21,
                        "change_of_variables: determinant overflow");

    std::vector<LinearForm> out;
    out.reserve(family.forms.size());
    for (int j = 0; j <= family.degree(); ++j) {
        if (j == 1) {
            out.emplace_back(1, 0, 1);
            continue;
        }
        if (j == 2) {
            out.emplace_back(0, 1, 1);
            continue;
        }
        const LinearForm& L = family.form(j);
        // L composed with P^{-1}: ((a p22 - b p21) u + (-a p12 + b p11) v) / (den det)
        std::int64_t na = checked_i64(static_cast<__int128>(L.a) * P.p22 -
                                          static_cast<__int128>(L.b) * P.p21,
                                      "change_of_variables overflow");
        std::int64_t nb = checked_i64(-static_cast<__int128>(L.a) * P.p12 +
                                          static_cast<__int128>(L.b) * P.p11,
                                      "change_of_variables overflow");
        std::int64_t nden = checked_i64(static_cast<__int128>(L.den) * P.det,
                                        "change_of_variables overflow");
        out.emplace_back(na, nb, nden);
    }

    ChangeOfVariables cov;
    cov.family = FormFamily(std::move(out));
    cov.lambda = lambda;
    cov.window_factor =
        std::max(std::abs(P.p11) + std::abs(P.p12), std::abs(P.p21) + std::abs(P.p22));
    cov.lattice = P;
    return cov;
}

}  // namespace multiform

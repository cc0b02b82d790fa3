#include "prt/intpoly.hpp"

#include <cctype>
#include <sstream>
#include <stdexcept>

namespace prt {

IntPoly::IntPoly(std::vector<mpz_class> ascending_coeffs)
    : coeffs_(std::move(ascending_coeffs)) {
    normalize();
}

void IntPoly::normalize() {
    while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
}

IntPoly IntPoly::constant(mpz_class c) {
    IntPoly p;
    if (c != 0) p.coeffs_.push_back(std::move(c));
    return p;
}

IntPoly IntPoly::monomial(mpz_class c, unsigned degree) {
    IntPoly p;
    if (c != 0) {
        p.coeffs_.assign(degree + 1, mpz_class(0));
        p.coeffs_[degree] = std::move(c);
    }
    return p;
}

const mpz_class& IntPoly::leading() const {
    if (coeffs_.empty()) throw std::domain_error("leading coefficient of zero polynomial");
    return coeffs_.back();
}

mpz_class IntPoly::coeff(size_t i) const {
    return i < coeffs_.size() ? coeffs_[i] : mpz_class(0);
}

mpz_class IntPoly::operator()(const mpz_class& x) const {
    mpz_class acc = 0;
    for (size_t i = coeffs_.size(); i-- > 0;) {
        acc *= x;
        acc += coeffs_[i];
    }
    return acc;
}

double IntPoly::eval_double(double x) const {
    double acc = 0.0;
    for (size_t i = coeffs_.size(); i-- > 0;) acc = acc * x + coeffs_[i].get_d();
    return acc;
}

IntPoly IntPoly::derivative() const {
    if (coeffs_.size() <= 1) return IntPoly{};
    std::vector<mpz_class> d(coeffs_.size() - 1);
    for (size_t i = 1; i < coeffs_.size(); ++i) d[i - 1] = coeffs_[i] * static_cast<unsigned long>(i);
    return IntPoly(std::move(d));
}

IntPoly IntPoly::operator+(const IntPoly& o) const {
    std::vector<mpz_class> r(std::max(coeffs_.size(), o.coeffs_.size()), mpz_class(0));
    for (size_t i = 0; i < coeffs_.size(); ++i) r[i] += coeffs_[i];
    for (size_t i = 0; i < o.coeffs_.size(); ++i) r[i] += o.coeffs_[i];
    return IntPoly(std::move(r));
}

IntPoly IntPoly::operator-(const IntPoly& o) const { return *this + (-o); }

IntPoly IntPoly::operator-() const {
    std::vector<mpz_class> r(coeffs_);
    for (auto& c : r) c = -c;
    return IntPoly(std::move(r));
}

IntPoly IntPoly::operator*(const IntPoly& o) const {
    if (is_zero() || o.is_zero()) return IntPoly{};
    std::vector<mpz_class> r(coeffs_.size() + o.coeffs_.size() - 1, mpz_class(0));
    for (size_t i = 0; i < coeffs_.size(); ++i)
        for (size_t j = 0; j < o.coeffs_.size(); ++j) r[i + j] += coeffs_[i] * o.coeffs_[j];
    return IntPoly(std::move(r));
}

IntPoly IntPoly::operator*(const mpz_class& c) const {
    std::vector<mpz_class> r(coeffs_);
    for (auto& x : r) x *= c;
    return IntPoly(std::move(r));
}

mpz_class IntPoly::content() const {
    mpz_class g = 0;
    for (const auto& c : coeffs_) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
    return g;
}

IntPoly IntPoly::primitive_part() const {
    if (is_zero()) return IntPoly{};
    mpz_class g = content();
    if (leading() < 0) g = -g;
    return divide_exact(g);
}

IntPoly IntPoly::divide_exact(const mpz_class& c) const {
    if (c == 0) throw std::domain_error("division by zero");
    std::vector<mpz_class> r(coeffs_.size());
    for (size_t i = 0; i < coeffs_.size(); ++i) {
        mpz_class q, rem;
        mpz_tdiv_qr(q.get_mpz_t(), rem.get_mpz_t(), coeffs_[i].get_mpz_t(), c.get_mpz_t());
        if (rem != 0) throw std::domain_error("inexact scalar division of polynomial");
        r[i] = q;
    }
    return IntPoly(std::move(r));
}

IntPoly IntPoly::divide_exact(const IntPoly& divisor) const {
    if (divisor.is_zero()) throw std::domain_error("division by zero polynomial");
    if (is_zero()) return IntPoly{};
    if (degree() < divisor.degree()) throw std::domain_error("inexact polynomial division");
    std::vector<mpz_class> rem(coeffs_);
    std::vector<mpz_class> quot(coeffs_.size() - divisor.coeffs_.size() + 1, mpz_class(0));
    const auto& dc = divisor.coeffs_;
    for (size_t i = quot.size(); i-- > 0;) {
        mpz_class top = rem[i + dc.size() - 1];
        if (top == 0) continue;
        mpz_class q, r;
        mpz_tdiv_qr(q.get_mpz_t(), r.get_mpz_t(), top.get_mpz_t(), dc.back().get_mpz_t());
        if (r != 0) throw std::domain_error("inexact polynomial division");
        quot[i] = q;
        for (size_t j = 0; j < dc.size(); ++j) rem[i + j] -= q * dc[j];
    }
    for (const auto& c : rem)
        if (c != 0) throw std::domain_error("inexact polynomial division");
    return IntPoly(std::move(quot));
}

std::string IntPoly::to_string() const {
    if (is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (size_t i = coeffs_.size(); i-- > 0;) {
        const mpz_class& c = coeffs_[i];
        if (c == 0) continue;
        mpz_class ac = abs(c);
        if (first) {
            if (c < 0) os << "-";
            first = false;
        } else {
            os << (c < 0 ? " - " : " + ");
        }
        if (i == 0 || ac != 1) os << ac.get_str();
        if (i >= 1) {
            os << "x";
            if (i >= 2) os << "^" << i;
        }
    }
    return os.str();
}

std::string IntPoly::to_coeff_string() const {
    if (is_zero()) return "0";
    std::ostringstream os;
    for (size_t i = 0; i < coeffs_.size(); ++i) {
        if (i) os << ",";
        os << coeffs_[i].get_str();
    }
    return os.str();
}

namespace {

// Parses a sum of monomials "c", "c x", "c x^e", "x^e", with signs.
IntPoly parse_sum(const std::string& s, size_t& pos, char terminator) {
    IntPoly acc;
    auto skip_ws = [&] {
        while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    };
    skip_ws();
    bool expect_term = true;
    int sign = 1;
    while (pos < s.size() && s[pos] != terminator) {
        skip_ws();
        if (pos >= s.size() || s[pos] == terminator) break;
        char c = s[pos];
        if (c == '+' || c == '-') {
            sign = (c == '-') ? -sign : sign;
            ++pos;
            expect_term = true;
            continue;
        }
        if (!expect_term) throw std::invalid_argument("polynomial parse: missing operator near '" + s.substr(pos) + "'");
        mpz_class coef = 1;
        bool have_digits = false;
        std::string digits;
        while (pos < s.size() && (std::isdigit(static_cast<unsigned char>(s[pos])))) {
            digits += s[pos++];
            have_digits = true;
        }
        if (have_digits) coef = mpz_class(digits);
        skip_ws();
        unsigned deg = 0;
        if (pos < s.size() && (s[pos] == 'x' || s[pos] == 'X')) {
            ++pos;
            deg = 1;
            skip_ws();
            if (pos < s.size() && s[pos] == '^') {
                ++pos;
                skip_ws();
                std::string ed;
                while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ed += s[pos++];
                if (ed.empty()) throw std::invalid_argument("polynomial parse: exponent expected");
                deg = static_cast<unsigned>(std::stoul(ed));
            }
        } else if (!have_digits) {
            throw std::invalid_argument("polynomial parse: term expected near '" + s.substr(pos) + "'");
        }
        acc = acc + IntPoly::monomial(sign * coef, deg);
        sign = 1;
        expect_term = false;
        skip_ws();
    }
    if (expect_term && acc.is_zero()) throw std::invalid_argument("polynomial parse: empty expression");
    return acc;
}

bool looks_like_coeff_list(const std::string& t) {
    if (t.find(',') != std::string::npos) return true;
    // A bare integer is a constant polynomial in coefficient form.
    size_t i = 0;
    if (i < t.size() && (t[i] == '+' || t[i] == '-')) ++i;
    if (i >= t.size()) return false;
    for (; i < t.size(); ++i)
        if (!std::isdigit(static_cast<unsigned char>(t[i]))) return false;
    return true;
}

}  // namespace

IntPoly IntPoly::parse(const std::string& text) {
    std::string t;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c))) t += c;
    if (t.empty()) throw std::invalid_argument("empty polynomial string");

    if (looks_like_coeff_list(t)) {
        std::vector<mpz_class> cs;
        std::stringstream ss(t);
        std::string item;
        while (std::getline(ss, item, ',')) {
            if (item.empty()) throw std::invalid_argument("polynomial parse: empty coefficient");
            cs.emplace_back(item);
        }
        return IntPoly(std::move(cs));
    }

    // Product form: one or more factors, each "(...)" or a bare sum.
    IntPoly result = IntPoly::constant(1);
    size_t pos = 0;
    bool any = false;
    while (pos < t.size()) {
        if (t[pos] == '(') {
            ++pos;
            IntPoly factor = parse_sum(t, pos, ')');
            if (pos >= t.size() || t[pos] != ')') throw std::invalid_argument("polynomial parse: unbalanced parenthesis");
            ++pos;
            result = result * factor;
            any = true;
        } else if (t[pos] == '*') {
            ++pos;
        } else {
            IntPoly factor = parse_sum(t, pos, '(');
            result = result * factor;
            any = true;
        }
    }
    if (!any) throw std::invalid_argument("polynomial parse: no factors");
    return result;
}

IntPoly taylor_shift(const IntPoly& h, const mpz_class& b, const mpz_class& m) {
    // Horner in the polynomial ring: fold coefficients against (m*x + b).
    IntPoly lin(std::vector<mpz_class>{b, m});
    IntPoly acc;
    for (size_t i = h.coeffs().size(); i-- > 0;) acc = acc * lin + IntPoly::constant(h.coeffs()[i]);
    return acc;
}

mpz_class content_nonconstant(const IntPoly& g) {
    if (g.degree() < 1) throw std::domain_error("content_nonconstant requires deg >= 1");
    mpz_class gc = 0;
    for (size_t i = 1; i < g.coeffs().size(); ++i)
        mpz_gcd(gc.get_mpz_t(), gc.get_mpz_t(), g.coeffs()[i].get_mpz_t());
    return gc;
}

IntPoly poly_gcd(IntPoly a, IntPoly b) {
    if (a.is_zero()) return b.is_zero() ? b : b.primitive_part();
    if (b.is_zero()) return a.primitive_part();
    a = a.primitive_part();
    b = b.primitive_part();
    while (!b.is_zero()) {
        // Pseudo-remainder of a by b, then reduce to primitive part.
        int k = a.degree() - b.degree();
        if (k < 0) {
            std::swap(a, b);
            continue;
        }
        mpz_class lead = b.leading();
        mpz_class scale;
        mpz_pow_ui(scale.get_mpz_t(), lead.get_mpz_t(), static_cast<unsigned long>(k) + 1);
        IntPoly r = a * scale;
        while (!r.is_zero() && r.degree() >= b.degree()) {
            int shift = r.degree() - b.degree();
            mpz_class q, rem;
            mpz_tdiv_qr(q.get_mpz_t(), rem.get_mpz_t(), r.leading().get_mpz_t(), lead.get_mpz_t());
            if (rem != 0) throw std::logic_error("pseudo-division invariant violated");
            r = r - (b * q) * IntPoly::monomial(1, static_cast<unsigned>(shift));
        }
        a = b;
        b = r.is_zero() ? r : r.primitive_part();
    }
    return a.primitive_part();
}

std::vector<std::pair<IntPoly, unsigned>> squarefree_decomposition(const IntPoly& h) {
    std::vector<std::pair<IntPoly, unsigned>> out;
    if (h.degree() < 1) return out;
    IntPoly f = h.primitive_part();
    // Yun's algorithm over the rationals, kept primitive over the integers.
    IntPoly fp = f.derivative();
    IntPoly g = poly_gcd(f, fp);
    IntPoly c = f.divide_exact(g.is_zero() ? f : g);
    if (g.degree() < 1) {
        out.emplace_back(f, 1);
        return out;
    }
    IntPoly d = fp.divide_exact(g) - c.derivative();
    unsigned i = 1;
    while (c.degree() >= 1) {
        IntPoly gi = poly_gcd(c, d);
        if (gi.degree() >= 1) out.emplace_back(gi, i);
        IntPoly c_next = c.divide_exact(gi);
        d = d.divide_exact(gi) - c_next.derivative();
        c = c_next;
        ++i;
    }
    return out;
}

}  // namespace prt

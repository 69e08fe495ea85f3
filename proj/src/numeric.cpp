#include "arvol/numeric.hpp"

#include <mpfr.h>

#include <cmath>
#include <stdexcept>

namespace arvol {

Rational parse_rational(const std::string& text) {
    std::string s;
    for (char c : text)
        if (c != ' ') s.push_back(c);
    if (s.empty()) throw std::invalid_argument("empty rational");
    if (s[0] == '+') s.erase(0, 1);
    size_t slash = s.find('/');
    auto check_digits = [&](const std::string& part, bool allow_sign) {
        size_t i = 0;
        if (allow_sign && !part.empty() && part[0] == '-') i = 1;
        if (i >= part.size()) throw std::invalid_argument("malformed rational '" + text + "'");
        for (; i < part.size(); ++i)
            if (part[i] < '0' || part[i] > '9')
                throw std::invalid_argument("malformed rational '" + text + "'");
    };
    Rational q;
    if (slash == std::string::npos) {
        check_digits(s, true);
        q = Rational(Integer(s), 1);
    } else {
        std::string num = s.substr(0, slash), den = s.substr(slash + 1);
        check_digits(num, true);
        check_digits(den, false);
        Integer d(den);
        if (d == 0) throw std::invalid_argument("zero denominator in '" + text + "'");
        q = Rational(Integer(num), d);
    }
    q.canonicalize();
    return q;
}

std::string format_rational(const Rational& q) {
    Rational c = q;
    c.canonicalize();
    return c.get_str();
}

double to_double(const Rational& q) { return q.get_d(); }

double log_of(const Integer& n) {
    if (n <= 0) throw std::domain_error("log of non-positive integer");
    long exp = 0;
    double mant = mpz_get_d_2exp(&exp, n.get_mpz_t());
    return std::log(mant) + static_cast<double>(exp) * std::log(2.0);
}

double log_of(const Rational& q) {
    if (q <= 0) throw std::domain_error("log of non-positive rational");
    return log_of(Integer(q.get_num())) - log_of(Integer(q.get_den()));
}

Integer floor_of(const Rational& q) {
    Integer r;
    mpz_fdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
    return r;
}

Integer ceil_of(const Rational& q) {
    Integer r;
    mpz_cdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
    return r;
}

Integer power(const Integer& base, unsigned long e) {
    Integer r;
    mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
    return r;
}

Rational power(const Rational& base, unsigned long e) {
    Rational r(power(Integer(base.get_num()), e), power(Integer(base.get_den()), e));
    r.canonicalize();
    return r;
}

long ord_p(const Integer& n, const Integer& p) {
    if (n == 0) throw std::domain_error("valuation of zero");
    Integer m = abs(n);
    long k = 0;
    while (mpz_divisible_p(m.get_mpz_t(), p.get_mpz_t())) {
        m /= p;
        ++k;
    }
    return k;
}

long ord_p(const Rational& q, const Integer& p) {
    return ord_p(Integer(q.get_num()), p) - ord_p(Integer(q.get_den()), p);
}

bool is_prime(const Integer& p) {
    if (p < 2) return false;
    return mpz_probab_prime_p(p.get_mpz_t(), 40) > 0;
}

LogScale LogScale::of(const Rational& q) { return LogScale{q, 1}; }

LogScale LogScale::log(const Rational& r) {
    if (r <= 0) throw std::invalid_argument("log of non-positive rational");
    return LogScale{0, r};
}

LogScale LogScale::parse(const std::string& text) {
    std::string s;
    for (char c : text)
        if (c != ' ') s.push_back(c);
    size_t pos = s.find("log(");
    if (pos == std::string::npos) return of(parse_rational(s));
    if (s.back() != ')') throw std::invalid_argument("malformed scale '" + text + "'");
    Rational arg = parse_rational(s.substr(pos + 4, s.size() - pos - 5));
    if (arg <= 0) throw std::invalid_argument("log argument must be positive in '" + text + "'");
    std::string head = s.substr(0, pos);
    bool negative = false;
    if (!head.empty() && (head.back() == '+' || head.back() == '-')) {
        negative = head.back() == '-';
        head.pop_back();
    }
    Rational lin = head.empty() ? Rational(0) : parse_rational(head);
    if (negative) arg = 1 / arg;
    return LogScale{lin, arg};
}

double LogScale::value() const { return to_double(linear) + (log_arg == 1 ? 0.0 : log_of(log_arg)); }

std::string LogScale::str() const {
    if (log_arg == 1) return format_rational(linear);
    std::string lg = "log(" + format_rational(log_arg) + ")";
    if (linear == 0) return lg;
    return format_rational(linear) + "+" + lg;
}

LogScale LogScale::operator+(const LogScale& o) const { return LogScale{linear + o.linear, log_arg * o.log_arg}; }
LogScale LogScale::operator-() const { return LogScale{-linear, 1 / log_arg}; }
LogScale LogScale::operator-(const LogScale& o) const { return *this + (-o); }

LogScale LogScale::times(long n) const {
    Rational arg = power(log_arg, static_cast<unsigned long>(n < 0 ? -n : n));
    if (n < 0) arg = 1 / arg;
    return LogScale{linear * n, arg};
}

LogScale LogScale::times(const Rational& n) const {
    if (n.get_den() == 1) return times(Integer(n.get_num()).get_si());
    if (!is_rational()) throw std::invalid_argument("non-integral multiple of a logarithmic scale");
    return LogScale{linear * n, 1};
}

namespace {

struct Mpfr {
    mpfr_t v;
    explicit Mpfr(mpfr_prec_t prec) { mpfr_init2(v, prec); }
    ~Mpfr() { mpfr_clear(v); }
    Mpfr(const Mpfr&) = delete;
    Mpfr& operator=(const Mpfr&) = delete;
};

// Enclosure [lo, hi] of exp(linear) * log_arg at the precision of lo and hi.
void exp_bounds(const LogScale& s, Mpfr& lo, Mpfr& hi) {
    mpfr_set_q(lo.v, s.linear.get_mpq_t(), MPFR_RNDD);
    mpfr_set_q(hi.v, s.linear.get_mpq_t(), MPFR_RNDU);
    mpfr_exp(lo.v, lo.v, MPFR_RNDD);
    mpfr_exp(hi.v, hi.v, MPFR_RNDU);
    mpfr_mul_q(lo.v, lo.v, s.log_arg.get_mpq_t(), MPFR_RNDD);
    mpfr_mul_q(hi.v, hi.v, s.log_arg.get_mpq_t(), MPFR_RNDU);
}

mpfr_prec_t start_precision(const LogScale& s) {
    double mag = std::fabs(s.value()) / std::log(2.0);
    return static_cast<mpfr_prec_t>(96 + 2 * mag);
}

}  // namespace

int compare_with_exp(const Rational& x, const LogScale& s) {
    if (s.linear == 0) {
        int c = cmp(x, s.log_arg);
        return (c > 0) - (c < 0);
    }
    // exp of a nonzero rational is transcendental, so the loop terminates.
    for (mpfr_prec_t prec = start_precision(s);; prec *= 2) {
        Mpfr lo(prec), hi(prec), xl(prec), xh(prec);
        exp_bounds(s, lo, hi);
        mpfr_set_q(xl.v, x.get_mpq_t(), MPFR_RNDD);
        mpfr_set_q(xh.v, x.get_mpq_t(), MPFR_RNDU);
        if (mpfr_less_p(xh.v, lo.v)) return -1;
        if (mpfr_greater_p(xl.v, hi.v)) return 1;
        if (prec > (1 << 22)) throw std::runtime_error("exp comparison did not resolve");
    }
}

Integer floor_exp(const LogScale& s, bool strict) {
    if (s.linear == 0) {
        const Rational& r = s.log_arg;
        return strict ? ceil_of(r) - 1 : floor_of(r);
    }
    for (mpfr_prec_t prec = start_precision(s);; prec *= 2) {
        Mpfr lo(prec), hi(prec);
        exp_bounds(s, lo, hi);
        Integer flo, fhi;
        mpfr_get_z(flo.get_mpz_t(), lo.v, MPFR_RNDD);
        mpfr_get_z(fhi.get_mpz_t(), hi.v, MPFR_RNDD);
        if (flo == fhi) return flo;
        if (prec > (1 << 22)) throw std::runtime_error("threshold floor did not resolve");
    }
}

std::pair<double, double> exp_enclosure(const LogScale& s) {
    Mpfr lo(128), hi(128);
    exp_bounds(s, lo, hi);
    return {mpfr_get_d(lo.v, MPFR_RNDD), mpfr_get_d(hi.v, MPFR_RNDU)};
}

}  // namespace arvol

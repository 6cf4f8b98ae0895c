#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <string>

namespace lf {

using Q = mpq_class;

// Gaussian rational re + im*i.
class Gauss {
public:
    Q re, im;

    Gauss() : re(0), im(0) {}
    Gauss(long v) : re(v), im(0) {}
    Gauss(const Q& r) : re(r), im(0) {}
    Gauss(const Q& r, const Q& i) : re(r), im(i) {}

    static Gauss I() { return Gauss(Q(0), Q(1)); }
    static Gauss frac(long p, long q) { Q r(p, q); r.canonicalize(); return Gauss(r); }

    bool is_zero() const { return sgn(re) == 0 && sgn(im) == 0; }
    bool is_one() const { return re == 1 && sgn(im) == 0; }
    bool is_real() const { return sgn(im) == 0; }

    Gauss conj() const { return Gauss(re, -im); }
    Gauss operator-() const { return Gauss(-re, -im); }

    Gauss& operator+=(const Gauss& o) { re += o.re; im += o.im; return *this; }
    Gauss& operator-=(const Gauss& o) { re -= o.re; im -= o.im; return *this; }
    Gauss& operator*=(const Gauss& o);
    Gauss& operator/=(const Gauss& o);

    friend Gauss operator+(Gauss a, const Gauss& b) { return a += b; }
    friend Gauss operator-(Gauss a, const Gauss& b) { return a -= b; }
    friend Gauss operator*(Gauss a, const Gauss& b) { return a *= b; }
    friend Gauss operator/(Gauss a, const Gauss& b) { return a /= b; }
    friend bool operator==(const Gauss& a, const Gauss& b) { return a.re == b.re && a.im == b.im; }
    friend bool operator!=(const Gauss& a, const Gauss& b) { return !(a == b); }
    friend bool operator<(const Gauss& a, const Gauss& b) {
        return a.re != b.re ? a.re < b.re : a.im < b.im;
    }

    // "3/2", "-i", "1/2 + 3/4*i"
    std::string str() const;
    // true when str() needs parentheses as a factor
    bool compound() const { return sgn(re) != 0 && sgn(im) != 0; }

    std::size_t hash() const;
};

Gauss gpow(const Gauss& b, unsigned e);
Q factorial(unsigned n);
Q binomial(long n, unsigned k);

} // namespace lf

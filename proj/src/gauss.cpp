#include "lf/gauss.hpp"

#include <functional>
#include <stdexcept>

namespace lf {

Gauss& Gauss::operator*=(const Gauss& o)
{
    Q r = re * o.re - im * o.im;
    Q i = re * o.im + im * o.re;
    re = std::move(r);
    im = std::move(i);
    return *this;
}

Gauss& Gauss::operator/=(const Gauss& o)
{
    Q n = o.re * o.re + o.im * o.im;
    if (sgn(n) == 0) throw std::domain_error("division by zero");
    Q r = (re * o.re + im * o.im) / n;
    Q i = (im * o.re - re * o.im) / n;
    re = std::move(r);
    im = std::move(i);
    return *this;
}

std::string Gauss::str() const
{
    if (sgn(im) == 0) return re.get_str();
    std::string ims;
    if (im == 1) ims = "i";
    else if (im == -1) ims = "-i";
    else ims = im.get_str() + "*i";
    if (sgn(re) == 0) return ims;
    if (sgn(im) < 0) {
        Q a = -im;
        return re.get_str() + " - " + (a == 1 ? std::string("i") : a.get_str() + "*i");
    }
    return re.get_str() + " + " + ims;
}

std::size_t Gauss::hash() const
{
    std::hash<std::string> h;
    // small values dominate; string hashing is simple and exact
    return h(re.get_str()) * 31 + h(im.get_str());
}

Gauss gpow(const Gauss& b, unsigned e)
{
    Gauss r(1);
    for (unsigned k = 0; k < e; ++k) r *= b;
    return r;
}

Q factorial(unsigned n)
{
    mpz_class f;
    mpz_fac_ui(f.get_mpz_t(), n);
    return Q(f);
}

Q binomial(long n, unsigned k)
{
    // generalized binomial, n may be negative
    Q r(1);
    for (unsigned j = 0; j < k; ++j) {
        r *= Q(n - long(j));
        r /= Q(long(j) + 1);
    }
    r.canonicalize();
    return r;
}

} // namespace lf

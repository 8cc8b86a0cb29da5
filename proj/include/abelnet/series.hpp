#pragma once

#include "abelnet/error.hpp"
#include "abelnet/numeric.hpp"

#include <map>
#include <sstream>

namespace abelnet {

using Exponent = std::vector<int>;

inline int total_degree(const Exponent& e) {
    int d = 0;
    for (int k : e) d += k;
    return d;
}

// Graded order: total degree first, then lexicographic.
struct GradedLess {
    bool operator()(const Exponent& a, const Exponent& b) const {
        int da = total_degree(a), db = total_degree(b);
        if (da != db) return da < db;
        return a < b;
    }
};

// Integer coefficients of a series truncated at total degree maxdeg.
struct SeriesTable {
    std::size_t nvars = 0;
    int maxdeg = 0;
    std::map<Exponent, BigInt, GradedLess> coeffs;  // nonzero entries only

    BigInt operator[](const Exponent& e) const {
        auto it = coeffs.find(e);
        return it == coeffs.end() ? BigInt(0) : it->second;
    }

    void add(const Exponent& e, const BigInt& c) {
        if (total_degree(e) > maxdeg || c == 0) return;
        auto& slot = coeffs[e];
        slot += c;
        if (slot == 0) coeffs.erase(e);
    }

    // Specialize every variable to one z.
    std::vector<BigInt> univariate() const {
        std::vector<BigInt> u(static_cast<std::size_t>(maxdeg) + 1, 0);
        for (const auto& [e, c] : coeffs) u[static_cast<std::size_t>(total_degree(e))] += c;
        return u;
    }

    // "(e0,e1,...) : c" per line, graded order
    std::string to_text() const {
        std::ostringstream os;
        for (const auto& [e, c] : coeffs) {
            os << '(';
            for (std::size_t i = 0; i < e.size(); ++i) os << (i ? "," : "") << e[i];
            os << ") : " << c << '\n';
        }
        return os.str();
    }

    std::string to_tsv(const std::vector<std::string>& names) const {
        std::ostringstream os;
        for (const auto& n : names) os << n << '\t';
        os << "coeff\n";
        for (const auto& [e, c] : coeffs) {
            for (int k : e) os << k << '\t';
            os << c << '\n';
        }
        return os.str();
    }

    bool operator==(const SeriesTable& o) const {
        return nvars == o.nvars && maxdeg == o.maxdeg && coeffs == o.coeffs;
    }

    // Exponents where the two tables disagree.
    std::vector<Exponent> mismatches(const SeriesTable& o) const {
        std::vector<Exponent> out;
        for (const auto& [e, c] : coeffs)
            if (o[e] != c) out.push_back(e);
        for (const auto& [e, c] : o.coeffs)
            if (!coeffs.count(e)) out.push_back(e);
        return out;
    }
};

// Sparse truncated power series with rational coefficients.
class Series {
public:
    Series(std::size_t nvars, int maxdeg) : nvars_(nvars), maxdeg_(maxdeg) {}

    static Series constant(std::size_t nvars, int maxdeg, const Rational& c) {
        Series s(nvars, maxdeg);
        if (c != 0) s.c_[Exponent(nvars, 0)] = c;
        return s;
    }

    // c / (1 - z_var)
    static Series geometric(std::size_t nvars, int maxdeg, std::size_t var, const Rational& c = 1) {
        Series s(nvars, maxdeg);
        if (c == 0) return s;
        Exponent e(nvars, 0);
        for (int k = 0; k <= maxdeg; ++k) {
            e[var] = k;
            s.c_[e] = c;
        }
        return s;
    }

    std::size_t nvars() const { return nvars_; }
    int maxdeg() const { return maxdeg_; }
    const std::map<Exponent, Rational>& terms() const { return c_; }

    Rational operator[](const Exponent& e) const {
        auto it = c_.find(e);
        return it == c_.end() ? Rational(0) : it->second;
    }

    Series& operator+=(const Series& o) {
        for (const auto& [e, c] : o.c_) {
            auto& slot = c_[e];
            slot += c;
            if (slot == 0) c_.erase(e);
        }
        return *this;
    }

    Series& operator*=(const Rational& k) {
        if (k == 0) {
            c_.clear();
            return *this;
        }
        for (auto& [e, c] : c_) c *= k;
        return *this;
    }

    friend Series operator*(const Series& a, const Series& b) {
        Series out(a.nvars_, std::min(a.maxdeg_, b.maxdeg_));
        Exponent e(a.nvars_);
        for (const auto& [ea, ca] : a.c_) {
            int da = total_degree(ea);
            for (const auto& [eb, cb] : b.c_) {
                if (da + total_degree(eb) > out.maxdeg_) continue;
                for (std::size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
                auto& slot = out.c_[e];
                slot += ca * cb;
            }
        }
        for (auto it = out.c_.begin(); it != out.c_.end();)
            it = it->second == 0 ? out.c_.erase(it) : std::next(it);
        return out;
    }

    friend Series operator+(Series a, const Series& b) { return a += b; }

    // Throws if a coefficient is not an integer.
    SeriesTable to_table() const {
        SeriesTable t;
        t.nvars = nvars_;
        t.maxdeg = maxdeg_;
        for (const auto& [e, c] : c_) {
            if (!is_integer(c)) throw Error(Errc::PreconditionViolated, "non-integer series coefficient " + to_string(c));
            t.add(e, numer(c));
        }
        return t;
    }

private:
    std::size_t nvars_;
    int maxdeg_;
    std::map<Exponent, Rational> c_;
};

} // namespace abelnet

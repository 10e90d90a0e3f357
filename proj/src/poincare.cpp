#include "toda/poincare.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace toda {

PoincarePolynomial::PoincarePolynomial(std::vector<long long> coeffs) : coeffs_(std::move(coeffs)) {
    for (long long c : coeffs_)
        if (c < 0) throw std::domain_error("negative Betti number " + std::to_string(c));
    while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
}

long long PoincarePolynomial::operator[](int i) const {
    return i >= 0 && i < static_cast<int>(coeffs_.size()) ? coeffs_[i] : 0;
}

std::string to_string(const PoincarePolynomial& p) {
    if (p.is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (int i = 0; i <= p.degree(); ++i) {
        if (p[i] == 0) continue;
        if (!first) os << " + ";
        first = false;
        if (i == 0) {
            os << p[i];
        } else {
            if (p[i] != 1) os << p[i];
            os << "T";
            if (i > 1) os << "^" << i;
        }
    }
    return os.str();
}

std::string to_string(const CoeffStage& s) {
    switch (s.kind) {
        case StageKind::Identity: return "identity";
        case StageKind::Truncate: return "truncate(" + std::to_string(s.n) + ")";
        case StageKind::Duality:
            return "duality(" + std::to_string(s.n) + "," +
                   (s.direction == DualDirection::ClosedK ? "closed_K" : "open_K") + ")";
    }
    return "?";
}

PoincarePolynomial truncate(const PoincarePolynomial& p, int m) {
    if (m < 0) throw std::invalid_argument("truncation degree must be >= 0");
    std::vector<long long> c(p.coeffs().begin(), p.coeffs().begin() + std::min<int>(m + 1, p.degree() + 1));
    return PoincarePolynomial(std::move(c));
}

namespace {

void require(bool ok, const std::string& what) {
    if (!ok) throw std::domain_error(what);
}

// n = 1: closed subsets of the circle are empty, the circle, or finitely many
// arcs and points; their complements have the same number of components.
PoincarePolynomial dual_circle(const PoincarePolynomial& p) {
    require(p.degree() <= 1, "subset of S^1 with homology above degree 1");
    if (p[1] == 1) {
        require(p[0] == 1, "subset of S^1 with b_1 = 1 must be the whole circle");
        return PoincarePolynomial();
    }
    require(p[1] == 0, "subset of S^1 with b_1 > 1");
    if (p[0] == 0) return PoincarePolynomial({1, 1});
    return PoincarePolynomial({p[0]});
}

}  // namespace

PoincarePolynomial dual_betti(const PoincarePolynomial& p, int n, DualDirection direction) {
    if (n < 0) throw std::invalid_argument("sphere dimension must be >= 0");
    require(p.degree() <= n, "input degree " + std::to_string(p.degree()) + " exceeds sphere dimension " +
                                 std::to_string(n));
    if (n == 0) {
        require(p[0] <= 2, "subset of S^0 with more than two points");
        return PoincarePolynomial({2 - p[0]});
    }
    if (n == 1) return dual_circle(p);

    std::vector<long long> out(static_cast<std::size_t>(n) + 1, 0);
    if (direction == DualDirection::ClosedK) {
        const long long c0 = p[0];
        out[0] = 1 + p[n - 1] - p[n];
        for (int i = 1; i <= n - 2; ++i) out[i] = p[n - i - 1];
        out[n - 1] = c0 - 1 + std::max<long long>(1 - c0, 0);
        out[n] = 1 - std::min<long long>(1, c0);
    } else {
        const long long b0 = p[0];
        out[n] = b0 == 0 ? 1 : 0;
        out[n - 1] = b0 - 1 + out[n];
        for (int j = 1; j <= n - 2; ++j) out[j] = p[n - j - 1];
        out[0] = p[n] == 1 ? 0 : p[n - 1] + 1;
    }
    for (long long c : out) require(c >= 0, "duality produced a negative Betti number");
    return PoincarePolynomial(std::move(out));
}

PoincarePolynomial apply_stage(const CoeffStage& s, const PoincarePolynomial& p) {
    switch (s.kind) {
        case StageKind::Identity: return p;
        case StageKind::Truncate: return truncate(p, s.n);
        case StageKind::Duality: return dual_betti(truncate(p, s.n), s.n, s.direction);
    }
    return p;
}

PoincarePolynomial apply_chain(const std::vector<CoeffStage>& chain, const PoincarePolynomial& p) {
    if (chain.empty()) throw std::invalid_argument("empty coefficient chain");
    PoincarePolynomial cur = p;
    for (const auto& s : chain) cur = apply_stage(s, cur);
    return cur;
}

std::set<int> needed_input_degrees(const CoeffStage& s, const std::set<int>& out) {
    std::set<int> in;
    for (int d : out) {
        switch (s.kind) {
            case StageKind::Identity:
                in.insert(d);
                break;
            case StageKind::Truncate:
                if (d <= s.n) in.insert(d);
                break;
            case StageKind::Duality: {
                const int n = s.n;
                if (d > n) break;
                if (n == 0) {
                    in.insert(0);
                } else if (n == 1) {
                    in.insert(0);
                    in.insert(1);
                } else if (d == 0) {
                    in.insert(n - 1);
                    in.insert(n);
                } else if (d <= n - 2) {
                    in.insert(n - d - 1);
                } else {
                    in.insert(0);
                }
                break;
            }
        }
    }
    return in;
}

std::set<int> needed_input_degrees(const std::vector<CoeffStage>& chain, const std::set<int>& out) {
    std::set<int> cur = out;
    for (auto it = chain.rbegin(); it != chain.rend(); ++it) cur = needed_input_degrees(*it, cur);
    return cur;
}

}  // namespace toda

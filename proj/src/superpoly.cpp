#include "supergeo/superpoly.hpp"

#include <sstream>
#include <stdexcept>

namespace supergeo {

namespace {

void check_same_ring(const RingPtr& a, const RingPtr& b, const char* op) {
    if (!same_ring(a, b)) throw std::invalid_argument(std::string(op) + ": mismatched rings");
}

bool monomial_valid(const RingDescriptor& r, const Monomial& m) {
    if (static_cast<int>(m.even.size()) != r.n_even()) return false;
    for (int i = 0; i < r.n_even(); ++i)
        if (m.even[i] < 0 && !r.is_invertible(i)) return false;
    for (size_t k = 0; k < m.odd.size(); ++k) {
        if (m.odd[k] < 0 || m.odd[k] >= r.n_odd()) return false;
        if (k > 0 && m.odd[k - 1] >= m.odd[k]) return false;
    }
    return true;
}

bool truncated_away(const RingDescriptor& r, const Monomial& m) {
    return r.odd_truncation() && static_cast<int>(m.odd.size()) >= *r.odd_truncation();
}

}  // namespace

SuperPoly SuperPoly::constant(RingPtr ring, const Rat& c) {
    SuperPoly p(std::move(ring));
    if (c != 0) {
        Monomial m;
        m.even.assign(p.ring_->n_even(), 0);
        p.terms_.emplace(std::move(m), c);
    }
    return p;
}

SuperPoly SuperPoly::even_gen(const RingPtr& ring, int idx, int exp) {
    if (idx < 0 || idx >= ring->n_even()) throw std::invalid_argument("even_gen: bad index");
    Monomial m;
    m.even.assign(ring->n_even(), 0);
    m.even[idx] = exp;
    if (exp < 0 && !ring->is_invertible(idx))
        throw std::domain_error("even_gen: negative power of a non-invertible generator");
    return term(ring, std::move(m), Rat(1));
}

SuperPoly SuperPoly::odd_gen(const RingPtr& ring, int idx) {
    if (idx < 0 || idx >= ring->n_odd()) throw std::invalid_argument("odd_gen: bad index");
    Monomial m;
    m.even.assign(ring->n_even(), 0);
    m.odd.push_back(idx);
    return term(ring, std::move(m), Rat(1));
}

SuperPoly SuperPoly::gen(const RingPtr& ring, const std::string& name) {
    int e = ring->even_index(name);
    if (e >= 0) return even_gen(ring, e);
    int o = ring->odd_index(name);
    if (o >= 0) return odd_gen(ring, o);
    throw std::invalid_argument("gen: unknown generator " + name);
}

SuperPoly SuperPoly::term(const RingPtr& ring, Monomial m, const Rat& c) {
    SuperPoly p(ring);
    if (!monomial_valid(*ring, m)) throw std::invalid_argument("term: invalid monomial");
    if (c != 0 && !truncated_away(*ring, m)) p.terms_.emplace(std::move(m), c);
    return p;
}

ParityClass SuperPoly::parity_class() const {
    if (terms_.empty()) return ParityClass::Zero;
    int p = terms_.begin()->first.parity();
    for (const auto& [m, c] : terms_)
        if (m.parity() != p) return ParityClass::Mixed;
    return p == 0 ? ParityClass::Even : ParityClass::Odd;
}

bool SuperPoly::is_even() const {
    auto p = parity_class();
    return p == ParityClass::Zero || p == ParityClass::Even;
}

bool SuperPoly::is_odd() const {
    auto p = parity_class();
    return p == ParityClass::Zero || p == ParityClass::Odd;
}

SuperPoly SuperPoly::parity_part(int parity) const {
    SuperPoly out(ring_);
    for (const auto& [m, c] : terms_)
        if (m.parity() == parity) out.terms_.emplace(m, c);
    return out;
}

SuperPoly SuperPoly::reduced_part() const {
    SuperPoly out(ring_);
    for (const auto& [m, c] : terms_)
        if (m.odd.empty()) out.terms_.emplace(m, c);
    return out;
}

SuperPoly SuperPoly::nilpotent_part() const {
    SuperPoly out(ring_);
    for (const auto& [m, c] : terms_)
        if (!m.odd.empty()) out.terms_.emplace(m, c);
    return out;
}

Rat SuperPoly::constant_term() const {
    for (const auto& [m, c] : terms_) {
        if (!m.odd.empty()) continue;
        bool unit = true;
        for (int e : m.even)
            if (e != 0) unit = false;
        if (unit) return c;
    }
    return Rat(0);
}

bool SuperPoly::is_constant() const {
    if (terms_.empty()) return true;
    if (terms_.size() != 1) return false;
    const Monomial& m = terms_.begin()->first;
    if (!m.odd.empty()) return false;
    for (int e : m.even)
        if (e != 0) return false;
    return true;
}

int SuperPoly::max_even_abs_degree() const {
    int d = 0;
    for (const auto& [m, c] : terms_) d = std::max(d, m.even_abs_degree());
    return d;
}

void SuperPoly::add_term(Monomial m, const Rat& c) {
    if (c == 0 || truncated_away(*ring_, m)) return;
    auto it = terms_.find(m);
    if (it == terms_.end()) {
        terms_.emplace(std::move(m), c);
    } else {
        it->second += c;
        if (it->second == 0) terms_.erase(it);
    }
}

SuperPoly SuperPoly::operator+(const SuperPoly& o) const {
    check_same_ring(ring_, o.ring_, "add");
    SuperPoly out = *this;
    for (const auto& [m, c] : o.terms_) out.add_term(m, c);
    return out;
}

SuperPoly SuperPoly::operator-(const SuperPoly& o) const {
    check_same_ring(ring_, o.ring_, "sub");
    SuperPoly out = *this;
    for (const auto& [m, c] : o.terms_) out.add_term(m, -c);
    return out;
}

SuperPoly SuperPoly::operator-() const {
    SuperPoly out(ring_);
    for (const auto& [m, c] : terms_) out.terms_.emplace(m, -c);
    return out;
}

SuperPoly SuperPoly::operator*(const SuperPoly& o) const {
    check_same_ring(ring_, o.ring_, "mul");
    SuperPoly out(ring_);
    std::vector<int> merged;
    for (const auto& [ma, ca] : terms_) {
        for (const auto& [mb, cb] : o.terms_) {
            int sign = koszul_merge(ma.odd, mb.odd, merged);
            if (sign == 0) continue;
            Monomial m;
            m.even.resize(ma.even.size());
            for (size_t i = 0; i < ma.even.size(); ++i) m.even[i] = ma.even[i] + mb.even[i];
            m.odd = merged;
            Rat prod = ca * cb;
            if (sign < 0) prod = -prod;
            out.add_term(std::move(m), prod);
        }
    }
    return out;
}

SuperPoly SuperPoly::operator*(const Rat& c) const {
    SuperPoly out(ring_);
    if (c == 0) return out;
    for (const auto& [m, k] : terms_) out.terms_.emplace(m, k * c);
    return out;
}

bool SuperPoly::operator==(const SuperPoly& o) const {
    return same_ring(ring_, o.ring_) && terms_ == o.terms_;
}

bool SuperPoly::is_invertible() const {
    if (!is_even()) return false;
    SuperPoly r = reduced_part();
    if (r.terms_.size() != 1) return false;
    const Monomial& m = r.terms_.begin()->first;
    for (int i = 0; i < ring_->n_even(); ++i)
        if (m.even[i] != 0 && !ring_->is_invertible(i)) return false;
    return true;
}

SuperPoly SuperPoly::invert_even() const {
    if (!is_even()) throw std::domain_error("invert_even: element is not even");
    SuperPoly r = reduced_part();
    if (r.terms_.size() != 1)
        throw std::domain_error("invert_even: reduced part is not a unit of the Laurent ring");
    const auto& [m, c] = *r.terms_.begin();
    for (int i = 0; i < ring_->n_even(); ++i)
        if (m.even[i] != 0 && !ring_->is_invertible(i))
            throw std::domain_error("invert_even: reduced part is not a unit of the Laurent ring");
    Monomial minv;
    minv.even.resize(m.even.size());
    for (size_t i = 0; i < m.even.size(); ++i) minv.even[i] = -m.even[i];
    SuperPoly rinv = term(ring_, std::move(minv), 1 / c);

    SuperPoly n = nilpotent_part();
    if (n.is_zero()) return rinv;
    SuperPoly step = -(rinv * n);
    SuperPoly acc = one(ring_);
    SuperPoly powp = step;
    while (!powp.is_zero()) {
        acc = acc + powp;
        powp = powp * step;
    }
    return acc * rinv;
}

SuperPoly SuperPoly::pow(int k) const {
    if (k < 0) return invert_even().pow(-k);
    SuperPoly acc = one(ring_);
    SuperPoly base = *this;
    while (k > 0) {
        if (k & 1) acc = acc * base;
        base = base * base;
        k >>= 1;
    }
    return acc;
}

Rat SuperPoly::eval_reduced(const std::vector<Rat>& vals) const {
    if (static_cast<int>(vals.size()) != ring_->n_even())
        throw std::invalid_argument("eval_reduced: wrong number of values");
    Rat acc = 0;
    for (const auto& [m, c] : terms_) {
        if (!m.odd.empty()) continue;
        Rat t = c;
        for (int i = 0; i < ring_->n_even(); ++i) {
            int e = m.even[i];
            if (e == 0) continue;
            if (vals[i] == 0) {
                if (e > 0) { t = 0; break; }
                throw std::domain_error("eval_reduced: zero value for inverted generator");
            }
            Rat base = e > 0 ? vals[i] : Rat(1) / vals[i];
            for (int j = 0; j < std::abs(e); ++j) t *= base;
        }
        acc += t;
    }
    return acc;
}

SuperPoly SuperPoly::even_partial(int idx) const {
    SuperPoly out(ring_);
    for (const auto& [m, c] : terms_) {
        int e = m.even[idx];
        if (e == 0) continue;
        Monomial d = m;
        d.even[idx] = e - 1;
        out.add_term(std::move(d), c * e);
    }
    return out;
}

SuperPoly SuperPoly::with_ring(const RingPtr& target) const {
    if (target->even_gens() != ring_->even_gens() || target->odd_gens() != ring_->odd_gens())
        throw std::invalid_argument("with_ring: generator lists differ");
    SuperPoly out(target);
    for (const auto& [m, c] : terms_) {
        if (!monomial_valid(*target, m))
            throw std::domain_error("with_ring: monomial not valid in target ring");
        out.add_term(m, c);
    }
    return out;
}

SuperPoly SuperPoly::embed(const RingPtr& target, const std::vector<int>& even_map,
                           const std::vector<int>& odd_map) const {
    SuperPoly out(target);
    for (const auto& [m, c] : terms_) {
        Monomial t;
        t.even.assign(target->n_even(), 0);
        for (size_t i = 0; i < m.even.size(); ++i) t.even[even_map[i]] = m.even[i];
        t.odd.reserve(m.odd.size());
        for (int o : m.odd) t.odd.push_back(odd_map[o]);
        // only strictly monotone odd maps are supported (no Koszul sign)
        for (size_t k = 1; k < t.odd.size(); ++k)
            if (t.odd[k - 1] >= t.odd[k])
                throw std::invalid_argument("embed: odd map must be strictly increasing");
        if (!monomial_valid(*target, t)) throw std::domain_error("embed: invalid image monomial");
        out.add_term(std::move(t), c);
    }
    return out;
}

std::string SuperPoly::str() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [m, c] : terms_) {
        Rat a = c;
        if (first) {
            if (a < 0) { os << "-"; a = -a; }
        } else {
            os << (a < 0 ? " - " : " + ");
            if (a < 0) a = -a;
        }
        first = false;
        std::vector<std::string> factors;
        for (int i = 0; i < ring_->n_even(); ++i) {
            if (m.even[i] == 0) continue;
            std::string f = ring_->even_gens()[i];
            if (m.even[i] != 1) f += "^" + std::to_string(m.even[i]);
            factors.push_back(f);
        }
        for (int o : m.odd) factors.push_back(ring_->odd_gens()[o]);
        if (factors.empty()) {
            os << format_rat(a);
        } else {
            if (a != 1) os << format_rat(a) << "*";
            for (size_t k = 0; k < factors.size(); ++k) {
                if (k) os << "*";
                os << factors[k];
            }
        }
    }
    return os.str();
}

GenAssignment GenAssignment::identity(const RingPtr& ring) {
    GenAssignment a;
    a.source = ring;
    a.target = ring;
    for (int i = 0; i < ring->n_even(); ++i) a.even_images.push_back(SuperPoly::even_gen(ring, i));
    for (int i = 0; i < ring->n_odd(); ++i) a.odd_images.push_back(SuperPoly::odd_gen(ring, i));
    return a;
}

void GenAssignment::validate() const {
    if (static_cast<int>(even_images.size()) != source->n_even() ||
        static_cast<int>(odd_images.size()) != source->n_odd())
        throw std::invalid_argument("assignment: image count mismatch");
    for (int i = 0; i < source->n_even(); ++i) {
        if (!even_images[i].is_even())
            throw std::domain_error("assignment: parity mismatch for even generator " +
                                    source->even_gens()[i]);
        if (!same_ring(even_images[i].ring(), target))
            throw std::invalid_argument("assignment: image not in target ring");
        if (source->is_invertible(i) && !even_images[i].is_invertible())
            throw std::domain_error("assignment: non-invertible image for invertible generator " +
                                    source->even_gens()[i]);
    }
    for (int i = 0; i < source->n_odd(); ++i) {
        if (!odd_images[i].is_odd())
            throw std::domain_error("assignment: parity mismatch for odd generator " +
                                    source->odd_gens()[i]);
        if (!same_ring(odd_images[i].ring(), target))
            throw std::invalid_argument("assignment: image not in target ring");
    }
}

SuperPoly GenAssignment::apply(const SuperPoly& f) const {
    // Elements of a localization (or truncation) of the source are accepted:
    // the extension is defined wherever the required images invert.
    if (f.ring()->even_gens() != source->even_gens() ||
        f.ring()->odd_gens() != source->odd_gens())
        throw std::invalid_argument("apply: element not in source ring");
    // cache inverses of images of inverted generators
    std::vector<std::optional<SuperPoly>> inv_cache(source->n_even());
    SuperPoly out(target);
    for (const auto& [m, c] : f.terms()) {
        SuperPoly t = SuperPoly::constant(target, c);
        for (int i = 0; i < source->n_even() && !t.is_zero(); ++i) {
            int e = m.even[i];
            if (e == 0) continue;
            if (e > 0) {
                t = t * even_images[i].pow(e);
            } else {
                if (!inv_cache[i]) inv_cache[i] = even_images[i].invert_even();
                t = t * inv_cache[i]->pow(-e);
            }
        }
        for (int o : m.odd) {
            if (t.is_zero()) break;
            t = t * odd_images[o];
        }
        out = out + t;
    }
    return out;
}

GenAssignment GenAssignment::then(const GenAssignment& g) const {
    if (!same_ring(target, g.source))
        throw std::invalid_argument("then: inner target differs from outer source");
    GenAssignment out;
    out.source = source;
    out.target = g.target;
    for (const auto& p : even_images) out.even_images.push_back(g.apply(p));
    for (const auto& p : odd_images) out.odd_images.push_back(g.apply(p));
    return out;
}

GenAssignment GenAssignment::with_target(const RingPtr& t) const {
    GenAssignment out;
    out.source = source;
    out.target = t;
    for (const auto& p : even_images) out.even_images.push_back(p.with_ring(t));
    for (const auto& p : odd_images) out.odd_images.push_back(p.with_ring(t));
    return out;
}

}  // namespace supergeo

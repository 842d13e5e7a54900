#include "sandpile/chipfiring.hpp"

#include <algorithm>
#include <deque>
#include <stdexcept>

namespace sandpile {

ChipConfig::ChipConfig(std::vector<Integer> chips) : chips_(std::move(chips)) {
    for (const auto& c : chips_)
        if (sgn(c) < 0) throw std::invalid_argument("chip counts must be nonnegative");
}

ChipConfig::ChipConfig(std::initializer_list<long> chips) {
    chips_.reserve(chips.size());
    for (long c : chips) {
        if (c < 0) throw std::invalid_argument("chip counts must be nonnegative");
        chips_.emplace_back(c);
    }
}

void ChipConfig::add(std::size_t site, const Integer& count) {
    if (sgn(count) < 0) throw std::invalid_argument("cannot add a negative number of chips");
    chips_.at(site) += count;
}

ChipConfig& ChipConfig::operator+=(const ChipConfig& other) {
    if (other.size() != size()) throw std::invalid_argument("configuration size mismatch");
    for (std::size_t i = 0; i < chips_.size(); ++i) chips_[i] += other.chips_[i];
    return *this;
}

ChipConfig operator*(const Integer& k, const ChipConfig& u) {
    if (sgn(k) < 0) throw std::invalid_argument("negative multiple of a configuration");
    ChipConfig r = u;
    for (auto& c : r.chips_) c *= k;
    return r;
}

bool ChipConfig::is_zero() const {
    return std::all_of(chips_.begin(), chips_.end(), [](const Integer& c) { return sgn(c) == 0; });
}

std::strong_ordering operator<=>(const ChipConfig& a, const ChipConfig& b) {
    const std::size_t n = std::min(a.size(), b.size());
    for (std::size_t i = 0; i < n; ++i) {
        int c = cmp(a.chips_[i], b.chips_[i]);
        if (c != 0) return c < 0 ? std::strong_ordering::less : std::strong_ordering::greater;
    }
    return a.size() <=> b.size();
}

namespace {

void require_size(const SinkedMultigraph& g, const ChipConfig& u) {
    if (u.size() != g.site_count()) throw std::invalid_argument("configuration does not match the graph's site count");
}

}  // namespace

bool is_stable(const SinkedMultigraph& g, const ChipConfig& u) {
    require_size(g, u);
    for (std::size_t i = 0; i < u.size(); ++i)
        if (cmp(u[i], static_cast<unsigned long>(g.degree(i))) >= 0) return false;
    return true;
}

ChipConfig single_chip(const SinkedMultigraph& g, std::size_t site, const Integer& count) {
    if (site >= g.site_count()) throw std::out_of_range("site out of range");
    ChipConfig u(g.site_count());
    u.add(site, count);
    return u;
}

ChipConfig sink_adjacency(const SinkedMultigraph& g) {
    std::vector<Integer> beta(g.site_count());
    for (std::size_t i = 0; i < beta.size(); ++i) beta[i] = static_cast<unsigned long>(g.sink_edges(i));
    return ChipConfig(std::move(beta));
}

ChipConfig max_stable(const SinkedMultigraph& g) {
    std::vector<Integer> m(g.site_count());
    for (std::size_t i = 0; i < m.size(); ++i) m[i] = static_cast<unsigned long>(g.degree(i) - 1);
    return ChipConfig(std::move(m));
}

ChipConfig apply_topplings(const SinkedMultigraph& g, const ChipConfig& u, const std::vector<Integer>& odometer) {
    require_size(g, u);
    if (odometer.size() != u.size()) throw std::invalid_argument("odometer size mismatch");
    std::vector<Integer> r = u.chips();
    for (std::size_t i = 0; i < r.size(); ++i) {
        mpz_submul_ui(r[i].get_mpz_t(), odometer[i].get_mpz_t(), g.degree(i));
        for (const auto& l : g.links(i)) mpz_addmul_ui(r[l.site].get_mpz_t(), odometer[i].get_mpz_t(), l.multiplicity);
    }
    return ChipConfig(std::move(r));
}

StabilizationResult stabilize(const SinkedMultigraph& g, ChipConfig u) {
    require_size(g, u);
    const std::size_t n = g.site_count();
    std::vector<Integer> chips = u.chips();
    std::vector<Integer> odometer(n);
    std::vector<bool> queued(n, false);
    std::deque<std::size_t> queue;
    for (std::size_t i = 0; i < n; ++i)
        if (cmp(chips[i], static_cast<unsigned long>(g.degree(i))) >= 0) {
            queued[i] = true;
            queue.push_back(i);
        }
    Integer fires;
    while (!queue.empty()) {
        const std::size_t i = queue.front();
        queue.pop_front();
        queued[i] = false;
        const unsigned long deg = g.degree(i);
        mpz_fdiv_q_ui(fires.get_mpz_t(), chips[i].get_mpz_t(), deg);
        if (sgn(fires) == 0) continue;
        mpz_submul_ui(chips[i].get_mpz_t(), fires.get_mpz_t(), deg);
        odometer[i] += fires;
        for (const auto& l : g.links(i)) {
            Integer& c = chips[l.site];
            mpz_addmul_ui(c.get_mpz_t(), fires.get_mpz_t(), l.multiplicity);
            if (!queued[l.site] && cmp(c, static_cast<unsigned long>(g.degree(l.site))) >= 0) {
                queued[l.site] = true;
                queue.push_back(l.site);
            }
        }
    }
    StabilizationResult result{ChipConfig(std::move(chips)), std::move(odometer)};
#ifdef SANDPILE_CHECKED
    if (apply_topplings(g, u, result.odometer) != result.stable || !is_stable(g, result.stable))
        throw std::logic_error("stabilize: odometer identity violated");
#endif
    return result;
}

ChipConfig add_and_stabilize(const SinkedMultigraph& g, const ChipConfig& u, const ChipConfig& v) {
    require_size(g, u);
    require_size(g, v);
    return stabilize(g, u + v).stable;
}

bool is_recurrent_burning(const SinkedMultigraph& g, const ChipConfig& u) {
    if (!is_stable(g, u)) throw std::invalid_argument("burning test needs a stable configuration");
    const auto burnt = stabilize(g, u + sink_adjacency(g));
    const bool recurrent =
        std::all_of(burnt.odometer.begin(), burnt.odometer.end(), [](const Integer& t) { return t == 1; });
    if (recurrent && burnt.stable != u) throw std::logic_error("burning test: every site fired but u was not restored");
    return recurrent;
}

namespace {

// 2m - (2m)°: a nonnegative configuration in the image of the Laplacian that
// dominates every stable configuration.
ChipConfig zero_class_cover(const SinkedMultigraph& g) {
    const ChipConfig twice = Integer(2) * max_stable(g);
    const ChipConfig settled = stabilize(g, twice).stable;
    std::vector<Integer> diff(twice.size());
    for (std::size_t i = 0; i < diff.size(); ++i) diff[i] = twice[i] - settled[i];
    return ChipConfig(std::move(diff));
}

}  // namespace

ChipConfig identity(const SinkedMultigraph& g) {
    ChipConfig e = stabilize(g, zero_class_cover(g)).stable;
    if (!is_recurrent_burning(g, e)) throw std::logic_error("identity: candidate is not recurrent");
    if (add_and_stabilize(g, e, e) != e) throw std::logic_error("identity: e + e != e");
    return e;
}

ChipConfig recurrent_rep(const SinkedMultigraph& g, const ChipConfig& v) {
    return add_and_stabilize(g, v, identity(g));
}

Integer element_order(const SinkedMultigraph& g, const ChipConfig& u) { return SandpileGroup(g).order_of(u); }

std::vector<ChipConfig> enumerate_recurrent(const SinkedMultigraph& g, std::uint64_t bound) {
    const std::size_t n = g.site_count();
    std::uint64_t total = 1;
    for (std::size_t i = 0; i < n; ++i) {
        if (g.degree(i) > bound / total) throw std::length_error("enumerate_recurrent: stable configurations exceed bound");
        total *= g.degree(i);
    }
    std::vector<ChipConfig> out;
    std::vector<Integer> digits(n);
    for (std::uint64_t count = 0; count < total; ++count) {
        ChipConfig u(digits);
        if (is_recurrent_burning(g, u)) out.push_back(std::move(u));
        for (std::size_t k = n; k-- > 0;) {
            if (++digits[k] < static_cast<unsigned long>(g.degree(k))) break;
            digits[k] = 0;
        }
    }
    return out;
}

SandpileGroup::SandpileGroup(const SinkedMultigraph& g)
    : graph_(&g), identity_(sandpile::identity(g)), order_(spanning_tree_count(g)) {}

ChipConfig SandpileGroup::rep(const ChipConfig& v) const { return add(v, identity_); }

Integer SandpileGroup::order_of(const ChipConfig& u) const {
    if (!is_recurrent(u)) throw std::invalid_argument("element_order needs a recurrent configuration");
    ChipConfig acc = u;
    Integer k = 1;
    while (acc != identity_) {
        acc = add(acc, u);
        ++k;
        if (k > order_) throw std::logic_error("element_order: no return to the identity within the group order");
    }
    return k;
}

ChipConfig SandpileGroup::multiple(const Integer& k, const ChipConfig& u) const {
    if (sgn(k) < 0) throw std::invalid_argument("negative multiple");
    ChipConfig result = identity_;
    ChipConfig power = u;
    Integer rest = k;
    while (sgn(rest) > 0) {
        if (mpz_odd_p(rest.get_mpz_t())) result = add(result, power);
        rest >>= 1;
        if (sgn(rest) > 0) power = add(power, power);
    }
    return result;
}

ChipConfig SandpileGroup::inverse(const ChipConfig& u) const {
    if (!is_stable(*graph_, u)) throw std::invalid_argument("inverse needs a stable configuration");
    const ChipConfig cover = zero_class_cover(*graph_);
    std::vector<Integer> diff(u.size());
    for (std::size_t i = 0; i < diff.size(); ++i) diff[i] = cover[i] - u[i];
    return rep(ChipConfig(std::move(diff)));
}

}  // namespace sandpile

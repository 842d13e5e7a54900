#include "sandpile/tree.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <random>
#include <stdexcept>

namespace sandpile {

WiredTree::WiredTree(SinkedMultigraph graph, std::size_t root_site) : graph_(std::move(graph)), root_(root_site) {
    const std::size_t n = graph_.site_count();
    if (root_ >= n) throw std::invalid_argument("wired tree root out of range");
    std::size_t site_edges = 0;
    for (std::size_t s = 0; s < n; ++s)
        for (const auto& l : graph_.links(s)) {
            if (l.multiplicity != 1) throw std::invalid_argument("wired tree: parallel edges between sites");
            ++site_edges;
        }
    if (site_edges / 2 + 1 != n) throw std::invalid_argument("wired tree: sites do not form a tree");

    parent_.assign(n, npos);
    children_.assign(n, {});
    depth_.assign(n, 0);
    std::vector<bool> seen(n, false);
    std::vector<std::size_t> bfs{root_};
    seen[root_] = true;
    for (std::size_t head = 0; head < bfs.size(); ++head) {
        const std::size_t v = bfs[head];
        for (const auto& l : graph_.links(v))
            if (!seen[l.site]) {
                seen[l.site] = true;
                parent_[l.site] = v;
                depth_[l.site] = depth_[v] + 1;
                children_[v].push_back(l.site);
                bfs.push_back(l.site);
            }
    }
    if (bfs.size() != n) throw std::invalid_argument("wired tree: sites are not connected");
    bottom_up_.assign(bfs.rbegin(), bfs.rend());

    for (std::size_t c : children_[root_]) {
        std::vector<std::size_t> order{c};
        for (std::size_t head = 0; head < order.size(); ++head)
            for (std::size_t g : children_[order[head]]) order.push_back(g);
        branch_sites_.push_back(std::move(order));
    }
}

std::vector<WiredBranch> WiredTree::principal_branches() const {
    std::vector<WiredBranch> out;
    for (const auto& sites : branch_sites_) {
        std::map<std::size_t, std::size_t> local;
        for (std::size_t i = 0; i < sites.size(); ++i) local[sites[i]] = i;
        const Vertex sink = sites.size();
        std::vector<Edge> edges{{0, sink, 1}};  // replaces the edge to the root
        std::vector<std::string> labels;
        for (std::size_t i = 0; i < sites.size(); ++i) {
            const std::size_t s = sites[i];
            if (graph_.sink_edges(s) > 0) edges.push_back({i, sink, graph_.sink_edges(s)});
            for (std::size_t c : children_[s]) edges.push_back({i, local.at(c), 1});
            if (!graph_.labels().empty()) labels.push_back(graph_.labels()[graph_.vertex_of(s)]);
        }
        if (!labels.empty()) labels.emplace_back("s");
        out.push_back({WiredTree(SinkedMultigraph(sites.size() + 1, sink, edges, std::move(labels))), sites});
    }
    return out;
}

std::vector<bool> critical_vertices(const WiredTree& t, const ChipConfig& u) {
    if (u.size() != t.size()) throw std::invalid_argument("configuration does not match the tree");
    std::vector<bool> critical(t.size(), false);
    for (std::size_t x : t.bottom_up()) {
        unsigned long critical_children = 0;
        for (std::size_t c : t.children(x)) critical_children += critical[c];
        critical[x] = cmp(u[x], critical_children) <= 0;
    }
    return critical;
}

bool is_recurrent_critical(const WiredTree& t, const ChipConfig& u) {
    if (!is_stable(t.graph(), u)) throw std::invalid_argument("criticality test needs a stable configuration");
    const auto critical = critical_vertices(t, u);
    for (std::size_t x = 0; x < t.size(); ++x) {
        if (!critical[x]) continue;
        unsigned long critical_children = 0;
        for (std::size_t c : t.children(x)) critical_children += critical[c];
        if (cmp(u[x], critical_children) != 0) return false;
    }
    return true;
}

BranchSplit branch_split(const WiredTree& t, const ChipConfig& u) {
    if (u.size() != t.size()) throw std::invalid_argument("configuration does not match the tree");
    BranchSplit s{u[t.root()], {}};
    for (const auto& sites : t.branch_sites()) {
        std::vector<Integer> chips;
        chips.reserve(sites.size());
        for (std::size_t x : sites) chips.push_back(u[x]);
        s.branches.emplace_back(std::move(chips));
    }
    return s;
}

ChipConfig branch_join(const WiredTree& t, const BranchSplit& s) {
    const auto& all = t.branch_sites();
    if (s.branches.size() != all.size()) throw std::invalid_argument("branch_join: wrong number of branches");
    if (sgn(s.root_chips) < 0) throw std::invalid_argument("branch_join: negative root chips");
    std::vector<Integer> chips(t.size());
    chips[t.root()] = s.root_chips;
    for (std::size_t b = 0; b < all.size(); ++b) {
        if (s.branches[b].size() != all[b].size()) throw std::invalid_argument("branch_join: branch size mismatch");
        for (std::size_t i = 0; i < all[b].size(); ++i) chips[all[b][i]] = s.branches[b][i];
    }
    return ChipConfig(std::move(chips));
}

ChipConfig root_hat(const SinkedMultigraph& g, std::size_t root_site) {
    return recurrent_rep(g, single_chip(g, root_site));
}

namespace {

// A finite sandpile group listed explicitly, with the permutation "add g".
struct ListedGroup {
    std::vector<ChipConfig> elements;
    std::map<ChipConfig, std::size_t> index;

    explicit ListedGroup(std::vector<ChipConfig> recurrent) : elements(std::move(recurrent)) {
        for (std::size_t i = 0; i < elements.size(); ++i) index.emplace(elements[i], i);
    }

    std::optional<std::size_t> find(const ChipConfig& u) const {
        auto it = index.find(u);
        if (it == index.end()) return std::nullopt;
        return it->second;
    }

    std::vector<std::size_t> translation(const SinkedMultigraph& g, const ChipConfig& by) const {
        std::vector<std::size_t> perm(elements.size());
        for (std::size_t i = 0; i < elements.size(); ++i) {
            auto j = find(add_and_stabilize(g, elements[i], by));
            if (!j) throw std::logic_error("sum of recurrent configurations is not recurrent");
            perm[i] = *j;
        }
        return perm;
    }
};

// Orbit labels of the cyclic group generated by `step` acting on 0..size-1.
std::vector<std::size_t> orbit_labels(std::size_t size, const auto& step, std::size_t& orbit_count) {
    constexpr std::size_t unset = static_cast<std::size_t>(-1);
    std::vector<std::size_t> label(size, unset);
    orbit_count = 0;
    for (std::size_t s = 0; s < size; ++s) {
        if (label[s] != unset) continue;
        for (std::size_t x = s; label[x] == unset; x = step(x)) label[x] = orbit_count;
        ++orbit_count;
    }
    return label;
}

}  // namespace

BranchIsomorphismReport verify_branch_isomorphism(const WiredTree& t, const BranchIsomorphismOptions& options) {
    const SinkedMultigraph& g = t.graph();
    BranchIsomorphismReport rep;

    const SandpileGroup whole(g);
    const ListedGroup left(enumerate_recurrent(g, options.bound));
    const ChipConfig r = root_hat(g, t.root());
    rep.group_order = left.elements.size();
    rep.root_order = whole.order_of(r);
    const auto left_step = left.translation(g, r);
    std::size_t left_cosets = 0;
    const auto left_label = orbit_labels(left.elements.size(), [&](std::size_t i) { return left_step[i]; }, left_cosets);
    rep.left_quotient_order = left_cosets;

    const auto branches = t.principal_branches();
    std::vector<ListedGroup> parts;
    std::vector<std::vector<std::size_t>> part_step;
    std::vector<ChipConfig> part_identity;
    std::uint64_t product = 1;
    for (const auto& b : branches) {
        const auto& bg = b.tree.graph();
        parts.emplace_back(enumerate_recurrent(bg, options.bound));
        part_step.push_back(parts.back().translation(bg, root_hat(bg, b.tree.root())));
        part_identity.push_back(identity(bg));
        const std::uint64_t size = parts.back().elements.size();
        if (size != 0 && product > options.bound / size)
            throw std::length_error("verify_branch_isomorphism: branch sum exceeds bound");
        product *= size;
    }
    rep.branch_sum_order = Integer(static_cast<unsigned long>(product));

    // Mixed-radix encoding of tuples, branch 0 most significant.
    auto encode = [&](const std::vector<std::size_t>& digits) {
        std::uint64_t code = 0;
        for (std::size_t b = 0; b < parts.size(); ++b) code = code * parts[b].elements.size() + digits[b];
        return code;
    };
    auto decode = [&](std::uint64_t code) {
        std::vector<std::size_t> digits(parts.size());
        for (std::size_t b = parts.size(); b-- > 0;) {
            digits[b] = code % parts[b].elements.size();
            code /= parts[b].elements.size();
        }
        return digits;
    };
    auto diagonal_step = [&](std::size_t code) {
        auto digits = decode(code);
        for (std::size_t b = 0; b < parts.size(); ++b) digits[b] = part_step[b][digits[b]];
        return static_cast<std::size_t>(encode(digits));
    };
    std::size_t right_cosets = 0;
    const auto right_label = orbit_labels(product, diagonal_step, right_cosets);
    rep.right_quotient_order = right_cosets;
    {
        std::vector<std::size_t> zero(parts.size());
        for (std::size_t b = 0; b < parts.size(); ++b) zero[b] = *parts[b].find(part_identity[b]);
        const std::size_t start = encode(zero);
        std::size_t len = 1;
        for (std::size_t x = diagonal_step(start); x != start; x = diagonal_step(x)) ++len;
        rep.diagonal_order = len;
    }

    // phi on elements: forget the root chips.
    auto phi = [&](const ChipConfig& u) -> std::optional<std::uint64_t> {
        const auto split = branch_split(t, u);
        std::vector<std::size_t> digits(parts.size());
        for (std::size_t b = 0; b < parts.size(); ++b) {
            auto j = parts[b].find(split.branches[b]);
            if (!j) return std::nullopt;
            digits[b] = *j;
        }
        return encode(digits);
    };

    rep.branches_recurrent = true;
    std::vector<std::optional<std::size_t>> image_of_coset(left_cosets);
    rep.well_defined = true;
    for (std::size_t i = 0; i < left.elements.size(); ++i) {
        auto code = phi(left.elements[i]);
        if (!code) {
            rep.branches_recurrent = rep.well_defined = false;
            continue;
        }
        const std::size_t target = right_label[*code];
        auto& slot = image_of_coset[left_label[i]];
        if (slot && *slot != target) rep.well_defined = false;
        slot = target;
    }
    if (rep.well_defined) {
        std::vector<bool> hit(right_cosets, false);
        rep.injective = true;
        for (const auto& slot : image_of_coset) {
            if (hit[*slot]) rep.injective = false;
            hit[*slot] = true;
        }
        rep.surjective = std::all_of(hit.begin(), hit.end(), [](bool h) { return h; });

        const auto e_code = phi(whole.identity());
        std::vector<std::size_t> zero(parts.size());
        for (std::size_t b = 0; b < parts.size(); ++b) zero[b] = *parts[b].find(part_identity[b]);
        rep.identity_law = e_code && right_label[*e_code] == right_label[encode(zero)];

        std::mt19937_64 rng(options.seed);
        std::uniform_int_distribution<std::size_t> pick(0, left.elements.size() - 1);
        rep.homomorphism = true;
        for (std::size_t s = 0; s < options.samples; ++s) {
            const auto& u = left.elements[pick(rng)];
            const auto& v = left.elements[pick(rng)];
            const auto sum_code = phi(whole.add(u, v));
            const auto su = branch_split(t, u), sv = branch_split(t, v);
            std::vector<std::size_t> digits(parts.size());
            for (std::size_t b = 0; b < parts.size(); ++b)
                digits[b] = *parts[b].find(add_and_stabilize(branches[b].tree.graph(), su.branches[b], sv.branches[b]));
            if (!sum_code || right_label[*sum_code] != right_label[encode(digits)]) rep.homomorphism = false;
            ++rep.sampled_pairs;
        }
    }
    return rep;
}

// ---------------------------------------------------------------------------

bool is_recurrent_form(const LevelVector& v, unsigned d) {
    const auto& a = v.entries;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] > d - 1) return false;
        if (a[i] == 0)
            for (std::size_t j = 0; j < i; ++j)
                if (a[j] != d - 1) return false;
    }
    return !a.empty();
}

LevelVector lex_successor(const LevelVector& v, unsigned d) {
    if (!is_recurrent_form(v, d)) throw std::invalid_argument("lex_successor: not a recurrent level vector");
    LevelVector next = v;
    auto& a = next.entries;
    const std::uint64_t top = d - 1;
    if (a[0] < top) {
        ++a[0];
        return next;
    }
    std::size_t j = 0;
    while (j < a.size() && a[j] == top) ++j;
    if (j == a.size()) {
        a.back() = 0;  // (d-1, ..., d-1) -> (d-1, ..., d-1, 0)
        return next;
    }
    // a_1 .. a_{j-1} = d-1 and a_j < d-1: the cascade leaves a zero just above level j.
    a[j - 1] = 0;
    ++a[j];
    return next;
}

RegularWiredTree::RegularWiredTree(unsigned d, unsigned n)
    : d_(d), n_(n), tree_(build_wired_regular_tree(d, n)) {
    std::size_t offset = 0, width = 1;
    for (unsigned k = 0; k + 1 < n; ++k, width *= d - 1) {
        level_offset_.push_back(offset);
        offset += width;
    }
}

std::size_t RegularWiredTree::site_of(std::span<const unsigned> word) const {
    if (word.size() + 1 >= n_) throw std::invalid_argument("word too long for this tree");
    std::size_t pos = 0;
    for (unsigned letter : word) {
        if (letter < 1 || letter > d_ - 1) throw std::invalid_argument("word letter out of range");
        pos = pos * (d_ - 1) + (letter - 1);
    }
    return level_offset_[word.size()] + pos;
}

std::vector<unsigned> RegularWiredTree::word_of(std::size_t site) const {
    const std::size_t level = level_of(site);
    std::size_t pos = site - level_offset_[level];
    std::vector<unsigned> word(level);
    for (std::size_t i = level; i-- > 0;) {
        word[i] = static_cast<unsigned>(pos % (d_ - 1)) + 1;
        pos /= d_ - 1;
    }
    return word;
}

ChipConfig RegularWiredTree::from_levels(std::span<const Integer> entries) const {
    if (entries.size() != levels()) throw std::invalid_argument("level vector has the wrong length");
    std::vector<Integer> chips(tree_.size());
    for (std::size_t s = 0; s < chips.size(); ++s) chips[s] = entries[level_of(s)];
    return ChipConfig(std::move(chips));
}

ChipConfig RegularWiredTree::from_levels(const LevelVector& v) const {
    std::vector<Integer> entries;
    for (auto x : v.entries) entries.emplace_back(static_cast<unsigned long>(x));
    return from_levels(entries);
}

std::optional<LevelVector> RegularWiredTree::level_vector(const ChipConfig& u) const {
    if (u.size() != tree_.size()) throw std::invalid_argument("configuration does not match the tree");
    LevelVector v{std::vector<std::uint64_t>(levels())};
    for (std::size_t k = 0; k < levels(); ++k) {
        const Integer& first = u[level_offset_[k]];
        if (!first.fits_ulong_p()) return std::nullopt;
        v.entries[k] = first.get_ui();
    }
    for (std::size_t s = 0; s < u.size(); ++s)
        if (cmp(u[s], static_cast<unsigned long>(v.entries[level_of(s)])) != 0) return std::nullopt;
    return v;
}

ChipConfig level_automorphism(const RegularWiredTree& t, std::span<const unsigned> alpha, const ChipConfig& u) {
    if (alpha.size() != t.height() - 2) throw std::invalid_argument("alpha must have n-2 entries");
    if (u.size() != t.tree().size()) throw std::invalid_argument("configuration does not match the tree");
    const unsigned a = t.degree() - 1;
    std::vector<Integer> out(u.size());
    for (std::size_t x = 0; x < u.size(); ++x) {
        auto word = t.word_of(x);
        for (std::size_t i = 0; i < word.size(); ++i)  // sigma_alpha^-1
            word[i] = (word[i] - 1 + a - alpha[i] % a) % a + 1;
        out[x] = u[t.site_of(word)];
    }
    return ChipConfig(std::move(out));
}

ChipConfig symmetrize(const RegularWiredTree& t, const ChipConfig& u) {
    const auto& g = t.graph();
    if (!is_stable(g, u) || !is_recurrent_burning(g, u)) throw std::invalid_argument("symmetrize needs a recurrent configuration");
    const unsigned a = t.degree() - 1;
    const std::size_t letters = t.height() - 2;
    ChipConfig sum(u.size());
    std::vector<unsigned> alpha(letters, 0);
    while (true) {
        sum += level_automorphism(t, alpha, u);
        std::size_t i = 0;
        while (i < letters && ++alpha[i] == a) alpha[i++] = 0;
        if (i == letters) break;
    }
    return stabilize(g, Integer(a) * Integer(a) * sum).stable;
}

std::vector<ChipConfig> root_multiples(const RegularWiredTree& t) {
    const SandpileGroup grp(t.graph());
    const ChipConfig r = root_hat(t.graph());
    std::vector<ChipConfig> out{r};
    while (out.back() != grp.identity()) {
        if (out.size() > grp.order()) throw std::logic_error("root_multiples: no return to the identity");
        out.push_back(grp.add(out.back(), r));
    }
    return out;
}

std::vector<LevelVector> lex_orbit(const RegularWiredTree& t) {
    const auto start = t.level_vector(root_hat(t.graph()));
    if (!start) throw std::logic_error("lex_orbit: r-hat is not constant on levels");
    std::vector<LevelVector> out{*start};
    for (LevelVector v = lex_successor(*start, t.degree()); v != *start; v = lex_successor(v, t.degree()))
        out.push_back(v);
    return out;
}

}  // namespace sandpile

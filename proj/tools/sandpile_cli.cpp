#include "sandpile/closed_forms.hpp"
#include "sandpile/io.hpp"
#include "sandpile/tree.hpp"
#include "sandpile/verify.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>

using namespace sandpile;

namespace {

constexpr int kFailure = 1;
constexpr int kUsage = 2;

struct Options {
    std::optional<unsigned> degree, height, max_height, ball_n;
    std::optional<std::uint64_t> prime;
    std::uint64_t seed = 1;
    std::uint64_t bound = 1'000'000;
    std::string graph_file, tree_file, chips, chips_file, method = "auto", claim, kind, input;
};

json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open " + path);
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument(path + ": " + e.what());
    }
}

void emit(const json& j) { std::cout << j.dump() << '\n'; }

// A file may hold either a graph document or a rooted tree ({"parents": ...}).
struct LoadedGraph {
    SinkedMultigraph graph;
    std::optional<WiredTree> tree;
};

LoadedGraph graph_from_document(const json& j) {
    if (j.is_object() && j.contains("parents")) {
        WiredTree t(rooted_tree_from_json(j));
        return {t.graph(), t};
    }
    return {graph_from_json(j), std::nullopt};
}

LoadedGraph load_graph(const Options& o) {
    if (!o.graph_file.empty()) return graph_from_document(read_json_file(o.graph_file));
    if (!o.tree_file.empty()) return graph_from_document(read_json_file(o.tree_file));
    if (o.degree && o.ball_n) return {build_wired_ball(*o.degree, *o.ball_n), std::nullopt};
    if (o.degree && o.height) {
        RegularWiredTree t(*o.degree, *o.height);
        return {t.graph(), t.tree()};
    }
    throw std::invalid_argument("give --graph FILE, --tree FILE, --degree with --height, or --degree with --n");
}

// Tree structure for the criticality test, when the graph has one.
std::optional<WiredTree> as_tree(const LoadedGraph& g) {
    if (g.tree) return g.tree;
    try {
        return WiredTree(g.graph);
    } catch (const std::invalid_argument&) {
        return std::nullopt;
    }
}

std::optional<ChipConfig> load_chips(const Options& o, const SinkedMultigraph& g) {
    if (!o.chips_file.empty()) return config_from_json(g, read_json_file(o.chips_file));
    if (o.chips.empty()) return std::nullopt;
    std::vector<Integer> values;
    std::string text = o.chips;
    if (!text.empty() && text.front() == '[') {
        values = integers_from_json(json::parse(text, nullptr, false));
    } else {
        std::stringstream ss(text);
        for (std::string item; std::getline(ss, item, ',');) values.push_back(parse_integer(item));
    }
    ChipConfig u(std::move(values));
    if (u.size() != g.site_count())
        throw std::invalid_argument("--chips has " + std::to_string(u.size()) + " entries, graph has " +
                                    std::to_string(g.site_count()) + " sites");
    return u;
}

ChipConfig require_chips(const Options& o, const SinkedMultigraph& g) {
    auto u = load_chips(o, g);
    if (!u) throw std::invalid_argument("give --chips or --chips-file");
    return *u;
}

unsigned thread_count() {
    unsigned n = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("SANDPILE_THREADS")) {
        try {
            const unsigned long cap = std::stoul(env);
            if (cap >= 1) n = std::min<unsigned long>(n, cap);
        } catch (const std::exception&) {
            throw std::invalid_argument("SANDPILE_THREADS must be a positive integer");
        }
    }
    return n;
}

int cmd_build(const Options& o) {
    if (o.kind == "regular-tree") {
        if (!o.degree || !o.height) throw std::invalid_argument("build regular-tree needs --degree and --height");
        emit(graph_to_json(build_wired_regular_tree(*o.degree, *o.height)));
    } else if (o.kind == "ball") {
        if (!o.degree || !o.ball_n) throw std::invalid_argument("build ball needs --degree and --n");
        emit(graph_to_json(build_wired_ball(*o.degree, *o.ball_n)));
    } else if (o.kind == "tree-file") {
        const std::string path = !o.input.empty() ? o.input : o.tree_file;
        if (path.empty()) throw std::invalid_argument("build tree-file needs a file");
        emit(graph_to_json(build_wired_tree(rooted_tree_from_json(read_json_file(path)))));
    } else {
        throw std::invalid_argument("unknown build kind: " + o.kind);
    }
    return 0;
}

int cmd_group(const Options& o) {
    const auto g = load_graph(o);
    json out = decomposition_to_json(sandpile_group(g.graph));
    out["graph_hash"] = graph_hash(g.graph);
    emit(out);
    return 0;
}

int cmd_stabilize(const Options& o) {
    const auto g = load_graph(o);
    emit(stabilization_to_json(g.graph, stabilize(g.graph, require_chips(o, g.graph))));
    return 0;
}

int cmd_recurrent(const Options& o) {
    const auto g = load_graph(o);
    const ChipConfig u = require_chips(o, g.graph);
    if (!is_stable(g.graph, u)) throw std::invalid_argument("configuration is not stable");
    json out{{"graph_hash", graph_hash(g.graph)}, {"chips", integers_to_json(u.chips())}};
    std::optional<bool> burning, critical;
    if (o.method == "burning" || o.method == "auto" || o.method == "both") burning = is_recurrent_burning(g.graph, u);
    if (o.method == "critical" || o.method == "auto" || o.method == "both") {
        const auto t = as_tree(g);
        if (t) {
            critical = is_recurrent_critical(*t, u);
            out["critical_vertices"] = [&] {
                json sites = json::array();
                const auto crit = critical_vertices(*t, u);
                for (std::size_t i = 0; i < crit.size(); ++i)
                    if (crit[i]) sites.push_back(std::to_string(i));
                return sites;
            }();
        } else if (o.method != "auto") {
            throw std::invalid_argument("the critical test needs a wired tree");
        }
    }
    if (burning) out["burning"] = *burning;
    if (critical) out["critical"] = *critical;
    out["recurrent"] = burning.value_or(critical.value_or(false));
    emit(out);
    return burning && critical && *burning != *critical ? kFailure : 0;
}

int cmd_identity(const Options& o) {
    const auto g = load_graph(o);
    emit(config_to_json(g.graph, identity(g.graph)));
    return 0;
}

int cmd_order(const Options& o) {
    const auto g = load_graph(o);
    const SandpileGroup grp(g.graph);
    const auto chips = load_chips(o, g.graph);
    const ChipConfig u = chips ? grp.rep(*chips) : root_hat(g.graph);
    json out = config_to_json(g.graph, u);
    out["order"] = to_decimal(grp.order_of(u));
    out["group_order"] = to_decimal(grp.order());
    emit(out);
    return 0;
}

int cmd_lex_orbit(const Options& o) {
    if (!o.degree || !o.height) throw std::invalid_argument("lex-orbit needs --degree and --height");
    const RegularWiredTree t(*o.degree, *o.height);
    const auto orbit = lex_orbit(t);
    const auto multiples = root_multiples(t);
    bool agree = orbit.size() == multiples.size();
    for (std::size_t k = 0; k < orbit.size(); ++k) {
        json levels = json::array();
        for (auto a : orbit[k].entries) levels.push_back(std::to_string(a));
        const bool match = k < multiples.size() && t.level_vector(multiples[k]) == orbit[k];
        agree = agree && match;
        emit(json{{"k", std::to_string(k + 1)}, {"levels", levels}, {"matches_chip_firing", match}});
    }
    emit(json{{"summary", {{"length", std::to_string(orbit.size())},
                           {"expected_length", to_decimal(root_subgroup_order(*o.degree, *o.height))},
                           {"pass", agree}}}});
    return agree ? 0 : kFailure;
}

int cmd_spanning_trees(const Options& o) {
    const auto g = load_graph(o);
    json out{{"graph_hash", graph_hash(g.graph)}, {"spanning_trees", to_decimal(spanning_tree_count(g.graph))}};
    if (o.degree && o.height && o.graph_file.empty() && o.tree_file.empty())
        out["product_formula"] = to_decimal(spanning_tree_product(*o.degree, *o.height));
    emit(out);
    return 0;
}

int cmd_verify(const Options& o) {
    VerifyParams p;
    p.degree = o.degree;
    p.height = o.height;
    p.max_height = o.max_height;
    p.ball_n = o.ball_n;
    p.prime = o.prime;
    p.seed = o.seed;
    p.bound = o.bound;
    if (!o.tree_file.empty()) p.tree = rooted_tree_from_json(read_json_file(o.tree_file));
    const auto reports = run_tasks(claim_tasks(o.claim, p), thread_count());
    std::size_t passed = 0;
    for (const auto& r : reports) {
        emit(r.to_json());
        passed += r.pass;
    }
    const bool ok = passed == reports.size() && !reports.empty();
    emit(json{{"summary",
               {{"claim", o.claim},
                {"instances", std::to_string(reports.size())},
                {"passed", std::to_string(passed)},
                {"failed", std::to_string(reports.size() - passed)},
                {"pass", ok}}}});
    return ok ? 0 : kFailure;
}

void add_graph_source(CLI::App* cmd, Options& o) {
    cmd->add_option("--graph", o.graph_file, "Graph JSON file (or a rooted tree {\"parents\": ...})");
    cmd->add_option("--tree", o.tree_file, "Rooted tree JSON file, wired before use");
    cmd->add_option("--degree", o.degree, "Degree d of a wired regular tree or ball");
    cmd->add_option("--height", o.height, "Height n of a wired regular tree");
    cmd->add_option("--n", o.ball_n, "Radius n of a wired ball");
}

void add_chip_source(CLI::App* cmd, Options& o) {
    cmd->add_option("--chips", o.chips, "Chips per site: 5,0,1 or a JSON array");
    cmd->add_option("--chips-file", o.chips_file, "Configuration JSON {\"graph_hash\", \"chips\"}");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Chip-firing and sandpile groups on wired trees"};
    app.require_subcommand(1);
    Options o;

    auto* build = app.add_subcommand("build", "Print a graph as JSON");
    build->add_option("kind", o.kind, "regular-tree | ball | tree-file")->required()->check(CLI::IsMember({"regular-tree", "ball", "tree-file"}));
    build->add_option("file", o.input, "Rooted tree JSON for tree-file");
    build->add_option("--degree", o.degree);
    build->add_option("--height", o.height);
    build->add_option("--n", o.ball_n);
    build->add_option("--tree", o.tree_file);

    auto* group = app.add_subcommand("group", "Invariant factors of the sandpile group");
    add_graph_source(group, o);

    auto* stab = app.add_subcommand("stabilize", "Stabilize a configuration");
    add_graph_source(stab, o);
    add_chip_source(stab, o);

    auto* rec = app.add_subcommand("recurrent", "Burning and criticality tests");
    add_graph_source(rec, o);
    add_chip_source(rec, o);
    rec->add_option("--method", o.method, "burning | critical | both | auto")
        ->check(CLI::IsMember({"burning", "critical", "both", "auto"}));

    auto* ident = app.add_subcommand("identity", "Recurrent identity");
    add_graph_source(ident, o);

    auto* order = app.add_subcommand("order", "Order of a configuration's class (default: one chip at the root)");
    add_graph_source(order, o);
    add_chip_source(order, o);

    auto* lex = app.add_subcommand("lex-orbit", "Level vectors of the root subgroup in lexicographic order");
    lex->add_option("--degree", o.degree)->required();
    lex->add_option("--height", o.height)->required();

    auto* trees = app.add_subcommand("spanning-trees", "Number of spanning trees");
    add_graph_source(trees, o);

    auto* verify = app.add_subcommand("verify", "Check a claim over a family of instances");
    std::vector<std::string> claims = claim_names();
    verify->add_option("claim", o.claim)->required()->check(CLI::IsMember(claims));
    verify->add_option("--degree", o.degree);
    verify->add_option("--height", o.height);
    verify->add_option("--max-height", o.max_height);
    verify->add_option("--n", o.ball_n);
    verify->add_option("--prime", o.prime);
    verify->add_option("--tree", o.tree_file);
    verify->add_option("--seed", o.seed);
    verify->add_option("--bound", o.bound);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsage;
    }

    try {
        if (*build) return cmd_build(o);
        if (*group) return cmd_group(o);
        if (*stab) return cmd_stabilize(o);
        if (*rec) return cmd_recurrent(o);
        if (*ident) return cmd_identity(o);
        if (*order) return cmd_order(o);
        if (*lex) return cmd_lex_orbit(o);
        if (*trees) return cmd_spanning_trees(o);
        if (*verify) return cmd_verify(o);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const std::length_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const json::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return kFailure;
    }
    return kUsage;
}

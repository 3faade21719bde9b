// Command-line front end: generation, embedding, decoding, ranking, and
// verification sweeps over the finite constructions in the library.

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <string>

#include "scottkit/backforth.hpp"
#include "scottkit/embed_graph.hpp"
#include "scottkit/embed_order.hpp"
#include "scottkit/enumerate.hpp"
#include "scottkit/field.hpp"
#include "scottkit/harness.hpp"
#include "scottkit/json_io.hpp"
#include "scottkit/order_family.hpp"
#include "scottkit/trees.hpp"

using namespace scottkit;
using nlohmann::json;

namespace {

json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidInput("cannot open " + path);
    json j;
    in >> j;
    return j;
}

void emit(const json& j) { std::cout << j.dump(2) << "\n"; }

struct Options {
    int max_size = 4;
    int max_len = 2;
    long long height = 3;
    long characteristic = 0;
    int k = 1;
    int depth = 2;
    std::string format = "json";
    unsigned seed = 0;
    std::size_t step_cap = 0;   // 0: keep the profile default

    Budgets budgets() const {
        Budgets b = Budgets::from_env();
        if (step_cap > 0) b.dense_step_cap = step_cap;
        return b;
    }
};

std::vector<FiniteStructure> sweep_instances(const std::string& embedding, int max_size) {
    std::vector<FiniteStructure> out;
    if (embedding == "tree-graph") {
        for (const auto& t : all_rooted_trees(max_size)) out.push_back(tree_to_structure(t));
    } else {
        out = all_graphs_up_to(max_size);
    }
    return out;
}

EmbeddingUnderTest make_embedding(const std::string& name, const Options& opt) {
    if (name == "tree-graph") return make_tree_graph_embedding(opt.budgets());
    if (name == "graph-field") return make_graph_field_embedding(opt.characteristic);
    if (name == "graph-order")
        return make_graph_order_embedding(DensePartition::shared(), opt.budgets());
    throw InvalidInput("unknown embedding: " + name);
}

int run_sweep(const std::string& kind, const std::string& embedding, const Options& opt) {
    auto e = make_embedding(embedding, opt);
    auto instances = sweep_instances(embedding, opt.max_size);

    if (kind == "iso") {
        auto r = check_iso_preservation(e, instances, opt.budgets());
        json j = r.to_json();
        j["seed"] = opt.seed;
        emit(j);
        return r.ok() ? 0 : 1;
    }
    if (kind == "orbits") {
        std::size_t checks = 0, failures = 0;
        json counterexample;
        for (std::size_t i = 0; i < instances.size(); ++i) {
            auto r = check_orbit_correspondence(e, instances[i], opt.k, opt.budgets());
            checks += r.checks;
            if (!r.ok() && failures == 0) {
                counterexample = r.counterexample;
                counterexample["instance"] = i;
            }
            failures += r.failures;
        }
        emit(json{{"embedding", e.name},
                  {"property", "orbit-correspondence"},
                  {"instances", instances.size()},
                  {"checks", checks},
                  {"failures", failures},
                  {"passed", failures == 0},
                  {"counterexample", counterexample},
                  {"k", opt.k},
                  {"seed", opt.seed}});
        return failures == 0 ? 0 : 1;
    }
    if (kind == "transfer") {
        std::size_t checks = 0, failures = 0;
        json counterexample;
        for (std::size_t i = 0; i < instances.size(); ++i) {
            auto r = transfer_family(e, instances, instances[i], opt.budgets());
            checks += r.checks;
            if (!r.ok() && failures == 0) {
                counterexample = r.counterexample;
                counterexample["target"] = i;
            }
            failures += r.failures;
        }
        emit(json{{"embedding", e.name},
                  {"property", "family-transfer"},
                  {"instances", instances.size()},
                  {"checks", checks},
                  {"failures", failures},
                  {"passed", failures == 0},
                  {"counterexample", counterexample},
                  {"seed", opt.seed}});
        return failures == 0 ? 0 : 1;
    }
    throw InvalidInput("unknown sweep kind: " + kind);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"finite Scott-rank constructions: embeddings, ranks, and sweeps"};
    app.require_subcommand(1);
    app.fallthrough();   // global flags may follow the subcommand

    Options opt;
    app.add_option("--max-size", opt.max_size, "instance size bound for sweeps");
    app.add_option("--max-len", opt.max_len, "body length bound for order fragments");
    app.add_option("--height", opt.height, "rational height bound for order fragments");
    app.add_option("--char", opt.characteristic, "field characteristic (0 or a prime)");
    app.add_option("--k", opt.k, "tuple length (orbits) or child multiplicity (generator)");
    app.add_option("--depth", opt.depth, "depth bound for the homogeneous tree generator");
    app.add_option("--format", opt.format, "output format: json or dot")
        ->check(CLI::IsMember({"json", "dot"}));
    app.add_option("--seed", opt.seed, "seed echoed into sweep reports");
    app.add_option("--step-cap", opt.step_cap, "dense-partition step cap override");

    auto* gen = app.add_subcommand("gen", "generate exhaustive families or single trees");
    std::string gen_what;
    int gen_max = 4;
    std::string gen_spec;
    gen->add_option("what", gen_what, "tree or graph")
        ->required()
        ->check(CLI::IsMember({"tree", "graph"}));
    gen->add_option("--max-nodes,--max-vertices", gen_max, "size bound for the family");
    gen->add_option("--spec", gen_spec, "per-level rank sets, e.g. [[2],[0,1],[0]]");

    auto* embed = app.add_subcommand("embed", "apply an embedding to an input structure");
    std::string embed_kind, embed_input;
    embed->add_option("kind", embed_kind, "tree-graph | graph-field | graph-order")
        ->required()
        ->check(CLI::IsMember({"tree-graph", "graph-field", "graph-order", "field", "order"}));
    embed->add_option("input", embed_input, "input JSON file")->required();

    auto* decode = app.add_subcommand("decode", "invert an embedding");
    std::string decode_kind, decode_input, decode_element;
    decode->add_option("kind", decode_kind, "tree-graph | graph-field | graph-order")
        ->required()
        ->check(CLI::IsMember({"tree-graph", "graph-field", "graph-order", "field", "order"}));
    decode->add_option("input", decode_input, "input JSON file")->required();
    decode->add_option("element", decode_element, "order element JSON file (graph-order only)");

    auto* rank = app.add_subcommand("scott-rank", "Scott rank report of a finite structure");
    std::string rank_input;
    rank->add_option("input", rank_input, "structure JSON file")->required();

    auto* trank = app.add_subcommand("tree-rank", "ordinal ranks of a finite tree");
    std::string trank_input;
    trank->add_option("input", trank_input, "tree JSON file")->required();

    auto* orb = app.add_subcommand("orbits", "automorphism orbits of k-tuples");
    std::string orb_input;
    orb->add_option("input", orb_input, "structure JSON file")->required();

    auto* sweep = app.add_subcommand("sweep", "verification sweeps over exhaustive families");
    std::string sweep_kind, sweep_embedding = "tree-graph";
    sweep->add_option("kind", sweep_kind, "iso | orbits | transfer")
        ->required()
        ->check(CLI::IsMember({"iso", "orbits", "transfer"}));
    sweep->add_option("--embedding", sweep_embedding, "tree-graph | graph-field | graph-order")
        ->check(CLI::IsMember({"tree-graph", "graph-field", "graph-order"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return e.get_exit_code() == 0 ? 0 : 2;
    }

    try {
        if (gen->parsed()) {
            if (gen_what == "tree") {
                if (!gen_spec.empty()) {
                    FiniteLevelSpec spec;
                    for (const auto& level : json::parse(gen_spec))
                        spec.push_back(std::set<int>(level.begin(), level.end()));
                    emit(tree_to_json(
                        generate_rank_homogeneous(spec, opt.k, opt.depth, opt.budgets())));
                } else {
                    json out = json::array();
                    for (const auto& t : all_rooted_trees(gen_max)) out.push_back(tree_to_json(t));
                    emit(out);
                }
            } else {
                json out = json::array();
                for (const auto& g : all_graphs_up_to(gen_max)) out.push_back(structure_to_json(g));
                emit(out);
            }
            return 0;
        }

        if (embed->parsed()) {
            if (embed_kind == "tree-graph") {
                auto g = encode_tree(tree_from_json(read_json_file(embed_input)));
                if (opt.format == "dot") std::cout << encoded_tree_to_dot(g);
                else emit(structure_to_json(g));
            } else if (embed_kind == "graph-field" || embed_kind == "field") {
                auto f = build_field(structure_from_json(read_json_file(embed_input)),
                                     opt.characteristic);
                emit(field_to_json(f));
            } else {
                if (opt.format == "dot") throw InvalidInput("dot output fits graphs only");
                auto g = structure_from_json(read_json_file(embed_input));
                auto frag = enumerate_fragment(g, opt.max_len, opt.height,
                                               DensePartition::shared(), opt.budgets());
                json out = json::array();
                for (const auto& x : frag) out.push_back(order_element_to_json(x));
                emit(out);
            }
            return 0;
        }

        if (decode->parsed()) {
            if (decode_kind == "tree-graph") {
                emit(tree_to_json(decode_graph(structure_from_json(read_json_file(decode_input)))));
            } else if (decode_kind == "graph-field" || decode_kind == "field") {
                emit(structure_to_json(decode_field(field_from_json(read_json_file(decode_input)))));
            } else {
                if (decode_element.empty())
                    throw InvalidInput("graph-order decoding needs an element file");
                auto g = structure_from_json(read_json_file(decode_input));
                auto x = order_element_from_json(read_json_file(decode_element));
                emit(json(g_decode(g, x)));
            }
            return 0;
        }

        if (rank->parsed()) {
            auto a = structure_from_json(read_json_file(rank_input));
            auto rep = scott_rank(a, opt.budgets());
            json ranks = json::array();
            for (const auto& [t, r] : rep.tuple_ranks)
                ranks.push_back({{"tuple", t}, {"rank", r}});
            emit(json{{"structure_rank", rep.structure_rank}, {"tuple_ranks", ranks}});
            return 0;
        }

        if (trank->parsed()) {
            auto t = tree_from_json(read_json_file(trank_input));
            json ranks = json::array();
            for (const auto& node : t.nodes())
                ranks.push_back({{"node", node}, {"rank", tree_rank(t, node)}});
            emit(json{{"tree_rank", t.empty() ? 0 : tree_rank(t, {})}, {"node_ranks", ranks}});
            return 0;
        }

        if (orb->parsed()) {
            auto a = structure_from_json(read_json_file(orb_input));
            auto part = orbits(a, opt.k, opt.budgets());
            json out = json::array();
            for (const auto& cell : part) {
                json c = json::array();
                for (const auto& t : cell) c.push_back(t);
                out.push_back(c);
            }
            emit(json{{"k", opt.k}, {"orbits", out}});
            return 0;
        }

        if (sweep->parsed()) return run_sweep(sweep_kind, sweep_embedding, opt);
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return 2;
    }
    return 2;
}

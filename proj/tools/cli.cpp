#include "cli.hpp"

#include <openssl/evp.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>
#include <json.hpp>

#include "fraisse/fraisse.hpp"

namespace fraisse::cli {
namespace {

using json = nlohmann::ordered_json;

// ---------------------------------------------------------------------------------------------
// Digests, inputs and the age description

std::string sha256_hex(std::string_view data) {
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) != 1)
        throw std::runtime_error("sha256 failed");
    std::ostringstream out;
    for (unsigned int i = 0; i < len; ++i)
        out << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(md[i]);
    return out.str();
}

struct Input {
    std::string role;
    std::string text; // normal form
    std::string digest;
};

Input make_input(std::string role, const Structure& s) {
    auto text = serialize_structure(s);
    auto digest = sha256_hex(text);
    return {std::move(role), std::move(text), std::move(digest)};
}

json inputs_json(const std::vector<Input>& inputs) {
    json arr = json::array();
    for (const auto& in : inputs)
        arr.push_back({{"role", in.role}, {"sha256", in.digest}, {"text", in.text}});
    return arr;
}

json age_json(const AgeSpec& spec) {
    if (!spec.name().empty() && catalog::is_catalog_name(spec.name()))
        return {{"catalog", spec.name()}};
    json j;
    j["name"] = spec.name();
    j["signature"] = serialize_signature(spec.signature());
    json axioms = json::array();
    for (std::size_t s = 0; s < spec.signature().size(); ++s) {
        const auto& ax = spec.axioms(s);
        if (!ax.any())
            continue;
        std::string line = spec.signature()[s].name;
        if (ax.irreflexive) line += " irreflexive";
        if (ax.symmetric) line += " symmetric";
        if (ax.antisymmetric) line += " antisymmetric";
        if (ax.total) line += " total";
        if (ax.transitive) line += " transitive";
        axioms.push_back(line);
    }
    j["axioms"] = axioms;
    json forbidden = json::array();
    for (const auto& f : spec.forbidden())
        forbidden.push_back(serialize_structure(f));
    j["forbidden"] = forbidden;
    return j;
}

AgeSpec age_from_json(const json& j) {
    if (j.contains("catalog"))
        return catalog::by_name(j.at("catalog").get<std::string>());
    std::string text = "signature: " + j.at("signature").get<std::string>() + "\n";
    if (!j.value("name", std::string()).empty())
        text += "name: " + j.at("name").get<std::string>() + "\n";
    for (const auto& line : j.at("axioms"))
        text += "axioms: " + line.get<std::string>() + "\n";
    auto base = parse_age(text);
    std::vector<Structure> forbidden;
    for (const auto& f : j.at("forbidden"))
        forbidden.push_back(parse_structure(f.get<std::string>()));
    return AgeSpec(base.signature(), base.axioms(), std::move(forbidden), base.name());
}

// ---------------------------------------------------------------------------------------------
// JSON encodings of results

json emb_json(const Embedding& e) { return e.map; }

Embedding emb_from(const json& j) { return Embedding{j.get<VertexMap>()}; }

json embs_json(const std::vector<Embedding>& es) {
    json arr = json::array();
    for (const auto& e : es)
        arr.push_back(emb_json(e));
    return arr;
}

std::vector<Embedding> embs_from(const json& j) {
    std::vector<Embedding> out;
    for (const auto& e : j)
        out.push_back(emb_from(e));
    return out;
}

json joint_json(const JointEmbedding& j) {
    return {{"host", serialize_structure(j.host)}, {"parts", embs_json(j.parts)}};
}

JointEmbedding joint_from(const json& j) {
    return {parse_structure(j.at("host").get<std::string>()), embs_from(j.at("parts"))};
}

json witness_json(const UnstableWitness& w) {
    return {{"depth", w.depth},
            {"host", serialize_structure(w.host)},
            {"a_parts", embs_json(w.a_parts)},
            {"z_parts", embs_json(w.z_parts)},
            {"tau_lt", w.tau_lt.code.hex()},
            {"tau_gt", w.tau_gt.code.hex()}};
}

// Pattern codes are recomputed from the parts; the stored hex strings are informational.
UnstableWitness witness_from(const json& j) {
    UnstableWitness w;
    w.depth = j.at("depth").get<int>();
    w.host = parse_structure(j.at("host").get<std::string>());
    w.a_parts = embs_from(j.at("a_parts"));
    w.z_parts = embs_from(j.at("z_parts"));
    if (w.a_parts.size() >= 2 && w.z_parts.size() >= 2) {
        w.tau_lt = pattern_in(w.host, w.a_parts[0], w.z_parts[1]);
        w.tau_gt = pattern_in(w.host, w.a_parts[1], w.z_parts[0]);
    }
    return w;
}

json partition_json(const InvariantPartition& p) { return p.blocks; }

json amalgamation_instance_json(const AmalgamationInstance& inst) {
    json j;
    j["a"] = inst.a ? json(serialize_structure(*inst.a)) : json(nullptr);
    j["b"] = serialize_structure(inst.b);
    j["c"] = serialize_structure(inst.c);
    j["f"] = emb_json(inst.f);
    j["g"] = emb_json(inst.g);
    return j;
}

AmalgamationInstance amalgamation_instance_from(const json& j) {
    AmalgamationInstance inst;
    if (!j.at("a").is_null())
        inst.a = parse_structure(j.at("a").get<std::string>());
    inst.b = parse_structure(j.at("b").get<std::string>());
    inst.c = parse_structure(j.at("c").get<std::string>());
    inst.f = emb_from(j.at("f"));
    inst.g = emb_from(j.at("g"));
    return inst;
}

json weights_json(const std::vector<std::pair<std::size_t, double>>& w) {
    json arr = json::array();
    for (auto [i, x] : w)
        arr.push_back(json::array({i, x}));
    return arr;
}

std::vector<std::pair<std::size_t, double>> weights_from(const json& j) {
    std::vector<std::pair<std::size_t, double>> out;
    for (const auto& e : j)
        out.emplace_back(e.at(0).get<std::size_t>(), e.at(1).get<double>());
    return out;
}

// ---------------------------------------------------------------------------------------------
// Options and the loaded session

struct Options {
    std::string age;
    std::string a, b, c, u, coloring;
    std::vector<std::string> z;
    std::vector<std::string> chain;
    std::string file;
    int colors = 2;
    double epsilon = 0.0;
    int max_n = 0;
    int n = 0;
    int depth = 0;
    int max_host = 0;
    int max_blocks = 0;
    int bound = 0;
    std::string property;
    std::string certificate_out;
    std::string verify_in;
    bool json_output = false;
    int threads = 1;
    bool no_cache = false;
    std::uint64_t max_nodes = Budget::kDefaultNodes;
    int time_limit_ms = 0;
};

struct Session {
    std::string command;
    std::optional<AgeSpec> age;
    std::map<std::string, std::vector<Structure>> structures; // by role, in order
    std::optional<Coloring<double>> coloring;
    std::vector<Input> inputs;
    json parameters = json::object();
    int threads = 1; // execution only; never part of reports or cache keys

    [[nodiscard]] const Structure& one(const std::string& role) const {
        auto it = structures.find(role);
        if (it == structures.end() || it->second.empty())
            throw InputError("missing input --" + role);
        return it->second.front();
    }
    [[nodiscard]] std::vector<Structure> all(const std::string& role) const {
        auto it = structures.find(role);
        return it == structures.end() ? std::vector<Structure>{} : it->second;
    }
    [[nodiscard]] const AgeSpec& spec() const {
        if (!age)
            throw InputError("missing --age");
        return *age;
    }
};

struct Outcome {
    std::string verdict;
    std::string reason;
    json result = json::object();
    int exit = kHolds;
    std::vector<std::string> human;
};

std::string join(const std::vector<Vertex>& v) {
    std::string s = "(";
    for (std::size_t i = 0; i < v.size(); ++i)
        s += (i ? "," : "") + std::to_string(v[i]);
    return s + ")";
}

std::string one_line(const Structure& s) {
    auto text = serialize_structure(s);
    std::string out;
    for (char ch : text)
        out += ch == '\n' ? std::string("; ") : std::string(1, ch);
    while (out.size() >= 2 && out.substr(out.size() - 2) == "; ")
        out.resize(out.size() - 2);
    return out;
}

// ---------------------------------------------------------------------------------------------
// Commands. Each takes a session (from files or from a certificate) and a budget.

Outcome cmd_parse(const Session& s, Budget&) {
    const auto& st = s.one("file");
    Outcome o{"ok", "parsed", {}, kHolds, {}};
    o.result["structure"] = serialize_structure(st);
    o.result["canonical_code"] = canonical_form(st).hex();
    o.human.push_back(serialize_structure(st));
    o.human.push_back("canonical code: " + canonical_form(st).hex());
    return o;
}

Outcome cmd_enumerate(const Session& s, Budget& budget) {
    const int lo = s.parameters.at("n").get<int>() > 0 ? s.parameters.at("n").get<int>() : 1;
    const int hi = s.parameters.at("n").get<int>() > 0 ? lo : s.parameters.at("max_n").get<int>();
    if (hi < 1)
        throw InputError("enumerate: give --n or --max-n");
    Outcome o{"ok", "one structure per isomorphism type", {}, kHolds, {}};
    json levels = json::array();
    for (int n = lo; n <= hi; ++n) {
        json items = json::array();
        for (const auto& e : enumerate_with_codes(s.spec(), n, {}, &budget))
            items.push_back({{"code", e.code.hex()}, {"structure", serialize_structure(e.structure)}});
        o.human.push_back("size " + std::to_string(n) + ": " + std::to_string(items.size()) + " structures");
        levels.push_back({{"size", n}, {"count", items.size()}, {"structures", items}});
    }
    o.result["levels"] = levels;
    return o;
}

Outcome cmd_embeddings(const Session& s, Budget& budget) {
    const auto es = embeddings(s.one("a"), s.one("b"), &budget);
    Outcome o{"ok", "all embeddings in lexicographic order", {}, kHolds, {}};
    o.result["count"] = es.size();
    o.result["embeddings"] = embs_json(es);
    o.human.push_back(std::to_string(es.size()) + " embeddings");
    for (const auto& e : es)
        o.human.push_back("  " + join(e.map));
    return o;
}

Outcome cmd_patterns(const Session& s, Budget& budget) {
    const auto entries = joint_embeddings(s.spec(), s.one("a"), s.all("z"), &budget);
    Outcome o{"ok", "one joint embedding per pattern, ordered by code", {}, kHolds, {}};
    json arr = json::array();
    for (const auto& e : entries) {
        auto j = joint_json(e.witness);
        j["code"] = e.code.code.hex();
        arr.push_back(j);
        std::string line = "  " + one_line(e.witness.host) + " | parts";
        for (const auto& p : e.witness.parts)
            line += " " + join(p.map);
        o.human.push_back(line);
    }
    o.result["count"] = entries.size();
    o.result["patterns"] = arr;
    o.human.insert(o.human.begin(), std::to_string(entries.size()) + " patterns");
    return o;
}

Outcome cmd_pattern_count(const Session& s, Budget& budget) {
    const auto count = pattern_count(s.spec(), s.one("a"), s.one("z"), &budget);
    Outcome o{"ok", "number of joint embedding patterns", {}, kHolds, {}};
    o.result["count"] = count;
    o.human.push_back("patterns: " + std::to_string(count));
    return o;
}

void require_members(const Session& s, std::initializer_list<const char*> roles) {
    if (!s.age)
        return;
    for (const char* r : roles)
        for (const auto& st : s.all(r))
            if (!member(*s.age, st))
                throw InputError(std::string("--") + r + " is not in the age");
}

json classical_json(const ClassicalArrowResult& r) {
    json j;
    j["colors"] = r.colors;
    j["domain_size"] = r.domain.size();
    j["copies"] = r.copies;
    j["automorphisms"] = r.automorphisms;
    if (r.counterexample) {
        j["domain"] = embs_json(r.domain);
        j["coloring"] = r.counterexample->values();
    }
    return j;
}

Outcome cmd_arrow(const Session& s, Budget& budget) {
    require_members(s, {"a", "b", "c"});
    const int k = s.parameters.at("colors").get<int>();
    const auto r = classical_arrow(s.one("c"), s.one("a"), s.one("b"), k, {s.threads, &budget});
    Outcome o{to_string(r.verdict), r.reason, classical_json(r), positive(r.verdict) ? kHolds : kFails, {}};
    o.human.push_back("embeddings of A into C: " + std::to_string(r.domain.size()) +
                      ", copies of B: " + std::to_string(r.copies));
    if (r.counterexample) {
        o.human.push_back("counterexample coloring:");
        for (std::size_t i = 0; i < r.domain.size(); ++i)
            o.human.push_back("  " + join(r.domain[i].map) + " -> " + std::to_string(r.counterexample->values()[i]));
    }
    return o;
}

Outcome cmd_arrow_search(const Session& s, Budget& budget) {
    require_members(s, {"a", "b"});
    const int k = s.parameters.at("colors").get<int>();
    const int max_n = s.parameters.at("max_n").get<int>();
    const auto r = arrow_search(s.spec(), s.one("a"), s.one("b"), k, max_n, {s.threads, &budget});
    Outcome o;
    json scanned = json::array();
    for (auto [n, c] : r.scanned)
        scanned.push_back(json::array({n, c}));
    o.result["max_n"] = max_n;
    o.result["scanned"] = scanned;
    if (r.found) {
        o.verdict = "found";
        o.reason = "smallest structure of the age satisfying the arrow";
        o.result["found"] = serialize_structure(*r.found);
        o.result["arrow"] = classical_json(*r.certificate);
        o.exit = kHolds;
        o.human.push_back("found C of size " + std::to_string(r.found->size()) + ": " + one_line(*r.found));
    } else {
        o.verdict = "none";
        o.reason = "no structure up to max_n satisfies the arrow";
        o.result["found"] = nullptr;
        o.exit = kFails;
    }
    return o;
}

json definable_json(const DefinableArrowResult& r) {
    json j;
    json cases = json::array();
    for (const auto& c : r.cases)
        cases.push_back({{"joint", joint_json(c.joint)}, {"copy", c.copy ? emb_json(*c.copy) : json(nullptr)}});
    j["cases"] = cases;
    json inst = json::array();
    for (const auto& w : r.instability)
        inst.push_back(witness_json(w));
    j["instability"] = inst;
    j["depth"] = r.depth;
    return j;
}

DefinableArrowResult definable_from(const json& j, const std::string& verdict) {
    DefinableArrowResult r;
    if (verdict == "holds") r.verdict = Verdict::holds;
    else if (verdict == "fails") r.verdict = Verdict::fails;
    else if (verdict == "degenerate-holds") r.verdict = Verdict::degenerate_holds;
    else if (verdict == "precondition-failed") r.verdict = Verdict::precondition_failed;
    else throw InputError("certificate: unknown verdict '" + verdict + "'");
    for (const auto& c : j.at("cases"))
        r.cases.push_back({joint_from(c.at("joint")),
                           c.at("copy").is_null() ? std::nullopt : std::optional<Embedding>(emb_from(c.at("copy")))});
    for (const auto& w : j.at("instability"))
        r.instability.push_back(witness_from(w));
    r.depth = j.value("depth", 0);
    return r;
}

Outcome definable_outcome(const DefinableArrowResult& r) {
    Outcome o{to_string(r.verdict), r.reason, definable_json(r), positive(r.verdict) ? kHolds : kFails, {}};
    o.human.push_back("joint embedding patterns examined: " + std::to_string(r.cases.size()));
    if (r.verdict == Verdict::fails && !r.cases.empty())
        o.human.push_back("offending union: " + one_line(r.cases.back().joint.host));
    for (const auto& w : r.instability)
        o.human.push_back("unstable sequence of depth " + std::to_string(w.depth) + " in a host of size " +
                          std::to_string(w.host.size()));
    return o;
}

Outcome cmd_definable_arrow(const Session& s, Budget& budget) {
    return definable_outcome(definable_arrow(s.spec(), s.one("c"), s.one("a"), s.one("b"), s.one("z"), &budget));
}

Outcome cmd_stable_arrow(const Session& s, Budget& budget) {
    const int depth = s.parameters.at("depth").get<int>();
    return definable_outcome(stable_arrow(s.spec(), s.one("c"), s.one("a"), s.one("b"), s.all("z"), depth,
                                          s.parameters.value("max_host", 0), &budget));
}

Outcome cmd_roelcke(const Session& s, Budget& budget) {
    const int max_n = s.parameters.at("max_n").get<int>();
    const auto w = roelcke_witness(s.spec(), s.one("a"), s.one("b"), s.one("z"), max_n, &budget);
    Outcome o;
    o.result["max_n"] = max_n;
    if (w) {
        o.verdict = "found";
        o.reason = "joint embedding <b,z> with constant pattern coloring";
        o.result["witness"] = joint_json(*w);
        o.human.push_back("witness host: " + one_line(w->host));
        o.human.push_back("b = " + join(w->parts[0].map) + ", z = " + join(w->parts[1].map));
        o.exit = kHolds;
    } else {
        o.verdict = "none";
        o.reason = "no union of B and Z up to max_n has a constant pattern coloring";
        o.result["witness"] = nullptr;
        o.exit = kFails;
    }
    return o;
}

Outcome cmd_stability(const Session& s, Budget& budget) {
    const int depth = s.parameters.at("depth").get<int>();
    const auto r = stability_search(s.spec(), s.one("a"), s.one("z"), depth, s.parameters.value("max_host", 0), &budget);
    Outcome o;
    o.result["depth"] = r.depth;
    o.result["max_host"] = r.max_host;
    o.result["patterns"] = r.patterns;
    o.result["pairs_tried"] = r.pairs_tried;
    if (r.witness) {
        o.verdict = "unstable";
        o.reason = "unstable sequence found (verified by pattern replay)";
        o.result["witness"] = witness_json(*r.witness);
        o.exit = kFails;
        o.human.push_back("host: " + one_line(r.witness->host));
        for (int m = 0; m < r.witness->depth; ++m)
            o.human.push_back("  a_" + std::to_string(m) + " = " + join(r.witness->a_parts[static_cast<std::size_t>(m)].map) +
                              ", z_" + std::to_string(m) + " = " + join(r.witness->z_parts[static_cast<std::size_t>(m)].map));
    } else {
        o.verdict = "stable-up-to-depth";
        o.reason = "no unstable sequence of this depth within the host bound";
        o.result["witness"] = nullptr;
        o.exit = kHolds;
    }
    o.human.push_back("depth " + std::to_string(r.depth) + ", max host " + std::to_string(r.max_host) + ", patterns " +
                      std::to_string(r.patterns));
    return o;
}

json proximal_json(const ProximalReport& r) {
    json entries = json::array();
    for (const auto& e : r.entries)
        entries.push_back({{"d", serialize_structure(e.d)}, {"status", to_string(e.status)}, {"e", e.e_vertices}});
    return {{"d_max", r.d_max}, {"universe_size", r.universe_size}, {"entries", entries}};
}

ProximalEntry proximal_entry_from(const json& j) {
    ProximalEntry e;
    e.d = parse_structure(j.at("d").get<std::string>());
    const auto st = j.at("status").get<std::string>();
    e.status = st == "pass" ? ProximalStatus::pass
             : st == "fail" ? ProximalStatus::fail
             : st == "universe-too-small" ? ProximalStatus::universe_too_small
             : throw InputError("certificate: unknown proximal status '" + st + "'");
    e.e_vertices = j.at("e").get<std::vector<Vertex>>();
    return e;
}

const Coloring<double>& need_coloring(const Session& s) {
    if (!s.coloring)
        throw InputError("missing --coloring");
    return *s.coloring;
}

Outcome cmd_proximal_check(const Session& s, Budget& budget) {
    const int d_max = s.parameters.at("max_n").get<int>();
    const auto r = proximal_check(s.spec(), s.one("u"), s.one("a"), need_coloring(s), d_max, &budget);
    Outcome o;
    o.result = proximal_json(r);
    const bool pass = r.all_pass();
    o.verdict = pass ? "proximal-up-to-size" : "not-established";
    o.reason = pass ? "every D up to the size bound passes inside U" : "some D fails or does not fit in U";
    o.exit = pass ? kHolds : kFails;
    for (const auto& e : r.entries)
        o.human.push_back("  D = " + one_line(e.d) + ": " + to_string(e.status) +
                          (e.status == ProximalStatus::pass ? " with E = " + join(e.e_vertices) : ""));
    return o;
}

Outcome cmd_proximal_arrow(const Session& s, Budget& budget) {
    const int d_max = s.parameters.at("max_n").get<int>();
    Outcome o;
    try {
        const auto r = proximal_arrow(s.spec(), s.one("u"), s.one("a"), need_coloring(s), s.one("b"), d_max, &budget);
        o.result["precondition"] = proximal_json(r.precondition);
        if (r.copy) {
            o.verdict = "found";
            o.reason = "copy of B on which the coloring is constant";
            o.result["copy"] = emb_json(*r.copy);
            o.exit = kHolds;
            o.human.push_back("b = " + join(r.copy->map));
        } else {
            o.verdict = "none";
            o.reason = "no copy of B in U has a constant coloring";
            o.result["copy"] = nullptr;
            o.exit = kFails;
        }
    } catch (const PreconditionError& e) {
        o.verdict = "precondition-failed";
        o.reason = e.what();
        o.result["precondition"] = proximal_json(proximal_check(s.spec(), s.one("u"), s.one("a"), need_coloring(s), d_max, &budget));
        o.result["copy"] = nullptr;
        o.exit = kFails;
    }
    return o;
}

json convex_json(const ConvexArrowResult& r) {
    json j;
    j["epsilon"] = r.epsilon;
    j["value"] = r.value ? json(*r.value) : json(nullptr);
    j["domain"] = embs_json(r.domain);
    j["copies"] = embs_json(r.copies);
    j["colorings"] = r.colorings;
    j["max_gap"] = r.max_gap;
    if (r.worst)
        j["worst"] = {{"mask", r.worst->mask}, {"value", r.worst->value}, {"weights", weights_json(r.worst->weights)}};
    else
        j["worst"] = nullptr;
    j["worst_dual"] = r.worst_dual;
    if (r.strategy)
        j["strategy"] = {{"weights", r.strategy->weights}, {"copies", embs_json(r.strategy->copies)}};
    else
        j["strategy"] = nullptr;
    json responses = json::array();
    for (const auto& resp : r.responses)
        responses.push_back(json::array({resp.mask, weights_json(resp.weights)}));
    j["responses"] = responses;
    return j;
}

ConvexArrowResult convex_from(const json& j, const std::string& verdict) {
    ConvexArrowResult r;
    r.verdict = verdict == "holds" ? Verdict::holds
              : verdict == "fails" ? Verdict::fails
              : verdict == "degenerate-holds" ? Verdict::degenerate_holds
              : throw InputError("certificate: unknown verdict '" + verdict + "'");
    r.epsilon = j.at("epsilon").get<double>();
    if (!j.at("value").is_null())
        r.value = j.at("value").get<double>();
    r.domain = embs_from(j.at("domain"));
    r.copies = embs_from(j.at("copies"));
    r.colorings = j.at("colorings").get<std::uint64_t>();
    if (!j.at("worst").is_null()) {
        const auto& w = j.at("worst");
        r.worst = ConvexResponse{w.at("mask").get<std::uint64_t>(), w.at("value").get<double>(), weights_from(w.at("weights"))};
    }
    r.worst_dual = j.at("worst_dual").get<std::vector<double>>();
    for (const auto& resp : j.at("responses"))
        r.responses.push_back({resp.at(0).get<std::uint64_t>(), 0.0, weights_from(resp.at(1))});
    return r;
}

Outcome cmd_convex(const Session& s, Budget& budget) {
    require_members(s, {"a", "b", "c"});
    const double eps = s.parameters.at("epsilon").get<double>();
    ConvexOptions opts;
    opts.budget = &budget;
    const auto r = convex_arrow(s.one("c"), s.one("a"), s.one("b"), eps, opts);
    Outcome o{to_string(r.verdict), r.reason, convex_json(r), positive(r.verdict) ? kHolds : kFails, {}};
    if (r.value) {
        std::ostringstream v;
        v << std::setprecision(12) << *r.value;
        o.human.push_back("game value: " + v.str() + " over " + std::to_string(r.colorings) + " adversary colorings");
    }
    if (r.strategy) {
        std::ostringstream line;
        line << std::setprecision(6) << "strategy:";
        for (std::size_t i = 0; i < r.strategy->weights.size(); ++i)
            line << ' ' << r.strategy->weights[i] << "*" << join(r.strategy->copies[i].map);
        o.human.push_back(line.str());
    }
    return o;
}

Outcome cmd_orbits(const Session& s, Budget& budget) {
    const auto p = orbits_on_embeddings(s.one("c"), s.one("a"), &budget);
    const auto group = automorphisms(s.one("c"), 1'000'000, &budget);
    Outcome o{"ok", "automorphism orbits on embeddings of A", {}, kHolds, {}};
    json elems = json::array();
    for (const auto& g : group.elements)
        elems.push_back(g);
    o.result["automorphisms"] = elems;
    o.result["embeddings"] = embs_json(p.base);
    o.result["orbits"] = partition_json(p);
    o.human.push_back("|Aut| = " + std::to_string(group.elements.size()) + ", orbits: " + std::to_string(p.blocks.size()));
    for (const auto& blk : p.blocks) {
        std::string line = " ";
        for (int i : blk)
            line += " " + join(p.base[static_cast<std::size_t>(i)].map);
        o.human.push_back(line);
    }
    return o;
}

Outcome cmd_invariant_partitions(const Session& s, Budget& budget) {
    const int max_blocks = s.parameters.at("max_blocks").get<int>();
    const auto ps = invariant_partitions(s.one("c"), s.one("a"), max_blocks, 100'000, &budget);
    Outcome o{"ok", "invariant partitions (every automorphism fixes every block)", {}, kHolds, {}};
    o.result["embeddings"] = embs_json(ps.empty() ? std::vector<Embedding>{} : ps.front().base);
    json arr = json::array();
    for (const auto& p : ps)
        arr.push_back(partition_json(p));
    o.result["count"] = ps.size();
    o.result["partitions"] = arr;
    o.human.push_back(std::to_string(ps.size()) + " invariant partitions with at most " + std::to_string(max_blocks) +
                      " blocks");
    return o;
}

Outcome cmd_coherent_partitions(const Session& s, Budget& budget) {
    const int max_blocks = s.parameters.at("max_blocks").get<int>();
    const auto r = coherent_partitions(s.spec(), s.all("chain"), s.one("a"), max_blocks, 100'000, &budget);
    Outcome o;
    o.verdict = r.families.empty() ? "no-families" : r.only_trivial ? "only-trivial" : "nontrivial-families";
    o.reason = "coherent families along the chain (finite-level evidence only)";
    o.exit = kHolds;
    json fams = json::array();
    for (const auto& fam : r.families) {
        json levels = json::array();
        for (const auto& p : fam)
            levels.push_back(partition_json(p));
        fams.push_back(levels);
    }
    o.result["count"] = r.families.size();
    o.result["only_trivial"] = r.only_trivial;
    o.result["families"] = fams;
    o.human.push_back(std::to_string(r.families.size()) + " coherent families" +
                      (r.only_trivial ? " (only the one-block family)" : ""));
    return o;
}

Outcome cmd_amalgamation(const Session& s, Budget& budget) {
    const auto property = amalgamation_property_from_string(s.parameters.at("property").get<std::string>());
    const int bound = s.parameters.at("bound").get<int>();
    const auto r = amalgamation_probe(s.spec(), property, bound, &budget);
    Outcome o;
    o.result["property"] = to_string(r.property);
    o.result["bound"] = r.bound;
    o.result["amalgam_size_cap"] = "|B|+|C|";
    o.result["holds_up_to"] = r.holds_up_to;
    o.result["instances"] = r.instances;
    o.result["counterexample"] = r.counterexample ? amalgamation_instance_json(*r.counterexample) : json(nullptr);
    if (r.counterexample) {
        o.verdict = "fails";
        o.reason = "instance without an amalgam of size at most |B|+|C|";
        o.exit = kFails;
        o.human.push_back("B: " + one_line(r.counterexample->b));
        o.human.push_back("C: " + one_line(r.counterexample->c));
    } else {
        o.verdict = "holds-up-to-bound";
        o.reason = "every instance up to the bound has an amalgam";
        o.exit = kHolds;
    }
    o.human.push_back("holds up to size " + std::to_string(r.holds_up_to) + " (" + std::to_string(r.instances) +
                      " instances)");
    return o;
}

using Command = Outcome (*)(const Session&, Budget&);

struct CommandInfo {
    Command run;
    bool needs_age;
    bool cacheable;
};

const std::map<std::string, CommandInfo>& commands() {
    static const std::map<std::string, CommandInfo> table{
        {"parse", {cmd_parse, false, false}},
        {"enumerate", {cmd_enumerate, true, true}},
        {"embeddings", {cmd_embeddings, false, false}},
        {"patterns", {cmd_patterns, true, true}},
        {"pattern-count", {cmd_pattern_count, true, true}},
        {"arrow", {cmd_arrow, true, true}},
        {"arrow-search", {cmd_arrow_search, true, true}},
        {"definable-arrow", {cmd_definable_arrow, true, true}},
        {"stable-arrow", {cmd_stable_arrow, true, true}},
        {"roelcke-witness", {cmd_roelcke, true, true}},
        {"stability", {cmd_stability, true, true}},
        {"proximal-check", {cmd_proximal_check, true, true}},
        {"proximal-arrow", {cmd_proximal_arrow, true, true}},
        {"convex-arrow", {cmd_convex, false, true}},
        {"orbits", {cmd_orbits, false, false}},
        {"invariant-partitions", {cmd_invariant_partitions, false, true}},
        {"coherent-partitions", {cmd_coherent_partitions, true, true}},
        {"amalgamation", {cmd_amalgamation, true, true}},
    };
    return table;
}

// ---------------------------------------------------------------------------------------------
// Reports, certificates and the cache

json header(const Session& s) {
    json doc;
    doc["tool"] = kToolVersion;
    doc["command"] = s.command;
    doc["age"] = s.age ? age_json(*s.age) : json(nullptr);
    json inputs = inputs_json(s.inputs);
    if (s.coloring) {
        const auto text = serialize_coloring(*s.coloring);
        inputs.push_back({{"role", "coloring"}, {"sha256", sha256_hex(text)}, {"text", text}});
    }
    doc["inputs"] = inputs;
    doc["parameters"] = s.parameters;
    return doc;
}

json report(const Session& s, const Outcome& o) {
    json doc = header(s);
    doc["verdict"] = o.verdict;
    doc["reason"] = o.reason;
    doc["exit_code"] = o.exit;
    doc["result"] = o.result;
    return doc;
}

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
    if (path.has_parent_path())
        std::filesystem::create_directories(path.parent_path());
    std::random_device rd;
    auto tmp = path;
    tmp += ".tmp" + std::to_string(rd());
    {
        std::ofstream f(tmp, std::ios::binary);
        if (!f)
            throw InputError("cannot write '" + tmp.string() + "'");
        f << content;
        if (!f)
            throw InputError("cannot write '" + tmp.string() + "'");
    }
    std::filesystem::rename(tmp, path);
}

std::optional<std::filesystem::path> cache_dir(const Options& opt) {
    if (opt.no_cache)
        return std::nullopt;
    const char* dir = std::getenv("FRAISSE_CACHE_DIR");
    if (!dir || !*dir)
        return std::nullopt;
    return std::filesystem::path(dir);
}

std::string cache_key(const Session& s) {
    return sha256_hex(header(s).dump());
}

std::optional<json> cache_load(const std::filesystem::path& dir, const std::string& key) {
    const auto path = dir / (key + ".json");
    if (!std::filesystem::exists(path))
        return std::nullopt;
    try {
        auto entry = json::parse(read_text_file(path.string()));
        if (entry.value("tool", std::string()) != kToolVersion || entry.value("key", std::string()) != key)
            return std::nullopt;
        return entry.at("report");
    } catch (...) {
        return std::nullopt;
    }
}

void cache_store(const std::filesystem::path& dir, const std::string& key, const json& doc) {
    json entry;
    entry["tool"] = kToolVersion;
    entry["key"] = key;
    entry["report"] = doc;
    try {
        write_file_atomic(dir / (key + ".json"), entry.dump());
    } catch (...) {
        // A cache that cannot be written only costs recomputation.
    }
}

void print_report(std::ostream& out, const json& doc, const std::vector<std::string>& human, bool machine) {
    if (machine) {
        out << doc.dump(2) << '\n';
        return;
    }
    out << doc.at("command").get<std::string>() << ": " << doc.at("verdict").get<std::string>() << '\n';
    out << "reason: " << doc.at("reason").get<std::string>() << '\n';
    for (const auto& line : human)
        out << line << '\n';
}

// ---------------------------------------------------------------------------------------------
// Verification of certificates

Session session_from_certificate(const json& cert) {
    Session s;
    s.command = cert.at("command").get<std::string>();
    if (!cert.at("age").is_null())
        s.age = age_from_json(cert.at("age"));
    std::optional<std::string> coloring_text;
    for (const auto& in : cert.at("inputs")) {
        const auto role = in.at("role").get<std::string>();
        const auto text = in.at("text").get<std::string>();
        if (sha256_hex(text) != in.at("sha256").get<std::string>())
            throw InputError("certificate: digest mismatch for embedded input '" + role + "'");
        if (role == "coloring") {
            coloring_text = text;
            continue;
        }
        auto st = parse_structure(text);
        s.inputs.push_back(make_input(role, st));
        s.structures[role].push_back(std::move(st));
    }
    if (coloring_text)
        s.coloring = parse_coloring(*coloring_text, s.one("a"), s.one("u"));
    s.parameters = cert.at("parameters");
    return s;
}

struct Check {
    bool valid = true;
    std::vector<std::string> notes;

    void expect(bool ok, const std::string& what) {
        notes.push_back((ok ? "ok: " : "FAILED: ") + what);
        valid = valid && ok;
    }
};

Verdict verdict_from(const std::string& v) {
    if (v == "holds") return Verdict::holds;
    if (v == "fails") return Verdict::fails;
    if (v == "degenerate-holds") return Verdict::degenerate_holds;
    if (v == "precondition-failed") return Verdict::precondition_failed;
    throw InputError("certificate: unknown verdict '" + v + "'");
}

void check_arrow_result(Check& chk, const Structure& c, const Structure& a, const Structure& b, int k,
                        const std::string& verdict, const json& res, Budget& budget) {
    const auto v = verdict_from(verdict);
    const bool no_copy = embeddings(b, c).empty();
    const bool degenerate = embeddings(a, b).empty();
    if (no_copy) {
        chk.expect(v == Verdict::fails, "B has no copy in C, so the arrow fails");
        return;
    }
    if (degenerate) {
        chk.expect(v == Verdict::degenerate_holds, "A does not embed in B (degenerate)");
        return;
    }
    if (v == Verdict::fails) {
        if (!res.contains("coloring")) {
            chk.expect(false, "fail certificate carries a coloring");
            return;
        }
        Coloring<int> chi(embs_from(res.at("domain")), res.at("coloring").get<std::vector<int>>());
        chk.expect(check::classical_counterexample(c, a, b, k, chi),
                   "coloring is total on embeddings(A,C) with values below k; no copy of B is monochromatic");
    } else {
        chk.expect(v == Verdict::holds, "verdict is holds");
        chk.expect(!check::first_bad_coloring(c, a, b, k, &budget).has_value(),
                   "plain exhaustive search finds no coloring without a monochromatic copy");
    }
}

Check verify_session(const Session& s, const json& cert, Budget& budget) {
    Check chk;
    const auto verdict = cert.at("verdict").get<std::string>();
    const auto& res = cert.at("result");
    const auto& cmd = s.command;
    if (cmd == "arrow") {
        check_arrow_result(chk, s.one("c"), s.one("a"), s.one("b"), s.parameters.at("colors").get<int>(), verdict, res,
                           budget);
    } else if (cmd == "arrow-search") {
        if (res.at("found").is_null()) {
            const auto replay = arrow_search(s.spec(), s.one("a"), s.one("b"), s.parameters.at("colors").get<int>(),
                                             s.parameters.at("max_n").get<int>(), {1, &budget});
            chk.expect(!replay.found, "replayed scan finds no structure (replay)");
        } else {
            const auto c = parse_structure(res.at("found").get<std::string>());
            chk.expect(member(s.spec(), c), "found structure lies in the age");
            chk.expect(c.size() <= s.parameters.at("max_n").get<int>(), "found structure respects max_n");
            check_arrow_result(chk, c, s.one("a"), s.one("b"), s.parameters.at("colors").get<int>(),
                               res.at("arrow").contains("coloring") ? "fails" : "holds", res.at("arrow"), budget);
        }
    } else if (cmd == "definable-arrow" || cmd == "stable-arrow") {
        const auto r = definable_from(res, verdict);
        const auto zs = cmd == "definable-arrow" ? std::vector<Structure>{s.one("z")} : s.all("z");
        chk.expect(check::definable(s.spec(), s.one("c"), s.one("a"), s.one("b"), zs, r),
                   "every case re-verified from embeddings and pattern codes");
        if (cmd == "stable-arrow" && r.verdict != Verdict::precondition_failed) {
            bool stable = true;
            for (const auto& z : zs)
                stable = stable && stable_up_to(s.spec(), s.one("a"), z, s.parameters.at("depth").get<int>(),
                                                s.parameters.value("max_host", 0), &budget);
            chk.expect(stable, "every pair (A,Z) is stable at the recorded depth (replay)");
        }
    } else if (cmd == "roelcke-witness") {
        if (res.at("witness").is_null()) {
            chk.expect(!roelcke_witness(s.spec(), s.one("a"), s.one("b"), s.one("z"), s.parameters.at("max_n").get<int>(),
                                        &budget),
                       "replayed search finds no witness (replay)");
        } else {
            chk.expect(check::roelcke(s.spec(), s.one("a"), s.one("b"), s.one("z"), joint_from(res.at("witness"))),
                       "witness is a union-supported joint embedding with constant pattern coloring");
        }
    } else if (cmd == "stability") {
        if (res.at("witness").is_null()) {
            chk.expect(stable_up_to(s.spec(), s.one("a"), s.one("z"), s.parameters.at("depth").get<int>(),
                                    s.parameters.value("max_host", 0), &budget),
                       "replayed search finds no unstable sequence (replay)");
        } else {
            const auto w = witness_from(res.at("witness"));
            chk.expect(verify_unstable_witness(s.spec(), s.one("a"), s.one("z"), w), "witness re-verified by pattern replay");
            bool truncations = true;
            for (int d = 2; d < w.depth; ++d)
                truncations = truncations && verify_unstable_witness(s.spec(), s.one("a"), s.one("z"), truncate_witness(w, d));
            chk.expect(truncations, "every truncation to a smaller depth re-verifies");
        }
    } else if (cmd == "proximal-check" || cmd == "proximal-arrow") {
        const auto& pre = cmd == "proximal-check" ? res : res.at("precondition");
        std::vector<CanonicalCode> expected;
        for (int n = 1; n <= s.parameters.at("max_n").get<int>(); ++n)
            for (const auto& e : enumerate_with_codes(s.spec(), n, {}, &budget))
                expected.push_back(e.code);
        std::vector<CanonicalCode> listed;
        bool entries_ok = true;
        bool all_pass = true;
        for (const auto& ej : pre.at("entries")) {
            const auto e = proximal_entry_from(ej);
            listed.push_back(canonical_form(e.d));
            entries_ok = entries_ok && check::proximal(s.one("u"), s.one("a"), *s.coloring, e);
            all_pass = all_pass && e.status == ProximalStatus::pass;
        }
        chk.expect(listed == expected, "one entry per structure D of the age up to the size bound");
        chk.expect(entries_ok, "every pass, fail and universe-too-small entry re-verified");
        if (cmd == "proximal-check") {
            chk.expect((verdict == "proximal-up-to-size") == (all_pass && !listed.empty()), "verdict matches the entries");
        } else {
            const auto inner = embeddings(s.one("a"), s.one("b"));
            if (verdict == "precondition-failed") {
                chk.expect(!(all_pass && !listed.empty()), "precondition indeed not established");
            } else if (res.at("copy").is_null()) {
                bool none = true;
                for (const auto& e : embeddings(s.one("b"), s.one("u")))
                    none = none && !is_constant(restrict_along(*s.coloring, e, inner));
                chk.expect(all_pass && none, "no copy of B carries a constant coloring");
            } else {
                const auto e = emb_from(res.at("copy"));
                chk.expect(all_pass && is_embedding(e, s.one("b"), s.one("u")) &&
                               is_constant(restrict_along(*s.coloring, e, inner)),
                           "copy of B with constant coloring");
            }
        }
    } else if (cmd == "convex-arrow") {
        const auto r = convex_from(res, verdict);
        chk.expect(check::convex(s.one("c"), s.one("a"), s.one("b"), r),
                   verdict == "fails" ? "dual solution bounds the worst coloring's value from below by epsilon"
                                      : "every adversary coloring is answered below epsilon");
    } else if (cmd == "amalgamation") {
        const auto property = amalgamation_property_from_string(s.parameters.at("property").get<std::string>());
        if (res.at("counterexample").is_null()) {
            const auto replay = amalgamation_probe(s.spec(), property, s.parameters.at("bound").get<int>(), &budget);
            chk.expect(!replay.counterexample && replay.holds_up_to == res.at("holds_up_to").get<int>(),
                       "replayed probe holds up to the bound (replay)");
        } else {
            chk.expect(check::amalgamation_counterexample(s.spec(), property,
                                                          amalgamation_instance_from(res.at("counterexample"))),
                       "counterexample instance has no amalgam");
        }
    } else {
        const auto& info = commands().at(cmd);
        const auto fresh = info.run(s, budget);
        chk.expect(fresh.result == res && fresh.verdict == verdict, "recomputed result is identical (replay)");
    }
    return chk;
}

// ---------------------------------------------------------------------------------------------
// Command-line handling

Structure load_role(const std::string& path) {
    try {
        return load_structure(path);
    } catch (const ParseError& e) {
        throw InputError(path + ": " + e.what());
    }
}

Session session_from_options(const std::string& command, const Options& opt) {
    Session s;
    s.command = command;
    const auto& info = commands().at(command);
    if (!opt.age.empty())
        s.age = load_age(opt.age);
    else if (info.needs_age)
        throw InputError(command + ": --age is required");
    auto add = [&](const std::string& role, const std::string& path) {
        if (path.empty())
            return;
        auto st = load_role(path);
        if (s.age && !(st.signature() == s.age->signature()))
            throw InputError("--" + role + " has a different signature than the age");
        s.inputs.push_back(make_input(role, st));
        s.structures[role].push_back(std::move(st));
    };
    add("file", opt.file);
    add("a", opt.a);
    add("b", opt.b);
    add("c", opt.c);
    add("u", opt.u);
    for (const auto& z : opt.z)
        add("z", z);
    for (const auto& f : opt.chain)
        add("chain", f);
    if (!opt.coloring.empty()) {
        try {
            s.coloring = parse_coloring(read_text_file(opt.coloring), s.one("a"), s.one("u"));
        } catch (const ParseError& e) {
            throw InputError(opt.coloring + ": " + e.what());
        }
    }
    json& p = s.parameters;
    if (command == "arrow" || command == "arrow-search") {
        if (opt.colors < 1)
            throw InputError("--colors must be at least 1");
        p["colors"] = opt.colors;
    }
    s.threads = std::max(1, opt.threads);
    if (command == "arrow-search" || command == "roelcke-witness" || command == "proximal-check" ||
        command == "proximal-arrow" || command == "enumerate")
        p["max_n"] = opt.max_n;
    if (command == "enumerate")
        p["n"] = opt.n;
    if (command == "stability" || command == "stable-arrow") {
        if (opt.depth < 2)
            throw InputError("--depth must be at least 2");
        p["depth"] = opt.depth;
        p["max_host"] = opt.max_host;
    }
    if (command == "convex-arrow") {
        if (!(opt.epsilon > 0) || opt.epsilon > 1)
            throw InputError("--epsilon must lie in (0, 1]");
        p["epsilon"] = opt.epsilon;
    }
    if (command == "invariant-partitions" || command == "coherent-partitions") {
        if (opt.max_blocks < 1)
            throw InputError("--max-blocks must be at least 1");
        p["max_blocks"] = opt.max_blocks;
    }
    if (command == "amalgamation") {
        if (opt.bound < 1)
            throw InputError("--bound must be at least 1");
        p["property"] = to_string(amalgamation_property_from_string(opt.property));
        p["bound"] = opt.bound;
    }
    return s;
}

Budget make_budget(const Options& opt) {
    std::optional<std::chrono::milliseconds> ms;
    if (opt.time_limit_ms > 0)
        ms = std::chrono::milliseconds(opt.time_limit_ms);
    return Budget(opt.max_nodes, ms);
}

// Verifies a certificate; inputs given on the command line must match its digests.
int run_verify(const std::string& path, const Options& opt, const std::string& expected_command, std::ostream& out) {
    json cert;
    try {
        cert = json::parse(read_text_file(path));
    } catch (const json::exception& e) {
        throw InputError(path + ": malformed certificate (" + e.what() + ")");
    }
    if (!cert.is_object() || !cert.contains("command") || !cert.contains("inputs") || !cert.contains("result") ||
        !cert.contains("verdict") || !cert.contains("parameters") || !cert.contains("age"))
        throw InputError(path + ": malformed certificate (missing fields)");
    if (cert.value("tool", std::string()) != kToolVersion)
        throw InputError(path + ": certificate written by a different tool version");
    const auto command = cert.at("command").get<std::string>();
    if (!commands().contains(command))
        throw InputError(path + ": unknown command '" + command + "'");
    if (!expected_command.empty() && command != expected_command)
        throw InputError(path + ": certificate is for '" + command + "', not '" + expected_command + "'");

    Session s;
    try {
        s = session_from_certificate(cert);
    } catch (const json::exception& e) {
        throw InputError(path + ": malformed certificate (" + e.what() + ")");
    }

    // Inputs named on the command line are matched role by role against the recorded digests.
    std::map<std::string, std::vector<std::string>> recorded;
    for (const auto& in : cert.at("inputs"))
        recorded[in.at("role").get<std::string>()].push_back(in.at("sha256").get<std::string>());
    auto match = [&](const std::string& role, const std::vector<std::string>& paths) {
        if (paths.empty())
            return;
        const auto& digests = recorded[role];
        if (digests.size() != paths.size())
            throw InputError("digest mismatch: certificate records " + std::to_string(digests.size()) + " --" + role +
                             " input(s)");
        for (std::size_t i = 0; i < paths.size(); ++i)
            if (make_input(role, load_role(paths[i])).digest != digests[i])
                throw InputError("digest mismatch: --" + role + " " + paths[i] + " differs from the certified input");
    };
    match("file", opt.file.empty() ? std::vector<std::string>{} : std::vector<std::string>{opt.file});
    for (const char* role : {"a", "b", "c", "u"}) {
        const std::string& p = role[0] == 'a' ? opt.a : role[0] == 'b' ? opt.b : role[0] == 'c' ? opt.c : opt.u;
        match(role, p.empty() ? std::vector<std::string>{} : std::vector<std::string>{p});
    }
    match("z", opt.z);
    match("chain", opt.chain);
    if (!opt.coloring.empty()) {
        const auto& digests = recorded["coloring"];
        const auto chi = parse_coloring(read_text_file(opt.coloring), s.one("a"), s.one("u"));
        if (digests.size() != 1 || sha256_hex(serialize_coloring(chi)) != digests[0])
            throw InputError("digest mismatch: --coloring " + opt.coloring + " differs from the certified input");
    }
    if (!opt.age.empty() && age_json(load_age(opt.age)) != cert.at("age"))
        throw InputError("digest mismatch: --age differs from the certified age");

    auto budget = make_budget(opt);
    Check chk;
    try {
        chk = verify_session(s, cert, budget);
    } catch (const json::exception& e) {
        throw InputError(path + ": malformed certificate (" + e.what() + ")");
    }
    json doc;
    doc["tool"] = kToolVersion;
    doc["command"] = "verify";
    doc["certificate_command"] = command;
    doc["certificate_verdict"] = cert.at("verdict");
    doc["valid"] = chk.valid;
    doc["checks"] = chk.notes;
    if (opt.json_output) {
        out << doc.dump(2) << '\n';
    } else {
        out << "verify " << command << " certificate: " << (chk.valid ? "valid" : "INVALID") << '\n';
        for (const auto& n : chk.notes)
            out << "  " << n << '\n';
    }
    return chk.valid ? kHolds : kFails;
}

int run_command(const std::string& command, const Options& opt, std::ostream& out) {
    if (!opt.verify_in.empty())
        return run_verify(opt.verify_in, opt, command, out);
    const auto& info = commands().at(command);
    auto session = session_from_options(command, opt);
    const auto dir = info.cacheable ? cache_dir(opt) : std::nullopt;
    std::string key;
    if (dir) {
        key = cache_key(session);
        if (auto cached = cache_load(*dir, key)) {
            if (!opt.certificate_out.empty())
                write_file_atomic(opt.certificate_out, cached->dump(2) + "\n");
            print_report(out, *cached, {"(cached result)"}, opt.json_output);
            return cached->at("exit_code").get<int>();
        }
    }
    auto budget = make_budget(opt);
    const auto outcome = info.run(session, budget);
    const auto doc = report(session, outcome);
    if (!opt.certificate_out.empty())
        write_file_atomic(opt.certificate_out, doc.dump(2) + "\n");
    if (dir)
        cache_store(*dir, key, doc);
    print_report(out, doc, outcome.human, opt.json_output);
    return outcome.exit;
}

void add_common(CLI::App* sub, Options& opt) {
    sub->add_flag("--json", opt.json_output, "Machine-readable JSON report");
    sub->add_option("--certificate", opt.certificate_out, "Write the self-contained certificate to this file");
    sub->add_option("--verify", opt.verify_in, "Verify this certificate instead of computing");
    sub->add_flag("--no-cache", opt.no_cache, "Bypass the result cache");
    sub->add_option("--max-nodes", opt.max_nodes, "Search node budget");
    sub->add_option("--time-limit-ms", opt.time_limit_ms, "Wall-clock budget in milliseconds (0 = none)");
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Finite structural Ramsey workbench: arrows, patterns, stability and certificates"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kToolVersion);
    Options opt;

    struct Spec {
        const char* name;
        const char* help;
        const char* roles; // letters from "abcuzk" (k = coloring, h = chain, f = positional file)
    };
    const std::vector<Spec> specs{
        {"parse", "Parse and normalize a structure file", "f"},
        {"enumerate", "List the age up to isomorphism", ""},
        {"embeddings", "List all embeddings of A into B", "ab"},
        {"patterns", "List joint embedding patterns of A and the Z's", "az"},
        {"pattern-count", "Count joint embedding patterns of A and Z", "az"},
        {"arrow", "Decide C -> (B)^A_k", "abc"},
        {"arrow-search", "Find the smallest C in the age with C -> (B)^A_k", "ab"},
        {"definable-arrow", "Decide the definable arrow C -> (B)^A_Z", "abcz"},
        {"stable-arrow", "Definable arrow for several Z after a stability check", "abcz"},
        {"roelcke-witness", "Find <b,z> with a -> [b a, z] constant", "abz"},
        {"stability", "Search for an unstable (A,Z)-sequence", "az"},
        {"proximal-check", "Check proximality of a coloring inside a finite universe", "auk"},
        {"proximal-arrow", "Find a copy of B on which a proximal coloring is constant", "abuk"},
        {"convex-arrow", "Decide the convex arrow by its game value", "abc"},
        {"orbits", "Automorphism orbits on embeddings of A into C", "ac"},
        {"invariant-partitions", "Invariant partitions of embeddings of A into C", "ac"},
        {"coherent-partitions", "Coherent invariant partitions along a chain", "ah"},
        {"amalgamation", "Bounded probe of joint embedding / amalgamation properties", ""},
    };
    std::map<std::string, CLI::App*> subs;
    for (const auto& sp : specs) {
        auto* sub = app.add_subcommand(sp.name, sp.help);
        subs[sp.name] = sub;
        const std::string roles = sp.roles;
        const auto& info = commands().at(sp.name);
        auto* age = sub->add_option("--age", opt.age, "Catalog name or age file");
        (void)age;
        (void)info;
        if (roles.find('a') != std::string::npos)
            sub->add_option("--a", opt.a, "Structure file A");
        if (roles.find('b') != std::string::npos)
            sub->add_option("--b", opt.b, "Structure file B");
        if (roles.find('c') != std::string::npos)
            sub->add_option("--c", opt.c, "Structure file C (the host for orbits and partitions)");
        if (roles.find('u') != std::string::npos)
            sub->add_option("--u", opt.u, "Structure file U (finite universe)");
        if (roles.find('z') != std::string::npos)
            sub->add_option("--z", opt.z, "Structure file Z (repeatable or comma-separated)")->delimiter(',');
        if (roles.find('k') != std::string::npos)
            sub->add_option("--coloring", opt.coloring, "Coloring file for embeddings of A into U");
        if (roles.find('h') != std::string::npos)
            sub->add_option("--chain", opt.chain, "Chain f1.st,f2.st,... of structures")->delimiter(',');
        if (roles.find('f') != std::string::npos)
            sub->add_option("file", opt.file, "Structure file")->required();
        add_common(sub, opt);
    }
    subs["arrow"]->add_option("--colors", opt.colors, "Number of colors k");
    subs["arrow-search"]->add_option("--colors", opt.colors, "Number of colors k");
    for (const char* n : {"arrow", "arrow-search"})
        subs[n]->add_option("--threads", opt.threads, "Worker threads for the coloring search");
    for (const char* n : {"arrow-search", "roelcke-witness", "proximal-check", "proximal-arrow", "enumerate"})
        subs[n]->add_option("--max-n", opt.max_n, "Size bound");
    subs["enumerate"]->add_option("--n", opt.n, "Exact size");
    for (const char* n : {"stability", "stable-arrow"}) {
        subs[n]->add_option("--depth", opt.depth, "Depth of the unstable sequence");
        subs[n]->add_option("--max-host", opt.max_host, "Host size bound (default depth*(|A|+|Z|))");
    }
    subs["convex-arrow"]->add_option("--epsilon", opt.epsilon, "Tolerance epsilon in (0, 1]");
    for (const char* n : {"invariant-partitions", "coherent-partitions"})
        subs[n]->add_option("--max-blocks", opt.max_blocks, "Maximum number of blocks");
    subs["amalgamation"]->add_option("--property", opt.property, "joint-embedding | amalgamation | free-amalgamation")
        ->required();
    subs["amalgamation"]->add_option("--bound", opt.bound, "Size bound for A, B, C");

    auto* verify = app.add_subcommand("verify", "Independently re-check a certificate");
    std::string cert_path;
    verify->add_option("certificate,--certificate", cert_path, "Certificate file");
    verify->add_option("--age", opt.age, "Age that must match the certificate");
    verify->add_option("--a", opt.a, "Input that must match the certificate");
    verify->add_option("--b", opt.b, "Input that must match the certificate");
    verify->add_option("--c", opt.c, "Input that must match the certificate");
    verify->add_option("--u", opt.u, "Input that must match the certificate");
    verify->add_option("--z", opt.z, "Inputs that must match the certificate")->delimiter(',');
    verify->add_option("--chain", opt.chain, "Chain that must match the certificate")->delimiter(',');
    verify->add_option("--coloring", opt.coloring, "Coloring that must match the certificate");
    verify->add_flag("--json", opt.json_output, "Machine-readable JSON report");
    verify->add_option("--max-nodes", opt.max_nodes, "Search node budget");
    verify->add_option("--time-limit-ms", opt.time_limit_ms, "Wall-clock budget in milliseconds (0 = none)");

    std::vector<const char*> argv{"fraisse"};
    for (const auto& a : args)
        argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return kUsage;
    }

    try {
        if (verify->parsed()) {
            if (cert_path.empty())
                throw InputError("verify: a certificate file is required");
            return run_verify(cert_path, opt, "", out);
        }
        for (const auto& [name, sub] : subs)
            if (sub->parsed())
                return run_command(name, opt, out);
        err << "error: no subcommand\n";
        return kUsage;
    } catch (const ResourceLimit& e) {
        err << "resource limit: " << e.what() << '\n';
        return kResource;
    } catch (const InputError& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const std::filesystem::filesystem_error& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << '\n';
        return kUsage;
    }
}

} // namespace fraisse::cli

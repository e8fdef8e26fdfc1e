#include "frankl/io.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace frankl {

using nlohmann::json;

namespace {

struct RawLine {
    int number;
    std::string text;
};

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

SetFamily parse_stanza(const std::vector<RawLine>& lines) {
    int declared_n = 0;
    std::vector<std::pair<int, std::vector<int>>> raw_sets;  // line, elements
    for (const auto& [no, text] : lines) {
        if (text.rfind("ground", 0) == 0) {
            std::istringstream is(text.substr(6));
            if (!(is >> declared_n) || declared_n < 1 || declared_n > kMaxGround)
                throw parse_error("line " + std::to_string(no) + ": bad ground declaration");
            continue;
        }
        if (text == "empty") {
            raw_sets.push_back({no, {}});
            continue;
        }
        std::string spaced = text;
        std::replace(spaced.begin(), spaced.end(), ',', ' ');
        std::istringstream is(spaced);
        std::vector<int> elements;
        int e;
        while (is >> e) {
            if (e < 1 || e > kMaxGround)
                throw parse_error("line " + std::to_string(no) + ": element " +
                                  std::to_string(e) + " out of range");
            elements.push_back(e);
        }
        if (!is.eof())
            throw parse_error("line " + std::to_string(no) + ": cannot parse set");
        if (elements.empty())
            throw parse_error("line " + std::to_string(no) + ": empty line inside a set list");
        raw_sets.push_back({no, std::move(elements)});
    }
    if (raw_sets.empty()) throw parse_error("no sets in family");
    int max_elem = 0;
    for (const auto& [no, els] : raw_sets)
        for (int e : els) max_elem = std::max(max_elem, e);
    int n = declared_n > 0 ? declared_n : std::max(1, max_elem);
    if (max_elem > n)
        throw parse_error("element " + std::to_string(max_elem) +
                          " exceeds the declared ground size " + std::to_string(n));
    std::vector<Mask> masks;
    std::vector<bool> seen(std::size_t{1} << n, false);
    for (const auto& [no, els] : raw_sets) {
        Mask m = mask_of(els);
        if (seen[m])
            throw parse_error("line " + std::to_string(no) + ": duplicate set");
        seen[m] = true;
        masks.push_back(m);
    }
    return SetFamily(GroundSet(n), std::move(masks));
}

}  // namespace

std::vector<SetFamily> parse_families(const std::string& text) {
    std::vector<std::vector<RawLine>> stanzas(1);
    std::istringstream is(text);
    std::string line;
    int no = 0;
    while (std::getline(is, line)) {
        ++no;
        std::string t = trim(line);
        if (!t.empty() && t[0] == '#') continue;
        if (t.empty()) {
            if (!stanzas.back().empty()) stanzas.emplace_back();
            continue;
        }
        stanzas.back().push_back({no, t});
    }
    if (stanzas.back().empty()) stanzas.pop_back();
    if (stanzas.empty()) throw parse_error("no families in input");
    std::vector<SetFamily> out;
    out.reserve(stanzas.size());
    for (const auto& st : stanzas) out.push_back(parse_stanza(st));
    return out;
}

SetFamily parse_family(const std::string& text) {
    auto all = parse_families(text);
    if (all.size() != 1)
        throw parse_error("expected one family, found " + std::to_string(all.size()));
    return std::move(all.front());
}

SetFamily load_family(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw parse_error("cannot open '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_family(buf.str());
}

std::string print_family(const SetFamily& f) { return family_to_string(f); }

json family_to_json(const SetFamily& f) {
    json sets = json::array();
    for (Mask m : f.sets()) {
        json s = json::array();
        for (int i = 1; i <= f.n(); ++i)
            if (m >> (i - 1) & 1u) s.push_back(i);
        sets.push_back(std::move(s));
    }
    return json{{"n", f.n()}, {"sets", std::move(sets)}};
}

SetFamily family_from_json(const json& j) {
    int n = j.at("n").get<int>();
    std::vector<std::vector<int>> sets;
    for (const auto& s : j.at("sets")) sets.push_back(s.get<std::vector<int>>());
    return make_family(n, sets);
}

json system_to_json(const LinearSystem& sys) {
    json rows = json::array();
    for (const auto& row : sys.rows) {
        json coeffs = json::array();
        for (const auto& c : row.coeffs) coeffs.push_back(to_string(c));
        rows.push_back(json{{"name", row.name},
                            {"coeffs", std::move(coeffs)},
                            {"rel", rel_str(row.rel)},
                            {"rhs", to_string(row.rhs)}});
    }
    return json{{"vars", sys.vars}, {"nonneg", sys.nonneg}, {"rows", std::move(rows)}};
}

namespace {

Rel rel_from_string(const std::string& s) {
    if (s == "=" || s == "==") return Rel::eq;
    if (s == "<=") return Rel::le;
    if (s == ">=") return Rel::ge;
    throw parse_error("unknown relation '" + s + "'");
}

}  // namespace

LinearSystem system_from_json(const json& j) {
    LinearSystem sys;
    sys.vars = j.at("vars").get<std::vector<std::string>>();
    sys.nonneg = j.at("nonneg").get<std::vector<bool>>();
    for (const auto& row : j.at("rows")) {
        std::vector<Rat> coeffs;
        for (const auto& c : row.at("coeffs")) coeffs.push_back(rat_from_string(c.get<std::string>()));
        sys.add_row(row.at("name").get<std::string>(), std::move(coeffs),
                    rel_from_string(row.at("rel").get<std::string>()),
                    rat_from_string(row.at("rhs").get<std::string>()));
    }
    return sys;
}

json duals_to_json(const std::map<std::string, Rat>& duals) {
    json out = json::object();
    for (const auto& [name, v] : duals) out[name] = to_string(v);
    return out;
}

std::map<std::string, Rat> duals_from_json(const json& j) {
    std::map<std::string, Rat> out;
    for (auto it = j.begin(); it != j.end(); ++it)
        out[it.key()] = rat_from_string(it.value().get<std::string>());
    return out;
}

namespace {

json chain_to_json(const FCChain& ch) {
    json links = json::array();
    for (const auto& l : ch.links)
        links.push_back(json{{"from", l.from}, {"to", l.to},
                             {"just", l.fs ? "fs" : "uc"}, {"witness", l.witness}});
    return json{{"source", ch.source}, {"target", ch.target}, {"links", std::move(links)}};
}

FCChain chain_from_json(const json& j) {
    FCChain ch;
    ch.source = j.at("source").get<Mask>();
    ch.target = j.at("target").get<Mask>();
    for (const auto& l : j.at("links")) {
        ChainLink link;
        link.from = l.at("from").get<Mask>();
        link.to = l.at("to").get<Mask>();
        link.fs = l.at("just").get<std::string>() == "fs";
        link.witness = l.at("witness").get<Mask>();
        ch.links.push_back(link);
    }
    return ch;
}

json chain_cut_to_json(const FcChainCut& cut) {
    json chains = json::array();
    for (const auto& ch : cut.chains) chains.push_back(chain_to_json(ch));
    return json{{"pos", cut.pos}, {"neg", cut.neg}, {"chains", std::move(chains)}};
}

FcChainCut chain_cut_from_json(const json& j) {
    FcChainCut cut;
    cut.pos = j.at("pos").get<std::vector<Mask>>();
    cut.neg = j.at("neg").get<std::vector<Mask>>();
    for (const auto& ch : j.at("chains")) cut.chains.push_back(chain_from_json(ch));
    return cut;
}

}  // namespace

json proof_to_json(const BnbProof& proof) {
    json leaves = json::array();
    for (const auto& leaf : proof.leaves) {
        json fix = json::array();
        for (auto [m, v] : leaf.fixings) fix.push_back(json{{"var", m}, {"value", v}});
        json cuts = json::array();
        for (const auto& cc : leaf.chain_cuts) cuts.push_back(chain_cut_to_json(cc));
        leaves.push_back(json{{"fixings", std::move(fix)},
                              {"chain_cuts", std::move(cuts)},
                              {"system", system_to_json(leaf.system)},
                              {"duals", duals_to_json(leaf.duals)}});
    }
    return json{{"n", proof.n}, {"leaves", std::move(leaves)}};
}

BnbProof proof_from_json(const json& j) {
    BnbProof proof;
    proof.n = j.at("n").get<int>();
    for (const auto& lj : j.at("leaves")) {
        BnbLeaf leaf;
        for (const auto& f : lj.at("fixings"))
            leaf.fixings.emplace_back(f.at("var").get<Mask>(), f.at("value").get<int>());
        if (lj.contains("chain_cuts"))
            for (const auto& cc : lj.at("chain_cuts"))
                leaf.chain_cuts.push_back(chain_cut_from_json(cc));
        leaf.system = system_from_json(lj.at("system"));
        leaf.duals = duals_from_json(lj.at("duals"));
        proof.leaves.push_back(std::move(leaf));
    }
    return proof;
}

json certificate_to_json(const ClassificationCertificate& cert) {
    json j;
    j["schema"] = "frankl.cert/1";
    if (const auto* fc = std::get_if<FcCertificate>(&cert)) {
        j["kind"] = "fc";
        j["family"] = family_to_json(fc->family);
        json w = json::array();
        for (const auto& e : fc->weights.entries) w.push_back(to_string(e));
        j["weights"] = std::move(w);
        j["proof"] = proof_to_json(fc->proof);
    } else {
        const auto& nf = std::get<NonFcCertificate>(cert);
        j["kind"] = "non_fc";
        j["family"] = family_to_json(nf.family);
        j["form"] = nf.form == MasterMode::lp_normalized ? "y" : "z";
        json ws = json::array();
        for (const auto& w : nf.witnesses) ws.push_back(family_to_json(w));
        j["witnesses"] = std::move(ws);
        j["system"] = system_to_json(nf.system);
        j["duals"] = duals_to_json(nf.duals);
    }
    return j;
}

ClassificationCertificate certificate_from_json(const json& j) {
    const std::string schema = j.at("schema").get<std::string>();
    if (schema != "frankl.cert/1") throw parse_error("unsupported certificate schema " + schema);
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "fc") {
        FcCertificate fc;
        fc.family = family_from_json(j.at("family"));
        for (const auto& w : j.at("weights"))
            fc.weights.entries.push_back(Int(w.get<std::string>()));
        fc.proof = proof_from_json(j.at("proof"));
        return fc;
    }
    if (kind != "non_fc") throw parse_error("unknown certificate kind '" + kind + "'");
    NonFcCertificate nf;
    nf.family = family_from_json(j.at("family"));
    nf.form = j.at("form").get<std::string>() == "y" ? MasterMode::lp_normalized
                                                     : MasterMode::ip_l1_min;
    for (const auto& w : j.at("witnesses")) nf.witnesses.push_back(family_from_json(w));
    nf.system = system_from_json(j.at("system"));
    nf.duals = duals_from_json(j.at("duals"));
    return nf;
}

void write_json_file(const std::string& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw error("cannot write '" + path + "'");
    out << j.dump(1) << "\n";
}

json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw parse_error("cannot open '" + path + "'");
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw parse_error("bad JSON in '" + path + "': " + e.what());
    }
    return j;
}

}  // namespace frankl

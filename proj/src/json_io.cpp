#include "morita/json_io.hpp"

#include <fstream>
#include <sstream>

namespace morita {

using nlohmann::json;

namespace {

std::string idx1(std::size_t i) { return std::to_string(i + 1); }

[[noreturn]] void parse_fail(const std::string& msg) { throw ParseError(msg); }

std::size_t get_index(const json& v, std::size_t bound, const std::string& what) {
    if (!v.is_number_unsigned() || v.get<std::size_t>() < 1 || v.get<std::size_t>() > bound)
        parse_fail(what + ": index " + v.dump() + " out of range [1, " + std::to_string(bound) + "]");
    return v.get<std::size_t>() - 1;
}

Scalar get_scalar(const FieldSpec& f, const json& v, const std::string& what) {
    if (!v.is_string()) parse_fail(what + ": scalar must be a string, got " + v.dump());
    return Scalar::parse(f, v.get<std::string>());
}

// sparse triples [i, j, k, "coeff"] into a flat tensor (d1 x d2 x d3)
void read_triples(const FieldSpec& f, const json& arr, std::vector<Scalar>& tensor, std::size_t d1,
                  std::size_t d2, std::size_t d3, const std::string& what) {
    if (!arr.is_array()) parse_fail(what + ": expected an array of [i, j, k, coeff] entries");
    for (const json& e : arr) {
        if (!e.is_array() || e.size() != 4) parse_fail(what + ": malformed entry " + e.dump());
        std::size_t i = get_index(e[0], d1, what);
        std::size_t j = get_index(e[1], d2, what);
        std::size_t k = get_index(e[2], d3, what);
        tensor[(i * d2 + j) * d3 + k] = get_scalar(f, e[3], what);
    }
}

json triples_of(const FieldSpec&, const std::vector<Scalar>& tensor, std::size_t d1, std::size_t d2,
                std::size_t d3) {
    json arr = json::array();
    for (std::size_t i = 0; i < d1; ++i)
        for (std::size_t j = 0; j < d2; ++j)
            for (std::size_t k = 0; k < d3; ++k) {
                const Scalar& s = tensor[(i * d2 + j) * d3 + k];
                if (s.is_zero()) continue;
                arr.push_back(json::array({i + 1, j + 1, k + 1, s.str()}));
            }
    return arr;
}

Vec read_vector(const FieldSpec& f, const json& arr, std::size_t dim, const std::string& what) {
    if (!arr.is_array() || arr.size() != dim)
        parse_fail(what + ": expected a length-" + std::to_string(dim) + " coordinate vector");
    Vec v = zero_vec(f, dim);
    for (std::size_t i = 0; i < dim; ++i) v[i] = get_scalar(f, arr[i], what);
    return v;
}

json vector_of(const Vec& v) {
    json arr = json::array();
    for (const Scalar& s : v) arr.push_back(s.str());
    return arr;
}

template <class Map, class T>
std::string name_of(const Map& map, const T* ptr, const std::string& what) {
    for (const auto& [name, candidate] : map)
        if (candidate.get() == ptr) return name;
    for (const auto& [name, candidate] : map)
        if (*candidate == *ptr) return name;
    throw MalformedInput("serialize: " + what + " is not registered in the spec bundle");
}

}  // namespace

SpecFile parse_spec(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        parse_fail(std::string("invalid JSON: ") + e.what());
    }
    if (!doc.is_object()) parse_fail("spec root must be an object");
    SpecFile spec;
    spec.version = doc.value("version", "1");
    if (!doc.contains("field")) parse_fail("spec is missing 'field'");
    const json& fld = doc["field"];
    std::string kind = fld.value("kind", "");
    if (kind == "rationals") {
        spec.field = rationals();
    } else if (kind == "prime") {
        if (!fld.contains("p") || !fld["p"].is_number_unsigned())
            parse_fail("prime field needs an unsigned 'p'");
        spec.field = prime_field(fld["p"].get<std::uint64_t>());
    } else {
        parse_fail("field.kind must be 'rationals' or 'prime'");
    }
    const FieldSpec& f = spec.field;

    const json algebras_node = doc.value("algebras", json::object());
    for (const auto& [name, a] : algebras_node.items()) {
        if (!a.contains("dim") || !a["dim"].is_number_unsigned())
            parse_fail("algebra '" + name + "' needs an unsigned 'dim'");
        Algebra alg;
        alg.field = f;
        alg.dim = a["dim"].get<std::size_t>();
        alg.name = name;
        alg.mul.assign(alg.dim * alg.dim * alg.dim, Scalar::zero(f));
        read_triples(f, a.value("mul", json::array()), alg.mul, alg.dim, alg.dim, alg.dim,
                     "algebra '" + name + "' mul");
        const json idempotents_node = a.value("idempotents", json::array());
        for (const json& e : idempotents_node)
            alg.idempotents.push_back(read_vector(f, e, alg.dim, "algebra '" + name + "' idempotent"));
        if (a.contains("identity"))
            alg.identity = read_vector(f, a["identity"], alg.dim, "algebra '" + name + "' identity");
        spec.algebras[name] = std::make_shared<Algebra>(std::move(alg));
    }

    auto algebra_ref = [&](const json& v, const std::string& what) -> AlgebraPtr {
        if (!v.is_string()) parse_fail(what + ": expected an algebra name");
        auto it = spec.algebras.find(v.get<std::string>());
        if (it == spec.algebras.end())
            throw UnresolvedReference(what + ": unknown algebra '" + v.get<std::string>() + "'");
        return it->second;
    };

    const json bimodules_node = doc.value("bimodules", json::object());
    for (const auto& [name, b] : bimodules_node.items()) {
        auto m = std::make_shared<Bimodule>();
        m->left = algebra_ref(b.value("left", json()), "bimodule '" + name + "'");
        m->right = algebra_ref(b.value("right", json()), "bimodule '" + name + "'");
        if (!b.contains("dim") || !b["dim"].is_number_unsigned())
            parse_fail("bimodule '" + name + "' needs an unsigned 'dim'");
        m->dim = b["dim"].get<std::size_t>();
        m->name = name;
        m->left_action.assign(m->left->dim * m->dim * m->dim, Scalar::zero(f));
        m->right_action.assign(m->dim * m->right->dim * m->dim, Scalar::zero(f));
        read_triples(f, b.value("left_action", json::array()), m->left_action, m->left->dim, m->dim,
                     m->dim, "bimodule '" + name + "' left_action");
        read_triples(f, b.value("right_action", json::array()), m->right_action, m->dim,
                     m->right->dim, m->dim, "bimodule '" + name + "' right_action");
        spec.bimodules[name] = m;
    }

    auto bimodule_ref = [&](const json& v, const std::string& what) -> BimodulePtr {
        if (!v.is_string()) parse_fail(what + ": expected a bimodule name");
        auto it = spec.bimodules.find(v.get<std::string>());
        if (it == spec.bimodules.end())
            throw UnresolvedReference(what + ": unknown bimodule '" + v.get<std::string>() + "'");
        return it->second;
    };

    const json classical_node = doc.value("classical_contexts", json::object());
    for (const auto& [name, c] : classical_node.items()) {
        AlgebraPtr R = algebra_ref(c.value("R", json()), "classical context '" + name + "'");
        AlgebraPtr S = algebra_ref(c.value("S", json()), "classical context '" + name + "'");
        BimodulePtr N = bimodule_ref(c.value("N", json()), "classical context '" + name + "'");
        BimodulePtr L = bimodule_ref(c.value("L", json()), "classical context '" + name + "'");
        std::vector<Scalar> zeta(N->dim * L->dim * R->dim, Scalar::zero(f));
        std::vector<Scalar> theta(L->dim * N->dim * S->dim, Scalar::zero(f));
        read_triples(f, c.value("zeta", json::array()), zeta, N->dim, L->dim, R->dim,
                     "classical context '" + name + "' zeta");
        read_triples(f, c.value("theta", json::array()), theta, L->dim, N->dim, S->dim,
                     "classical context '" + name + "' theta");
        spec.classical.emplace(name, make_classical(R, S, N, L, std::move(zeta), std::move(theta),
                                                    name));
    }

    const json generalised_node = doc.value("generalised_contexts", json::object());
    for (const auto& [name, g] : generalised_node.items()) {
        if (!g.contains("n") || !g["n"].is_number_unsigned())
            parse_fail("generalised context '" + name + "' needs an unsigned 'n'");
        const std::size_t n = g["n"].get<std::size_t>();
        if (!g.contains("algebras") || !g["algebras"].is_array() || g["algebras"].size() != n)
            parse_fail("generalised context '" + name + "' needs " + std::to_string(n) +
                       " algebra names");
        std::vector<AlgebraPtr> algebras;
        for (const json& v : g["algebras"])
            algebras.push_back(algebra_ref(v, "generalised context '" + name + "'"));
        std::vector<std::vector<BimodulePtr>> off(n, std::vector<BimodulePtr>(n));
        const json blocks_node = g.value("blocks", json::object());
        for (const auto& [key, v] : blocks_node.items()) {
            std::size_t i = 0, j = 0;
            if (std::sscanf(key.c_str(), "%zu,%zu", &i, &j) != 2 || i < 1 || j < 1 || i > n || j > n)
                parse_fail("generalised context '" + name + "': bad block key '" + key + "'");
            if (i == j)
                throw MalformedInput("generalised context '" + name +
                                     "': diagonal blocks may not be supplied (they are the "
                                     "regular bimodules)");
            off[i - 1][j - 1] = bimodule_ref(v, "generalised context '" + name + "'");
        }
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                if (i != j && !off[i][j]) off[i][j] = zero_bimodule(algebras[i], algebras[j]);
        GeneralisedContext ctx = make_context_frame(std::move(algebras), std::move(off), name);
        const json maps_node = g.value("maps", json::object());
        for (const auto& [key, v] : maps_node.items()) {
            std::size_t i = 0, k = 0, j = 0;
            if (std::sscanf(key.c_str(), "%zu,%zu,%zu", &i, &k, &j) != 3 || i < 1 || k < 1 ||
                j < 1 || i > n || k > n || j > n)
                parse_fail("generalised context '" + name + "': bad map key '" + key + "'");
            if (k == i || k == j)
                throw MalformedInput("generalised context '" + name + "': map " + key +
                                     " is a forced unit map and may not be supplied");
            BilinearBlockMap& phi = ctx.maps[i - 1][k - 1][j - 1];
            read_triples(f, v, phi.tensor, phi.left_factor->dim, phi.right_factor->dim,
                         phi.codomain->dim, "generalised context '" + name + "' map " + key);
        }
        spec.generalised[name] = std::make_shared<GeneralisedContext>(std::move(ctx));
    }
    return spec;
}

SpecFile load_spec_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open spec file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_spec(buf.str());
}

std::string serialize_spec(const SpecFile& spec) {
    json doc;
    doc["version"] = spec.version;
    if (spec.field.kind == FieldKind::Rationals)
        doc["field"] = json{{"kind", "rationals"}};
    else
        doc["field"] = json{{"kind", "prime"}, {"p", spec.field.p}};

    json algebras = json::object();
    for (const auto& [name, a] : spec.algebras) {
        json entry;
        entry["dim"] = a->dim;
        entry["mul"] = triples_of(spec.field, a->mul, a->dim, a->dim, a->dim);
        json idem = json::array();
        for (const Vec& e : a->idempotents) idem.push_back(vector_of(e));
        entry["idempotents"] = idem;
        if (a->identity) entry["identity"] = vector_of(*a->identity);
        algebras[name] = entry;
    }
    doc["algebras"] = algebras;

    json bimodules = json::object();
    for (const auto& [name, m] : spec.bimodules) {
        json entry;
        entry["left"] = name_of(spec.algebras, m->left.get(), "left algebra of '" + name + "'");
        entry["right"] = name_of(spec.algebras, m->right.get(), "right algebra of '" + name + "'");
        entry["dim"] = m->dim;
        entry["left_action"] = triples_of(spec.field, m->left_action, m->left->dim, m->dim, m->dim);
        entry["right_action"] =
            triples_of(spec.field, m->right_action, m->dim, m->right->dim, m->dim);
        bimodules[name] = entry;
    }
    doc["bimodules"] = bimodules;

    json classical = json::object();
    for (const auto& [name, c] : spec.classical) {
        json entry;
        entry["R"] = name_of(spec.algebras, c.R.get(), "R of '" + name + "'");
        entry["S"] = name_of(spec.algebras, c.S.get(), "S of '" + name + "'");
        entry["N"] = name_of(spec.bimodules, c.N.get(), "N of '" + name + "'");
        entry["L"] = name_of(spec.bimodules, c.L.get(), "L of '" + name + "'");
        entry["zeta"] = triples_of(spec.field, c.zeta.tensor, c.N->dim, c.L->dim, c.R->dim);
        entry["theta"] = triples_of(spec.field, c.theta.tensor, c.L->dim, c.N->dim, c.S->dim);
        classical[name] = entry;
    }
    doc["classical_contexts"] = classical;

    json generalised = json::object();
    for (const auto& [name, g] : spec.generalised) {
        json entry;
        const std::size_t n = g->n();
        entry["n"] = n;
        json names = json::array();
        for (const auto& a : g->algebras)
            names.push_back(name_of(spec.algebras, a.get(), "algebra of '" + name + "'"));
        entry["algebras"] = names;
        json blocks = json::object();
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                if (i == j) continue;
                blocks[idx1(i) + "," + idx1(j)] = name_of(
                    spec.bimodules, g->blocks[i][j].get(), "block of '" + name + "'");
            }
        entry["blocks"] = blocks;
        json maps = json::object();
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t k = 0; k < n; ++k)
                for (std::size_t j = 0; j < n; ++j) {
                    if (k == i || k == j) continue;
                    const BilinearBlockMap& phi = g->phi(i, k, j);
                    json arr = triples_of(spec.field, phi.tensor, phi.left_factor->dim,
                                          phi.right_factor->dim, phi.codomain->dim);
                    if (!arr.empty()) maps[idx1(i) + "," + idx1(k) + "," + idx1(j)] = arr;
                }
        entry["maps"] = maps;
        generalised[name] = entry;
    }
    doc["generalised_contexts"] = generalised;
    return doc.dump(2) + "\n";
}

void save_spec_file(const SpecFile& spec, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw MoritaError("cannot write spec file '" + path + "'");
    out << serialize_spec(spec);
}

void register_context(SpecFile& spec, const ContextPtr& g, const std::string& base) {
    const std::size_t n = g->n();
    for (std::size_t i = 0; i < n; ++i) spec.algebras[base + ".A" + idx1(i)] = g->algebras[i];
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j) continue;
            spec.bimodules[base + ".M" + idx1(i) + idx1(j)] = g->blocks[i][j];
        }
    spec.generalised[base] = g;
}

void register_classical(SpecFile& spec, const ClassicalContext& c, const std::string& base) {
    spec.algebras[base + ".R"] = c.R;
    spec.algebras[base + ".S"] = c.S;
    spec.bimodules[base + ".N"] = c.N;
    spec.bimodules[base + ".L"] = c.L;
    spec.classical.emplace(base, c);
}

json report_to_json(const VerificationReport& report) {
    json out;
    out["pass"] = report.passed();
    json sections = json::array();
    for (const auto& s : report.sections) {
        json sec;
        sec["name"] = s.name;
        sec["checks"] = s.checks;
        sec["failures"] = s.failures;
        sec["witnesses"] = s.witnesses;
        sections.push_back(sec);
    }
    out["sections"] = sections;
    out["facts"] = report.facts;
    return out;
}

json certificate_to_json(const EquivalenceCertificate& cert) {
    json out;
    out["granted"] = cert.granted;
    out["conclusion"] = cert.conclusion;
    out["failed_conditions"] = cert.failed_conditions;
    out["evidence"] = cert.evidence;
    return out;
}

}  // namespace morita

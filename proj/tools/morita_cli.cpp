// Command-line front end: load spec files, run verification and the corner
// replacement pipeline, emit deterministic reports and certificates.
//
// Exit codes: 0 pass, 1 verification failure or refused certificate, 2 input
// error. Indices on the command line and in files are 1-based.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

#include "morita/gallery.hpp"
#include "morita/json_io.hpp"

using namespace morita;
using nlohmann::json;

namespace {

int write_json_out(const std::string& path, const json& doc) {
    if (path.empty()) return 0;
    std::ofstream out(path);
    if (!out) {
        std::cerr << "error: cannot write " << path << "\n";
        return 2;
    }
    out << doc.dump(2) << "\n";
    return 0;
}

json command_echo(const std::string& name, const std::vector<std::pair<std::string, std::string>>& args) {
    json cmd;
    cmd["command"] = name;
    for (const auto& [k, v] : args) cmd[k] = v;
    return cmd;
}

struct NamedObject {
    enum Kind { AlgebraKind, BimoduleKind, ClassicalKind, GeneralisedKind } kind;
};

int run_verify(const SpecFile& spec, const std::string& name, const std::string& json_out) {
    VerificationReport report;
    std::string kind;
    if (auto it = spec.algebras.find(name); it != spec.algebras.end()) {
        kind = "algebra";
        report = verify_algebra(*it->second);
    } else if (auto it = spec.bimodules.find(name); it != spec.bimodules.end()) {
        kind = "bimodule";
        report = verify_bimodule(*it->second);
    } else if (auto it = spec.classical.find(name); it != spec.classical.end()) {
        kind = "classical context";
        report = verify_classical_context(it->second);
    } else if (auto it = spec.generalised.find(name); it != spec.generalised.end()) {
        kind = "generalised context";
        report = verify_generalised_context(*it->second);
    } else {
        throw UnresolvedReference("no object named '" + name + "' in the spec file");
    }
    std::cout << kind << " '" << name << "': " << (report.passed() ? "PASS" : "FAIL") << "\n";
    std::cout << report.summary();
    json doc = report_to_json(report);
    doc["object"] = name;
    doc["kind"] = kind;
    int rc = write_json_out(json_out, doc);
    if (rc) return rc;
    return report.passed() ? 0 : 1;
}

const ContextPtr& get_context(const SpecFile& spec, const std::string& name) {
    auto it = spec.generalised.find(name);
    if (it == spec.generalised.end())
        throw UnresolvedReference("no generalised context named '" + name + "'");
    return it->second;
}

const ClassicalContext& get_classical(const SpecFile& spec, const std::string& name) {
    auto it = spec.classical.find(name);
    if (it == spec.classical.end())
        throw UnresolvedReference("no classical context named '" + name + "'");
    return it->second;
}

json dim_table(const GeneralisedContext& g) {
    json rows = json::array();
    std::size_t total = 0;
    for (std::size_t i = 0; i < g.n(); ++i) {
        json row = json::array();
        for (std::size_t j = 0; j < g.n(); ++j) {
            row.push_back(g.blocks[i][j]->dim);
            total += g.blocks[i][j]->dim;
        }
        rows.push_back(row);
    }
    return json{{"blocks", rows}, {"total", total}};
}

json excision_table(const MatrixBimodule& t) {
    json rows = json::array();
    for (std::size_t i = 0; i < t.blocks.size(); ++i) {
        json row = json::array();
        for (std::size_t j = 0; j < t.blocks.size(); ++j) row.push_back(t.blocks[i][j]->dim);
        rows.push_back(row);
    }
    return rows;
}

void print_dim_table(const std::string& label, const json& table) {
    std::cout << label << " (total " << table["total"] << "):";
    for (const auto& row : table["blocks"]) std::cout << " " << row.dump();
    std::cout << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact Morita-context calculator: verification, matrix rings, corner replacement"};
    app.require_subcommand(1);

    std::string spec_path, json_out;
    app.add_option("--spec", spec_path, "input spec file (JSON)")->expected(1);
    app.add_option("--json-out", json_out, "write the machine-readable report here")->expected(1);

    // verify
    std::string verify_name;
    CLI::App* cmd_verify = app.add_subcommand("verify", "verify a named object's axioms");
    cmd_verify->add_option("name", verify_name, "object to verify")->required();

    // matrix-ring
    std::string mr_name;
    CLI::App* cmd_mr = app.add_subcommand("matrix-ring", "assemble the generalised matrix ring");
    cmd_mr->add_option("context", mr_name, "generalised context name")->required();

    // compose / excise / ligate / corner-replace / certify share these
    std::string ctx_name, cls_name;
    std::size_t t_index = 1;
    bool certify_flag = false;
    auto add_surgery_opts = [&](CLI::App* cmd, bool with_certify) {
        cmd->add_option("--context", ctx_name, "generalised context name")->required();
        cmd->add_option("--classical", cls_name, "classical context name")->required();
        cmd->add_option("--t", t_index, "corner index (1-based)")->required();
        if (with_certify) cmd->add_flag("--certify", certify_flag, "also decide the certificate");
    };
    CLI::App* cmd_compose = app.add_subcommand("compose", "compose the classical context into the corner");
    add_surgery_opts(cmd_compose, false);
    CLI::App* cmd_excise = app.add_subcommand("excise", "column and row excision dimension tables");
    add_surgery_opts(cmd_excise, false);
    CLI::App* cmd_ligate = app.add_subcommand("ligate", "build both ligations and report surjectivity ranks");
    add_surgery_opts(cmd_ligate, false);
    CLI::App* cmd_replace = app.add_subcommand("corner-replace", "full corner replacement with verification");
    add_surgery_opts(cmd_replace, true);
    CLI::App* cmd_certify = app.add_subcommand("certify", "corner replacement plus certificate decision");
    add_surgery_opts(cmd_certify, false);

    // gallery
    std::string gallery_name;
    std::uint64_t gallery_p = 5;
    int gallery_sign = -1;
    std::size_t gallery_k = 3, gallery_split = 1;
    CLI::App* cmd_gallery = app.add_subcommand("gallery", "run a worked instance and compare tables");
    cmd_gallery->add_option("name", gallery_name, "triangular | prospecies | clannish | enough-idempotents")
        ->required();
    cmd_gallery->add_option("--p", gallery_p, "prime for the clannish instance (default 5)");
    cmd_gallery->add_option("--sign", gallery_sign, "sign of w for the clannish instance (+1 or -1)");
    cmd_gallery->add_option("--k", gallery_k, "matrix size for enough-idempotents (default 3)");
    cmd_gallery->add_option("--split", gallery_split,
                            "idempotents in the plus group for enough-idempotents (default 1)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (cmd_gallery->parsed()) {
            GalleryInstance inst;
            const FieldSpec f5 = prime_field(5);
            if (gallery_name == "triangular") {
                inst = triangular_instance(f5);
            } else if (gallery_name == "prospecies") {
                inst = prospecies_instance(f5);
            } else if (gallery_name == "clannish") {
                inst = clannish_instance(gallery_p, gallery_sign >= 0 ? 1 : -1);
            } else if (gallery_name == "enough-idempotents") {
                auto a = std::make_shared<Algebra>(matrix_algebra(f5, gallery_k));
                if (gallery_split == 0 || gallery_split >= gallery_k)
                    throw IncompletePartition("--split must leave both sides nonempty");
                std::vector<bool> coloring(gallery_k, false);
                for (std::size_t i = 0; i < gallery_split; ++i) coloring[i] = true;
                inst = enough_idempotents_instance(a, coloring);
                if (gallery_k == 3 && gallery_split == 1) {
                    inst.expected.emplace_back("partition dim[1][1]", "1");
                    inst.expected.emplace_back("partition dim[1][2]", "2");
                    inst.expected.emplace_back("partition dim[2][1]", "2");
                    inst.expected.emplace_back("partition dim[2][2]", "4");
                    inst.expected.emplace_back("partition ring dim", "9");
                }
            } else {
                std::cerr << "error: unknown gallery instance '" << gallery_name << "'\n";
                return 2;
            }
            std::cout << inst.table();
            std::cout << (inst.passed() ? "PASS" : "FAIL") << "\n";
            json doc;
            doc["command"] = command_echo("gallery", {{"name", gallery_name}});
            doc["pass"] = inst.passed();
            json exp = json::object(), act = json::object();
            for (const auto& [k, v] : inst.expected) exp[k] = v;
            for (const auto& [k, v] : inst.actual) act[k] = v;
            doc["expected"] = exp;
            doc["actual"] = act;
            doc["report"] = report_to_json(inst.report);
            doc["certificate_granted"] = inst.certificate_granted;
            int rc = write_json_out(json_out, doc);
            if (rc) return rc;
            return inst.passed() ? 0 : 1;
        }

        if (spec_path.empty()) {
            std::cerr << "error: --spec is required\n";
            return 2;
        }
        SpecFile spec = load_spec_file(spec_path);

        if (cmd_verify->parsed()) return run_verify(spec, verify_name, json_out);

        if (cmd_mr->parsed()) {
            const ContextPtr& g = get_context(spec, mr_name);
            VerificationReport rep = verify_generalised_context(*g);
            json doc;
            doc["command"] = command_echo("matrix-ring", {{"context", mr_name}});
            doc["context report"] = report_to_json(rep);
            if (!rep.passed()) {
                std::cout << "context '" << mr_name << "' fails verification\n" << rep.summary();
                write_json_out(json_out, doc);
                return 1;
            }
            MatrixRing ring = matrix_ring(g, Checked::no);
            VerificationReport ring_rep = verify_algebra(*ring.ring);
            doc["ring report"] = report_to_json(ring_rep);
            doc["dimension table"] = dim_table(*g);
            print_dim_table("matrix ring " + mr_name, doc["dimension table"]);
            std::cout << "ring axioms: " << (ring_rep.passed() ? "PASS" : "FAIL") << "\n";
            int rc = write_json_out(json_out, doc);
            if (rc) return rc;
            return ring_rep.passed() ? 0 : 1;
        }

        // all remaining commands share (g, c, t)
        const ContextPtr& g = get_context(spec, ctx_name);
        const ClassicalContext& c = get_classical(spec, cls_name);
        if (t_index < 1 || t_index > g->n()) {
            std::cerr << "error: --t must be in [1, " << g->n() << "]\n";
            return 2;
        }
        const std::size_t t = t_index - 1;

        if (cmd_compose->parsed()) {
            ContextPtr composed = compose(c, g, t);
            VerificationReport rep = verify_generalised_context(*composed);
            SpecFile out_spec;
            out_spec.field = spec.field;
            register_context(out_spec, composed, ctx_name + "_composed");
            json doc;
            doc["command"] = command_echo(
                "compose", {{"context", ctx_name}, {"classical", cls_name}, {"t", std::to_string(t_index)}});
            doc["composed"] = json::parse(serialize_spec(out_spec));
            doc["dimension table"] = dim_table(*composed);
            doc["report"] = report_to_json(rep);
            print_dim_table("composed context", doc["dimension table"]);
            std::cout << (rep.passed() ? "PASS" : "FAIL") << "\n";
            int rc = write_json_out(json_out, doc);
            if (rc) return rc;
            return rep.passed() ? 0 : 1;
        }

        if (cmd_excise->parsed()) {
            MatrixBimodule nm = column_excision(g, c, t);
            MatrixBimodule lm = row_excision(g, c, t);
            VerificationReport nrep = verify_matrix_bimodule(nm);
            VerificationReport lrep = verify_matrix_bimodule(lm);
            json doc;
            doc["command"] = command_echo(
                "excise", {{"context", ctx_name}, {"classical", cls_name}, {"t", std::to_string(t_index)}});
            doc["column excision"] = excision_table(nm);
            doc["row excision"] = excision_table(lm);
            doc["column report"] = report_to_json(nrep);
            doc["row report"] = report_to_json(lrep);
            std::cout << "column excision: " << doc["column excision"].dump() << "\n";
            std::cout << "row excision:    " << doc["row excision"].dump() << "\n";
            bool pass = nrep.passed() && lrep.passed();
            std::cout << (pass ? "PASS" : "FAIL") << "\n";
            int rc = write_json_out(json_out, doc);
            if (rc) return rc;
            return pass ? 0 : 1;
        }

        if (cmd_ligate->parsed() || cmd_replace->parsed() || cmd_certify->parsed()) {
            SurgeryResult res = corner_replace(g, c, t);
            json doc;
            doc["command"] = command_echo(
                cmd_ligate->parsed() ? "ligate" : (cmd_certify->parsed() ? "certify" : "corner-replace"),
                {{"context", ctx_name}, {"classical", cls_name}, {"t", std::to_string(t_index)}});
            doc["original table"] = dim_table(*res.original);
            doc["composed table"] = dim_table(*res.composed);
            doc["column excision"] = excision_table(res.column);
            doc["row excision"] = excision_table(res.row);
            SpecFile out_spec;
            out_spec.field = spec.field;
            register_context(out_spec, res.composed, ctx_name + "_composed");
            doc["composed"] = json::parse(serialize_spec(out_spec));
            doc["report"] = report_to_json(res.report);
            doc["rank |alpha|"] = rank(res.alpha_factored);
            doc["rank |alpha'|"] = rank(res.alpha_prime_factored);

            print_dim_table("original ring", doc["original table"]);
            print_dim_table("composed ring", doc["composed table"]);
            std::cout << "|alpha| rank " << doc["rank |alpha|"] << " of "
                      << res.ring_original.ring->dim << ", |alpha'| rank " << doc["rank |alpha'|"]
                      << " of " << res.ring_composed.ring->dim << "\n";
            std::cout << "verification: " << (res.report.passed() ? "PASS" : "FAIL") << "\n";
            if (!res.report.passed()) std::cout << res.report.summary();

            bool pass = res.report.passed();
            if (cmd_certify->parsed() || certify_flag) {
                EquivalenceCertificate cert = certify_equivalence(res);
                doc["certificate"] = certificate_to_json(cert);
                std::cout << cert.conclusion << "\n";
                for (const auto& [k, v] : cert.evidence) std::cout << "  " << k << ": " << v << "\n";
                pass = pass && cert.granted;
            }
            int rc = write_json_out(json_out, doc);
            if (rc) return rc;
            return pass ? 0 : 1;
        }
        std::cerr << "error: no subcommand\n";
        return 2;
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return 2;
    } catch (const UnresolvedReference& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const MoritaError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}

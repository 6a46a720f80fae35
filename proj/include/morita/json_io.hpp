#pragma once

#include <map>
#include <string>

#include <nlohmann/json.hpp>

#include "morita/report.hpp"
#include "morita/surgery.hpp"

namespace morita {

/// An on-disk bundle of named objects. All indices in the file format are
/// 1-based; scalars are decimal strings ("3/7" over Q, "3" over F_p, residues
/// normalized into [0, p)). Serialization is canonical: sorted names, sparse
/// triples in lex order, so parse . serialize is the identity on bytes.
struct SpecFile {
    std::string version = "1";
    FieldSpec field;
    std::map<std::string, AlgebraPtr> algebras;
    std::map<std::string, BimodulePtr> bimodules;
    std::map<std::string, ClassicalContext> classical;
    std::map<std::string, ContextPtr> generalised;
};

SpecFile parse_spec(const std::string& text);
SpecFile load_spec_file(const std::string& path);
std::string serialize_spec(const SpecFile& spec);
void save_spec_file(const SpecFile& spec, const std::string& path);

/// Registers a context and everything it references under derived names
/// (base, base.A1, base.M12, ...), for re-serializing computed contexts.
void register_context(SpecFile& spec, const ContextPtr& g, const std::string& base);
void register_classical(SpecFile& spec, const ClassicalContext& c, const std::string& base);

nlohmann::json report_to_json(const VerificationReport& report);
nlohmann::json certificate_to_json(const EquivalenceCertificate& cert);

}  // namespace morita

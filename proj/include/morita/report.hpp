#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

namespace morita {

/// Exhaustive (not fail-fast) verification results. Witnesses are capped at
/// witness_cap per section; `failures` keeps the true count.
struct ReportSection {
    static constexpr std::size_t witness_cap = 100;

    ReportSection() = default;
    explicit ReportSection(std::string n) : name(std::move(n)) {}

    std::string name;
    std::size_t checks = 0;
    std::size_t failures = 0;
    std::vector<std::string> witnesses;

    void fail(std::string witness) {
        ++failures;
        if (witnesses.size() < witness_cap) witnesses.push_back(std::move(witness));
    }
    bool passed() const { return failures == 0; }
};

struct VerificationReport {
    std::vector<ReportSection> sections;
    std::map<std::string, std::string> facts;

    ReportSection& section(const std::string& name) {
        for (auto& s : sections)
            if (s.name == name) return s;
        sections.push_back(ReportSection{name});
        return sections.back();
    }

    bool passed() const {
        for (const auto& s : sections)
            if (!s.passed()) return false;
        return true;
    }

    std::size_t total_failures() const {
        std::size_t n = 0;
        for (const auto& s : sections) n += s.failures;
        return n;
    }

    /// Merge another report in, prefixing its section and fact names.
    void absorb(const VerificationReport& sub, const std::string& prefix) {
        for (const auto& s : sub.sections) {
            ReportSection& mine = section(prefix.empty() ? s.name : prefix + ": " + s.name);
            mine.checks += s.checks;
            mine.failures += s.failures;
            for (const auto& w : s.witnesses) {
                if (mine.witnesses.size() >= ReportSection::witness_cap) break;
                mine.witnesses.push_back(w);
            }
        }
        for (const auto& [k, v] : sub.facts) facts[prefix.empty() ? k : prefix + ": " + k] = v;
    }

    std::string summary() const {
        std::string out;
        for (const auto& s : sections) {
            out += s.name + ": " + (s.passed() ? "ok" : "FAILED (" + std::to_string(s.failures) + ")") +
                   " [" + std::to_string(s.checks) + " checks]\n";
            for (const auto& w : s.witnesses) out += "  witness " + w + "\n";
        }
        return out;
    }
};

}  // namespace morita

#include "morita/parallel.hpp"

#include <algorithm>
#include <cstdlib>
#include <thread>
#include <vector>

namespace morita {

std::size_t thread_budget() {
    std::size_t hw = std::max<std::size_t>(1, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("MORITA_THREADS")) {
        char* end = nullptr;
        unsigned long v = std::strtoul(env, &end, 10);
        if (end && *end == '\0' && v >= 1) return std::min<std::size_t>(v, hw);
    }
    return hw;
}

void parallel_sweep(std::size_t count, ReportSection& section,
                    const std::function<void(std::size_t, ReportSection&)>& body) {
    const std::size_t workers = std::min(thread_budget(), std::max<std::size_t>(1, count));
    if (workers <= 1 || count < 64) {
        for (std::size_t i = 0; i < count; ++i) body(i, section);
        return;
    }
    std::vector<ReportSection> locals(workers);
    std::vector<std::thread> threads;
    const std::size_t chunk = (count + workers - 1) / workers;
    for (std::size_t w = 0; w < workers; ++w) {
        const std::size_t lo = w * chunk;
        const std::size_t hi = std::min(count, lo + chunk);
        threads.emplace_back([&, lo, hi, w]() {
            for (std::size_t i = lo; i < hi; ++i) body(i, locals[w]);
        });
    }
    for (auto& t : threads) t.join();
    for (const auto& local : locals) {
        section.checks += local.checks;
        section.failures += local.failures;
        for (const auto& witness : local.witnesses) {
            if (section.witnesses.size() >= ReportSection::witness_cap) break;
            section.witnesses.push_back(witness);
        }
    }
}

}  // namespace morita

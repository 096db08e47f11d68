// Minimal end-to-end use of the library: parse a vote log, compute
// reputations, print them next to the normal-average baseline.

#include <cstdio>
#include <fstream>
#include <iostream>

#include "crowdrep/crowdrep.hpp"

int main(int argc, char** argv) {
    const char* path = argc > 1 ? argv[1] : "election_votes.tsv";
    std::ifstream in(path);
    if (!in) {
        std::cerr << "cannot open " << path << '\n';
        return 2;
    }

    crowdrep::EngineConfig config; // M = 3, t = 2 intervals, half-year intervals
    crowdrep::IntervalScheme scheme{std::nullopt, config.interval_width};
    auto parsed = crowdrep::parse_wikilog(in, scheme);
    auto graph = crowdrep::build_graph(parsed.evaluations);
    auto result = crowdrep::compute_all(graph, config);

    std::cout << "worker        rho      weight   normal_avg\n";
    for (const auto& w : result.workers)
        std::printf("%-12s %7.4f %10.4f %10.4f\n", w.worker.c_str(), w.rho, w.weight,
                    crowdrep::normal_average(graph, w.worker));
    std::cout << "\nevaluator     gamma    weight\n";
    for (const auto& e : result.evaluators)
        std::printf("%-12s %7.4f %10.4f\n", e.evaluator.c_str(), e.gamma, e.weight);
}

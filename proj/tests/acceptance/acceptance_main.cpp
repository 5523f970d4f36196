#include <cstdlib>
#include <iostream>
#include <vector>

#include "CLI11.hpp"
#include "smc/acceptance/criteria.hpp"

int main(int argc, char** argv)
{
    CLI::App app{"Runs the acceptance criteria and prints one line per criterion."};
    std::vector<int> only;
    std::uint64_t seed = smc::acceptance::kDefaultSeed;
    app.add_option("--only", only, "criterion ids to run (default: all)");
    app.add_option("--seed", seed, "base seed");
    CLI11_PARSE(app, argc, argv);

    if (only.empty())
        for (const auto& c : smc::acceptance::criteria()) only.push_back(c.id);

    bool all_ok = true;
    for (int id : only) {
        const auto result = smc::acceptance::run(id, seed);
        std::cout << smc::acceptance::format_line(result) << std::endl;
        all_ok = all_ok && result.ok();
    }
    return all_ok ? EXIT_SUCCESS : EXIT_FAILURE;
}

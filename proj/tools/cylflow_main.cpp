#include <iostream>
#include <string>
#include <vector>

#include "cylflow/io.hpp"

namespace {

int usage() {
    std::cerr << "usage:\n"
              << "  cylflow run <config.cfg>\n"
              << "  cylflow check <run_dir>\n"
              << "  cylflow report <run_dir> [<run_dir> ...]\n";
    return 2;
}

}  // namespace

int main(int argc, char** argv) {
    if (argc < 2) return usage();
    const std::string cmd = argv[1];
    try {
        if (cmd == "run") {
            if (argc != 3) return usage();
            return cylflow::cmd_run(argv[2]);
        }
        if (cmd == "check") {
            if (argc != 3) return usage();
            return cylflow::cmd_check(argv[2]);
        }
        if (cmd == "report") {
            if (argc < 3) return usage();
            std::vector<std::string> dirs(argv + 2, argv + argc);
            return cylflow::cmd_report(dirs);
        }
    } catch (const cylflow::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const cylflow::NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return usage();
}

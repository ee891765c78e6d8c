#include <exception>
#include <iostream>

#include <CLI11.hpp>

#include "commands.hpp"
#include "speclab/errors.hpp"

int main(int argc, char** argv) {
    CLI::App app{"speclab: outlier eigenvalues of perturbed random matrices"};
    app.require_subcommand(1);

    int exit_code = 0;
    speclab::cli::register_spectrum(app, exit_code);
    speclab::cli::register_verify(app, exit_code);
    speclab::cli::register_limit_sample(app, exit_code);
    speclab::cli::register_oracle(app, exit_code);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;  // usage errors are exit 2, --help stays 0
    } catch (const speclab::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const speclab::ResourceError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return exit_code;
}

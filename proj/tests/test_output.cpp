#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <sstream>
#include <string>
#include <vector>

#include "speclab/errors.hpp"
#include "speclab/output.hpp"

using namespace speclab;
using cd = std::complex<double>;

namespace {

size_t count_occurrences(const std::string& text, const std::string& needle) {
    size_t count = 0;
    for (size_t pos = text.find(needle); pos != std::string::npos;
         pos = text.find(needle, pos + needle.size()))
        ++count;
    return count;
}

}  // namespace

TEST_CASE("eigenvalue csv round trips bit-exactly") {
    const std::vector<EigenvalueRow> rows = {
        {12345678901234567890ull, cd(1.0 / 3.0, -2.0 / 7.0), "outlier"},
        {42, cd(1e-17, 1e300), "bulk"},
        {0, cd(-0.0, 0.5), "bulk"},
        {7, cd(2.5, 0), "outlier"},
    };
    std::ostringstream os;
    write_eigenvalue_csv(os, rows);
    const std::string text = os.str();
    CHECK(text.rfind("trial_seed,re,im,modulus,classification\n", 0) == 0);

    std::istringstream is(text);
    const std::vector<EigenvalueRow> back = read_eigenvalue_csv(is);
    REQUIRE(back.size() == rows.size());
    for (size_t i = 0; i < rows.size(); ++i) {
        CHECK(back[i].trial_seed == rows[i].trial_seed);
        CHECK(back[i].value.real() == rows[i].value.real());
        CHECK(back[i].value.imag() == rows[i].value.imag());
        CHECK(back[i].classification == rows[i].classification);
    }

    // The modulus column is consistent with the value columns.
    std::istringstream lines(text);
    std::string line;
    std::getline(lines, line);  // header
    std::getline(lines, line);
    const size_t c1 = line.find(',');
    const size_t c2 = line.find(',', c1 + 1);
    const size_t c3 = line.find(',', c2 + 1);
    const size_t c4 = line.find(',', c3 + 1);
    const double modulus = std::stod(line.substr(c3 + 1, c4 - c3 - 1));
    CHECK(modulus == doctest::Approx(std::abs(rows[0].value)).epsilon(1e-15));
}

TEST_CASE("csv reader rejects malformed input") {
    {
        std::istringstream is("wrong,header\n1,2,3,4,bulk\n");
        CHECK_THROWS_AS(read_eigenvalue_csv(is), ValidationError);
    }
    {
        std::istringstream is("trial_seed,re,im,modulus,classification\n1,2,3,bulk\n");
        CHECK_THROWS_AS(read_eigenvalue_csv(is), ValidationError);
    }
    {
        std::istringstream is("trial_seed,re,im,modulus,classification\n1,abc,3,4,bulk\n");
        CHECK_THROWS_AS(read_eigenvalue_csv(is), ValidationError);
    }
    {
        std::istringstream is("");
        CHECK_THROWS_AS(read_eigenvalue_csv(is), ValidationError);
    }
    {
        std::istringstream is("trial_seed,re,im,modulus,classification\n");
        CHECK(read_eigenvalue_csv(is).empty());
    }
}

TEST_CASE("spectrum svg draws every eigenvalue and prediction") {
    const std::vector<cd> eig = {cd(2, 0), cd(0.5, 0.5), cd(-0.3, -0.1)};
    const std::vector<cd> predicted = {cd(2, 0), cd(0, 1.6)};
    std::ostringstream os;
    write_spectrum_svg(os, eig, 1.0, predicted);
    const std::string svg = os.str();

    CHECK(svg.rfind("<svg", 0) == 0);
    CHECK(svg.find("</svg>") != std::string::npos);
    // One dot per eigenvalue plus the dashed bulk circle.
    CHECK(count_occurrences(svg, "<circle") == eig.size() + 1);
    CHECK(count_occurrences(svg, "stroke-dasharray") == 1);
    // Two stroke lines per predicted cross plus the two axes.
    CHECK(count_occurrences(svg, "<line") == 2 * predicted.size() + 2);
}

TEST_CASE("limit surface svg marks the zeros") {
    const auto q = [](cd z) { return z - cd(0.25, 0); };
    std::ostringstream os;
    write_limit_surface_svg(os, q, 0.9, {cd(0.25, 0)});
    const std::string svg = os.str();
    CHECK(svg.rfind("<svg", 0) == 0);
    CHECK(svg.find("</svg>") != std::string::npos);
    CHECK(svg.find("<path") != std::string::npos);
    CHECK(count_occurrences(svg, "</svg>") == 1);
}

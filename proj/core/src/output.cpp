#include "speclab/output.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include "speclab/errors.hpp"

namespace speclab {

namespace {

constexpr const char* kCsvHeader = "trial_seed,re,im,modulus,classification";

std::string num17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

std::string num2(double x) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", x);
    return buf;
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string current;
    for (char ch : line) {
        if (ch == ',') {
            fields.push_back(current);
            current.clear();
        } else {
            current.push_back(ch);
        }
    }
    fields.push_back(current);
    return fields;
}

struct Rgb {
    double r, g, b;
};

// Compact viridis-style ramp; t in [0, 1].
Rgb heat_color(double t) {
    static const Rgb stops[] = {
        {68, 1, 84}, {59, 82, 139}, {33, 145, 140}, {94, 201, 98}, {253, 231, 37}};
    t = std::clamp(t, 0.0, 1.0) * 4.0;
    const int i = std::min(3, static_cast<int>(t));
    const double f = t - i;
    return {stops[i].r + f * (stops[i + 1].r - stops[i].r),
            stops[i].g + f * (stops[i + 1].g - stops[i].g),
            stops[i].b + f * (stops[i + 1].b - stops[i].b)};
}

std::string rgb_string(const Rgb& c) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "rgb(%d,%d,%d)", static_cast<int>(std::lround(c.r)),
                  static_cast<int>(std::lround(c.g)), static_cast<int>(std::lround(c.b)));
    return buf;
}

}  // namespace

void write_eigenvalue_csv(std::ostream& os, const std::vector<EigenvalueRow>& rows) {
    os << kCsvHeader << "\n";
    for (const auto& row : rows) {
        os << row.trial_seed << ',' << num17(row.value.real()) << ',' << num17(row.value.imag())
           << ',' << num17(std::abs(row.value)) << ',' << row.classification << "\n";
    }
}

std::vector<EigenvalueRow> read_eigenvalue_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line)) throw ValidationError("empty eigenvalue CSV");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != kCsvHeader)
        throw ValidationError("unexpected eigenvalue CSV header: " + line);

    std::vector<EigenvalueRow> rows;
    size_t line_number = 1;
    while (std::getline(is, line)) {
        ++line_number;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto fields = split_csv_line(line);
        if (fields.size() != 5)
            throw ValidationError("eigenvalue CSV line " + std::to_string(line_number) +
                                  " has " + std::to_string(fields.size()) + " fields");
        EigenvalueRow row;
        try {
            size_t pos = 0;
            row.trial_seed = std::stoull(fields[0], &pos);
            if (pos != fields[0].size()) throw std::invalid_argument("trailing characters");
            row.value = {std::stod(fields[1]), std::stod(fields[2])};
            (void)std::stod(fields[3]);  // modulus column is derived; presence checked only
        } catch (const std::exception&) {
            throw ValidationError("unparseable number on eigenvalue CSV line " +
                                  std::to_string(line_number));
        }
        row.classification = fields[4];
        rows.push_back(std::move(row));
    }
    return rows;
}

void write_spectrum_svg(std::ostream& os, const std::vector<std::complex<double>>& eigenvalues,
                        double bulk_radius, const std::vector<std::complex<double>>& predicted) {
    double extent = std::max(1.0, bulk_radius);
    for (const auto& z : eigenvalues) extent = std::max(extent, std::abs(z));
    for (const auto& z : predicted) extent = std::max(extent, std::abs(z));
    extent *= 1.1;

    const double size = 640.0;
    const double scale = size / (2.0 * extent);
    auto px = [&](double re) { return num2(size / 2.0 + scale * re); };
    auto py = [&](double im) { return num2(size / 2.0 - scale * im); };

    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"640\" "
          "viewBox=\"0 0 640 640\">\n";
    os << "  <rect width=\"640\" height=\"640\" fill=\"#ffffff\"/>\n";
    os << "  <line x1=\"0\" y1=\"" << py(0.0) << "\" x2=\"640\" y2=\"" << py(0.0)
       << "\" stroke=\"#dddddd\"/>\n";
    os << "  <line x1=\"" << px(0.0) << "\" y1=\"0\" x2=\"" << px(0.0)
       << "\" y2=\"640\" stroke=\"#dddddd\"/>\n";
    os << "  <circle cx=\"" << px(0.0) << "\" cy=\"" << py(0.0) << "\" r=\""
       << num2(scale * bulk_radius)
       << "\" fill=\"none\" stroke=\"#4682b4\" stroke-dasharray=\"6 4\" stroke-width=\"1.5\"/>\n";
    for (const auto& z : eigenvalues) {
        os << "  <circle cx=\"" << px(z.real()) << "\" cy=\"" << py(z.imag())
           << "\" r=\"2\" fill=\"#333333\" fill-opacity=\"0.7\"/>\n";
    }
    for (const auto& z : predicted) {
        const double cx = size / 2.0 + scale * z.real();
        const double cy = size / 2.0 - scale * z.imag();
        const double arm = 6.0;
        os << "  <line x1=\"" << num2(cx - arm) << "\" y1=\"" << num2(cy - arm) << "\" x2=\""
           << num2(cx + arm) << "\" y2=\"" << num2(cy + arm)
           << "\" stroke=\"#d62728\" stroke-width=\"2\"/>\n";
        os << "  <line x1=\"" << num2(cx - arm) << "\" y1=\"" << num2(cy + arm) << "\" x2=\""
           << num2(cx + arm) << "\" y2=\"" << num2(cy - arm)
           << "\" stroke=\"#d62728\" stroke-width=\"2\"/>\n";
    }
    os << "</svg>\n";
}

void write_limit_surface_svg(std::ostream& os,
                             const std::function<std::complex<double>(std::complex<double>)>& q,
                             double radius, const std::vector<std::complex<double>>& zeros) {
    if (!(radius > 0)) throw ValidationError("surface plot needs a positive radius");
    const int rings = 48;
    const int sectors = 96;
    const double two_pi = 8.0 * std::atan(1.0);

    std::vector<double> log_abs(static_cast<size_t>(rings) * sectors);
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (int ri = 0; ri < rings; ++ri) {
        const double r = radius * (ri + 0.5) / rings;
        for (int si = 0; si < sectors; ++si) {
            const double th = two_pi * (si + 0.5) / sectors;
            const std::complex<double> z = std::polar(r, th);
            const double a = std::abs(q(z));
            const double la = std::log10(a + 1e-300);
            log_abs[static_cast<size_t>(ri) * sectors + si] = la;
            lo = std::min(lo, la);
            hi = std::max(hi, la);
        }
    }
    lo = std::max(lo, hi - 8.0);  // clamp the dynamic range near zeros
    if (!(hi > lo)) hi = lo + 1.0;

    const double size = 640.0;
    const double scale = size / (2.0 * radius) / 1.1;
    auto xc = [&](double re) { return size / 2.0 + scale * re; };
    auto yc = [&](double im) { return size / 2.0 - scale * im; };

    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"640\" "
          "viewBox=\"0 0 640 640\">\n";
    os << "  <rect width=\"640\" height=\"640\" fill=\"#ffffff\"/>\n";
    for (int ri = 0; ri < rings; ++ri) {
        const double r0 = radius * ri / rings;
        const double r1 = radius * (ri + 1) / rings;
        for (int si = 0; si < sectors; ++si) {
            const double th0 = two_pi * si / sectors;
            const double th1 = two_pi * (si + 1) / sectors;
            const double la = log_abs[static_cast<size_t>(ri) * sectors + si];
            const std::string fill =
                rgb_string(heat_color((std::clamp(la, lo, hi) - lo) / (hi - lo)));
            if (ri == 0) {
                // innermost ring: pie slice
                os << "  <path d=\"M " << num2(xc(0)) << ' ' << num2(yc(0)) << " L "
                   << num2(xc(r1 * std::cos(th0))) << ' ' << num2(yc(r1 * std::sin(th0))) << " A "
                   << num2(scale * r1) << ' ' << num2(scale * r1) << " 0 0 0 "
                   << num2(xc(r1 * std::cos(th1))) << ' ' << num2(yc(r1 * std::sin(th1)))
                   << " Z\" fill=\"" << fill << "\" stroke=\"" << fill
                   << "\" stroke-width=\"0.5\"/>\n";
            } else {
                os << "  <path d=\"M " << num2(xc(r0 * std::cos(th0))) << ' '
                   << num2(yc(r0 * std::sin(th0))) << " L " << num2(xc(r1 * std::cos(th0))) << ' '
                   << num2(yc(r1 * std::sin(th0))) << " A " << num2(scale * r1) << ' '
                   << num2(scale * r1) << " 0 0 0 " << num2(xc(r1 * std::cos(th1))) << ' '
                   << num2(yc(r1 * std::sin(th1))) << " L " << num2(xc(r0 * std::cos(th1))) << ' '
                   << num2(yc(r0 * std::sin(th1))) << " A " << num2(scale * r0) << ' '
                   << num2(scale * r0) << " 0 0 1 " << num2(xc(r0 * std::cos(th0))) << ' '
                   << num2(yc(r0 * std::sin(th0))) << " Z\" fill=\"" << fill << "\" stroke=\""
                   << fill << "\" stroke-width=\"0.5\"/>\n";
            }
        }
    }
    os << "  <circle cx=\"" << num2(xc(0)) << "\" cy=\"" << num2(yc(0)) << "\" r=\""
       << num2(scale * radius)
       << "\" fill=\"none\" stroke=\"#333333\" stroke-width=\"1.5\"/>\n";
    for (const auto& z : zeros) {
        os << "  <circle cx=\"" << num2(xc(z.real())) << "\" cy=\"" << num2(yc(z.imag()))
           << "\" r=\"5\" fill=\"#ffffff\" stroke=\"#000000\" stroke-width=\"1.5\"/>\n";
    }
    os << "</svg>\n";
}

}  // namespace speclab

#include "relaxlab/meridian_field.hpp"

#include <algorithm>
#include <cstdio>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <stdexcept>
#include <string>

#include <json.hpp>

namespace relaxlab {

namespace {

constexpr double endpoint_tol = 1e-12;

bool near_endpoint(double z, const std::vector<DefectInterval>& defects) {
    for (const auto& d : defects) {
        const double scale = std::max({1.0, std::abs(d.z_lo), std::abs(d.z_hi)});
        if (std::abs(z - d.z_lo) <= endpoint_tol * scale ||
            std::abs(z - d.z_hi) <= endpoint_tol * scale) {
            return true;
        }
    }
    return false;
}

}  // namespace

MeridianField::MeridianField(std::vector<double> r_grid, std::vector<double> z_grid,
                             std::vector<double> phi, int n, std::vector<DefectInterval> defects)
    : r_(std::move(r_grid)), z_(std::move(z_grid)), phi_(std::move(phi)), n_(n),
      defects_(std::move(defects)) {
    if (n_ < 1) throw std::invalid_argument("MeridianField: n must be >= 1");
    if (r_.size() < 2 || z_.size() < 2) {
        throw std::invalid_argument("MeridianField: need at least 2 nodes in r and z");
    }
    if (!(r_.front() > 0.0) || !strictly_increasing(r_) || !strictly_increasing(z_)) {
        throw std::invalid_argument("MeridianField: grids must be strictly increasing, r > 0");
    }
    if (phi_.size() != r_.size() * z_.size()) {
        throw std::invalid_argument("MeridianField: phi size must be nr * nz");
    }
    for (double v : phi_) {
        if (std::isnan(v)) throw std::invalid_argument("MeridianField: NaN in field");
        if (v < 0.0 || v > pi) throw std::invalid_argument("MeridianField: phi outside [0, pi]");
    }

    std::sort(defects_.begin(), defects_.end(),
              [](const DefectInterval& a, const DefectInterval& b) { return a.z_lo < b.z_lo; });
    const double zspan = std::max(1.0, std::abs(z_.front()) + std::abs(z_.back()));
    for (std::size_t i = 0; i < defects_.size(); ++i) {
        const auto& d = defects_[i];
        if (!(d.z_hi > d.z_lo)) throw std::invalid_argument("MeridianField: empty defect interval");
        if (d.z_lo < z_.front() - endpoint_tol * zspan || d.z_hi > z_.back() + endpoint_tol * zspan) {
            throw std::invalid_argument("MeridianField: defect interval outside the z-range");
        }
        if (i > 0 && d.z_lo < defects_[i - 1].z_hi) {
            throw std::invalid_argument("MeridianField: defect intervals overlap");
        }
    }

    // consistency of (u, L): the axis value may only switch poles at defect endpoints
    int parity = -1;
    for (std::size_t k = 0; k < z_.size(); ++k) {
        if (near_endpoint(z_[k], defects_)) continue;
        const bool south = at(0, k) > 0.5 * pi;
        const int p = (in_defect(z_[k]) != south) ? 1 : 0;
        if (parity < 0) {
            parity = p;
        } else if (p != parity) {
            throw std::invalid_argument(
                "MeridianField: axis values switch poles away from defect endpoints");
        }
    }
}

RadialProfile MeridianField::slice(std::size_t k) const {
    if (k >= z_.size()) throw std::out_of_range("MeridianField::slice");
    const auto first = phi_.begin() + static_cast<std::ptrdiff_t>(k * r_.size());
    return RadialProfile(r_, std::vector<double>(first, first + static_cast<std::ptrdiff_t>(r_.size())),
                         n_);
}

std::size_t MeridianField::z_index(double z) const {
    for (std::size_t k = 0; k < z_.size(); ++k) {
        if (std::abs(z_[k] - z) <= 1e-12 * std::max(1.0, std::abs(z))) return k;
    }
    throw std::invalid_argument("MeridianField: z = " + std::to_string(z) + " is not a grid line");
}

bool MeridianField::in_defect(double z) const {
    return std::any_of(defects_.begin(), defects_.end(),
                       [z](const DefectInterval& d) { return z >= d.z_lo && z <= d.z_hi; });
}

double MeridianField::defect_length() const {
    double len = 0.0;
    for (const auto& d : defects_) len += d.length();
    return len;
}

MeridianField extrude_profile(const RadialProfile& p, std::span<const double> z_grid,
                              std::vector<DefectInterval> defects) {
    std::vector<double> phi;
    phi.reserve(p.size() * z_grid.size());
    for (std::size_t k = 0; k < z_grid.size(); ++k) {
        phi.insert(phi.end(), p.phi().begin(), p.phi().end());
    }
    return MeridianField(std::vector<double>(p.grid().begin(), p.grid().end()),
                         std::vector<double>(z_grid.begin(), z_grid.end()), std::move(phi), p.n(),
                         std::move(defects));
}

void write_field_csv(std::ostream& os, const MeridianField& f) {
    os << "r,z,phi\n";
    char buf[96];
    for (std::size_t k = 0; k < f.nz(); ++k) {
        for (std::size_t j = 0; j < f.nr(); ++j) {
            std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", f.r_grid()[j], f.z_grid()[k],
                          f.at(j, k));
            os << buf;
        }
    }
}

void write_defects_json(std::ostream& os, const MeridianField& f) {
    nlohmann::json j;
    j["n"] = f.n();
    j["defects"] = nlohmann::json::array();
    for (const auto& d : f.defects()) j["defects"].push_back({d.z_lo, d.z_hi});
    os << j.dump(2) << "\n";
}

MeridianField read_field(std::istream& csv, std::istream& defects_json) {
    const nlohmann::json j = nlohmann::json::parse(defects_json);
    const int n = j.at("n").get<int>();
    std::vector<DefectInterval> defects;
    for (const auto& d : j.at("defects")) {
        defects.push_back({d.at(0).get<double>(), d.at(1).get<double>()});
    }

    std::string line;
    if (!std::getline(csv, line) || line.rfind("r,z,phi", 0) != 0) {
        throw std::invalid_argument("read_field: expected header 'r,z,phi'");
    }
    std::set<double> rs, zs;
    std::map<std::pair<double, double>, double> values;
    while (std::getline(csv, line)) {
        if (line.empty()) continue;
        const auto c1 = line.find(',');
        const auto c2 = line.find(',', c1 + 1);
        if (c1 == std::string::npos || c2 == std::string::npos) {
            throw std::invalid_argument("read_field: malformed row '" + line + "'");
        }
        const double r = std::stod(line.substr(0, c1));
        const double z = std::stod(line.substr(c1 + 1, c2 - c1 - 1));
        rs.insert(r);
        zs.insert(z);
        values[{r, z}] = std::stod(line.substr(c2 + 1));
    }
    std::vector<double> r(rs.begin(), rs.end()), z(zs.begin(), zs.end());
    if (values.size() != r.size() * z.size()) {
        throw std::invalid_argument("read_field: rows do not form a tensor grid");
    }
    std::vector<double> phi;
    phi.reserve(values.size());
    for (double zk : z) {
        for (double rj : r) phi.push_back(values.at({rj, zk}));
    }
    return MeridianField(std::move(r), std::move(z), std::move(phi), n, std::move(defects));
}

}  // namespace relaxlab

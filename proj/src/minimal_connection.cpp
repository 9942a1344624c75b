#include "relaxlab/minimal_connection.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

#include "relaxlab/dense_simplex.hpp"
#include "relaxlab/linear_assignment.hpp"

namespace relaxlab {

void SingularityConfig::validate() const {
    if (positives.size() != negatives.size()) {
        throw std::invalid_argument("SingularityConfig: unbalanced charges (" +
                                    std::to_string(positives.size()) + " positive, " +
                                    std::to_string(negatives.size()) + " negative)");
    }
    if (multiplicity < 1) throw std::invalid_argument("SingularityConfig: multiplicity must be >= 1");
    auto finite = [](const Point3& p) {
        return std::isfinite(p.x) && std::isfinite(p.y) && std::isfinite(p.z);
    };
    if (!std::all_of(positives.begin(), positives.end(), finite) ||
        !std::all_of(negatives.begin(), negatives.end(), finite)) {
        throw std::invalid_argument("SingularityConfig: non-finite coordinates");
    }
}

namespace {

ConnectionResult finish(const SingularityConfig& cfg, std::vector<std::size_t> matching) {
    ConnectionResult r;
    CompensatedSum len;
    for (std::size_t i = 0; i < matching.size(); ++i) {
        len.add(distance(cfg.positives[i], cfg.negatives[matching[i]]));
    }
    r.length = len.value();
    r.mass = cfg.multiplicity * r.length;
    r.matching = std::move(matching);
    return r;
}

}  // namespace

ConnectionResult min_connection_bruteforce(const SingularityConfig& cfg) {
    cfg.validate();
    const std::size_t k = cfg.size();
    if (k > bruteforce_limit) {
        throw std::invalid_argument("min_connection_bruteforce: k > 9, use the assignment solver");
    }
    std::vector<std::size_t> sigma(k);
    std::iota(sigma.begin(), sigma.end(), 0);
    std::vector<std::size_t> best = sigma;
    double best_len = 0.0;
    bool first = true;
    do {
        double len = 0.0;
        for (std::size_t i = 0; i < k; ++i) len += distance(cfg.positives[i], cfg.negatives[sigma[i]]);
        // strict improvement beyond round-off keeps the lexicographically first minimiser
        if (first || len < best_len - 1e-12 * std::max(1.0, best_len)) {
            first = false;
            best_len = len;
            best = sigma;
        }
    } while (std::next_permutation(sigma.begin(), sigma.end()));
    return finish(cfg, std::move(best));
}

ConnectionResult min_connection_assignment(const SingularityConfig& cfg) {
    cfg.validate();
    const std::size_t k = cfg.size();
    std::vector<std::vector<double>> cost(k, std::vector<double>(k));
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = 0; j < k; ++j) cost[i][j] = distance(cfg.positives[i], cfg.negatives[j]);
    }
    return finish(cfg, solve_assignment(cost).row_to_col);
}

double kantorovich_dual(const SingularityConfig& cfg) {
    cfg.validate();
    const std::size_t k = cfg.size();
    if (k == 0) return 0.0;

    // one potential per charge; the objective is shift invariant, so xi >= 0 loses nothing
    std::vector<Point3> pts = cfg.positives;
    pts.insert(pts.end(), cfg.negatives.begin(), cfg.negatives.end());
    const std::size_t m = pts.size();
    std::vector<double> c(m, 0.0);
    for (std::size_t i = 0; i < k; ++i) {
        c[i] = 1.0;
        c[k + i] = -1.0;
    }
    std::vector<std::vector<double>> A;
    std::vector<double> b;
    A.reserve(m * (m - 1));
    for (std::size_t p = 0; p < m; ++p) {
        for (std::size_t q = 0; q < m; ++q) {
            if (p == q) continue;
            std::vector<double> row(m, 0.0);
            row[p] = 1.0;
            row[q] = -1.0;
            A.push_back(std::move(row));
            b.push_back(distance(pts[p], pts[q]));
        }
    }
    const LpResult lp = solve_lp_max(A, b, c);
    if (lp.status != LpStatus::optimal) {
        throw std::logic_error("kantorovich_dual: LP did not reach optimality");
    }
    return lp.objective;
}

double relaxed_energy(double dirichlet, const SingularityConfig& cfg) {
    if (dirichlet < 0.0) throw std::invalid_argument("relaxed_energy: Dirichlet energy must be >= 0");
    if (cfg.size() == 0) return dirichlet;
    return dirichlet + 4.0 * pi * min_connection_assignment(cfg).mass;
}

namespace {

std::vector<Point3> points_from_json(const nlohmann::json& j, const char* key) {
    std::vector<Point3> out;
    if (!j.contains(key)) return out;
    for (const auto& p : j.at(key)) {
        if (!p.is_array() || p.size() != 3) {
            throw std::invalid_argument(std::string("config: ") + key + " entries must be [x,y,z]");
        }
        out.push_back({p.at(0).get<double>(), p.at(1).get<double>(), p.at(2).get<double>()});
    }
    return out;
}

nlohmann::json points_to_json(const std::vector<Point3>& pts) {
    auto arr = nlohmann::json::array();
    for (const auto& p : pts) arr.push_back({p.x, p.y, p.z});
    return arr;
}

}  // namespace

SingularityConfig config_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw std::invalid_argument("config: expected a JSON object");
    SingularityConfig cfg;
    cfg.multiplicity = j.value("multiplicity", 1);
    cfg.positives = points_from_json(j, "positives");
    cfg.negatives = points_from_json(j, "negatives");
    cfg.validate();
    return cfg;
}

nlohmann::json to_json(const SingularityConfig& cfg) {
    return {{"multiplicity", cfg.multiplicity},
            {"positives", points_to_json(cfg.positives)},
            {"negatives", points_to_json(cfg.negatives)}};
}

nlohmann::json to_json(const ConnectionResult& r) {
    return {{"length", r.length}, {"mass", r.mass}, {"matching", r.matching}};
}

}  // namespace relaxlab

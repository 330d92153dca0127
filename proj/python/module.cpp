#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "sc/bessel.hpp"
#include "sc/config.hpp"
#include "sc/engine_ode.hpp"
#include "sc/engine_sde.hpp"
#include "sc/interaction.hpp"
#include "sc/observables.hpp"
#include "sc/stats.hpp"
#include "sc/verify.hpp"

namespace py = pybind11;
using namespace sc;

namespace {

Configuration config_from_points(const std::vector<std::pair<double, double>>& pts,
                                 const std::optional<std::vector<bool>>& alive) {
    std::vector<Vec2> v;
    v.reserve(pts.size());
    for (auto [x, y] : pts) v.push_back({x, y});
    Configuration c = Configuration::all_alive(std::move(v));
    if (alive) {
        if (alive->size() != c.size()) {
            throw std::invalid_argument("alive flags must match the number of points");
        }
        c.alive = *alive;
    }
    return c;
}

std::vector<std::pair<double, double>> points_of(const Configuration& c) {
    std::vector<std::pair<double, double>> out;
    out.reserve(c.size());
    for (const Vec2& p : c.positions) out.emplace_back(p.x, p.y);
    return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Signed Coulomb particle system: integrators, observables, Bessel engine";

    py::class_<Vec2>(m, "Vec2")
        .def(py::init<double, double>())
        .def_readonly("x", &Vec2::x)
        .def_readonly("y", &Vec2::y)
        .def("norm", &Vec2::norm)
        .def("__repr__", [](const Vec2& v) {
            return "Vec2(" + std::to_string(v.x) + ", " + std::to_string(v.y) + ")";
        });

    py::class_<SignVector>(m, "SignVector")
        .def(py::init<std::vector<int>>())
        .def("__len__", &SignVector::size)
        .def("__getitem__", [](const SignVector& s, std::size_t i) {
            if (i >= s.size()) throw py::index_error();
            return s[i];
        })
        .def("net_charge", &SignVector::net_charge);

    py::class_<Configuration>(m, "Configuration")
        .def(py::init(&config_from_points), py::arg("points"), py::arg("alive") = std::nullopt)
        .def_property_readonly("points", &points_of)
        .def_readonly("alive", &Configuration::alive)
        .def("alive_count", &Configuration::alive_count)
        .def("alive_indices", &Configuration::alive_indices)
        .def("__len__", &Configuration::size);

    py::class_<SimParams>(m, "SimParams")
        .def(py::init<>())
        .def_readwrite("gamma", &SimParams::gamma)
        .def_readwrite("signs", &SimParams::signs)
        .def_readwrite("x0", &SimParams::x0)
        .def_readwrite("t_end", &SimParams::t_end)
        .def_readwrite("dt_max", &SimParams::dt_max)
        .def_readwrite("step_factor", &SimParams::step_factor)
        .def_readwrite("eps_coll", &SimParams::eps_coll)
        .def_readwrite("seed", &SimParams::seed)
        .def_readwrite("record_stride", &SimParams::record_stride);

    py::class_<ValidationReport>(m, "ValidationReport")
        .def_readonly("errors", &ValidationReport::errors)
        .def("ok", &ValidationReport::ok);

    m.def("derive_seed", &derive_seed, py::arg("master"), py::arg("index"));
    m.def("validate", &validate);
    m.def("parse_config_text", &parse_config_text, py::arg("text"), py::arg("overrides") = Overrides{});
    m.def("serialize_config", &serialize_config);

    m.def("kernel", [](double x, double y) {
        Vec2 v = kernel({x, y});
        return std::make_pair(v.x, v.y);
    });
    m.def("drift", [](const Configuration& c, const SignVector& b, double gamma) {
        ForceField f = drift(c, b, gamma);
        std::vector<std::pair<double, double>> out;
        for (const Vec2& v : f.values) out.emplace_back(v.x, v.y);
        return out;
    });
    m.def("energy", &energy);
    m.def("radial_power", &radial_power);

    m.def("local_mean", [](const Configuration& c, const std::vector<std::size_t>& k) {
        Vec2 v = local_mean(c, k);
        return std::make_pair(v.x, v.y);
    });
    m.def("local_dispersion", [](const Configuration& c, const std::vector<std::size_t>& k) {
        return local_dispersion(c, k);
    });
    m.def("cluster_separation", [](const Configuration& c, const std::vector<std::size_t>& k) {
        return cluster_separation(c, k);
    });
    m.def("bessel_dimension",
          [](const std::vector<std::size_t>& k, const SignVector& b, double gamma) {
              return bessel_dimension(k, b, gamma);
          });
    m.def("associated_partition", [](const Configuration& c, double d0) {
        return associated_partition(c, d0).blocks;
    });
    m.def("split_cluster", &split_cluster);
    m.def("in_good_set", &in_good_set);
    m.def("good_set_constant", &good_set_constant);
    m.def("sign_extremes", [](const Configuration& c, const SignVector& b) {
        SignExtremes e = sign_extremes(c, b);
        return std::make_pair(e.d_opp, e.d_same);
    });

    py::class_<BesselResult>(m, "BesselResult")
        .def_readonly("times", &BesselResult::times)
        .def_readonly("values", &BesselResult::values)
        .def_readonly("hit_zero_at", &BesselResult::hit_zero_at);
    m.def("simulate_sqb0", &simulate_sqb0, py::arg("delta"), py::arg("r"), py::arg("dt"),
          py::arg("t_end"), py::arg("seed"));
    py::class_<HittingEstimate>(m, "HittingEstimate")
        .def_readonly("probability", &HittingEstimate::probability)
        .def_readonly("standard_error", &HittingEstimate::standard_error)
        .def_readonly("n_samples", &HittingEstimate::n_samples);
    m.def("hitting_probability", &hitting_probability, py::arg("delta"), py::arg("r"),
          py::arg("t_end"), py::arg("dt"), py::arg("n_samples"), py::arg("seed"));
    m.def("inverse_sqrt_time_integral", &inverse_sqrt_time_integral);

    py::enum_<OdeTermination>(m, "OdeTermination")
        .value("reached_t_end", OdeTermination::reached_t_end)
        .value("collision_detected", OdeTermination::collision_detected)
        .value("step_underflow", OdeTermination::step_underflow);
    py::class_<OdeCollision>(m, "OdeCollision")
        .def_readonly("time", &OdeCollision::time)
        .def_readonly("indices", &OdeCollision::indices)
        .def_property_readonly("site", [](const OdeCollision& c) {
            return std::make_pair(c.site.x, c.site.y);
        });
    py::class_<OdeRunResult>(m, "OdeRunResult")
        .def_readonly("terminated", &OdeRunResult::terminated)
        .def_readonly("collision", &OdeRunResult::collision)
        .def_property_readonly("sample_times", [](const OdeRunResult& r) {
            std::vector<double> ts;
            for (const auto& [t, cfg] : r.samples) ts.push_back(t);
            return ts;
        })
        .def("sample_at", [](const OdeRunResult& r, std::size_t k) {
            if (k >= r.samples.size()) throw py::index_error();
            return r.samples[k].second;
        })
        .def("n_samples", [](const OdeRunResult& r) { return r.samples.size(); });
    m.def("run_ode", &run_ode);

    py::enum_<SdeTermination>(m, "SdeTermination")
        .value("reached_t_end", SdeTermination::reached_t_end)
        .value("all_same_sign_remaining", SdeTermination::all_same_sign_remaining)
        .value("step_underflow", SdeTermination::step_underflow);
    py::class_<CollisionEvent>(m, "CollisionEvent")
        .def_readonly("time", &CollisionEvent::time)
        .def_readonly("pairs", &CollisionEvent::pairs)
        .def_property_readonly("sites", [](const CollisionEvent& e) {
            std::vector<std::pair<double, double>> out;
            for (const Vec2& s : e.sites) out.emplace_back(s.x, s.y);
            return out;
        });
    py::class_<SdeRunOptions>(m, "SdeRunOptions")
        .def(py::init<>())
        .def_readwrite("stop_when_single_sign", &SdeRunOptions::stop_when_single_sign)
        .def_readwrite("extra_sample_times", &SdeRunOptions::extra_sample_times);
    py::class_<SdeRunResult>(m, "SdeRunResult")
        .def_readonly("events", &SdeRunResult::events)
        .def_readonly("final", &SdeRunResult::final)
        .def_readonly("terminated", &SdeRunResult::terminated)
        .def_readonly("steps", &SdeRunResult::steps)
        .def_property_readonly("sample_times", [](const SdeRunResult& r) {
            std::vector<double> ts;
            for (const auto& [t, cfg] : r.samples) ts.push_back(t);
            return ts;
        })
        .def("sample_at", [](const SdeRunResult& r, std::size_t k) {
            if (k >= r.samples.size()) throw py::index_error();
            return r.samples[k].second;
        })
        .def("n_samples", [](const SdeRunResult& r) { return r.samples.size(); });
    m.def("run_sde", &run_sde, py::arg("params"), py::arg("options") = SdeRunOptions{});

    py::class_<EnsembleReport>(m, "EnsembleReport")
        .def_readonly("suite", &EnsembleReport::suite)
        .def_readonly("n_runs", &EnsembleReport::n_runs)
        .def_readonly("censored", &EnsembleReport::censored)
        .def_readonly("pass_", &EnsembleReport::pass)
        .def("to_json", &EnsembleReport::to_json_string)
        .def("table", &EnsembleReport::table);
    m.def("verify_collision_count",
          [](const SimParams& p, std::size_t n) { return verify_collision_count(p, n); });
    m.def("verify_dispersion_law",
          [](const SimParams& p, std::size_t n, const std::vector<double>& grid) {
              return verify_dispersion_law(p, n, grid);
          });
    m.def("verify_simple_collisions",
          [](const SimParams& p, std::size_t n) { return verify_simple_collisions(p, n); });
}

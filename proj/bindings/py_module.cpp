#include <pybind11/numpy.h>

#include <bit>
#include <cmath>
#include <span>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "wxeb/analysis.hpp"
#include "wxeb/estimators.hpp"
#include "wxeb/noise.hpp"
#include "wxeb/pipeline.hpp"
#include "wxeb/walsh.hpp"

namespace py = pybind11;
using namespace wxeb;

namespace {

std::vector<double> to_vector(const py::array_t<double, py::array::c_style | py::array::forcecast>& a) {
    return std::vector<double>(a.data(), a.data() + a.size());
}

py::array_t<double> to_array(const std::vector<double>& v) {
    py::array_t<double> out({static_cast<py::ssize_t>(v.size())},
                            {static_cast<py::ssize_t>(sizeof(double))});
    std::copy(v.begin(), v.end(), out.mutable_data());
    return out;
}

ProbabilityTable table_from_array(const py::array_t<double>& values) {
    const auto v = to_vector(values);
    if (!is_power_of_two(v.size())) throw std::invalid_argument("length must be a power of two");
    ProbabilityTable p;
    p.n = std::countr_zero(v.size());
    p.values = v;
    double sum = 0.0;
    for (double x : v) sum += x;
    p.normalized = std::abs(sum - 1.0) <= 1e-9;
    return p;
}

SampleSet samples_from_array(const py::array_t<std::int64_t>& counts) {
    SampleSet s;
    const auto* data = counts.data();
    const std::size_t m = static_cast<std::size_t>(counts.size());
    if (!is_power_of_two(m)) throw std::invalid_argument("counts length must be a power of two");
    s.n = std::countr_zero(m);
    s.counts.assign(data, data + m);
    for (std::int64_t c : s.counts) s.total += c;
    return s;
}

py::dict report_to_dict(const EstimatorReport& r) {
    py::dict d;
    d["U"] = r.u;
    d["V"] = r.v.value;
    d["V_status"] = to_string(r.v.status);
    d["MLE"] = r.mle.value;
    d["MLE_status"] = to_string(r.mle.status);
    d["T_squared"] = r.t_squared;
    d["T"] = r.t;
    d["S_squared"] = r.s_squared.value;
    d["S"] = r.s;
    d["phi_ro_corr"] = r.phi_ro_corr.value;
    d["phi_ro_mle"] = py::make_tuple(r.phi_ro_mle.phi, r.phi_ro_mle.phi_ro);
    d["phi_ro_mle_status"] = to_string(r.phi_ro_mle.status);
    d["alt_phi"] = r.alt_phi;
    return d;
}

}  // namespace

PYBIND11_MODULE(_wxeb, m) {
    m.doc() = "Fourier-Walsh statistical toolkit for noisy random-circuit-sampling data";

    m.def(
        "wht_forward",
        [](const py::array_t<double>& f) { return to_array(wht_forward(std::span<const double>(to_vector(f))).coeffs); },
        py::arg("f"), "Fourier-Walsh coefficients of a dense table (forward carries the 2^-n factor)");

    m.def(
        "wht_inverse",
        [](const py::array_t<double>& c) {
            const auto v = to_vector(c);
            SpectralTable t;
            t.n = std::countr_zero(v.size());
            t.coeffs = v;
            return to_array(wht_inverse(t));
        },
        py::arg("coeffs"));

    m.def(
        "apply_noise_operator",
        [](const py::array_t<double>& c, double rho) {
            const auto v = to_vector(c);
            SpectralTable t;
            t.n = std::countr_zero(v.size());
            t.coeffs = v;
            return to_array(apply_noise_operator(t, rho).coeffs);
        },
        py::arg("coeffs"), py::arg("rho"));

    m.def(
        "degree_energies",
        [](const py::array_t<double>& f) { return to_array(degree_energies(wht_forward(std::span<const double>(to_vector(f))))); },
        py::arg("f"), "gamma_k of a dense table, k = 0..n");

    m.def(
        "generate_porter_thomas",
        [](int n, std::uint64_t seed) { return to_array(generate_porter_thomas(n, seed).values); },
        py::arg("n"), py::arg("seed"));

    m.def(
        "apply_noise_model",
        [](const py::array_t<double>& p, const std::string& spec) {
            return to_array(apply_noise_model(table_from_array(p), parse_noise_spec(spec)).values);
        },
        py::arg("p"), py::arg("spec"), "spec grammar: google:phi=.. | symro:s=..,q=.. | asymro:phig=..,q1=..,q2=..");

    m.def(
        "draw_samples",
        [](const py::array_t<double>& p, std::int64_t shots, std::uint64_t seed) {
            const SampleSet s = draw_samples(table_from_array(p), shots, seed);
            py::array_t<std::int64_t> out({static_cast<py::ssize_t>(s.counts.size())},
                                          {static_cast<py::ssize_t>(sizeof(std::int64_t))});
            std::copy(s.counts.begin(), s.counts.end(), out.mutable_data());
            return out;
        },
        py::arg("p"), py::arg("shots"), py::arg("seed"));

    m.def(
        "estimate_all",
        [](const py::array_t<double>& p, const py::array_t<std::int64_t>& counts, double q) {
            return report_to_dict(estimate_all(table_from_array(p), samples_from_array(counts), q));
        },
        py::arg("p"), py::arg("counts"), py::arg("q") = 0.038);

    m.def(
        "lambda_profile",
        [](const py::array_t<double>& p, const py::array_t<std::int64_t>& counts) {
            const DegreeProfile prof = lambda_profile(table_from_array(p), samples_from_array(counts));
            py::dict d;
            d["lambda"] = to_array(prof.lambda);
            d["stderr"] = to_array(prof.stderr_jk);
            d["unstable"] = std::vector<bool>(prof.unstable.begin(), prof.unstable.end());
            return d;
        },
        py::arg("p"), py::arg("counts"));

    m.def(
        "fit_sq",
        [](const py::array_t<double>& p, const py::array_t<std::int64_t>& counts) {
            const SQFit fit = fit_sq(table_from_array(p), samples_from_array(counts));
            py::dict d;
            d["s"] = fit.s;
            d["q"] = fit.q;
            d["log_likelihood"] = fit.log_likelihood;
            d["status"] = to_string(fit.status);
            return d;
        },
        py::arg("p"), py::arg("counts"));

    m.def("reference_curve", &reference_curve, py::arg("s"), py::arg("q"), py::arg("n"));
    m.def("alt_phi", &alt_phi, py::arg("phi_ro"), py::arg("q"), py::arg("n"));
    m.def("phi_ro_from_phi", &phi_ro_from_phi, py::arg("phi"), py::arg("q"), py::arg("n"));
}

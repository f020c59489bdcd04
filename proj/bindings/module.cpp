#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "errorfloor/io.hpp"

namespace py = pybind11;
using namespace ef;

PYBIND11_MODULE(_errorfloor, m) {
    m.doc() = "LDPC error-floor characterization core";

    py::register_exception<parse_error>(m, "ParseError");

    py::class_<BitPattern>(m, "BitPattern")
        .def(py::init<>())
        .def(py::init<std::vector<int>, int>(), py::arg("support"), py::arg("n"))
        .def_readonly("support", &BitPattern::support)
        .def_readonly("n", &BitPattern::n)
        .def("weight", &BitPattern::weight)
        .def("contains", &BitPattern::contains)
        .def("__len__", &BitPattern::weight)
        .def("__eq__", &BitPattern::operator==)
        .def("__repr__", [](const BitPattern& p) {
            std::ostringstream ss;
            ss << "BitPattern(n=" << p.n << ", support=[";
            for (size_t i = 0; i < p.support.size(); ++i)
                ss << (i ? "," : "") << p.support[i];
            ss << "])";
            return ss.str();
        });

    py::class_<TsClass>(m, "TsClass")
        .def_readonly("a", &TsClass::a)
        .def_readonly("b", &TsClass::b)
        .def_readonly("edges", &TsClass::edges)
        .def_readonly("checks_touched", &TsClass::checks_touched)
        .def_readonly("elementary", &TsClass::elementary)
        .def("__repr__", [](const TsClass& c) {
            return "(" + std::to_string(c.a) + "," + std::to_string(c.b) + ")";
        });

    py::class_<TannerCode>(m, "TannerCode")
        .def(py::init<int, int, std::vector<std::vector<int>>>(), py::arg("n"), py::arg("m"),
             py::arg("col_adjacency"))
        .def_property_readonly("n", &TannerCode::n)
        .def_property_readonly("m", &TannerCode::m)
        .def_property_readonly("k", &TannerCode::k)
        .def_property_readonly("num_edges", &TannerCode::num_edges)
        .def("col_adjacency", &TannerCode::col_adjacency)
        .def("row_adjacency", &TannerCode::row_adjacency)
        .def("var_degree", &TannerCode::var_degree)
        .def("check_degree", &TannerCode::check_degree)
        .def("dv_profile", &TannerCode::dv_profile)
        .def("dc_profile", &TannerCode::dc_profile)
        .def("regular", &TannerCode::regular)
        .def("girth", &TannerCode::girth);

    m.def("parse_alist", [](const std::string& text) {
        std::istringstream in(text);
        return parse_alist(in);
    }, py::arg("text"));
    m.def("parse_alist_file", &parse_alist_file, py::arg("path"));
    m.def("write_alist", [](const TannerCode& code) {
        std::ostringstream out;
        write_alist(code, out);
        return out.str();
    });
    m.def("syndrome", &syndrome, py::arg("code"), py::arg("pattern"));
    m.def("classify_pattern", &classify_pattern, py::arg("code"), py::arg("pattern"));
    m.def("gf2_rank", &gf2_rank, py::arg("code"));

    py::class_<ChannelModel>(m, "ChannelModel")
        .def(py::init<double, double>(), py::arg("eb_no_db"), py::arg("rate"))
        .def_readonly("eb_no_db", &ChannelModel::eb_no_db)
        .def_readonly("rate", &ChannelModel::rate)
        .def_readonly("sigma2", &ChannelModel::sigma2)
        .def_readonly("llr_scale", &ChannelModel::llr_scale)
        .def("es_no", &ChannelModel::es_no);

    py::enum_<Algorithm>(m, "Algorithm")
        .value("belief_propagation", Algorithm::belief_propagation)
        .value("min_sum", Algorithm::min_sum);

    py::class_<DecoderConfig>(m, "DecoderConfig")
        .def(py::init<>())
        .def_readwrite("algorithm", &DecoderConfig::algorithm)
        .def_readwrite("max_iters", &DecoderConfig::max_iters)
        .def_readwrite("llr_clamp", &DecoderConfig::llr_clamp)
        .def_readwrite("early_exit", &DecoderConfig::early_exit)
        .def_readwrite("capture_history", &DecoderConfig::capture_history);

    py::class_<DecodeOutcome>(m, "DecodeOutcome")
        .def_readonly("converged", &DecodeOutcome::converged)
        .def_readonly("iterations_used", &DecodeOutcome::iterations_used)
        .def_readonly("final_hard_decision", &DecodeOutcome::final_hard_decision)
        .def_readonly("syndrome_weight_history", &DecodeOutcome::syndrome_weight_history)
        .def_readonly("min_syndrome_state", &DecodeOutcome::min_syndrome_state)
        .def_readonly("min_syndrome_weight", &DecodeOutcome::min_syndrome_weight)
        .def_readonly("min_syndrome_iteration", &DecodeOutcome::min_syndrome_iteration)
        .def_readonly("hard_decision_history", &DecodeOutcome::hard_decision_history);

    m.def("decode", [](const TannerCode& code, const std::vector<double>& y,
                       const ChannelModel& channel, const DecoderConfig& cfg) {
        return decode(code, y, channel, cfg);
    }, py::arg("code"), py::arg("y"), py::arg("channel"), py::arg("config"));
    m.def("extract_trapping_set", &extract_trapping_set, py::arg("code"), py::arg("outcome"));

    py::class_<SearchParams>(m, "SearchParams")
        .def(py::init<>())
        .def_readwrite("epsilon1", &SearchParams::epsilon1)
        .def_readwrite("epsilon2", &SearchParams::epsilon2)
        .def_readwrite("gamma", &SearchParams::gamma)
        .def_readwrite("eb_no_db", &SearchParams::eb_no_db)
        .def_readwrite("v_num", &SearchParams::v_num)
        .def_readwrite("tree_depth", &SearchParams::tree_depth)
        .def_readwrite("degree_cutoff", &SearchParams::degree_cutoff)
        .def_readwrite("gamma_by_degree", &SearchParams::gamma_by_degree)
        .def("validate", &SearchParams::validate);

    py::class_<TsRecord>(m, "TsRecord")
        .def_readonly("support", &TsRecord::support)
        .def_readonly("cls", &TsRecord::cls)
        .def_readonly("discovery_count", &TsRecord::discovery_count)
        .def_readonly("first_root", &TsRecord::first_root)
        .def_readonly("d_e2", &TsRecord::d_e2)
        .def_readonly("epsilon_star", &TsRecord::epsilon_star)
        .def_readonly("bracketed", &TsRecord::bracketed)
        .def_readonly("probed", &TsRecord::probed);

    py::class_<TsCatalog>(m, "TsCatalog")
        .def(py::init<>())
        .def_readonly("entries", &TsCatalog::entries)
        .def_readonly("params", &TsCatalog::params)
        .def_readonly("decodings", &TsCatalog::decodings)
        .def_readonly("mean_iterations", &TsCatalog::mean_iterations)
        .def_readonly("wall_seconds", &TsCatalog::wall_seconds)
        .def("__len__", [](const TsCatalog& c) { return c.entries.size(); });

    m.def("search_cost", &search_cost, py::arg("code"), py::arg("params"));
    m.def("searched_roots", &searched_roots, py::arg("code"), py::arg("params"));
    m.def("run_search", &run_search, py::arg("code"), py::arg("params"), py::arg("config"),
          py::arg("threads") = 1, py::call_guard<py::gil_scoped_release>());

    py::class_<BoundaryProbe>(m, "BoundaryProbe")
        .def(py::init<>())
        .def_readwrite("l_min", &BoundaryProbe::l_min)
        .def_readwrite("l_max", &BoundaryProbe::l_max)
        .def_readwrite("p", &BoundaryProbe::p)
        .def("resolution", &BoundaryProbe::resolution);

    py::class_<BoundaryResult>(m, "BoundaryResult")
        .def_readonly("epsilon_star", &BoundaryResult::epsilon_star)
        .def_readonly("d_e2", &BoundaryResult::d_e2)
        .def_readonly("bracketed", &BoundaryResult::bracketed)
        .def_readonly("decodings", &BoundaryResult::decodings);

    py::class_<DominanceRow>(m, "DominanceRow")
        .def_readonly("a", &DominanceRow::a)
        .def_readonly("b", &DominanceRow::b)
        .def_readonly("multiplicity", &DominanceRow::multiplicity)
        .def_readonly("mean_d_e2", &DominanceRow::mean_d_e2)
        .def_readonly("min_d_e2", &DominanceRow::min_d_e2)
        .def_readonly("elementary", &DominanceRow::elementary)
        .def_readonly("non_bracketed", &DominanceRow::non_bracketed);

    m.def("probe_boundary", &probe_boundary, py::arg("code"), py::arg("ts"), py::arg("probe"),
          py::arg("config"), py::arg("channel"));
    m.def("rank_catalog", &rank_catalog, py::arg("code"), py::arg("catalog"), py::arg("probe"),
          py::arg("config"), py::arg("channel"), py::arg("threads") = 1,
          py::call_guard<py::gil_scoped_release>());
    m.def("squared_distance", &squared_distance, py::arg("ts_weight"), py::arg("epsilon_star"));
    m.def("q_function", &q_function, py::arg("x"));
    m.def("q_contribution", &q_contribution, py::arg("d_e2"), py::arg("channel"));

    py::class_<NoiseSource>(m, "NoiseSource")
        .def(py::init<std::uint64_t>(), py::arg("master_seed"))
        .def("master_seed", &NoiseSource::master_seed)
        .def("standard_normal", [](const NoiseSource& ns, std::uint64_t trial, int n) {
            std::vector<double> out(n);
            ns.fill_standard_normal(trial, out);
            return out;
        }, py::arg("trial"), py::arg("n"));

    py::class_<ISDensity>(m, "ISDensity")
        .def(py::init([](int n, double sigma2, std::vector<std::vector<int>> supports,
                         double shift) {
                 ISDensity d;
                 d.n = n;
                 d.sigma2 = sigma2;
                 d.shift = shift;
                 d.psi = n / 2.0;
                 d.center_supports = std::move(supports);
                 d.validate();
                 return d;
             }),
             py::arg("n"), py::arg("sigma2"), py::arg("center_supports"), py::arg("shift") = 1.0)
        .def_readonly("n", &ISDensity::n)
        .def_readonly("sigma2", &ISDensity::sigma2)
        .def_readonly("shift", &ISDensity::shift)
        .def_readonly("psi", &ISDensity::psi)
        .def_readonly("center_supports", &ISDensity::center_supports)
        .def("centers", &ISDensity::centers);

    m.def("make_density", [](const TannerCode& code, const ChannelModel& channel,
                             const TsCatalog& catalog, double threshold, long cap, double shift) {
        auto points = select_shift_points(catalog, threshold, cap);
        return ISDensity::make(code.n(), channel.sigma2, points, shift);
    }, py::arg("code"), py::arg("channel"), py::arg("catalog"), py::arg("threshold") = -1.0,
          py::arg("cap") = -1, py::arg("shift") = 1.0);

    py::class_<NewEvent>(m, "NewEvent")
        .def_readonly("cls", &NewEvent::cls)
        .def_readonly("count", &NewEvent::count)
        .def_readonly("weight_sum", &NewEvent::weight_sum);

    py::class_<MCEstimate>(m, "MCEstimate")
        .def_readonly("p_f_hat", &MCEstimate::p_f_hat)
        .def_readonly("p_b_hat", &MCEstimate::p_b_hat)
        .def_readonly("trials", &MCEstimate::trials)
        .def_readonly("errors", &MCEstimate::errors)
        .def_readonly("ci_low", &MCEstimate::ci_low)
        .def_readonly("ci_high", &MCEstimate::ci_high)
        .def_readonly("class_tallies", &MCEstimate::class_tallies);

    py::class_<ISEstimate>(m, "ISEstimate")
        .def_readonly("p_f_hat", &ISEstimate::p_f_hat)
        .def_readonly("p_b_hat", &ISEstimate::p_b_hat)
        .def_readonly("v_hat", &ISEstimate::v_hat)
        .def_readonly("trials", &ISEstimate::trials)
        .def_readonly("hits", &ISEstimate::hits)
        .def_readonly("intended_hits", &ISEstimate::intended_hits)
        .def_readonly("weight_overflows", &ISEstimate::weight_overflows)
        .def_readonly("new_events", &ISEstimate::new_events);

    m.def("mc_estimate", &mc_estimate, py::arg("code"), py::arg("channel"), py::arg("trials"),
          py::arg("config"), py::arg("noise"), py::arg("threads") = 1,
          py::call_guard<py::gil_scoped_release>());
    m.def("is_estimate", &is_estimate, py::arg("code"), py::arg("channel"), py::arg("density"),
          py::arg("per_center"), py::arg("config"), py::arg("noise"), py::arg("threads") = 1,
          py::call_guard<py::gil_scoped_release>());
    m.def("mean_weight", &mean_weight, py::arg("noise"), py::arg("density"), py::arg("draws"));
    m.def("binomial_ci", &binomial_ci, py::arg("k"), py::arg("n"), py::arg("confidence") = 0.95);
}

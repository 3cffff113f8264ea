#include <cstdio>
#include <sstream>
#include <string>

#include <json.hpp>

#include "talenti/comparison.hpp"
#include "talenti/rigidity_lab.hpp"

namespace talenti {

namespace {

std::string g17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

}  // namespace

std::string ComparisonReport::to_json() const {
    nlohmann::json j;
    j["instance"] = instance;
    j["N"] = N;
    j["p"] = p;
    j["q"] = q;
    j["avr"] = avr;
    j["domain_measure"] = domain_measure;
    j["r_a"] = r_a;
    j["talenti"] = {{"margin", talenti_margin},
                    {"deficit", talenti_deficit},
                    {"tol_mesh", tol_mesh},
                    {"pass", talenti_pass}};
    nlohmann::json grads = nlohmann::json::array();
    for (const auto& [r, pair] : gradient_checks) {
        grads.push_back({{"r", r},
                         {"lhs", pair.lhs},
                         {"rhs", pair.rhs},
                         {"tolerance", pair.tolerance},
                         {"pass", pair.pass}});
    }
    j["gradient_checks"] = grads;
    j["polya_szego"] = {{"lhs", polya_szego.lhs},
                        {"rhs", polya_szego.rhs},
                        {"tolerance", polya_szego.tolerance},
                        {"pass", polya_szego.pass}};
    j["isoperimetric"] = {{"min_ratio", isoperimetric_min_ratio},
                          {"levels_used", isoperimetric_levels_used},
                          {"levels_skipped", isoperimetric_levels_skipped},
                          {"pass", isoperimetric_pass}};
    j["coarea"] = {{"max_relative_residual", coarea_max_residual},
                   {"pass", coarea_pass}};
    j["equality"] = {{"detected", equality_detected}, {"eq_tol", eq_tol}};
    return j.dump(2);
}

std::string ComparisonReport::csv_header() {
    return "instance,N,p,avr,domain_measure,r_a,talenti_margin,"
           "talenti_deficit,tol_mesh,talenti_pass,grad_r1_lhs,grad_r1_rhs,"
           "grad_rmid_lhs,grad_rmid_rhs,grad_rp_lhs,grad_rp_rhs,ps_lhs,"
           "ps_rhs,iso_min_ratio,coarea_residual,equality_detected";
}

std::string ComparisonReport::csv_row() const {
    std::ostringstream out;
    out << instance << ',' << g17(N) << ',' << g17(p) << ',' << g17(avr)
        << ',' << g17(domain_measure) << ',' << g17(r_a) << ','
        << g17(talenti_margin) << ',' << g17(talenti_deficit) << ','
        << g17(tol_mesh) << ',' << (talenti_pass ? 1 : 0);
    for (int k = 0; k < 3; ++k) {
        if (k < static_cast<int>(gradient_checks.size())) {
            out << ',' << g17(gradient_checks[k].second.lhs) << ','
                << g17(gradient_checks[k].second.rhs);
        } else {
            out << ",,";
        }
    }
    out << ',' << g17(polya_szego.lhs) << ',' << g17(polya_szego.rhs) << ','
        << g17(isoperimetric_min_ratio) << ',' << g17(coarea_max_residual)
        << ',' << (equality_detected ? 1 : 0);
    return out.str();
}

std::string SweepResult::verdict_json() const {
    nlohmann::json j;
    j["pass"] = pass;
    j["spearman"] = spearman;
    j["detail"] = verdict_detail;
    nlohmann::json rows_json = nlohmann::json::array();
    for (const SweepRow& r : rows) {
        rows_json.push_back({{"param", r.param},
                             {"avr", r.avr},
                             {"deficit", r.deficit},
                             {"cone_proxy", r.cone_proxy},
                             {"equality", r.equality_detected},
                             {"seconds", r.seconds}});
    }
    j["rows"] = rows_json;
    return j.dump(2);
}

std::string SweepResult::csv_header() {
    return "param,avr,deficit,cone_proxy,equality,seconds";
}

std::string SweepResult::csv_rows() const {
    std::ostringstream out;
    for (const SweepRow& r : rows) {
        out << g17(r.param) << ',' << g17(r.avr) << ',' << g17(r.deficit)
            << ',' << g17(r.cone_proxy) << ',' << (r.equality_detected ? 1 : 0)
            << ',' << g17(r.seconds) << '\n';
    }
    return out.str();
}

}  // namespace talenti

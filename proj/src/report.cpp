#include "conecert/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>

namespace conecert {

namespace {

std::string fmt17(double x)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

void emit(const Json& j, int indent, std::string& out)
{
    const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
    const std::string inner(static_cast<std::size_t>(indent + 1) * 2, ' ');
    switch (j.type()) {
    case Json::value_t::object: {
        if (j.empty()) {
            out += "{}";
            return;
        }
        out += "{\n";
        bool first = true;
        for (const auto& [k, v] : j.items()) {
            if (!first) {
                out += ",\n";
            }
            first = false;
            out += inner + Json(k).dump() + ": ";
            emit(v, indent + 1, out);
        }
        out += "\n" + pad + "}";
        return;
    }
    case Json::value_t::array: {
        if (j.empty()) {
            out += "[]";
            return;
        }
        out += "[\n";
        for (std::size_t i = 0; i < j.size(); ++i) {
            if (i > 0) {
                out += ",\n";
            }
            out += inner;
            emit(j[i], indent + 1, out);
        }
        out += "\n" + pad + "]";
        return;
    }
    case Json::value_t::number_float: {
        const double x = j.get<double>();
        out += std::isfinite(x) ? fmt17(x) : "null";
        return;
    }
    default:
        out += j.dump();
        return;
    }
}

Json pair_json(double a, double b)
{
    return Json::array({a, b});
}

Json interval_json(const Interval& iv)
{
    return pair_json(iv.lo, iv.hi);
}

} // namespace

std::string dump_json(const Json& j)
{
    std::string out;
    emit(j, 0, out);
    out += "\n";
    return out;
}

Json report_skeleton(const Json& config_echo)
{
    Json r = Json::object();
    r["config_echo"] = config_echo;
    r["verdicts"] = Json::array();
    r["promised"] = nullptr;
    r["solutions"] = Json::array();
    r["rcd"] = nullptr;
    r["timings"] = Json::object();
    r["summary"] = Json::object();
    r["notes"] = Json::array();
    return r;
}

Json verdict_json(const ConditionResult& c)
{
    const auto& v = c.verdict;
    Json j = Json::object();
    j["condition_id"] = v.condition_id;
    j["status"] = status_name(v.status);
    if (v.witness) {
        j["witness"] = {{"x1", v.witness->x1}, {"x2", v.witness->x2}, {"value", v.witness->value}};
    } else {
        j["witness"] = nullptr;
    }
    j["boxes_explored"] = v.boxes_explored;
    j["max_depth_reached"] = v.max_depth_reached;
    j["expr"] = c.ineq.expr.source();
    j["relation"] = relation_symbol(c.ineq.relation);
    j["bound"] = c.ineq.bound;
    j["box"] = Json::array({interval_json(c.ineq.box.x1), interval_json(c.ineq.box.x2)});
    if (c.oracle) {
        const auto& o = *c.oracle;
        Json oj = Json::object();
        oj["sup"] = o.sup;
        oj["inf"] = o.inf;
        oj["argmax"] = pair_json(o.argmax[0], o.argmax[1]);
        oj["argmin"] = pair_json(o.argmin[0], o.argmin[1]);
        if (c.oracle_agrees) {
            oj["agrees"] = *c.oracle_agrees;
        } else {
            oj["agrees"] = nullptr;
        }
        j["oracle"] = std::move(oj);
    } else {
        j["oracle"] = nullptr;
    }
    return j;
}

Json verdicts_json(const HypothesisReport& r)
{
    Json a = Json::array();
    for (const auto& c : r.conditions) {
        a.push_back(verdict_json(c));
    }
    return a;
}

Json promised_json(const HypothesisReport& r)
{
    if (!r.promised) {
        return nullptr;
    }
    const Promised& p = *r.promised;
    auto names = [](const std::vector<RegionLabel>& v) {
        Json a = Json::array();
        for (const auto& l : v) {
            a.push_back(l.region_name());
        }
        return a;
    };
    Json j = Json::object();
    j["theorem"] = theorem_name(r.theorem);
    j["solutions"] = p.solutions;
    j["coexistence"] = p.coexistence;
    j["regions"] = names(p.regions);
    j["coexistence_regions"] = names(p.coexistence_regions);
    return j;
}

Json solution_json(const Solution& s)
{
    const auto sn = s.sup_norms();
    Json j = Json::object();
    j["seed_id"] = s.seed_id;
    j["residual"] = s.residual;
    j["region"] = s.region_name();
    j["tag"] = s.region ? Json(s.region->tag()) : Json(nullptr);
    j["nontrivial"] = Json::array({s.nontrivial[0], s.nontrivial[1]});
    j["sup_norms"] = pair_json(sn[0], sn[1]);
    j["min_values"] = pair_json(*std::min_element(s.u1.values().begin(), s.u1.values().end()),
                                *std::min_element(s.u2.values().begin(), s.u2.values().end()));
    j["iterations"] = s.iterations;
    return j;
}

Json check_json(const rcd::InequalityCheck& c)
{
    Json j = Json::object();
    j["id"] = c.id;
    j["lhs"] = c.lhs;
    j["relation"] = relation_symbol(c.relation);
    j["rhs"] = c.rhs;
    j["status"] = status_name(c.status);
    return j;
}

Json scalar_verdict_json(const rcd::ScalarVerdict& v)
{
    Json checks = Json::array();
    for (const auto& c : v.checks) {
        checks.push_back(check_json(c));
    }
    Json j = Json::object();
    j["status"] = status_name(v.status);
    j["checks"] = std::move(checks);
    return j;
}

std::vector<std::string> validate_report(const Json& report)
{
    std::vector<std::string> errs;
    static const std::vector<std::string> keys{"config_echo", "verdicts", "promised", "solutions",
                                               "rcd",         "timings",  "summary",  "notes"};
    if (!report.is_object()) {
        return {"report is not an object"};
    }
    std::vector<std::string> got;
    for (const auto& [k, _] : report.items()) {
        got.push_back(k);
    }
    if (got != keys) {
        errs.push_back("top-level keys differ from the fixed schema");
        return errs;
    }
    if (!report["config_echo"].is_object()) {
        errs.push_back("config_echo must be an object");
    }
    const auto is_pair = [](const Json& v, bool boolean) {
        return v.is_array() && v.size() == 2
               && (boolean ? v[0].is_boolean() && v[1].is_boolean() : v[0].is_number() && v[1].is_number());
    };
    if (!report["verdicts"].is_array()) {
        errs.push_back("verdicts must be an array");
    } else {
        static const std::set<std::string> statuses{"Pass", "Fail", "Unknown"};
        for (const auto& v : report["verdicts"]) {
            if (!v.is_object() || !v.contains("condition_id") || !v["condition_id"].is_string()) {
                errs.push_back("verdict without condition_id");
                continue;
            }
            const std::string id = v["condition_id"].get<std::string>();
            if (!v.contains("status") || !v["status"].is_string() || !statuses.contains(v["status"].get<std::string>())) {
                errs.push_back(id + ": bad status");
            }
            if (!v.contains("witness")
                || !(v["witness"].is_null()
                     || (v["witness"].is_object() && v["witness"].contains("x1") && v["witness"].contains("x2")))) {
                errs.push_back(id + ": bad witness");
            }
            if (!v.contains("boxes_explored") || !v["boxes_explored"].is_number_unsigned()) {
                errs.push_back(id + ": bad boxes_explored");
            }
        }
    }
    const Json& p = report["promised"];
    if (!p.is_null() && !(p.is_object() && p.contains("solutions") && p["solutions"].is_number_integer())) {
        errs.push_back("promised must be null or carry an integer solution count");
    }
    if (!report["solutions"].is_array()) {
        errs.push_back("solutions must be an array");
    } else {
        for (const auto& s : report["solutions"]) {
            if (!s.is_object() || !s.contains("seed_id") || !s["seed_id"].is_string() || !s.contains("residual")
                || !s["residual"].is_number() || !s.contains("region") || !s["region"].is_string()
                || !s.contains("nontrivial") || !is_pair(s["nontrivial"], true) || !s.contains("sup_norms")
                || !is_pair(s["sup_norms"], false)) {
                errs.push_back("malformed solution entry");
            }
        }
    }
    if (!report["rcd"].is_null() && !report["rcd"].is_object()) {
        errs.push_back("rcd must be null or an object");
    }
    if (!report["timings"].is_object()) {
        errs.push_back("timings must be an object");
    }
    if (!report["summary"].is_object()) {
        errs.push_back("summary must be an object");
    }
    if (!report["notes"].is_array()) {
        errs.push_back("notes must be an array");
    }
    return errs;
}

std::string solution_csv(const Solution& s)
{
    std::string out = "t,u1,u2\n";
    const auto& t = s.u1.rule().nodes();
    for (std::size_t i = 0; i < t.size(); ++i) {
        out += fmt17(t[i]) + "," + fmt17(s.u1[i]) + "," + fmt17(s.u2[i]) + "\n";
    }
    return out;
}

} // namespace conecert

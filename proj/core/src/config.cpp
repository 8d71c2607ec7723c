#include "ubiq/config.hpp"

#include <nlohmann/json.hpp>

namespace ubiq::config {

namespace {

[[noreturn]] void bad(const std::string& field, const std::string& why) {
    throw validation_error("config field '" + field + "': " + why);
}

double need_num(const json& j, const std::string& field, const char* key) {
    if (!j.contains(key) || !j[key].is_number()) bad(field + "." + key, "expected a number");
    return j[key].get<double>();
}

std::int64_t need_int(const json& j, const std::string& field, const char* key) {
    if (!j.contains(key) || !j[key].is_number_integer()) bad(field + "." + key, "expected an integer");
    return j[key].get<std::int64_t>();
}

std::string need_str(const json& j, const std::string& field, const char* key) {
    if (!j.contains(key) || !j[key].is_string()) bad(field + "." + key, "expected a string");
    return j[key].get<std::string>();
}

}  // namespace

RealSpec parse_real(const json& j, const std::string& field) {
    if (!j.is_object()) bad(field, "expected an object");
    std::string kind = need_str(j, field, "kind");
    try {
        if (kind == "rational")
            return RealSpec::rational(BigRat(BigInt(need_int(j, field, "p")), BigInt(need_int(j, field, "q"))));
        if (kind == "surd")
            return RealSpec::surd(BigInt(need_int(j, field, "a")), BigInt(need_int(j, field, "b")),
                                  BigInt(need_int(j, field, "c")), BigInt(need_int(j, field, "D")));
        if (kind == "liouville") return RealSpec::liouville(static_cast<int>(need_int(j, field, "base")));
        if (kind == "decimal")
            return RealSpec::decimal(need_str(j, field, "digits"),
                                     static_cast<int>(need_int(j, field, "precision")));
    } catch (const validation_error& e) {
        bad(field, e.what());
    }
    bad(field + ".kind", "unknown number kind '" + kind + "'");
}

Point parse_point(const json& j, const std::string& field) {
    if (!j.is_array() || j.empty()) bad(field, "expected a nonempty array of number literals");
    Point p;
    for (std::size_t i = 0; i < j.size(); ++i) p.push_back(parse_real(j[i], field + "[" + std::to_string(i) + "]"));
    return p;
}

gauge::GaugeSpec parse_gauge(const json& j, const std::string& field) {
    if (!j.is_object()) bad(field, "expected an object");
    std::string fam = need_str(j, field, "family");
    try {
        if (fam == "power") return gauge::GaugeSpec::power(need_num(j, field, "s"));
        if (fam == "powerlog") return gauge::GaugeSpec::powerlog(need_num(j, field, "s"), need_num(j, field, "t"));
        if (fam == "zero") return gauge::GaugeSpec::zero();
        if (fam == "table") {
            if (!j.contains("points") || !j["points"].is_array()) bad(field + ".points", "expected an array");
            std::vector<std::pair<double, double>> pts;
            for (const auto& e : j["points"]) {
                if (!e.is_array() || e.size() != 2) bad(field + ".points", "expected [r, g] pairs");
                pts.emplace_back(e[0].get<double>(), e[1].get<double>());
            }
            return gauge::GaugeSpec::from_table(std::move(pts));
        }
    } catch (const validation_error& e) {
        bad(field, e.what());
    }
    bad(field + ".family", "unknown gauge family '" + fam + "'");
}

seq::RadiusSeqSpec parse_radii(const json& j, const std::string& field) {
    if (!j.is_object()) bad(field, "expected an object");
    std::string fam = need_str(j, field, "family");
    try {
        if (fam == "power") return seq::RadiusSeqSpec::power_decay(need_num(j, field, "c"), need_num(j, field, "sigma"));
        if (fam == "geometric") return seq::RadiusSeqSpec::geometric(need_num(j, field, "c"), need_num(j, field, "q"));
        if (fam == "explicit") {
            if (!j.contains("values") || !j["values"].is_array()) bad(field + ".values", "expected an array");
            std::vector<double> v = j["values"].get<std::vector<double>>();
            auto tail = seq::RadiusSeqSpec::TailRule::zero;
            double fc = 1.0, fs = 2.0;
            if (j.contains("tail")) {
                if (j["tail"].is_string() && j["tail"] == "zero") {
                    tail = seq::RadiusSeqSpec::TailRule::zero;
                } else if (j["tail"].is_object()) {
                    tail = seq::RadiusSeqSpec::TailRule::power_fit;
                    fc = need_num(j["tail"], field + ".tail", "c");
                    fs = need_num(j["tail"], field + ".tail", "sigma");
                } else {
                    bad(field + ".tail", "expected \"zero\" or {c, sigma}");
                }
            }
            return seq::RadiusSeqSpec::explicit_list(std::move(v), tail, fc, fs);
        }
        if (fam == "powerof")
            return seq::RadiusSeqSpec::power_of(parse_radii(j.at("base"), field + ".base"), need_num(j, field, "t"));
    } catch (const validation_error& e) {
        bad(field, e.what());
    } catch (const json::exception&) {
        bad(field, "missing base sequence");
    }
    bad(field + ".family", "unknown radius family '" + fam + "'");
}

gauge::MeasureSpec parse_measure(const json& j, const std::string& field) {
    if (!j.is_object()) bad(field, "expected an object");
    std::string fam = need_str(j, field, "family");
    try {
        if (fam == "powerlaw")
            return gauge::MeasureSpec::power_law(need_num(j, field, "s"), static_cast<int>(need_int(j, field, "d")));
        if (fam == "discrete")
            return gauge::MeasureSpec::discrete(parse_radii(j.at("radii"), field + ".radii"),
                                                static_cast<int>(need_int(j, field, "d")));
        if (fam == "pushforward")
            return gauge::MeasureSpec::pushforward(parse_measure(j.at("base"), field + ".base"),
                                                   need_num(j, field, "alpha"));
        if (fam == "scaled")
            return gauge::MeasureSpec::scaled(need_num(j, field, "c"), parse_measure(j.at("base"), field + ".base"));
    } catch (const validation_error& e) {
        bad(field, e.what());
    } catch (const json::exception&) {
        bad(field, "missing nested object");
    }
    bad(field + ".family", "unknown measure family '" + fam + "'");
}

sys::RateSpec parse_rate(const json& j, const std::string& field) {
    if (!j.is_object()) bad(field, "expected an object");
    sys::RateSpec r;
    if (j.contains("family") && j["family"] != "power" && j["family"] != "powerlog")
        bad(field + ".family", "unknown rate family");
    r.tau = need_num(j, field, "tau");
    r.c = j.contains("c") ? need_num(j, field, "c") : 1.0;
    r.log_exp = j.contains("log_exp") ? need_num(j, field, "log_exp") : 0.0;
    try {
        r.validate();
    } catch (const validation_error& e) {
        bad(field, e.what());
    }
    return r;
}

sys::Box parse_box(const json& j, const std::string& field) {
    if (!j.is_array() || j.size() != 2) bad(field, "expected [lo, hi] or [[lo...],[hi...]]");
    sys::Box b;
    if (j[0].is_number()) {
        b = sys::Box::interval(j[0].get<double>(), j[1].get<double>());
    } else {
        b.lo = j[0].get<std::vector<double>>();
        b.hi = j[1].get<std::vector<double>>();
    }
    try {
        b.validate();
    } catch (const validation_error& e) {
        bad(field, e.what());
    }
    return b;
}

sys::ApproxSystemSpec parse_system(const json& j, const std::string& field) {
    if (!j.is_object()) bad(field, "expected an object");
    std::string kind = need_str(j, field, "kind");
    try {
        sys::Box region = j.contains("region") ? parse_box(j["region"], field + ".region")
                                               : sys::Box::interval(0.0, 1.0);
        if (kind == "hom") {
            int d = static_cast<int>(need_int(j, field, "d"));
            if (!j.contains("region")) region = sys::Box::unit(d);
            return sys::ApproxSystemSpec::hom_rational(d, parse_rate(j.at("psi"), field + ".psi"), region);
        }
        if (kind == "inhom") {
            int d = static_cast<int>(need_int(j, field, "d"));
            if (!j.contains("region")) region = sys::Box::unit(d);
            return sys::ApproxSystemSpec::inhom_rational(d, parse_point(j.at("alpha"), field + ".alpha"),
                                                         parse_rate(j.at("psi"), field + ".psi"), region);
        }
        if (kind == "algebraic")
            return sys::ApproxSystemSpec::algebraic(static_cast<int>(need_int(j, field, "n")),
                                                    parse_rate(j.at("psi"), field + ".psi"), region);
        if (kind == "fracpart") {
            sys::ApproxSystemSpec::FracGen gen;
            const json& jg = j.at("generator");
            std::string type = need_str(jg, field + ".generator", "type");
            if (type == "linear") {
                gen.type = sys::ApproxSystemSpec::FracGen::Type::linear;
                gen.x = parse_real(jg.at("x"), field + ".generator.x");
            } else if (type == "poly") {
                gen.type = sys::ApproxSystemSpec::FracGen::Type::polynomial;
                gen.x = parse_real(jg.at("x"), field + ".generator.x");
                for (const auto& c : jg.at("coeffs")) gen.poly.emplace_back(c.get<std::int64_t>());
            } else if (type == "basepow") {
                gen.type = sys::ApproxSystemSpec::FracGen::Type::base_power;
                gen.base = static_cast<int>(need_int(jg, field + ".generator", "b"));
                gen.x = parse_real(jg.at("x"), field + ".generator.x");
            } else if (type == "fastgrowth") {
                gen.type = sys::ApproxSystemSpec::FracGen::Type::fast_growth;
                gen.growth = jg.contains("rule") ? jg["rule"].get<std::string>() : "b_nsq";
                gen.base = jg.contains("b") ? static_cast<int>(need_int(jg, field + ".generator", "b")) : 2;
                gen.x = parse_real(jg.at("x"), field + ".generator.x");
            } else {
                bad(field + ".generator.type", "unknown generator '" + type + "'");
            }
            return sys::ApproxSystemSpec::fractional_part(std::move(gen),
                                                          parse_radii(j.at("radii"), field + ".radii"));
        }
        if (kind == "random")
            return sys::ApproxSystemSpec::random_uniform(region, parse_radii(j.at("radii"), field + ".radii"),
                                                         static_cast<std::uint64_t>(need_int(j, field, "seed")));
        if (kind == "poisson")
            return sys::ApproxSystemSpec::poisson(parse_measure(j.at("measure"), field + ".measure"), region,
                                                  need_num(j, field, "rho_min"),
                                                  static_cast<std::uint64_t>(need_int(j, field, "seed")));
    } catch (const validation_error&) {
        throw;
    } catch (const json::exception& e) {
        bad(field, std::string("missing or malformed member: ") + e.what());
    }
    bad(field + ".kind", "unknown system kind '" + kind + "'");
}

}  // namespace ubiq::config

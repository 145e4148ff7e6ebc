#include "procdist/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "json_io.hpp"

namespace procdist {

namespace detail {

namespace {

[[noreturn]] void field_error(const std::string& where, const std::string& what) {
    fail(Errc::parse_error, where + ": " + what);
}

const json& field(const json& obj, const char* key, const std::string& where) {
    const auto it = obj.find(key);
    if (it == obj.end()) {
        field_error(where, std::string("missing field \"") + key + "\"");
    }
    return *it;
}

double number(const json& j, const std::string& where) {
    if (!j.is_number()) {
        field_error(where, "expected a number");
    }
    return j.get<double>();
}

std::uint64_t whole(const json& j, const std::string& where) {
    if (j.is_number_unsigned() || (j.is_number_integer() && j.get<long long>() >= 0)) {
        return j.get<std::uint64_t>();
    }
    if (j.is_number_float()) {
        const double v = j.get<double>();
        if (v >= 0 && v == std::floor(v) && v < 1.8e19) {
            return static_cast<std::uint64_t>(v);
        }
    }
    field_error(where, "expected a nonnegative integer");
}

std::vector<double> vec(const json& j, const std::string& where) {
    if (!j.is_array()) {
        field_error(where, "expected an array of numbers");
    }
    std::vector<double> out;
    for (std::size_t i = 0; i < j.size(); ++i) {
        out.push_back(number(j[i], where + "[" + std::to_string(i) + "]"));
    }
    return out;
}

Matrix matrix(const json& j, const std::string& where) {
    if (!j.is_array()) {
        field_error(where, "expected an array of rows");
    }
    Matrix out;
    for (std::size_t i = 0; i < j.size(); ++i) {
        out.push_back(vec(j[i], where + "[" + std::to_string(i) + "]"));
    }
    return out;
}

std::optional<std::vector<double>> init_field(const json& obj, const std::string& where) {
    const auto it = obj.find("init");
    if (it == obj.end() || (it->is_string() && it->get<std::string>() == "stationary")) {
        return std::nullopt;
    }
    if (it->is_string()) {
        field_error(where + ".init", "expected \"stationary\" or an array");
    }
    return vec(*it, where + ".init");
}

json init_json(const std::optional<std::vector<double>>& init) {
    return init ? json(*init) : json("stationary");
}

ProcessModel::Spec spec_from_json(const json& j, const std::string& where) {
    if (!j.is_object()) {
        field_error(where, "expected a model object");
    }
    const auto& type_field = field(j, "type", where);
    if (!type_field.is_string()) {
        field_error(where + ".type", "expected a string");
    }
    const auto type = type_field.get<std::string>();
    if (type == "iid") {
        if (j.contains("p") && !j.contains("probs")) {
            const double p = number(j["p"], where + ".p");
            return IidSpec{{1.0 - p, p}};
        }
        return IidSpec{vec(field(j, "probs", where), where + ".probs")};
    }
    if (type == "markov") {
        MarkovSpec s;
        if (j.contains("p") && j.contains("q") && !j.contains("transition")) {
            const double p = number(j["p"], where + ".p");
            const double q = number(j["q"], where + ".q");
            s.transition = {{1.0 - p, p}, {q, 1.0 - q}};
        } else {
            s.transition = matrix(field(j, "transition", where), where + ".transition");
        }
        s.order = j.contains("order") ? whole(j["order"], where + ".order") : 1;
        if (j.contains("alphabet")) {
            s.alphabet = static_cast<std::uint32_t>(whole(j["alphabet"], where + ".alphabet"));
        } else {
            s.alphabet = s.transition.empty() ? 0 : static_cast<std::uint32_t>(s.transition[0].size());
        }
        s.init = init_field(j, where);
        return s;
    }
    if (type == "hmm") {
        HmmSpec s;
        s.transition = matrix(field(j, "transition", where), where + ".transition");
        s.emission = matrix(field(j, "emission", where), where + ".emission");
        s.init = init_field(j, where);
        return s;
    }
    if (type == "translation") {
        TranslationSpec s;
        s.alpha = number(field(j, "alpha", where), where + ".alpha");
        if (j.contains("r0")) {
            s.r0 = number(j["r0"], where + ".r0");
        }
        return s;
    }
    if (type == "diagonal") {
        DiagonalSpec s;
        s.delta = number(field(j, "delta", where), where + ".delta");
        const auto& levels = field(j, "levels", where);
        if (!levels.is_array()) {
            field_error(where + ".levels", "expected an array of integers");
        }
        for (std::size_t i = 0; i < levels.size(); ++i) {
            s.levels.push_back(whole(levels[i], where + ".levels[" + std::to_string(i) + "]"));
        }
        if (j.contains("start")) {
            const auto& st = j["start"];
            if (!st.is_string() || (st != "zero" && st != "geometric")) {
                field_error(where + ".start", "expected \"zero\" or \"geometric\"");
            }
            s.start_at_zero = st == "zero";
        }
        return s;
    }
    field_error(where + ".type", "unknown model type \"" + type + "\" (expected iid, markov, hmm, translation, diagonal)");
}

std::pair<std::size_t, std::size_t> line_col(std::string_view text, std::size_t byte) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < std::min(byte, text.size()); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return {line, col};
}

} // namespace

json parse_json_text(std::string_view text, std::string_view source) {
    try {
        return json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        // byte points one past the offending character
        const auto [line, col] = line_col(text, e.byte == 0 ? 0 : e.byte - 1);
        fail(Errc::parse_error, std::string(source) + ":" + std::to_string(line) + ":" + std::to_string(col) +
                                    ": malformed JSON");
    }
}

ProcessModel model_from_json(const json& j, const std::string& where) {
    auto spec = spec_from_json(j, where);
    try {
        return ProcessModel(std::move(spec));
    } catch (const Error& e) {
        fail(e.code() == Errc::invalid_argument ? Errc::parse_error : e.code(), where + ": " + e.what());
    }
}

json model_to_json(const ProcessModel& m) {
    return std::visit(
        [](const auto& s) -> json {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, IidSpec>) {
                return {{"type", "iid"}, {"probs", s.probs}};
            } else if constexpr (std::is_same_v<T, MarkovSpec>) {
                return {{"type", "markov"}, {"order", s.order}, {"alphabet", s.alphabet},
                        {"transition", s.transition}, {"init", init_json(s.init)}};
            } else if constexpr (std::is_same_v<T, HmmSpec>) {
                return {{"type", "hmm"}, {"transition", s.transition}, {"emission", s.emission}, {"init", init_json(s.init)}};
            } else if constexpr (std::is_same_v<T, TranslationSpec>) {
                json j = {{"type", "translation"}, {"alpha", s.alpha}};
                if (s.r0) {
                    j["r0"] = *s.r0;
                }
                return j;
            } else {
                return {{"type", "diagonal"}, {"delta", s.delta}, {"levels", s.levels},
                        {"start", s.start_at_zero ? "zero" : "geometric"}};
            }
        },
        m.spec());
}

json truncation_json(const Truncation& t) {
    json j = {{"mode", mode_name(t.mode)}};
    if (t.k_max > 0) {
        j["k_max"] = t.k_max;
    }
    if (t.m_max > 0) {
        j["m_max"] = t.m_max;
    }
    if (t.l_max > 0) {
        j["l_max"] = t.l_max;
    }
    return j;
}

json estimate_json(const DistanceEstimate& e) {
    json levels = json::array();
    for (const auto& lt : e.per_level) {
        json row = {{"m", lt.m}, {"weight", lt.weight}, {"term", lt.term}};
        if (lt.l > 0) {
            row["l"] = lt.l;
        }
        levels.push_back(row);
    }
    json j = {{"value", e.value}, {"truncation", truncation_json(e.truncation)}, {"per_level", levels}};
    if (e.truncation.mode == Truncation::Mode::exact_tail) {
        j["min_gap"] = e.min_gap ? json(*e.min_gap) : json(nullptr);
        j["tail_level"] = e.tail_level;
    }
    return j;
}

json sum_information_json(const SumInformation& s) {
    json levels = json::array();
    for (const auto& lt : s.per_level) {
        json row = {{"m", lt.m}, {"weight", lt.weight}, {"term", lt.term}};
        if (lt.l > 0) {
            row["l"] = lt.l;
        }
        levels.push_back(row);
    }
    return {{"value", s.value}, {"truncation", truncation_json(s.truncation)}, {"per_level", levels}};
}

json changepoint_json(const ChangePointEstimate& e) {
    json j = {{"thetas", e.thetas}, {"splits", e.splits}, {"scores", e.scores}, {"n", e.n},
              {"truncation", truncation_json(e.truncation)}};
    if (e.scan_range) {
        j["scan_range"] = {{"first", e.scan_range->first}, {"last", e.scan_range->second},
                           {"rule", "ceil(alpha n) <= t <= floor(beta n)"}};
    }
    return j;
}

json ranked_list_json(const RankedList& l) {
    json c = json::array();
    for (const auto& r : l.candidates) {
        c.push_back({{"theta", r.theta}, {"split", r.split}, {"score", r.score}});
    }
    return {{"candidates", c}, {"n", l.n}, {"truncation", truncation_json(l.truncation)}};
}

json clustering_json(const Clustering& c) {
    return {{"assignment", c.assignment}, {"centers", c.centers}, {"distance_evaluations", c.distance_evaluations}};
}

json verdict_json(const TestVerdict& v) {
    json j = {{"decision", v.decision}, {"truncation", truncation_json(v.truncation)}};
    if (!v.statistics.empty()) {
        j["d_h0"] = v.statistics[0];
    }
    if (v.statistics.size() > 1) {
        j["d_h1"] = v.statistics[1];
    }
    if (!v.thresholds.empty()) {
        j["gamma"] = v.thresholds[0];
    }
    return j;
}

json classify_json(const ClassifyResult& r) {
    return {{"label", r.label == Label::x ? "x" : "y"}, {"d_xz", r.d_xz.value}, {"d_yz", r.d_yz.value},
            {"truncation", truncation_json(r.d_xz.truncation)}};
}

json calibration_to_json(const CalibrationTable& cal) {
    json models = json::array();
    for (const auto& m : cal.hypothesis.models) {
        models.push_back(model_to_json(m));
    }
    return {{"hypothesis_hash", hypothesis_hash(cal.hypothesis)},
            {"hypothesis", {{"label", cal.hypothesis.label}, {"models", models}}},
            {"n", cal.n},
            {"theta", cal.theta},
            {"gamma", cal.gamma},
            {"mc_runs", cal.mc_runs},
            {"seed", cal.seed},
            {"truncation", truncation_json(cal.truncation)},
            {"model_quantiles", cal.model_quantiles}};
}

} // namespace detail

using detail::json;

namespace {

bool is_symbol_token(std::string_view tok) {
    return !tok.empty() && std::all_of(tok.begin(), tok.end(), [](char c) { return c >= '0' && c <= '9'; });
}

std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) {
        return {};
    }
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

struct Token {
    std::string text;
    std::size_t line;
};

Sample build_sample(const std::vector<Token>& tokens, SampleKind kind, std::uint32_t alphabet_size,
                    std::string_view source) {
    auto where = [&](const Token& t) { return std::string(source) + ":" + std::to_string(t.line); };
    if (kind == SampleKind::automatic) {
        const bool all_symbols = std::all_of(tokens.begin(), tokens.end(), [](const Token& t) { return is_symbol_token(t.text); });
        kind = all_symbols ? SampleKind::discrete : SampleKind::real;
    }
    if (kind == SampleKind::discrete) {
        std::vector<Symbol> values;
        values.reserve(tokens.size());
        Symbol top = 0;
        for (const auto& t : tokens) {
            unsigned long long v = 0;
            const auto* end = t.text.data() + t.text.size();
            const auto r = std::from_chars(t.text.data(), end, v);
            if (!is_symbol_token(t.text) || r.ptr != end || r.ec != std::errc{} || v > 0xFFFFFFFEull) {
                fail(Errc::parse_error, where(t) + ": \"" + t.text + "\" is not a symbol index (nonnegative integer)");
            }
            values.push_back(static_cast<Symbol>(v));
            top = std::max(top, static_cast<Symbol>(v));
        }
        std::uint32_t size = std::max<std::uint32_t>(2, top + 1);
        if (alphabet_size != 0) {
            if (!values.empty() && top >= alphabet_size) {
                fail(Errc::alphabet_mismatch, std::string(source) + ": symbol " + std::to_string(top) +
                                                  " outside alphabet of size " + std::to_string(alphabet_size));
            }
            size = alphabet_size;
        }
        return Sample::discrete(size, std::move(values));
    }
    std::vector<double> values;
    values.reserve(tokens.size());
    for (const auto& t : tokens) {
        double v = 0;
        const auto* end = t.text.data() + t.text.size();
        const auto r = std::from_chars(t.text.data(), end, v);
        if (r.ptr != end || r.ec != std::errc{} || !std::isfinite(v)) {
            fail(Errc::parse_error, where(t) + ": \"" + t.text + "\" is not a finite number");
        }
        values.push_back(v);
    }
    return Sample::real(std::move(values));
}

} // namespace

Sample parse_sample_csv(std::string_view text, SampleKind kind, std::uint32_t alphabet_size, std::string_view source) {
    std::vector<Token> tokens;
    std::size_t line = 0;
    while (!text.empty()) {
        ++line;
        const auto nl = text.find('\n');
        std::string_view row = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        if (const auto hash = row.find('#'); hash != std::string_view::npos) {
            row = row.substr(0, hash);
        }
        row = trim(row);
        if (row.empty()) {
            continue;
        }
        if (row.find_first_of(", \t;") != std::string_view::npos) {
            fail(Errc::parse_error, std::string(source) + ":" + std::to_string(line) + ": expected one value per line");
        }
        tokens.push_back({std::string(row), line});
    }
    return build_sample(tokens, kind, alphabet_size, source);
}

Sample parse_sample_json(std::string_view text, SampleKind kind, std::uint32_t alphabet_size, std::string_view source) {
    const json doc = detail::parse_json_text(text, source);
    const json* values = &doc;
    if (doc.is_object()) {
        const auto it = doc.find("values");
        if (it == doc.end()) {
            fail(Errc::parse_error, std::string(source) + ": missing field \"values\"");
        }
        values = &*it;
        if (alphabet_size == 0 && doc.contains("alphabet")) {
            const auto& a = doc["alphabet"];
            if (a.is_string() && a == "real") {
                kind = SampleKind::real;
            } else if (a.is_number_unsigned()) {
                alphabet_size = a.get<std::uint32_t>();
                kind = SampleKind::discrete;
            } else {
                fail(Errc::parse_error, std::string(source) + ".alphabet: expected a size or \"real\"");
            }
        }
    }
    if (!values->is_array()) {
        fail(Errc::parse_error, std::string(source) + ": expected an array of values");
    }
    std::vector<Token> tokens;
    for (std::size_t i = 0; i < values->size(); ++i) {
        const auto& v = (*values)[i];
        if (!v.is_number()) {
            fail(Errc::parse_error, std::string(source) + "[" + std::to_string(i) + "]: expected a number");
        }
        tokens.push_back({v.dump(), i + 1});
    }
    return build_sample(tokens, kind, alphabet_size, source);
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        fail(Errc::io_error, "cannot open " + path);
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, std::string_view contents) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        fail(Errc::io_error, "cannot write " + path);
    }
    out << contents;
    if (!out) {
        fail(Errc::io_error, "write failed for " + path);
    }
}

Sample load_sample(const std::string& path, SampleKind kind, std::uint32_t alphabet_size) {
    const std::string text = read_file(path);
    if (path.size() >= 5 && path.compare(path.size() - 5, 5, ".json") == 0) {
        return parse_sample_json(text, kind, alphabet_size, path);
    }
    return parse_sample_csv(text, kind, alphabet_size, path);
}

std::string format_sample_csv(const Sample& x) {
    std::string out;
    if (x.is_discrete()) {
        for (Symbol s : x.symbols()) {
            out += std::to_string(s);
            out += '\n';
        }
        return out;
    }
    char buf[32];
    for (double v : x.reals()) {
        std::snprintf(buf, sizeof buf, "%.17g\n", v);
        out += buf;
    }
    return out;
}

void save_sample_csv(const Sample& x, const std::string& path) { write_file(path, format_sample_csv(x)); }

Sample with_alphabet_size(const Sample& x, std::uint32_t alphabet_size) {
    if (!x.is_discrete()) {
        fail(Errc::alphabet_mismatch, "cannot resize the alphabet of a real-valued sample");
    }
    if (alphabet_size < x.alphabet().size()) {
        fail(Errc::alphabet_mismatch, "alphabet size " + std::to_string(alphabet_size) + " is smaller than the sample's " +
                                          std::to_string(x.alphabet().size()));
    }
    const auto s = x.symbols();
    return Sample::discrete(alphabet_size, std::vector<Symbol>(s.begin(), s.end()));
}

ProcessModel parse_model(std::string_view text, std::string_view source) {
    return detail::model_from_json(detail::parse_json_text(text, source), std::string(source));
}

ProcessModel load_model(const std::string& path) { return parse_model(read_file(path), path); }

std::string model_json(const ProcessModel& model) { return detail::model_to_json(model).dump(); }

Hypothesis parse_hypothesis(std::string_view text, std::string_view source) {
    const json doc = detail::parse_json_text(text, source);
    const std::string where(source);
    Hypothesis h;
    const json* models = &doc;
    if (doc.is_object() && doc.contains("models")) {
        models = &doc["models"];
        if (doc.contains("label")) {
            if (!doc["label"].is_string()) {
                fail(Errc::parse_error, where + ".label: expected a string");
            }
            h.label = doc["label"].get<std::string>();
        }
    }
    if (models->is_object()) {
        h.models.push_back(detail::model_from_json(*models, where));
    } else if (models->is_array()) {
        for (std::size_t i = 0; i < models->size(); ++i) {
            h.models.push_back(detail::model_from_json((*models)[i], where + ".models[" + std::to_string(i) + "]"));
        }
    } else {
        fail(Errc::parse_error, where + ": expected a model, an array of models, or {\"models\": [...]}");
    }
    if (h.label.empty()) {
        h.label = where;
    }
    h.alphabet_size();
    return h;
}

Hypothesis load_hypothesis(const std::string& path) { return parse_hypothesis(read_file(path), path); }

std::string hypothesis_hash(const Hypothesis& h) {
    json models = json::array();
    for (const auto& m : h.models) {
        models.push_back(detail::model_to_json(m));
    }
    std::uint64_t hash = 0xcbf29ce484222325ull;
    for (unsigned char c : models.dump()) {
        hash ^= c;
        hash *= 0x100000001b3ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(hash));
    return buf;
}

std::string calibration_json(const CalibrationTable& cal) { return detail::calibration_to_json(cal).dump(2); }

CalibrationTable parse_calibration(std::string_view text, std::string_view source) {
    const json doc = detail::parse_json_text(text, source);
    const std::string where(source);
    if (!doc.is_object()) {
        fail(Errc::parse_error, where + ": expected a calibration object");
    }
    auto get = [&](const char* key) -> const json& {
        const auto it = doc.find(key);
        if (it == doc.end()) {
            fail(Errc::parse_error, where + ": missing field \"" + key + "\"");
        }
        return *it;
    };
    CalibrationTable cal;
    cal.hypothesis = parse_hypothesis(get("hypothesis").dump(), where + ".hypothesis");
    if (doc.contains("hypothesis_hash") && doc["hypothesis_hash"] != hypothesis_hash(cal.hypothesis)) {
        fail(Errc::calibration_mismatch, where + ": hypothesis_hash does not match the stored models");
    }
    try {
        cal.n = get("n").get<std::size_t>();
        cal.theta = get("theta").get<double>();
        cal.gamma = get("gamma").get<double>();
        cal.mc_runs = get("mc_runs").get<std::size_t>();
        cal.seed = get("seed").get<std::uint64_t>();
        const auto& t = get("truncation");
        cal.truncation = Truncation::discrete(t.at("k_max").get<std::size_t>());
        if (doc.contains("model_quantiles")) {
            cal.model_quantiles = doc["model_quantiles"].get<std::vector<double>>();
        }
    } catch (const json::exception& e) {
        fail(Errc::parse_error, where + ": " + e.what());
    }
    return cal;
}

CalibrationTable load_calibration(const std::string& path) { return parse_calibration(read_file(path), path); }

void save_calibration(const CalibrationTable& cal, const std::string& path) { write_file(path, calibration_json(cal)); }

} // namespace procdist

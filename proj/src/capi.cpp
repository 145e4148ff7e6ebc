#include "procdist.h"

#include <algorithm>
#include <cstdlib>
#include <cstring>
#include <new>
#include <string>

#include "json_io.hpp"
#include "procdist/io.hpp"
#include "procdist/parallel.hpp"

using namespace procdist;

struct pd_sample {
    Sample value;
};
struct pd_model {
    ProcessModel value;
};
struct pd_hypothesis {
    Hypothesis value;
};
struct pd_calibration {
    CalibrationTable value;
};

namespace {

thread_local std::string last_error;

pd_status to_status(Errc code) {
    switch (code) {
    case Errc::invalid_argument: return PD_ERR_INVALID_ARGUMENT;
    case Errc::alphabet_mismatch: return PD_ERR_ALPHABET_MISMATCH;
    case Errc::unsupported_model: return PD_ERR_UNSUPPORTED_MODEL;
    case Errc::no_unique_stationary: return PD_ERR_NO_UNIQUE_STATIONARY;
    case Errc::infeasible: return PD_ERR_INFEASIBLE;
    case Errc::calibration_mismatch: return PD_ERR_CALIBRATION_MISMATCH;
    case Errc::parse_error: return PD_ERR_PARSE;
    case Errc::io_error: return PD_ERR_IO;
    }
    return PD_ERR_INTERNAL;
}

template <class F>
pd_status guarded(F&& body) {
    try {
        last_error.clear();
        body();
        return PD_OK;
    } catch (const Error& e) {
        last_error = e.what();
        return to_status(e.code());
    } catch (const std::bad_alloc&) {
        last_error = "out of memory";
    } catch (const std::exception& e) {
        last_error = e.what();
    } catch (...) {
        last_error = "unknown error";
    }
    return PD_ERR_INTERNAL;
}

template <class T>
const T& deref(const T* p, const char* what) {
    if (p == nullptr) {
        fail(Errc::invalid_argument, std::string(what) + " is NULL");
    }
    return *p;
}

std::string text(const char* p, const char* what) {
    if (p == nullptr) {
        fail(Errc::invalid_argument, std::string(what) + " is NULL");
    }
    return p;
}

template <class T>
void check_out(T* p) {
    if (p == nullptr) {
        fail(Errc::invalid_argument, "output pointer is NULL");
    }
}

char* dup_string(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (out == nullptr) {
        throw std::bad_alloc();
    }
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

void emit(char** json_out, const detail::json& j) {
    if (json_out != nullptr) {
        *json_out = dup_string(j.dump());
    }
}

Truncation from_c(pd_truncation t) {
    switch (t.mode) {
    case PD_TRUNC_AUTO: return Truncation::automatic();
    case PD_TRUNC_FIXED:
        if (t.k_max > 0 && t.m_max == 0 && t.l_max == 0) {
            return Truncation::discrete(t.k_max);
        }
        if (t.k_max == 0) {
            return Truncation::real(t.m_max, t.l_max);
        }
        fail(Errc::invalid_argument, "give either k_max (discrete) or m_max and l_max (real), not both");
    case PD_TRUNC_EXACT_TAIL: return Truncation::exact_tail(t.m_max);
    }
    fail(Errc::invalid_argument, "unknown truncation mode");
}

std::vector<Sample> collect(const pd_sample* const* samples, std::size_t count) {
    if (count > 0 && samples == nullptr) {
        fail(Errc::invalid_argument, "sample array is NULL");
    }
    std::vector<Sample> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        out.push_back(deref(samples[i], "sample").value);
    }
    return out;
}

} // namespace

extern "C" {

const char* pd_version(void) { return PROCDIST_VERSION; }

const char* pd_last_error(void) { return last_error.c_str(); }

const char* pd_status_name(pd_status status) {
    switch (status) {
    case PD_OK: return "ok";
    case PD_ERR_INTERNAL: return "internal";
    default: return errc_name(static_cast<Errc>(status));
    }
}

void pd_string_free(char* s) { std::free(s); }

void pd_set_max_threads(size_t threads) { set_max_threads(threads); }

pd_status pd_sample_from_symbols(uint32_t alphabet_size, const uint32_t* values, size_t n, pd_sample** out) {
    return guarded([&] {
        check_out(out);
        if (n > 0 && values == nullptr) {
            fail(Errc::invalid_argument, "values is NULL");
        }
        *out = new pd_sample{Sample::discrete(alphabet_size, std::vector<Symbol>(values, values + n))};
    });
}

pd_status pd_sample_from_reals(const double* values, size_t n, pd_sample** out) {
    return guarded([&] {
        check_out(out);
        if (n > 0 && values == nullptr) {
            fail(Errc::invalid_argument, "values is NULL");
        }
        *out = new pd_sample{Sample::real(std::vector<double>(values, values + n))};
    });
}

pd_status pd_sample_load(const char* path, pd_sample_kind kind, uint32_t alphabet_size, pd_sample** out) {
    return guarded([&] {
        check_out(out);
        const auto k = kind == PD_KIND_DISCRETE ? SampleKind::discrete
                       : kind == PD_KIND_REAL   ? SampleKind::real
                                                : SampleKind::automatic;
        *out = new pd_sample{load_sample(text(path, "path"), k, alphabet_size)};
    });
}

pd_status pd_sample_save_csv(const pd_sample* s, const char* path) {
    return guarded([&] { save_sample_csv(deref(s, "sample").value, text(path, "path")); });
}

pd_status pd_sample_widen(const pd_sample* s, uint32_t alphabet_size, pd_sample** out) {
    return guarded([&] {
        check_out(out);
        *out = new pd_sample{with_alphabet_size(deref(s, "sample").value, alphabet_size)};
    });
}

pd_status pd_sample_slice(const pd_sample* s, size_t begin, size_t end, pd_sample** out) {
    return guarded([&] {
        check_out(out);
        *out = new pd_sample{deref(s, "sample").value.slice(begin, end)};
    });
}

size_t pd_sample_length(const pd_sample* s) { return s == nullptr ? 0 : s->value.size(); }

int pd_sample_is_discrete(const pd_sample* s) { return s != nullptr && s->value.is_discrete() ? 1 : 0; }

uint32_t pd_sample_alphabet_size(const pd_sample* s) { return s == nullptr ? 0 : s->value.alphabet().size(); }

size_t pd_sample_copy_symbols(const pd_sample* s, uint32_t* buffer, size_t capacity) {
    if (s == nullptr || buffer == nullptr || !s->value.is_discrete()) {
        return 0;
    }
    const auto v = s->value.symbols();
    const size_t n = std::min(capacity, v.size());
    std::copy_n(v.begin(), n, buffer);
    return n;
}

size_t pd_sample_copy_reals(const pd_sample* s, double* buffer, size_t capacity) {
    if (s == nullptr || buffer == nullptr || !s->value.is_real()) {
        return 0;
    }
    const auto v = s->value.reals();
    const size_t n = std::min(capacity, v.size());
    std::copy_n(v.begin(), n, buffer);
    return n;
}

void pd_sample_free(pd_sample* s) { delete s; }

pd_status pd_model_from_json(const char* json, pd_model** out) {
    return guarded([&] {
        check_out(out);
        *out = new pd_model{parse_model(text(json, "json"), "model")};
    });
}

pd_status pd_model_load(const char* path, pd_model** out) {
    return guarded([&] {
        check_out(out);
        *out = new pd_model{load_model(text(path, "path"))};
    });
}

pd_status pd_model_to_json(const pd_model* m, char** json_out) {
    return guarded([&] {
        check_out(json_out);
        *json_out = dup_string(model_json(deref(m, "model").value));
    });
}

uint32_t pd_model_alphabet_size(const pd_model* m) { return m == nullptr ? 0 : m->value.alphabet_size(); }

void pd_model_free(pd_model* m) { delete m; }

pd_status pd_simulate(const pd_model* m, size_t n, uint64_t seed, pd_sample** out) {
    return guarded([&] {
        check_out(out);
        *out = new pd_sample{sample(deref(m, "model").value, n, seed)};
    });
}

pd_status pd_distance(const pd_sample* x, const pd_sample* y, pd_truncation t, double* value, char** json_out) {
    return guarded([&] {
        const auto e = dd(deref(x, "x").value, deref(y, "y").value, from_c(t));
        if (value != nullptr) {
            *value = e.value;
        }
        emit(json_out, detail::estimate_json(e));
    });
}

pd_status pd_distance_model(const pd_sample* x, const pd_model* m, pd_truncation t, double* value, char** json_out) {
    return guarded([&] {
        const auto e = dd_sample_model(deref(x, "x").value, deref(m, "model").value, from_c(t));
        if (value != nullptr) {
            *value = e.value;
        }
        emit(json_out, detail::estimate_json(e));
    });
}

pd_status pd_sum_information(const pd_sample* const* samples, size_t count, pd_truncation t, double* value,
                             char** json_out) {
    return guarded([&] {
        const auto all = collect(samples, count);
        const auto s = sum_information(all, from_c(t));
        if (value != nullptr) {
            *value = s.value;
        }
        emit(json_out, detail::sum_information_json(s));
    });
}

pd_status pd_classify(const pd_sample* x, const pd_sample* y, const pd_sample* z, pd_truncation t, int* label,
                      char** json_out) {
    return guarded([&] {
        const auto r = three_sample(deref(x, "x").value, deref(y, "y").value, deref(z, "z").value, from_c(t));
        if (label != nullptr) {
            *label = r.label == Label::x ? 0 : 1;
        }
        emit(json_out, detail::classify_json(r));
    });
}

pd_status pd_cluster(const pd_sample* const* samples, size_t count, size_t clusters, pd_truncation t,
                     size_t* assignment, char** json_out) {
    return guarded([&] {
        const auto all = collect(samples, count);
        const auto c = cluster_offline(all, clusters, from_c(t));
        if (assignment != nullptr) {
            std::copy(c.assignment.begin(), c.assignment.end(), assignment);
        }
        emit(json_out, detail::clustering_json(c));
    });
}

pd_status pd_changepoint_single(const pd_sample* z, double alpha, double beta, pd_truncation t, char** json_out) {
    return guarded([&] {
        check_out(json_out);
        emit(json_out, detail::changepoint_json(single_changepoint(deref(z, "z").value, alpha, beta, from_c(t))));
    });
}

pd_status pd_changepoint_known_k(const pd_sample* z, size_t count, double lambda, pd_truncation t, char** json_out) {
    return guarded([&] {
        check_out(json_out);
        emit(json_out,
             detail::changepoint_json(multi_changepoint_known_k(deref(z, "z").value, count, lambda, from_c(t))));
    });
}

pd_status pd_changepoint_list(const pd_sample* z, double lambda, pd_truncation t, char** json_out) {
    return guarded([&] {
        check_out(json_out);
        emit(json_out, detail::ranked_list_json(list_changepoints(deref(z, "z").value, lambda, from_c(t))));
    });
}

pd_status pd_changepoint_known_r(const pd_sample* z, size_t distributions, double lambda, pd_truncation t,
                                 char** json_out) {
    return guarded([&] {
        check_out(json_out);
        const auto r = multi_changepoint_known_r(deref(z, "z").value, distributions, lambda, from_c(t));
        auto j = detail::changepoint_json(r.estimate);
        j["count"] = r.count;
        emit(json_out, j);
    });
}

pd_status pd_hypothesis_from_json(const char* json, pd_hypothesis** out) {
    return guarded([&] {
        check_out(out);
        *out = new pd_hypothesis{parse_hypothesis(text(json, "json"), "hypothesis")};
    });
}

pd_status pd_hypothesis_load(const char* path, pd_hypothesis** out) {
    return guarded([&] {
        check_out(out);
        *out = new pd_hypothesis{load_hypothesis(text(path, "path"))};
    });
}

pd_status pd_hypothesis_from_model(const pd_model* m, pd_hypothesis** out) {
    return guarded([&] {
        check_out(out);
        *out = new pd_hypothesis{Hypothesis({deref(m, "model").value}, "model")};
    });
}

uint32_t pd_hypothesis_alphabet_size(const pd_hypothesis* h) {
    return h == nullptr ? 0 : h->value.models.front().alphabet_size();
}

void pd_hypothesis_free(pd_hypothesis* h) { delete h; }

pd_status pd_calibrate(const pd_hypothesis* h, size_t n, double theta, size_t mc_runs, uint64_t seed,
                       pd_calibration** out) {
    return guarded([&] {
        check_out(out);
        *out = new pd_calibration{calibrate_gamma(deref(h, "hypothesis").value, n, theta, mc_runs, seed)};
    });
}

pd_status pd_calibration_load(const char* path, pd_calibration** out) {
    return guarded([&] {
        check_out(out);
        *out = new pd_calibration{load_calibration(text(path, "path"))};
    });
}

pd_status pd_calibration_save(const pd_calibration* c, const char* path) {
    return guarded([&] { save_calibration(deref(c, "calibration").value, text(path, "path")); });
}

pd_status pd_calibration_to_json(const pd_calibration* c, char** json_out) {
    return guarded([&] {
        check_out(json_out);
        *json_out = dup_string(calibration_json(deref(c, "calibration").value));
    });
}

double pd_calibration_gamma(const pd_calibration* c) { return c == nullptr ? 0.0 : c->value.gamma; }

void pd_calibration_free(pd_calibration* c) { delete c; }

pd_status pd_test_asymmetric(const pd_sample* x, const pd_hypothesis* h0, double alpha, const pd_calibration* cal,
                             int* decision, char** json_out) {
    return guarded([&] {
        const auto v = asymmetric_test(deref(x, "x").value, deref(h0, "h0").value, alpha, deref(cal, "calibration").value);
        if (decision != nullptr) {
            *decision = v.decision;
        }
        emit(json_out, detail::verdict_json(v));
    });
}

pd_status pd_test_uniform(const pd_sample* x, const pd_hypothesis* h0, const pd_hypothesis* h1, pd_truncation t,
                          int* decision, char** json_out) {
    return guarded([&] {
        const auto v = uniform_test(deref(x, "x").value, deref(h0, "h0").value, deref(h1, "h1").value, from_c(t));
        if (decision != nullptr) {
            *decision = v.decision;
        }
        emit(json_out, detail::verdict_json(v));
    });
}

} // extern "C"

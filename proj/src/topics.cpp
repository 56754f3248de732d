#include "dyadscope/topics.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "dyadscope/error.hpp"

namespace dyadscope {

namespace {

constexpr double kDenomFloor = 1e-12;

// --- dense helpers (fixed loop order keeps runs bitwise reproducible) ---

// out = A^T * A for row-major A (n x k), result k x k symmetric.
Matrix gram_of_columns(const Matrix& a) {
    const std::size_t n = a.rows(), k = a.cols();
    Matrix out(k, k);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t p = 0; p < k; ++p) {
            const double v = a.at(i, p);
            if (v == 0.0) continue;
            for (std::size_t q = 0; q < k; ++q) out.at(p, q) += v * a.at(i, q);
        }
    }
    return out;
}

// out = H * H^T for H (k x v), result k x k.
Matrix gram_of_rows(const Matrix& h) {
    const std::size_t k = h.rows(), v = h.cols();
    Matrix out(k, k);
    for (std::size_t p = 0; p < k; ++p) {
        for (std::size_t q = p; q < k; ++q) {
            double s = 0.0;
            for (std::size_t t = 0; t < v; ++t) s += h.at(p, t) * h.at(q, t);
            out.at(p, q) = s;
            out.at(q, p) = s;
        }
    }
    return out;
}

// out = W^T * X, k x v, with X sparse.
Matrix wt_times_x(const Matrix& w, const TermDocMatrix& x) {
    const std::size_t k = w.cols();
    Matrix out(k, x.n_terms);
    for (std::size_t i = 0; i < x.n_docs; ++i) {
        for (std::size_t p = x.row_ptr[i]; p < x.row_ptr[i + 1]; ++p) {
            const std::size_t t = x.col[p];
            const double v = x.val[p];
            for (std::size_t j = 0; j < k; ++j) out.at(j, t) += w.at(i, j) * v;
        }
    }
    return out;
}

// out = X * H^T, n x k, with X sparse.
Matrix x_times_ht(const TermDocMatrix& x, const Matrix& h) {
    const std::size_t k = h.rows();
    Matrix out(x.n_docs, k);
    for (std::size_t i = 0; i < x.n_docs; ++i) {
        for (std::size_t p = x.row_ptr[i]; p < x.row_ptr[i + 1]; ++p) {
            const std::size_t t = x.col[p];
            const double v = x.val[p];
            for (std::size_t j = 0; j < k; ++j) out.at(i, j) += v * h.at(j, t);
        }
    }
    return out;
}

// out = S * H where S is k x k, H is k x v.
Matrix square_times(const Matrix& s, const Matrix& h) {
    const std::size_t k = s.rows(), v = h.cols();
    Matrix out(k, v);
    for (std::size_t p = 0; p < k; ++p) {
        for (std::size_t q = 0; q < k; ++q) {
            const double sv = s.at(p, q);
            if (sv == 0.0) continue;
            for (std::size_t t = 0; t < v; ++t) out.at(p, t) += sv * h.at(q, t);
        }
    }
    return out;
}

// out = W * S where W is n x k, S is k x k.
Matrix times_square(const Matrix& w, const Matrix& s) {
    const std::size_t n = w.rows(), k = s.rows();
    Matrix out(n, k);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t p = 0; p < k; ++p) {
            const double wv = w.at(i, p);
            if (wv == 0.0) continue;
            for (std::size_t q = 0; q < k; ++q) out.at(i, q) += wv * s.at(p, q);
        }
    }
    return out;
}

double entrywise_sum(const Matrix& m) {
    double s = 0.0;
    for (double v : m.data()) s += v;
    return s;
}

double squared_norm(const Matrix& m) {
    double s = 0.0;
    for (double v : m.data()) s += v * v;
    return s;
}

// Multiplicative step: target *= numer / max(denom, floor).
void multiplicative_update(Matrix& target, const Matrix& numer, const Matrix& denom) {
    auto& t = target.data();
    const auto& n = numer.data();
    const auto& d = denom.data();
    for (std::size_t i = 0; i < t.size(); ++i) {
        t[i] *= n[i] / std::max(d[i], kDenomFloor);
    }
}

// --- symmetric eigensolver (cyclic Jacobi), for the SVD behind NNDSVD ---

struct EigenDecomposition {
    std::vector<double> values;  // descending
    Matrix vectors;              // column j = eigenvector for values[j]
};

EigenDecomposition jacobi_eigen(Matrix a) {
    const std::size_t n = a.rows();
    Matrix v(n, n);
    for (std::size_t i = 0; i < n; ++i) v.at(i, i) = 1.0;

    double total = 0.0;
    for (double x : a.data()) total += x * x;

    const std::size_t max_sweeps = 64;
    for (std::size_t sweep = 0; sweep < max_sweeps; ++sweep) {
        double off = 0.0;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) off += a.at(p, q) * a.at(p, q);
        if (off <= total * 1e-28) break;

        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = a.at(p, q);
                if (std::abs(apq) < 1e-300) continue;
                const double app = a.at(p, p), aqq = a.at(q, q);
                const double theta = (aqq - app) / (2.0 * apq);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;

                for (std::size_t i = 0; i < n; ++i) {
                    const double aip = a.at(i, p), aiq = a.at(i, q);
                    a.at(i, p) = c * aip - s * aiq;
                    a.at(i, q) = s * aip + c * aiq;
                }
                for (std::size_t i = 0; i < n; ++i) {
                    const double api = a.at(p, i), aqi = a.at(q, i);
                    a.at(p, i) = c * api - s * aqi;
                    a.at(q, i) = s * api + c * aqi;
                }
                for (std::size_t i = 0; i < n; ++i) {
                    const double vip = v.at(i, p), viq = v.at(i, q);
                    v.at(i, p) = c * vip - s * viq;
                    v.at(i, q) = s * vip + c * viq;
                }
            }
        }
    }

    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t i, std::size_t j) { return a.at(i, i) > a.at(j, j); });

    EigenDecomposition out;
    out.values.resize(n);
    out.vectors = Matrix(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        out.values[j] = a.at(order[j], order[j]);
        for (std::size_t i = 0; i < n; ++i) out.vectors.at(i, j) = v.at(i, order[j]);
    }
    return out;
}

struct SvdTriplets {
    std::vector<double> sigma;  // descending
    Matrix u;                   // n_docs x k
    Matrix v;                   // n_terms x k
};

// Top-k singular triplets via the Gram matrix on the smaller side.
SvdTriplets truncated_svd(const TermDocMatrix& x, std::size_t k) {
    const std::size_t n = x.n_docs, m = x.n_terms;
    const bool doc_side = n <= m;
    const std::size_t g = doc_side ? n : m;

    Matrix gram(g, g);
    if (doc_side) {
        // (X X^T)_ij: dot of sparse rows i, j via a densified row i.
        std::vector<double> dense(m, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t p = x.row_ptr[i]; p < x.row_ptr[i + 1]; ++p)
                dense[x.col[p]] = x.val[p];
            for (std::size_t j = i; j < n; ++j) {
                double s = 0.0;
                for (std::size_t p = x.row_ptr[j]; p < x.row_ptr[j + 1]; ++p)
                    s += dense[x.col[p]] * x.val[p];
                gram.at(i, j) = s;
                gram.at(j, i) = s;
            }
            for (std::size_t p = x.row_ptr[i]; p < x.row_ptr[i + 1]; ++p)
                dense[x.col[p]] = 0.0;
        }
    } else {
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t p = x.row_ptr[i]; p < x.row_ptr[i + 1]; ++p) {
                for (std::size_t q = x.row_ptr[i]; q < x.row_ptr[i + 1]; ++q) {
                    gram.at(x.col[p], x.col[q]) += x.val[p] * x.val[q];
                }
            }
        }
    }

    EigenDecomposition eig = jacobi_eigen(std::move(gram));

    SvdTriplets out;
    out.sigma.resize(k);
    out.u = Matrix(n, k);
    out.v = Matrix(m, k);
    for (std::size_t j = 0; j < k; ++j) {
        const double sigma = std::sqrt(std::max(eig.values[j], 0.0));
        out.sigma[j] = sigma;

        std::vector<double> side(g);
        for (std::size_t i = 0; i < g; ++i) side[i] = eig.vectors.at(i, j);

        // Canonical sign: largest-|entry| component positive.
        std::size_t arg = 0;
        for (std::size_t i = 1; i < g; ++i)
            if (std::abs(side[i]) > std::abs(side[arg])) arg = i;
        if (side[arg] < 0.0)
            for (double& s : side) s = -s;

        if (doc_side) {
            for (std::size_t i = 0; i < n; ++i) out.u.at(i, j) = side[i];
            if (sigma > kDenomFloor) {
                for (std::size_t i = 0; i < n; ++i) {
                    const double scale = side[i] / sigma;
                    if (scale == 0.0) continue;
                    for (std::size_t p = x.row_ptr[i]; p < x.row_ptr[i + 1]; ++p)
                        out.v.at(x.col[p], j) += scale * x.val[p];
                }
            }
        } else {
            for (std::size_t t = 0; t < m; ++t) out.v.at(t, j) = side[t];
            if (sigma > kDenomFloor) {
                for (std::size_t i = 0; i < n; ++i) {
                    double s = 0.0;
                    for (std::size_t p = x.row_ptr[i]; p < x.row_ptr[i + 1]; ++p)
                        s += x.val[p] * side[x.col[p]];
                    out.u.at(i, j) = s / sigma;
                }
            }
        }
    }
    return out;
}

double matrix_mean(const TermDocMatrix& x) {
    double s = 0.0;
    for (double v : x.val) s += v;
    const double cells = static_cast<double>(x.n_docs) * static_cast<double>(x.n_terms);
    return cells > 0.0 ? s / cells : 0.0;
}

// Boutsidis-Gallopoulos seeding from the truncated SVD. Exact zeros are
// filled with the matrix mean: multiplicative updates cannot move a zero.
void init_nndsvd(const TermDocMatrix& x, std::size_t k, Matrix& w, Matrix& h) {
    SvdTriplets svd = truncated_svd(x, k);
    const std::size_t n = x.n_docs, m = x.n_terms;
    w = Matrix(n, k);
    h = Matrix(k, m);

    for (std::size_t i = 0; i < n; ++i)
        w.at(i, 0) = std::sqrt(svd.sigma[0]) * std::abs(svd.u.at(i, 0));
    for (std::size_t t = 0; t < m; ++t)
        h.at(0, t) = std::sqrt(svd.sigma[0]) * std::abs(svd.v.at(t, 0));

    for (std::size_t j = 1; j < k; ++j) {
        double xp_norm = 0.0, xn_norm = 0.0, yp_norm = 0.0, yn_norm = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double u = svd.u.at(i, j);
            (u >= 0.0 ? xp_norm : xn_norm) += u * u;
        }
        for (std::size_t t = 0; t < m; ++t) {
            const double v = svd.v.at(t, j);
            (v >= 0.0 ? yp_norm : yn_norm) += v * v;
        }
        xp_norm = std::sqrt(xp_norm);
        xn_norm = std::sqrt(xn_norm);
        yp_norm = std::sqrt(yp_norm);
        yn_norm = std::sqrt(yn_norm);

        const double mp = xp_norm * yp_norm;
        const double mn = xn_norm * yn_norm;
        if (mp < kDenomFloor && mn < kDenomFloor) continue;

        const bool positive = mp >= mn;
        const double u_norm = positive ? xp_norm : xn_norm;
        const double v_norm = positive ? yp_norm : yn_norm;
        const double scale = std::sqrt(svd.sigma[j] * (positive ? mp : mn));

        for (std::size_t i = 0; i < n; ++i) {
            const double u = svd.u.at(i, j);
            const double part = positive ? std::max(u, 0.0) : std::max(-u, 0.0);
            w.at(i, j) = scale * part / u_norm;
        }
        for (std::size_t t = 0; t < m; ++t) {
            const double v = svd.v.at(t, j);
            const double part = positive ? std::max(v, 0.0) : std::max(-v, 0.0);
            h.at(j, t) = scale * part / v_norm;
        }
    }

    const double fill = std::max(matrix_mean(x), kDenomFloor);
    for (double& v : w.data())
        if (v <= 0.0) v = fill;
    for (double& v : h.data())
        if (v <= 0.0) v = fill;
}

void init_random(const TermDocMatrix& x, std::size_t k, std::uint64_t seed, Matrix& w,
                 Matrix& h) {
    // Explicit bit mapping instead of uniform_real_distribution: the
    // distribution's output is implementation-defined, the mapping is not.
    std::mt19937_64 rng(seed);
    auto unit = [&rng]() { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };

    const double avg = std::sqrt(std::max(matrix_mean(x), kDenomFloor) / static_cast<double>(k));
    w = Matrix(x.n_docs, k);
    h = Matrix(k, x.n_terms);
    for (double& v : w.data()) v = avg * (unit() + 1e-6);
    for (double& v : h.data()) v = avg * (unit() + 1e-6);
}

}  // namespace

double TermDocMatrix::entry(std::size_t doc, std::size_t term) const {
    for (std::size_t p = row_ptr[doc]; p < row_ptr[doc + 1]; ++p) {
        if (col[p] == term) return val[p];
    }
    return 0.0;
}

std::string_view nmf_init_name(NmfInit init) {
    return init == NmfInit::RandomSeeded ? "RANDOM_SEEDED" : "NNDSVD";
}

std::optional<NmfInit> parse_nmf_init(std::string_view name) {
    if (name == "RANDOM_SEEDED") return NmfInit::RandomSeeded;
    if (name == "NNDSVD") return NmfInit::Nndsvd;
    return std::nullopt;
}

TfidfResult build_tfidf(const std::vector<Document>& documents, std::size_t min_df,
                        double max_df_ratio) {
    if (documents.empty()) throw InputError("build_tfidf: no documents");

    const std::size_t n = documents.size();
    std::map<std::string, std::size_t> df;
    bool any_tokens = false;
    for (const auto& doc : documents) {
        if (doc.tokens.empty()) continue;
        any_tokens = true;
        std::set<std::string> seen(doc.tokens.begin(), doc.tokens.end());
        for (const auto& term : seen) ++df[term];
    }
    if (!any_tokens) throw InputError("build_tfidf: all documents empty after filtering");

    TfidfResult result;
    auto& vocab = result.vocabulary;
    for (const auto& [term, count] : df) {
        if (count < min_df) continue;
        if (static_cast<double>(count) / static_cast<double>(n) > max_df_ratio) continue;
        vocab.index.emplace(term, vocab.terms.size());
        vocab.terms.push_back(term);
        vocab.document_frequency.push_back(count);
    }
    if (vocab.terms.empty())
        throw InputError("build_tfidf: no terms survive the df thresholds");

    std::vector<double> idf(vocab.size());
    for (std::size_t t = 0; t < vocab.size(); ++t) {
        idf[t] = std::log((1.0 + static_cast<double>(n)) /
                          (1.0 + static_cast<double>(vocab.document_frequency[t]))) + 1.0;
    }

    auto& x = result.matrix;
    x.n_docs = n;
    x.n_terms = vocab.size();
    x.row_ptr.push_back(0);
    for (const auto& doc : documents) {
        x.row_ids.push_back(doc.id);
        std::map<std::size_t, double> row;  // ordered by column
        for (const auto& token : doc.tokens) {
            auto it = vocab.index.find(token);
            if (it != vocab.index.end()) row[it->second] += 1.0;
        }
        double norm2 = 0.0;
        for (auto& [t, tf] : row) {
            tf *= idf[t];
            norm2 += tf * tf;
        }
        const double norm = std::sqrt(norm2);
        for (auto& [t, weight] : row) {
            x.col.push_back(t);
            x.val.push_back(norm > 0.0 ? weight / norm : 0.0);
        }
        x.row_ptr.push_back(x.col.size());
    }
    return result;
}

double nmf_objective(const TermDocMatrix& x, const Matrix& w, const Matrix& h, double alpha,
                     double l1_ratio) {
    // 0.5*||X-WH||^2 expanded: 0.5*(||X||^2 - 2<X,WH> + <W^T W, H H^T>)
    // so the dense product WH is never materialized.
    double x_norm2 = 0.0;
    for (double v : x.val) x_norm2 += v * v;

    const std::size_t k = w.cols();
    double cross = 0.0;
    for (std::size_t i = 0; i < x.n_docs; ++i) {
        for (std::size_t p = x.row_ptr[i]; p < x.row_ptr[i + 1]; ++p) {
            const std::size_t t = x.col[p];
            double wh = 0.0;
            for (std::size_t j = 0; j < k; ++j) wh += w.at(i, j) * h.at(j, t);
            cross += x.val[p] * wh;
        }
    }

    const Matrix wtw = gram_of_columns(w);
    const Matrix hht = gram_of_rows(h);
    double wh_norm2 = 0.0;
    for (std::size_t p = 0; p < k; ++p)
        for (std::size_t q = 0; q < k; ++q) wh_norm2 += wtw.at(p, q) * hht.at(p, q);

    double f = 0.5 * (x_norm2 - 2.0 * cross + wh_norm2);
    if (alpha > 0.0) {
        const double l1 = alpha * l1_ratio;
        const double l2 = alpha * (1.0 - l1_ratio);
        if (l1 > 0.0) f += l1 * (entrywise_sum(w) + entrywise_sum(h));
        if (l2 > 0.0) f += 0.5 * l2 * (squared_norm(w) + squared_norm(h));
    }
    return f;
}

NmfModel nmf_fit(const TermDocMatrix& x, const NmfParams& params) {
    const std::size_t n = x.n_docs, m = x.n_terms, k = params.k;
    if (k == 0 || k > std::min(n, m))
        throw InputError("nmf_fit: k = " + std::to_string(k) + " out of range [1, " +
                         std::to_string(std::min(n, m)) + "]");
    if (params.alpha < 0.0) throw InputError("nmf_fit: alpha must be >= 0");
    if (params.l1_ratio < 0.0 || params.l1_ratio > 1.0)
        throw InputError("nmf_fit: l1_ratio must be in [0,1]");
    for (double v : x.val)
        if (v < 0.0) throw InputError("nmf_fit: X has negative entries");

    // k topics need at least k nonzero rows and columns to be feasible.
    {
        std::size_t nonzero_rows = 0;
        std::vector<bool> col_used(m, false);
        for (std::size_t i = 0; i < n; ++i) {
            if (x.row_ptr[i + 1] > x.row_ptr[i]) ++nonzero_rows;
            for (std::size_t p = x.row_ptr[i]; p < x.row_ptr[i + 1]; ++p)
                if (x.val[p] > 0.0) col_used[x.col[p]] = true;
        }
        const std::size_t nonzero_cols =
            static_cast<std::size_t>(std::count(col_used.begin(), col_used.end(), true));
        if (nonzero_rows < k || nonzero_cols < k)
            throw InputError("nmf_fit: k = " + std::to_string(k) +
                             " infeasible: matrix has only " + std::to_string(nonzero_rows) +
                             " nonzero rows and " + std::to_string(nonzero_cols) +
                             " nonzero columns");
    }

    NmfModel model;
    model.params = params;
    model.doc_ids = x.row_ids;

    if (params.init == NmfInit::Nndsvd) {
        init_nndsvd(x, k, model.w, model.h);
    } else {
        init_random(x, k, params.seed, model.w, model.h);
    }

    const double l1 = params.alpha * params.l1_ratio;
    const double l2 = params.alpha * (1.0 - params.l1_ratio);

    double objective = nmf_objective(x, model.w, model.h, params.alpha, params.l1_ratio);
    model.objective_trace.push_back(objective);

    for (std::size_t iter = 0; iter < params.max_iter; ++iter) {
        // H <- H .* (W^T X) ./ (W^T W H + l1 + l2 H)
        {
            const Matrix numer = wt_times_x(model.w, x);
            Matrix denom = square_times(gram_of_columns(model.w), model.h);
            if (l1 > 0.0 || l2 > 0.0) {
                auto& d = denom.data();
                const auto& hh = model.h.data();
                for (std::size_t i = 0; i < d.size(); ++i) d[i] += l1 + l2 * hh[i];
            }
            multiplicative_update(model.h, numer, denom);
        }
        // W <- W .* (X H^T) ./ (W H H^T + l1 + l2 W)
        {
            const Matrix numer = x_times_ht(x, model.h);
            Matrix denom = times_square(model.w, gram_of_rows(model.h));
            if (l1 > 0.0 || l2 > 0.0) {
                auto& d = denom.data();
                const auto& ww = model.w.data();
                for (std::size_t i = 0; i < d.size(); ++i) d[i] += l1 + l2 * ww[i];
            }
            multiplicative_update(model.w, numer, denom);
        }

        const double previous = objective;
        objective = nmf_objective(x, model.w, model.h, params.alpha, params.l1_ratio);
        model.objective_trace.push_back(objective);
        model.iterations = iter + 1;

        const double relative_decrease = (previous - objective) / std::max(previous, kDenomFloor);
        if (relative_decrease < params.tol) {
            model.converged = true;
            break;
        }
    }
    return model;
}

std::vector<std::pair<std::string, double>> top_terms(const NmfModel& model,
                                                      const Vocabulary& vocab,
                                                      std::size_t topic, std::size_t n) {
    if (topic >= model.h.rows()) throw InputError("top_terms: topic index out of range");
    if (n == 0) throw InputError("top_terms: n must be >= 1");

    std::vector<std::pair<std::string, double>> rows;
    rows.reserve(vocab.size());
    for (std::size_t t = 0; t < vocab.size(); ++t)
        rows.emplace_back(vocab.terms[t], model.h.at(topic, t));
    std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });
    if (rows.size() > n) rows.resize(n);
    return rows;
}

std::map<std::string, DocumentTopic> assign_documents(const NmfModel& model) {
    std::map<std::string, DocumentTopic> out;
    for (std::size_t i = 0; i < model.w.rows(); ++i) {
        DocumentTopic dt;
        double best = 0.0;
        bool any_positive = false;
        for (std::size_t j = 0; j < model.w.cols(); ++j) {
            const double v = model.w.at(i, j);
            if (v > best) {
                best = v;
                dt.topic = j;
                any_positive = true;
            }
        }
        dt.unassigned = !any_positive;
        out[model.doc_ids[i]] = dt;
    }
    return out;
}

}  // namespace dyadscope

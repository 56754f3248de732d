#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dyadscope/corpus.hpp"

namespace dyadscope {

// Dense row-major matrix, just enough for the factor matrices.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    double& at(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    double at(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
    const std::vector<double>& data() const { return data_; }
    std::vector<double>& data() { return data_; }

private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<double> data_;
};

struct Vocabulary {
    std::vector<std::string> terms;            // sorted, index = column
    std::map<std::string, std::size_t> index;  // term -> column
    std::vector<std::size_t> document_frequency;

    std::size_t size() const { return terms.size(); }
};

// Sparse nonnegative term-document matrix, compressed rows.
struct TermDocMatrix {
    std::size_t n_docs = 0;
    std::size_t n_terms = 0;
    std::vector<std::string> row_ids;  // document ids, row order

    std::vector<std::size_t> row_ptr;  // size n_docs + 1
    std::vector<std::size_t> col;
    std::vector<double> val;

    std::size_t nnz() const { return val.size(); }
    double entry(std::size_t doc, std::size_t term) const;
};

struct TfidfResult {
    Vocabulary vocabulary;
    TermDocMatrix matrix;
};

// tf * (ln((1+N)/(1+df)) + 1), rows L2-normalized. Terms with
// df < min_df or df/N > max_df_ratio are dropped before weighting.
TfidfResult build_tfidf(const std::vector<Document>& documents, std::size_t min_df = 1,
                        double max_df_ratio = 1.0);

enum class NmfInit : std::uint8_t { RandomSeeded, Nndsvd };

std::string_view nmf_init_name(NmfInit init);
std::optional<NmfInit> parse_nmf_init(std::string_view name);

struct NmfParams {
    std::size_t k = 5;
    double alpha = 0.1;      // total regularization strength, >= 0
    double l1_ratio = 0.5;   // in [0,1]; 1 = pure L1, 0 = pure ridge
    std::size_t max_iter = 400;
    double tol = 1e-4;       // relative objective decrease
    std::uint64_t seed = 1;
    NmfInit init = NmfInit::Nndsvd;
};

struct NmfModel {
    Matrix w;  // documents x topics
    Matrix h;  // topics x terms
    NmfParams params;
    std::vector<double> objective_trace;  // F at init, then after each iteration
    bool converged = false;
    std::size_t iterations = 0;
    std::vector<std::string> doc_ids;
};

// F(W,H) = 0.5*||X-WH||^2_F + alpha*r*(||W||_1+||H||_1)
//        + 0.5*alpha*(1-r)*(||W||^2_F+||H||^2_F)
double nmf_objective(const TermDocMatrix& x, const Matrix& w, const Matrix& h, double alpha,
                     double l1_ratio);

// Alternating multiplicative updates; every step keeps W, H nonnegative
// and never increases F. Deterministic for a fixed seed and init.
NmfModel nmf_fit(const TermDocMatrix& x, const NmfParams& params);

// n largest entries of H row `topic`, ties lexicographic.
std::vector<std::pair<std::string, double>> top_terms(const NmfModel& model,
                                                      const Vocabulary& vocab,
                                                      std::size_t topic, std::size_t n);

struct DocumentTopic {
    std::size_t topic = 0;
    bool unassigned = false;  // all-zero W row
};

// Argmax over each W row; ties take the lowest topic index.
std::map<std::string, DocumentTopic> assign_documents(const NmfModel& model);

}  // namespace dyadscope

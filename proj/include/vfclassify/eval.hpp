#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "vfclassify/classifiers.hpp"
#include "vfclassify/vfdata.hpp"

namespace vfc {

/// 2x2 counts indexed m[actual][predicted].
struct ConfusionMatrix {
    std::array<std::array<std::int64_t, 2>, 2> m{};

    std::int64_t support(int label) const { return m[label][0] + m[label][1]; }
    std::int64_t predicted(int label) const { return m[0][label] + m[1][label]; }
    std::int64_t total() const { return support(0) + support(1); }
    std::int64_t correct() const { return m[0][0] + m[1][1]; }

    bool operator==(const ConfusionMatrix&) const = default;
};

ConfusionMatrix confusion_matrix(const std::vector<Label>& y_true,
                                 const std::vector<Label>& y_pred);

/// Per-class precision/recall/f1/support plus overall accuracy, the
/// metric suite of the report tables. Zero-denominator precision is 0
/// and flagged rather than an error.
struct ClassReport {
    std::array<double, 2> precision{};
    std::array<double, 2> recall{};
    std::array<double, 2> f1{};
    std::array<std::int64_t, 2> support{};
    double accuracy = 0.0;
    std::array<bool, 2> precision_undefined{}; // nothing predicted as c
};

ClassReport classification_report(const ConfusionMatrix& cm);

/// Round half away from zero at the given decimal position.
double round_metric(double x, int decimals);

/// One published table: per-class (precision, recall, f1, support) and
/// accuracy, all at 2 decimals.
struct PaperTableRow {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    std::int64_t support = 0;
};

struct PaperTable {
    int table_id = 0;
    Algorithm algorithm = Algorithm::LogReg;
    std::array<PaperTableRow, 2> rows;
    double accuracy = 0.0;
};

/// The four embedded result tables (logistic regression, naive Bayes,
/// random forest, SGD SVM) in publication order.
const std::array<PaperTable, 4>& paper_tables();

/// Inverse problem over printed metrics: enumerates every confusion
/// matrix with the given supports whose recomputed precision, recall and
/// accuracy all round (half away from zero, `decimals` places) to the
/// inputs. f1 is deliberately not part of the filter. Result is sorted
/// by (tp0, tp1); an empty result means the inputs are inconsistent.
std::vector<ConfusionMatrix> reconstruct_confusion(
    const std::array<PaperTableRow, 2>& rows, double accuracy, int decimals);

struct TableVerification {
    int table_id = 0;
    Algorithm algorithm = Algorithm::LogReg;
    std::vector<ConfusionMatrix> matrices;
    bool unique = false;
    ClassReport recomputed;     // from the first matrix, when any
    bool f1_match = false;      // every rounded f1 equals the printed cell
    bool passed = false;        // unique && all 7 printed values reproduced
};

struct VerificationReport {
    std::array<TableVerification, 4> tables;
    bool all_passed = false;
};

/// Reconstructs each embedded table and checks that the single matrix it
/// yields reproduces every printed cell (precision, recall, f1, support
/// per class, and accuracy) after 2-decimal rounding.
VerificationReport verify_paper_tables();

/// Verification of one table's worth of inputs; the test hook behind
/// verify_paper_tables.
TableVerification verify_table(const PaperTable& table);

std::string render_verification(const VerificationReport& report,
                                bool comma_decimal = false);

/// Fixed-width report: `class precision recall f1 support` rows, then
/// `accuracy <v> (n=<n>)`, then a hyperparameter echo block. Metrics are
/// printed at 2 decimals, the paper's convention.
std::string render_report(Algorithm algorithm, const ClassReport& report,
                          const Hyperparams& hyper, bool preprocess_on,
                          FeatureMode mode, bool comma_decimal = false);

/// Machine-readable variant, same columns, 6-decimal values.
std::string render_report_csv(Algorithm algorithm, const ClassReport& report);

/// Accuracy ranking across algorithms (descending; ties keep the fixed
/// algorithm order LOGREG, NAIVE_BAYES, RANDOM_FOREST, SGD_SVM).
std::string render_summary(
    const std::vector<std::pair<Algorithm, ClassReport>>& results,
    bool comma_decimal = false);

} // namespace vfc

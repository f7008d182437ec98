#include "vfclassify/eval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <iomanip>
#include <sstream>

#include "vfclassify/errors.hpp"
#include "text_util.hpp"

namespace vfc {

namespace {

constexpr double kCellTol = 1e-9; // slack for comparing rounded metrics

std::string fixed2(double v, bool comma_decimal = false) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    std::string s(buf);
    if (comma_decimal) std::replace(s.begin(), s.end(), '.', ',');
    return s;
}

std::string fixed(double v, int decimals) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
    return buf;
}

std::string matrix_str(const ConfusionMatrix& cm) {
    std::ostringstream oss;
    oss << "[[" << cm.m[0][0] << ',' << cm.m[0][1] << "],[" << cm.m[1][0] << ','
        << cm.m[1][1] << "]]";
    return oss.str();
}

bool cells_equal(double a, double b) { return std::abs(a - b) <= kCellTol; }

} // namespace

ConfusionMatrix confusion_matrix(const std::vector<Label>& y_true,
                                 const std::vector<Label>& y_pred) {
    if (y_true.empty()) throw ValidationError("confusion matrix of empty labels");
    if (y_true.size() != y_pred.size())
        throw ValidationError("label sequences differ in length: " +
                              std::to_string(y_true.size()) + " vs " +
                              std::to_string(y_pred.size()));
    ConfusionMatrix cm;
    for (std::size_t i = 0; i < y_true.size(); ++i)
        ++cm.m[to_int(y_true[i])][to_int(y_pred[i])];
    return cm;
}

ClassReport classification_report(const ConfusionMatrix& cm) {
    for (int a = 0; a < 2; ++a)
        for (int p = 0; p < 2; ++p)
            if (cm.m[a][p] < 0) throw ValidationError("negative confusion count");
    if (cm.total() == 0) throw ValidationError("empty confusion matrix");

    ClassReport report;
    for (int c = 0; c < 2; ++c) {
        const auto diag = static_cast<double>(cm.m[c][c]);
        const std::int64_t predicted = cm.predicted(c);
        if (predicted == 0) {
            report.precision[c] = 0.0;
            report.precision_undefined[c] = true;
        } else {
            report.precision[c] = diag / static_cast<double>(predicted);
        }
        report.support[c] = cm.support(c);
        report.recall[c] = diag / static_cast<double>(cm.support(c));
        const double pr = report.precision[c] + report.recall[c];
        report.f1[c] =
            pr > 0.0 ? 2.0 * report.precision[c] * report.recall[c] / pr : 0.0;
    }
    report.accuracy =
        static_cast<double>(cm.correct()) / static_cast<double>(cm.total());
    return report;
}

double round_metric(double x, int decimals) {
    if (!std::isfinite(x)) throw ValidationError("cannot round non-finite value");
    if (decimals < 0) throw ValidationError("decimals must be >= 0");
    const double factor = std::pow(10.0, decimals);
    return std::round(x * factor) / factor; // std::round is half away from zero
}

const std::array<PaperTable, 4>& paper_tables() {
    static const std::array<PaperTable, 4> tables = {{
        {1,
         Algorithm::LogReg,
         {{{0.69, 0.69, 0.69, 13}, {0.75, 0.75, 0.75, 16}}},
         0.72},
        {2,
         Algorithm::NaiveBayes,
         {{{0.20, 0.08, 0.11, 13}, {0.50, 0.75, 0.60, 16}}},
         0.45},
        {3,
         Algorithm::RandomForest,
         {{{0.61, 0.85, 0.71, 13}, {0.82, 0.56, 0.67, 16}}},
         0.69},
        {4,
         Algorithm::SgdSvm,
         {{{0.67, 0.62, 0.64, 13}, {0.71, 0.75, 0.73, 16}}},
         0.69},
    }};
    return tables;
}

std::vector<ConfusionMatrix> reconstruct_confusion(
    const std::array<PaperTableRow, 2>& rows, double accuracy, int decimals) {
    for (const auto& row : rows) {
        if (row.support < 1) throw ValidationError("supports must be >= 1");
        if (row.precision < 0.0 || row.precision > 1.0 || row.recall < 0.0 ||
            row.recall > 1.0)
            throw ValidationError("metrics must lie in [0, 1]");
    }

    const std::int64_t s0 = rows[0].support;
    const std::int64_t s1 = rows[1].support;
    std::vector<ConfusionMatrix> matches;
    for (std::int64_t tp0 = 0; tp0 <= s0; ++tp0)
        for (std::int64_t tp1 = 0; tp1 <= s1; ++tp1) {
            ConfusionMatrix cm;
            cm.m[0][0] = tp0;
            cm.m[0][1] = s0 - tp0; // actual 0 predicted 1
            cm.m[1][0] = s1 - tp1; // actual 1 predicted 0
            cm.m[1][1] = tp1;
            const ClassReport rep = classification_report(cm);
            const bool ok =
                cells_equal(round_metric(rep.precision[0], decimals), rows[0].precision) &&
                cells_equal(round_metric(rep.recall[0], decimals), rows[0].recall) &&
                cells_equal(round_metric(rep.precision[1], decimals), rows[1].precision) &&
                cells_equal(round_metric(rep.recall[1], decimals), rows[1].recall) &&
                cells_equal(round_metric(rep.accuracy, decimals), accuracy);
            if (ok) matches.push_back(cm);
        }
    // Enumeration order is already (tp0, tp1)-sorted.
    return matches;
}

TableVerification verify_table(const PaperTable& table) {
    TableVerification v;
    v.table_id = table.table_id;
    v.algorithm = table.algorithm;
    v.matrices = reconstruct_confusion(table.rows, table.accuracy, 2);
    v.unique = v.matrices.size() == 1;
    if (!v.matrices.empty()) {
        v.recomputed = classification_report(v.matrices.front());
        v.f1_match = cells_equal(round_metric(v.recomputed.f1[0], 2),
                                 table.rows[0].f1) &&
                     cells_equal(round_metric(v.recomputed.f1[1], 2),
                                 table.rows[1].f1);
    }
    // Precision/recall/accuracy already matched by construction; supports
    // are fixed by the enumeration. Uniqueness plus f1 closes the table.
    v.passed = v.unique && v.f1_match;
    return v;
}

VerificationReport verify_paper_tables() {
    VerificationReport report;
    const auto& tables = paper_tables();
    report.all_passed = true;
    for (std::size_t i = 0; i < tables.size(); ++i) {
        report.tables[i] = verify_table(tables[i]);
        report.all_passed = report.all_passed && report.tables[i].passed;
    }
    return report;
}

std::string render_verification(const VerificationReport& report,
                                bool comma_decimal) {
    std::ostringstream out;
    int passed = 0;
    for (const auto& t : report.tables) {
        out << "table " << t.table_id << ' ' << std::left << std::setw(13)
            << to_string(t.algorithm) << ' ';
        if (t.matrices.empty()) {
            out << "INCONSISTENT (no confusion matrix reproduces the printed "
                   "metrics)\n";
            continue;
        }
        if (!t.unique) {
            out << "AMBIGUOUS (" << t.matrices.size() << " candidate matrices)\n";
            continue;
        }
        const auto& cm = t.matrices.front();
        out << "matrix " << matrix_str(cm) << "  accuracy "
            << fixed2(round_metric(t.recomputed.accuracy, 2), comma_decimal)
            << "  f1 "
            << fixed2(round_metric(t.recomputed.f1[0], 2), comma_decimal) << '/'
            << fixed2(round_metric(t.recomputed.f1[1], 2), comma_decimal) << "  "
            << (t.passed ? "PASS" : "FAIL") << '\n';
        if (t.passed) ++passed;
    }
    out << "verify-tables: " << passed << "/4 tables pass\n";
    return out.str();
}

std::string render_report(Algorithm algorithm, const ClassReport& report,
                          const Hyperparams& hyper, bool preprocess_on,
                          FeatureMode mode, bool comma_decimal) {
    std::ostringstream out;
    out << std::left << std::setw(7) << "class" << std::setw(11) << "precision"
        << std::setw(8) << "recall" << std::setw(6) << "f1" << "support\n";
    for (int c = 0; c < 2; ++c) {
        out << std::left << std::setw(7) << c << std::setw(11)
            << fixed2(round_metric(report.precision[c], 2), comma_decimal)
            << std::setw(8)
            << fixed2(round_metric(report.recall[c], 2), comma_decimal)
            << std::setw(6) << fixed2(round_metric(report.f1[c], 2), comma_decimal)
            << report.support[c];
        if (report.precision_undefined[c]) out << "  (precision undefined: no predictions)";
        out << '\n';
    }
    out << "accuracy " << fixed2(round_metric(report.accuracy, 2), comma_decimal)
        << " (n=" << (report.support[0] + report.support[1]) << ")\n";
    out << '\n';
    out << "[hyperparameters]\n";
    out << "algorithm = " << to_string(algorithm) << '\n';
    out << "preprocess = " << (preprocess_on ? "on" : "off") << '\n';
    out << "feature_mode = " << (mode == FeatureMode::Raw ? "raw" : "summary")
        << '\n';
    switch (algorithm) {
        case Algorithm::LogReg:
            out << "learning_rate = " << detail::format_double(hyper.learning_rate)
                << '\n';
            out << "l2_lambda = " << detail::format_double(hyper.l2_lambda) << '\n';
            out << "max_epochs = " << hyper.max_epochs << '\n';
            out << "tol = " << detail::format_double(hyper.tol) << '\n';
            break;
        case Algorithm::NaiveBayes:
            out << "var_smoothing = " << detail::format_double(hyper.var_smoothing)
                << '\n';
            break;
        case Algorithm::RandomForest:
            out << "n_trees = " << hyper.n_trees << '\n';
            out << "max_depth = "
                << (hyper.max_depth == kUnlimitedDepth
                        ? std::string("unlimited")
                        : std::to_string(hyper.max_depth))
                << '\n';
            out << "min_samples_split = " << hyper.min_samples_split << '\n';
            out << "seed = " << hyper.rng_seed << '\n';
            break;
        case Algorithm::SgdSvm:
            out << "l2_lambda = " << detail::format_double(hyper.l2_lambda) << '\n';
            out << "max_epochs = " << hyper.max_epochs << '\n';
            out << "seed = " << hyper.rng_seed << '\n';
            break;
    }
    return out.str();
}

std::string render_report_csv(Algorithm algorithm, const ClassReport& report) {
    std::ostringstream out;
    out << "# algorithm = " << to_string(algorithm) << '\n';
    out << "class,precision,recall,f1,support\n";
    for (int c = 0; c < 2; ++c)
        out << c << ',' << fixed(report.precision[c], 6) << ','
            << fixed(report.recall[c], 6) << ',' << fixed(report.f1[c], 6) << ','
            << report.support[c] << '\n';
    out << "accuracy," << fixed(report.accuracy, 6) << ",,,"
        << (report.support[0] + report.support[1]) << '\n';
    return out.str();
}

std::string render_summary(
    const std::vector<std::pair<Algorithm, ClassReport>>& results,
    bool comma_decimal) {
    auto ranked = results;
    std::stable_sort(ranked.begin(), ranked.end(),
                     [](const auto& a, const auto& b) {
                         if (a.second.accuracy != b.second.accuracy)
                             return a.second.accuracy > b.second.accuracy;
                         return a.first < b.first; // fixed algorithm order
                     });
    std::ostringstream out;
    out << std::left << std::setw(6) << "rank" << std::setw(15) << "algorithm"
        << "accuracy\n";
    for (std::size_t i = 0; i < ranked.size(); ++i) {
        std::string acc = fixed(ranked[i].second.accuracy, 4);
        if (comma_decimal) std::replace(acc.begin(), acc.end(), '.', ',');
        out << std::left << std::setw(6) << (i + 1) << std::setw(15)
            << to_string(ranked[i].first) << acc << '\n';
    }
    return out.str();
}

} // namespace vfc

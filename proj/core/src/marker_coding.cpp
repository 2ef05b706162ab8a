#include "polyreg/marker_coding.hpp"

#include <string>

#include "polyreg/errors.hpp"

namespace polyreg {

MarkerMatrix::MarkerMatrix(Eigen::MatrixXd values) : values_(std::move(values)) {
    if (values_.rows() < 1 || values_.cols() < 1) {
        throw DimensionMismatch("marker matrix must have at least one row and one column");
    }
    if (!values_.allFinite()) throw Error("marker matrix contains non-finite entries");
}

TranslationVector::TranslationVector(Eigen::VectorXd shifts) : shifts_(std::move(shifts)) {
    if (!shifts_.allFinite()) throw Error("translation vector contains non-finite entries");
}

TranslationVector column_mean_translation(const MarkerMatrix& markers) {
    return TranslationVector(markers.values().colwise().mean().transpose());
}

MarkerMatrix apply_translation(const MarkerMatrix& markers, const TranslationVector& shift) {
    if (shift.size() != markers.cols()) {
        throw DimensionMismatch("translation has length " + std::to_string(shift.size()) +
                                ", marker matrix has " + std::to_string(markers.cols()) +
                                " columns");
    }
    return MarkerMatrix(markers.values().rowwise() - shift.shifts().transpose());
}

DesignMatrix build_design_matrix(const MarkerMatrix& markers, const PolynomialModel& model) {
    if (static_cast<Eigen::Index>(model.num_variables()) != markers.cols()) {
        throw DimensionMismatch("model has " + std::to_string(model.num_variables()) +
                                " variables, marker matrix has " +
                                std::to_string(markers.cols()) + " columns");
    }
    const Eigen::Index n = markers.rows();
    Eigen::MatrixXd x(n, static_cast<Eigen::Index>(model.size()));
    for (std::size_t c = 0; c < model.size(); ++c) {
        auto col = x.col(static_cast<Eigen::Index>(c));
        col.setOnes();
        for (const auto& [var, power] : model[c].factors()) {
            for (Exponent e = 0; e < power; ++e) {
                col.array() *= markers.values().col(var).array();
            }
        }
    }
    return DesignMatrix{model, std::move(x)};
}

}  // namespace polyreg

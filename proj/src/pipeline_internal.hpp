#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "quatperiod/pipeline.hpp"

namespace quatperiod::detail {

inline std::string rat(const Rational& r) { return to_string(r); }
Json poly_json(const Poly& p);
Json matrix_json(const QMatrix& m);
Json vector_json(const QVector& v);

std::shared_ptr<ClassSet> class_set(long disc, long n2);
/// Eigenforms of the class set as JSON, cached per (disc, level, nu, pmax).
Json eigen_json(const std::shared_ptr<ClassSet>& cs, int nu, long pmax, const Cache& cache);
/// The rational form behind one entry of eigen_json.
QuatForm form_from_json(const std::shared_ptr<ClassSet>& cs, int nu, const Json& entry);

std::vector<NewformRecord> load_newforms(const JobConfig& config);

/// CentralValue fields, conductor and sign as JSON, cached under the key; `data` runs only on a miss.
Json central_value_json(const std::function<LData()>& data, const EvalOptions& options, const std::string& key,
                        const Cache& cache);

}  // namespace quatperiod::detail

#include "qjorg/quat.hpp"

#include <algorithm>
#include <ostream>
#include <stdexcept>

namespace qjorg {

Quaternion inverse(const Quaternion& q) {
    const double n2 = norm2(q);
    if (n2 == 0.0 || !std::isfinite(n2)) {
        throw std::domain_error("non-invertible quaternion");
    }
    return conj(q) / n2;
}

bool similar(const Quaternion& p, const Quaternion& q, double tol) {
    return std::abs(re(p) - re(q)) <= tol && std::abs(norm(p) - norm(q)) <= tol;
}

double arg(const Quaternion& q) {
    if (norm2(q) == 0.0) {
        throw std::domain_error("argument of zero quaternion is undefined");
    }
    return std::atan2(im_norm(q), re(q));
}

std::pair<double, double> complex_representative(const Quaternion& q) { return {re(q), im_norm(q)}; }

double max_abs_diff(const Quaternion& p, const Quaternion& q) {
    return std::max({std::abs(p.w - q.w), std::abs(p.x - q.x), std::abs(p.y - q.y), std::abs(p.z - q.z)});
}

std::ostream& operator<<(std::ostream& os, const Quaternion& q) {
    return os << '[' << q.w << ", " << q.x << ", " << q.y << ", " << q.z << ']';
}

}  // namespace qjorg

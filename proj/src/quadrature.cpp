#include "ivlab/quadrature.hpp"

#include <cmath>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "ivlab/errors.hpp"

namespace ivlab {

QuadratureResult integrate(const std::function<double(double)>& f, double a, double b, double rel_tol,
                           double abs_floor) {
    using boost::math::quadrature::gauss_kronrod;
    double err = 0.0;
    double l1 = 0.0;
    const double value = gauss_kronrod<double, 61>::integrate(f, a, b, 20, rel_tol * 0.1, &err, &l1);
    const double scale = std::max(std::abs(value), l1);
    if (!std::isfinite(value) || (err > rel_tol * scale && err > abs_floor)) {
        std::ostringstream msg;
        msg << "quadrature on [" << a << ", " << b << "] did not converge: value " << value << ", error " << err;
        throw QuadratureError(msg.str(), err);
    }
    return {value, err};
}

} // namespace ivlab

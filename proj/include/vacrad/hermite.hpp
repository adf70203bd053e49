#ifndef VACRAD_HERMITE_HPP
#define VACRAD_HERMITE_HPP

#include <utility>

namespace vacrad::detail {

/// Quintic Hermite interpolation on one interval of length h from values,
/// first and second derivatives at both ends; s in [0, 1]. Returns the
/// interpolated value and its derivative.
template <class T>
std::pair<T, T> hermite5(const T& y0, const T& d0, const T& a0, const T& y1, const T& d1, const T& a1,
                         double h, double s) {
    const double s2 = s * s, s3 = s2 * s, s4 = s3 * s, s5 = s4 * s;
    const double h00 = 1.0 - 10.0 * s3 + 15.0 * s4 - 6.0 * s5;
    const double h10 = s - 6.0 * s3 + 8.0 * s4 - 3.0 * s5;
    const double h20 = 0.5 * (s2 - 3.0 * s3 + 3.0 * s4 - s5);
    const double h01 = 10.0 * s3 - 15.0 * s4 + 6.0 * s5;
    const double h11 = -4.0 * s3 + 7.0 * s4 - 3.0 * s5;
    const double h21 = 0.5 * (s3 - 2.0 * s4 + s5);

    const double g00 = -30.0 * s2 + 60.0 * s3 - 30.0 * s4;
    const double g10 = 1.0 - 18.0 * s2 + 32.0 * s3 - 15.0 * s4;
    const double g20 = 0.5 * (2.0 * s - 9.0 * s2 + 12.0 * s3 - 5.0 * s4);
    const double g01 = -g00;
    const double g11 = -12.0 * s2 + 28.0 * s3 - 15.0 * s4;
    const double g21 = 0.5 * (3.0 * s2 - 8.0 * s3 + 5.0 * s4);

    T value = h00 * y0 + h10 * h * d0 + h20 * h * h * a0 + h01 * y1 + h11 * h * d1 + h21 * h * h * a1;
    T deriv = (g00 * y0 + g01 * y1) / h + g10 * d0 + g11 * d1 + g20 * h * a0 + g21 * h * a1;
    return {value, deriv};
}

} // namespace vacrad::detail

#endif // VACRAD_HERMITE_HPP

#include "turbilink/params.hpp"

#include <cmath>
#include <numbers>

#include "turbilink/errors.hpp"

namespace turbilink {

namespace {

void require_positive(const char* field, double v) {
    if (!std::isfinite(v) || v <= 0.0) throw DomainError(field, "must be finite and > 0");
}

}  // namespace

double collimated_waist(double waist, double wavelength, double focal_length) {
    require_positive("waist", waist);
    require_positive("wavelength", wavelength);
    require_positive("focal_length", focal_length);
    return wavelength * focal_length / (2.0 * std::numbers::pi * waist);
}

PhysicalSetup derive_setup(double pump_wavelength, double pump_waist, double crystal_length,
                           double focal_length) {
    require_positive("pump_wavelength", pump_wavelength);
    require_positive("pump_waist", pump_waist);
    require_positive("crystal_length", crystal_length);
    require_positive("focal_length", focal_length);

    PhysicalSetup s;
    s.pump_wavelength_ = pump_wavelength;
    s.downconverted_wavelength_ = 2.0 * pump_wavelength;
    s.wavenumber_ = 2.0 * std::numbers::pi / s.downconverted_wavelength_;
    s.pump_waist_ = pump_waist;
    s.crystal_length_ = crystal_length;
    s.correlation_length_ =
        std::sqrt(0.455 * crystal_length * pump_wavelength / (2.0 * std::numbers::pi));
    s.focal_length_ = focal_length;
    s.collimated_sum_waist_ =
        collimated_waist(pump_waist, s.downconverted_wavelength_, focal_length);
    s.collimated_diff_waist_ =
        collimated_waist(s.correlation_length_, s.downconverted_wavelength_, focal_length);
    return s;
}

}  // namespace turbilink

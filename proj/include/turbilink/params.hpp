#pragma once

namespace turbilink {

// Source and optics parameters of the degenerate SPDC pair, with every
// derived static quantity. Immutable; build it with derive_setup().
class PhysicalSetup {
public:
    double pump_wavelength() const { return pump_wavelength_; }
    // Signal/idler wavelength, twice the pump wavelength.
    double downconverted_wavelength() const { return downconverted_wavelength_; }
    double wavenumber() const { return wavenumber_; }
    double pump_waist() const { return pump_waist_; }
    double crystal_length() const { return crystal_length_; }
    // Transverse correlation width of the pair at the crystal.
    double correlation_length() const { return correlation_length_; }
    double focal_length() const { return focal_length_; }
    // Sum-coordinate width after the collimating lens.
    double collimated_sum_waist() const { return collimated_sum_waist_; }
    // Difference-coordinate width after the collimating lens.
    double collimated_diff_waist() const { return collimated_diff_waist_; }

private:
    friend PhysicalSetup derive_setup(double, double, double, double);
    PhysicalSetup() = default;

    double pump_wavelength_ = 0;
    double downconverted_wavelength_ = 0;
    double wavenumber_ = 0;
    double pump_waist_ = 0;
    double crystal_length_ = 0;
    double correlation_length_ = 0;
    double focal_length_ = 0;
    double collimated_sum_waist_ = 0;
    double collimated_diff_waist_ = 0;
};

// All arguments in metres. Throws DomainError naming the first bad field.
PhysicalSetup derive_setup(double pump_wavelength, double pump_waist, double crystal_length,
                           double focal_length);

// Thin-lens Fourier mapping of a Gaussian width: wavelength*focal/(2 pi waist).
double collimated_waist(double waist, double wavelength, double focal_length);

}  // namespace turbilink

//! Fast-path spatial amplitudes against the brute-force tensor transform:
//! every catalog state at two and three photons, over 41 diagonal points
//! spanning three envelope widths, to 1e-6 of the scan scale.

use qlitho::gaussian::GaussianParams;
use qlitho::propagate::{diagonal_amplitude, spatial_amplitude_quadrature, Regime};
use qlitho::states::{ModeSpectrum, MomentumAmplitude};
use qlitho::{OpticalContext, QuadratureSpec};

fn check_state(
    amp: &MomentumAmplitude,
    envelope_width: f64,
    tensor_points: usize,
    grid_points: usize,
) {
    let ctx = OpticalContext::dimensionless();
    let quad = QuadratureSpec::default();
    let tensor = QuadratureSpec::default().with_points_per_dim(tensor_points);
    let n = amp.n_photons();
    let mut worst = 0.0_f64;
    let mut scale = 0.0_f64;
    for i in 0..grid_points {
        let x = -3.0 * envelope_width + 6.0 * envelope_width * i as f64 / (grid_points - 1) as f64;
        let fast = diagonal_amplitude(amp, x, Regime::Paraxial, &ctx, &quad).unwrap();
        let brute = spatial_amplitude_quadrature(amp, &vec![x; n], Regime::Paraxial, &ctx, &tensor)
            .unwrap();
        worst = worst.max((fast - brute).norm());
        scale = scale.max(brute.norm());
    }
    assert!(
        worst <= 1e-6 * scale,
        "{}: worst |fast - brute| = {worst:.3e} vs scale {scale:.3e}",
        amp.label()
    );
}

#[test]
fn two_photon_catalog_over_41_points() {
    let mode = ModeSpectrum::gaussian(1.0, 0.2).unwrap();
    check_state(
        &MomentumAmplitude::noon(mode.clone(), 2).unwrap(),
        1.0 / 0.2,
        256,
        41,
    );
    check_state(
        &MomentumAmplitude::classical(mode, 2).unwrap(),
        1.0 / 0.2,
        256,
        41,
    );
    let p = GaussianParams::new(2, 0.5, 1.0).unwrap();
    check_state(
        &MomentumAmplitude::jointly_gaussian(p),
        1.0 / (2.0 * 2.0 * 0.5),
        160,
        41,
    );
}

#[test]
fn three_photon_catalog_over_41_points() {
    let mode = ModeSpectrum::gaussian(1.0, 0.2).unwrap();
    check_state(
        &MomentumAmplitude::noon(mode.clone(), 3).unwrap(),
        1.0 / 0.2,
        128,
        41,
    );
    check_state(
        &MomentumAmplitude::classical(mode, 3).unwrap(),
        1.0 / 0.2,
        128,
        41,
    );
    let p = GaussianParams::new(3, 0.5, 1.0).unwrap();
    check_state(
        &MomentumAmplitude::jointly_gaussian(p),
        1.0 / (2.0 * 3.0 * 0.5),
        96,
        41,
    );
}
